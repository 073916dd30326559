#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "comex/graph.hpp"
#include "comex/policy.hpp"
#include "comex/rng.hpp"

namespace comex {

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct MessageId {
  int origin = 0;
  int origin_time = 0;
  bool operator==(const MessageId&) const = default;
};

/// <origin, t, arm, reward>
struct RewardMessage {
  int origin = 0;
  int origin_time = 0;
  int arm = 0;
  double reward = 0.0;
  MessageId id() const { return {origin, origin_time}; }
};

/// Leader broadcast <leader, t, arm, instantaneously-suboptimal flag>.
struct LeaderActionMessage {
  int origin = 0;
  int origin_time = 0;
  int arm = 0;
  bool suboptimal = false;
  MessageId id() const { return {origin, origin_time}; }
};

/// Initiate iff the pulled arm differs from the argmax of the estimates as
/// they stood at the end of the previous step.
inline bool comex_gate(const AgentEstimates& prev, int pulled_arm) {
  return pulled_arm != instantaneously_best(prev);
}
inline bool full_gate() { return true; }

/// Per-agent relay store for gamma-hop message passing. Identities are
/// (origin, origin_time); messages older than gamma are dropped, and only
/// messages aged 1..gamma-1 are relayed, each at most once.
template <class Msg>
class MessageBuffer {
 public:
  struct Held {
    Msg msg;
    bool forwarded = false;
  };

  MessageBuffer() = default;
  MessageBuffer(int n_agents, int gamma)
      : n_agents_(n_agents),
        gamma_(gamma),
        window_(gamma + 1),
        slot_time_(static_cast<std::size_t>(gamma + 1), -1),
        seen_(static_cast<std::size_t>((gamma + 1) * n_agents), 0),
        forwarded_(static_cast<std::size_t>((gamma + 1) * n_agents), 0) {
    if (gamma < 1) throw ProtocolError("gamma must be >= 1");
  }

  int gamma() const { return gamma_; }
  const std::vector<Held>& held() const { return held_; }

  bool seen(MessageId id) const { return flag(seen_, id); }
  bool forwarded(MessageId id) const { return flag(forwarded_, id); }

  /// Record a message this agent created. It is never incorporated as foreign.
  void mark_own(const Msg& m) {
    set_flag(seen_, m.id());
    set_flag(forwarded_, m.id());
  }

  /// Returns true when the identity is new and must be incorporated.
  bool receive(const Msg& m, int now) {
    const int age = now - m.origin_time;
    if (age < 0 || age >= window_) throw ProtocolError("message outside the relay window");
    if (seen(m.id())) return false;
    set_flag(seen_, m.id());
    held_.push_back({m, false});
    return true;
  }

  std::vector<Msg> outgoing_bundle(const std::optional<Msg>& own_new, int now) {
    std::vector<Msg> bundle;
    if (own_new) {
      mark_own(*own_new);
      bundle.push_back(*own_new);
    }
    std::size_t keep = 0;
    for (auto& h : held_) {
      const int age = now - h.msg.origin_time;
      if (age > gamma_) continue;  // purge
      if (!h.forwarded && age >= 1 && age <= gamma_ - 1 && !forwarded(h.msg.id())) {
        h.forwarded = true;
        set_flag(forwarded_, h.msg.id());
        bundle.push_back(h.msg);
      }
      held_[keep++] = h;
    }
    held_.resize(keep);
    return bundle;
  }

 private:
  std::size_t slot_index(MessageId id) const {
    return static_cast<std::size_t>(id.origin_time % window_) * n_agents_ + id.origin;
  }

  bool flag(const std::vector<char>& bits, MessageId id) const {
    if (id.origin_time < 0) return false;
    const auto slot = static_cast<std::size_t>(id.origin_time % window_);
    if (slot_time_[slot] != id.origin_time) return false;
    return bits[slot_index(id)] != 0;
  }

  void set_flag(std::vector<char>& bits, MessageId id) {
    const auto slot = static_cast<std::size_t>(id.origin_time % window_);
    if (slot_time_[slot] != id.origin_time) {
      if (slot_time_[slot] > id.origin_time) throw ProtocolError("stale message identity");
      // Recycle the slot: everything it held has aged out of the window.
      std::fill_n(seen_.begin() + slot * n_agents_, n_agents_, 0);
      std::fill_n(forwarded_.begin() + slot * n_agents_, n_agents_, 0);
      slot_time_[slot] = id.origin_time;
    }
    bits[slot_index(id)] = 1;
  }

  int n_agents_ = 0;
  int gamma_ = 1;
  int window_ = 2;
  std::vector<int> slot_time_;
  std::vector<char> seen_;
  std::vector<char> forwarded_;
  std::vector<Held> held_;
};

template <class Msg>
std::vector<Msg> outgoing_bundle(MessageBuffer<Msg>& buf, const std::optional<Msg>& own_new, int now) {
  return buf.outgoing_bundle(own_new, now);
}

/// Synchronous delivery: every bundle sent by i reaches every neighbor of i.
/// on_new(receiver, msg) fires once per (receiver, identity). Returns the
/// number of new incorporations.
template <class Msg, class OnNew>
std::int64_t deliver(const Topology& g, const std::vector<std::vector<Msg>>& bundles,
                     std::vector<MessageBuffer<Msg>>& buffers, int now, OnNew&& on_new) {
  std::int64_t delivered = 0;
  for (int i = 0; i < g.size(); ++i) {
    if (bundles[i].empty()) continue;
    for (int j : g.neighbors(i)) {
      for (const Msg& m : bundles[i]) {
        if (m.origin == j) {
          // An agent never incorporates its own message; its buffer already
          // marks the identity seen.
          continue;
        }
        if (buffers[j].receive(m, now)) {
          ++delivered;
          on_new(j, m);
        }
      }
    }
  }
  return delivered;
}

/// One incorporation event, for dedup and delay checks.
struct AuditRecord {
  int step = 0;
  int origin = 0;
  int origin_time = 0;
  int arm = 0;
  int hop_count = 0;
  int receiver = 0;
};

void write_audit_csv(std::ostream& out, const std::vector<AuditRecord>& records);

// ---------------------------------------------------------------------------
// Estimate sharing

/// Running-consensus state: estimated pull counts and reward sums per arm.
struct ConsensusEstimates {
  std::vector<double> count_hat;
  std::vector<double> sum_hat;

  ConsensusEstimates() = default;
  explicit ConsensusEstimates(int arms) : count_hat(arms, 0.0), sum_hat(arms, 0.0) {}
  int arm_count() const { return static_cast<int>(count_hat.size()); }
  double mean_hat(int k) const { return count_hat[k] > 0.0 ? sum_hat[k] / count_hat[k] : 0.0; }
  std::vector<double> means() const;
};

struct EstimateSnapshot {
  int origin = 0;
  int origin_time = 0;
  std::vector<double> count_hat;
  std::vector<double> mean_hat;
  std::vector<int> flagged_arms;
};

/// All arms except the instantaneously best one.
std::vector<int> instantaneously_suboptimal_arms(const std::vector<double>& means);

EstimateSnapshot make_snapshot(int origin, int t, const ConsensusEstimates& est, std::vector<int> flagged);

/// Row weights aligned with Topology::neighbors(i), plus the self weight.
struct ConsensusWeights {
  std::vector<double> self;
  std::vector<std::vector<double>> neighbor;
};

/// w_ij = 1 / (1 + max(d_i, d_j)) on edges; the diagonal takes the remainder.
ConsensusWeights metropolis_weights(const Topology& g);
ConsensusWeights identity_weights(const Topology& g);
void check_row_stochastic(const Topology& g, const ConsensusWeights& w, double tol = 1e-9);

/// For each agent, replace (count_hat, sum_hat) of each arm in flagged[i] by
/// the weighted average over its closed neighborhood. A neighbor that shared
/// nothing this step contributes the receiver's own value.
std::vector<ConsensusEstimates> consensus_step(const Topology& g, const std::vector<ConsensusEstimates>& current,
                                               const std::vector<std::optional<EstimateSnapshot>>& shared,
                                               const std::vector<std::vector<int>>& flagged,
                                               const ConsensusWeights& w);

// ---------------------------------------------------------------------------
// Leader-follower

struct FollowerDecision {
  int arm = 0;
  bool initiate = false;
  bool copied = false;
};

/// Looks up the leader's action broadcast for a given origin time.
using LeaderLog = std::vector<std::optional<LeaderActionMessage>>;

/// Follower at distance d copies its leader's pull from t-d once t > d and
/// shares the reward iff the copied action carried the suboptimal flag.
/// Before that it pulls a uniformly random arm and shares it.
FollowerDecision follower_action(const LeaderLink& link, const LeaderLog& leader_log, int t, int arms,
                                 Rng& rng);

}  // namespace comex
