#include "comex/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace comex {

void write_audit_csv(std::ostream& out, const std::vector<AuditRecord>& records) {
  out << "step,origin,origin_time,arm,hop_count,receiver\n";
  for (const auto& r : records)
    out << r.step << ',' << r.origin << ',' << r.origin_time << ',' << r.arm << ',' << r.hop_count << ','
        << r.receiver << '\n';
}

std::vector<double> ConsensusEstimates::means() const {
  std::vector<double> m(count_hat.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = mean_hat(static_cast<int>(k));
  return m;
}

std::vector<int> instantaneously_suboptimal_arms(const std::vector<double>& means) {
  const int best = argmax_lowest(means);
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(means.size()); ++k)
    if (k != best) out.push_back(k);
  return out;
}

EstimateSnapshot make_snapshot(int origin, int t, const ConsensusEstimates& est, std::vector<int> flagged) {
  return {origin, t, est.count_hat, est.means(), std::move(flagged)};
}

ConsensusWeights metropolis_weights(const Topology& g) {
  ConsensusWeights w;
  w.self.resize(g.size());
  w.neighbor.resize(g.size());
  for (int i = 0; i < g.size(); ++i) {
    double total = 0.0;
    for (int j : g.neighbors(i)) {
      double wij = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
      w.neighbor[i].push_back(wij);
      total += wij;
    }
    w.self[i] = 1.0 - total;
  }
  return w;
}

ConsensusWeights identity_weights(const Topology& g) {
  ConsensusWeights w;
  w.self.assign(g.size(), 1.0);
  w.neighbor.resize(g.size());
  for (int i = 0; i < g.size(); ++i) w.neighbor[i].assign(g.neighbors(i).size(), 0.0);
  return w;
}

void check_row_stochastic(const Topology& g, const ConsensusWeights& w, double tol) {
  if (static_cast<int>(w.self.size()) != g.size() || static_cast<int>(w.neighbor.size()) != g.size())
    throw ProtocolError("weight matrix does not match the graph");
  for (int i = 0; i < g.size(); ++i) {
    if (w.neighbor[i].size() != g.neighbors(i).size())
      throw ProtocolError("weight row " + std::to_string(i) + " does not match the neighborhood");
    double total = w.self[i];
    bool negative = w.self[i] < -tol;
    for (double x : w.neighbor[i]) {
      total += x;
      negative = negative || x < -tol;
    }
    if (negative || std::abs(total - 1.0) > tol)
      throw ProtocolError("weight row " + std::to_string(i) + " is not row-stochastic");
  }
}

std::vector<ConsensusEstimates> consensus_step(const Topology& g, const std::vector<ConsensusEstimates>& current,
                                               const std::vector<std::optional<EstimateSnapshot>>& shared,
                                               const std::vector<std::vector<int>>& flagged,
                                               const ConsensusWeights& w) {
  check_row_stochastic(g, w);
  std::vector<ConsensusEstimates> next = current;
  for (int i = 0; i < g.size(); ++i) {
    const auto& nbrs = g.neighbors(i);
    for (int k : flagged[i]) {
      double count = w.self[i] * current[i].count_hat[k];
      double sum = w.self[i] * current[i].sum_hat[k];
      for (std::size_t a = 0; a < nbrs.size(); ++a) {
        const double wij = w.neighbor[i][a];
        if (wij == 0.0) continue;
        if (const auto& snap = shared[nbrs[a]]) {
          count += wij * snap->count_hat[k];
          sum += wij * snap->mean_hat[k] * snap->count_hat[k];
        } else {
          count += wij * current[i].count_hat[k];
          sum += wij * current[i].sum_hat[k];
        }
      }
      next[i].count_hat[k] = count;
      next[i].sum_hat[k] = sum;
    }
  }
  return next;
}

FollowerDecision follower_action(const LeaderLink& link, const LeaderLog& leader_log, int t, int arms,
                                 Rng& rng) {
  if (t <= link.distance) return {uniform_index(rng, arms), true, false};
  const int source_time = t - link.distance;
  if (source_time >= static_cast<int>(leader_log.size()) || !leader_log[source_time])
    throw ProtocolError("follower missing leader " + std::to_string(link.leader) + " action from t=" +
                        std::to_string(source_time));
  const auto& m = *leader_log[source_time];
  return {m.arm, m.suboptimal, true};
}

}  // namespace comex
