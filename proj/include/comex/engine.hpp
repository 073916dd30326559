#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "comex/env.hpp"
#include "comex/graph.hpp"
#include "comex/policy.hpp"
#include "comex/protocol.hpp"

namespace comex {

enum class Variant { ucb_share, mp_ucb, lf_ucb, est_ucb, mp_thompson };
enum class Gate { comex, full };
/// How an estimate-sharing broadcast is charged: one per broadcast, or one
/// per flagged arm it carries.
enum class EstCost { per_bundle, per_arm };

std::string to_string(Variant v);
std::string to_string(Gate g);
std::string to_string(EstCost c);
std::optional<Variant> parse_variant(const std::string& s);
std::optional<Gate> parse_gate(const std::string& s);
std::optional<EstCost> parse_est_cost(const std::string& s);
/// Short tag used in output file names: ucb, mpucb, lfucb, estucb, mpthompson.
std::string file_tag(Variant v);

bool uses_relay(Variant v);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SimConfig {
  Variant variant = Variant::ucb_share;
  Gate gate = Gate::comex;
  std::vector<ArmSpec> arms;
  std::optional<double> sigma;
  GraphSpec graph = Complete{1};
  bool require_connected = true;
  int horizon = 1;
  int gamma = 1;
  double xi = 1.1;
  ThompsonPrior prior;
  int runs = 1;
  std::uint64_t seed = 0;
  /// Permit gamma above the graph diameter for relay variants. Relaying then
  /// behaves as gamma = diameter for delivery but messages keep being
  /// forwarded until they age out.
  bool allow_gamma_beyond_diameter = false;
  EstCost est_cost = EstCost::per_bundle;
};

/// gamma actually used by the variant (1 for single-hop variants).
int effective_gamma(const SimConfig& cfg);

/// Immutable inputs shared by every run of one configuration.
struct SimInstance {
  SimConfig config;
  BanditEnv env;
  Topology topology;
  GraphAnalysis analysis;           // at effective gamma
  std::vector<LeaderLink> leaders;  // lf_ucb only
  ConsensusWeights weights;         // est_ucb only
  UcbParams ucb;
};

/// Builds env and graph and validates the configuration; throws ConfigError.
SimInstance prepare(const SimConfig& cfg);
std::vector<std::string> validation_warnings(const SimConfig& cfg);

struct RunMetrics {
  std::vector<double> regret;                // cumulative R(t), t = 1..T
  std::vector<std::int64_t> comm_cost;       // cumulative L(t)
  std::vector<std::int64_t> control_msgs;    // cumulative leader broadcasts
  std::vector<std::int64_t> comm_cost_per_arm;  // est_ucb: per-arm charge
  std::vector<std::vector<std::int64_t>> final_pulls;  // N x K
};

/// Hooks for tests and the audit log. All callbacks fire on the run's thread.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_pull(int /*t*/, int /*agent*/, int /*arm*/, double /*reward*/) {}
  virtual void on_initiate(int /*t*/, int /*agent*/) {}
  virtual void on_send(int /*t*/, int /*agent*/, std::size_t /*messages*/, bool /*control*/) {}
  virtual void on_incorporate(const AuditRecord& /*record*/) {}
  virtual void on_step_end(int /*t*/, const std::vector<AgentEstimates>& /*est*/) {}
};

RunMetrics run_simulation(const SimInstance& inst, int run_index, RunObserver* observer = nullptr);
RunMetrics run_simulation(const SimConfig& cfg, int run_index);

struct Trajectory {
  std::vector<double> mean;
  std::vector<double> stddev;
};

struct Aggregate {
  std::vector<RunMetrics> runs;
  Trajectory regret;
  Trajectory comm_cost;
  Trajectory control_msgs;
  Trajectory comm_cost_per_arm;
};

/// Number of worker threads from COMEX_THREADS, else hardware concurrency.
int default_thread_count();

/// Runs 0..runs-1 in parallel; output is independent of the thread count.
Aggregate aggregate_runs(const SimInstance& inst, int threads = 0);
Aggregate aggregate_runs(const SimConfig& cfg, int threads = 0);

Trajectory pointwise_stats(const std::vector<std::vector<double>>& series);

}  // namespace comex
