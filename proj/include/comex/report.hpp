#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "comex/bounds.hpp"
#include "comex/config.hpp"

namespace comex {

inline constexpr const char* kCsvHeader = "run,t,regret,comm_cost,control_msgs";

void write_trajectories_csv(std::ostream& out, const std::vector<RunMetrics>& runs);

/// `{name}_{gate}_{tag}.csv`
std::string csv_file_name(const ExperimentConfig& cfg, Variant v, Gate g);

struct JobResult {
  Variant variant;
  Gate gate;
  Aggregate aggregate;
};

nlohmann::json summary_json(const ExperimentConfig& cfg, const std::vector<JobResult>& jobs,
                            const std::vector<std::string>& warnings);

/// Bound family matching a simulation variant, if there is one.
std::optional<BoundVariant> bound_variant_for(Variant v);

struct BoundRow {
  BoundVariant variant;
  int gamma;
  double regret;
  double cost;
  double cost_capped;
  BoundInputs inputs;
};

/// Theorem RHS values for ucb_share (gamma = 1) and for mp_ucb / lf_ucb at
/// the configured gamma. Throws ConfigError("xi", ...) when xi < 1.1.
std::vector<BoundRow> evaluate_bounds(const ExperimentConfig& cfg);
nlohmann::json bounds_json(const std::vector<BoundRow>& rows);
void print_bounds(std::ostream& out, const ExperimentConfig& cfg);

struct RunOptions {
  int threads = 0;  // 0: default_thread_count()
  bool audit = false;
  bool dump_graph = false;
};

/// Runs every (variant, gate) job and writes outputs into cfg.output_dir.
/// Returns the written file paths.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);

}  // namespace comex
