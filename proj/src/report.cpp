#include "comex/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace comex {

namespace fs = std::filesystem;
using nlohmann::json;

void write_trajectories_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  out << kCsvHeader << '\n';
  char line[128];
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const RunMetrics& m = runs[r];
    for (std::size_t t = 0; t < m.regret.size(); ++t) {
      std::snprintf(line, sizeof line, "%zu,%zu,%.6g,%lld,%lld\n", r, t + 1, m.regret[t],
                    static_cast<long long>(m.comm_cost[t]), static_cast<long long>(m.control_msgs[t]));
      out << line;
    }
  }
}

std::string csv_file_name(const ExperimentConfig& cfg, Variant v, Gate g) {
  return cfg.name + "_" + to_string(g) + "_" + file_tag(v) + ".csv";
}

namespace {

json point(const Trajectory& tr, int t) {
  const auto i = static_cast<std::size_t>(t - 1);
  return {{"mean", tr.mean[i]}, {"std", tr.stddev[i]}};
}

}  // namespace

json summary_json(const ExperimentConfig& cfg, const std::vector<JobResult>& jobs,
                  const std::vector<std::string>& warnings) {
  json out;
  out["config"] = config_to_json(cfg);
  out["warnings"] = warnings;
  json arr = json::array();
  for (const auto& job : jobs) {
    json cps = json::array();
    for (int t : cfg.checkpoint_times()) {
      cps.push_back({{"t", t},
                     {"regret", point(job.aggregate.regret, t)},
                     {"comm_cost", point(job.aggregate.comm_cost, t)},
                     {"control_msgs", point(job.aggregate.control_msgs, t)},
                     {"comm_cost_per_arm", point(job.aggregate.comm_cost_per_arm, t)}});
    }
    arr.push_back({{"variant", to_string(job.variant)},
                   {"gate", to_string(job.gate)},
                   {"csv", csv_file_name(cfg, job.variant, job.gate)},
                   {"runs", job.aggregate.runs.size()},
                   {"checkpoints", cps}});
  }
  out["jobs"] = arr;
  return out;
}

std::optional<BoundVariant> bound_variant_for(Variant v) {
  switch (v) {
    case Variant::ucb_share: return BoundVariant::ucb_share;
    case Variant::mp_ucb: return BoundVariant::mp_ucb;
    case Variant::lf_ucb: return BoundVariant::lf_ucb;
    default: return std::nullopt;
  }
}

std::vector<BoundRow> evaluate_bounds(const ExperimentConfig& cfg) {
  if (cfg.base.xi < kMinTheoremXi)
    throw ConfigError("xi", "theorem bounds require ξ ≥ 1.1 (got " + std::to_string(cfg.base.xi) + ")");
  // Relay validation (gamma vs diameter) comes from preparing an mp_ucb job.
  const SimInstance inst = prepare(cfg.job(Variant::mp_ucb, Gate::comex));
  const double horizon = cfg.base.horizon;
  std::vector<BoundRow> rows;
  for (BoundVariant v : {BoundVariant::ucb_share, BoundVariant::mp_ucb, BoundVariant::lf_ucb}) {
    const int gamma = v == BoundVariant::ucb_share ? 1 : cfg.base.gamma;
    BoundRow row{v, gamma, 0, 0, 0, make_bound_inputs(inst.env, inst.topology, gamma, cfg.base.xi, horizon, cfg.zeta)};
    row.regret = regret_bound(v, row.inputs);
    row.cost = comm_bound(v, row.inputs);
    row.cost_capped = std::min(row.cost, comm_cap(row.inputs));
    rows.push_back(std::move(row));
  }
  return rows;
}

json bounds_json(const std::vector<BoundRow>& rows) {
  json out;
  out["note"] =
      "clique cover and dominating set sizes are greedy upper bounds on the exact graph numbers, "
      "so every value is an upper bound on the corresponding theorem";
  for (const auto& r : rows) {
    const BoundInputs& b = r.inputs;
    out[to_string(r.variant)] = {
        {"bound_regret", r.regret},
        {"bound_cost", r.cost},
        {"bound_cost_capped", r.cost_capped},
        {"comm_cap", comm_cap(b)},
        {"inputs",
         {{"gaps", b.gaps},
          {"optimal_index", b.optimal_index},
          {"min_gap", b.min_gap},
          {"sigma", b.sigma},
          {"xi", b.xi},
          {"horizon", b.horizon},
          {"zeta", b.zeta},
          {"gamma", b.gamma},
          {"n_agents", b.n_agents},
          {"chi_g", b.chi_g},
          {"chi_gamma", b.chi_gamma},
          {"gammabar_gamma", b.gammabar_gamma},
          {"relay_multiplier", b.relay_multiplier()}}}};
  }
  return out;
}

void print_bounds(std::ostream& out, const ExperimentConfig& cfg) {
  const auto rows = evaluate_bounds(cfg);
  const BoundInputs& b0 = rows.front().inputs;
  char line[256];
  std::snprintf(line, sizeof line, "instance: N=%d K=%d T=%g sigma=%g xi=%g zeta=%g\n", b0.n_agents, b0.arm_count(),
                b0.horizon, b0.sigma, b0.xi, b0.zeta);
  out << line;
  std::snprintf(line, sizeof line, "%-10s %5s %6s %6s %16s %16s %16s\n", "variant", "gamma", "cover", "dom",
                "regret", "cost", "cost(capped)");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-10s %5d %6d %6d %16.6g %16.6g %16.6g\n", to_string(r.variant).c_str(),
                  r.gamma, r.inputs.chi_gamma, r.inputs.gammabar_gamma, r.regret, r.cost, r.cost_capped);
    out << line;
  }
  out << "cover/dom are greedy surrogates; values are upper bounds on the theorem right-hand sides\n";
}

namespace {

class AuditCollector : public RunObserver {
 public:
  void on_incorporate(const AuditRecord& r) override { records.push_back(r); }
  std::vector<AuditRecord> records;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  validate_experiment(cfg);

  // Validate every job before touching the file system.
  std::vector<SimInstance> instances;
  std::vector<std::string> warnings = validation_warnings(cfg.base);
  for (Variant v : cfg.variants)
    for (Gate g : cfg.gates) instances.push_back(prepare(cfg.job(v, g)));
  std::vector<BoundRow> bound_rows;
  if (cfg.bound_report) bound_rows = evaluate_bounds(cfg);
  for (const auto& w : warnings) log << "warning: " << w << '\n';

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create '" + dir.string() + "': " + ec.message());

  std::vector<std::string> written;
  const int threads = opts.threads > 0 ? opts.threads : default_thread_count();

  if (opts.dump_graph) {
    std::ostringstream ss;
    write_adjacency(ss, instances.front().topology);
    const fs::path p = dir / (cfg.name + "_graph.txt");
    write_file(p, ss.str());
    written.push_back(p.string());
  }

  std::vector<JobResult> results;
  for (const SimInstance& inst : instances) {
    const Variant v = inst.config.variant;
    const Gate g = inst.config.gate;
    log << "running " << to_string(v) << " / " << to_string(g) << " (" << inst.config.runs << " runs)\n";
    Aggregate agg = aggregate_runs(inst, threads);

    std::ostringstream csv;
    write_trajectories_csv(csv, agg.runs);
    const fs::path p = dir / csv_file_name(cfg, v, g);
    write_file(p, csv.str());
    written.push_back(p.string());

    if (opts.audit) {
      AuditCollector audit;
      run_simulation(inst, 0, &audit);
      std::ostringstream ss;
      write_audit_csv(ss, audit.records);
      const fs::path ap = dir / (cfg.name + "_" + to_string(g) + "_" + file_tag(v) + "_audit.csv");
      write_file(ap, ss.str());
      written.push_back(ap.string());
    }
    results.push_back({v, g, std::move(agg)});
  }

  const fs::path sp = dir / (cfg.name + "_summary.json");
  write_file(sp, summary_json(cfg, results, warnings).dump(2) + "\n");
  written.push_back(sp.string());

  if (cfg.bound_report) {
    const fs::path bp = dir / (cfg.name + "_bounds.json");
    write_file(bp, bounds_json(bound_rows).dump(2) + "\n");
    written.push_back(bp.string());
  }
  return written;
}

}  // namespace comex
