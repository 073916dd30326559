// comex: run cooperative-bandit experiments and evaluate the closed-form bounds.
//
//   comex run <config.json> [--seed S] [--runs N] [--out DIR] [--audit] [--dump-graph]
//   comex run --preset paper-fig2a
//   comex bounds <config.json>
//
// Exit codes: 0 ok, 1 runtime failure, 2 parse failure, 3 validation failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "comex/report.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

struct Source {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::string> out;
};

void add_source_options(CLI::App* cmd, Source& src) {
  cmd->add_option("config", src.config_path, "experiment config (JSON)");
  cmd->add_option("--preset", src.preset, "built-in experiment instead of a config file");
  cmd->add_option("--seed", src.seed, "override the master seed");
  cmd->add_option("--runs", src.runs, "override the number of runs");
  cmd->add_option("--out", src.out, "override the output directory");
}

comex::ExperimentConfig load(const Source& src) {
  if (src.config_path.empty() == src.preset.empty())
    throw comex::ConfigParseError("config", "give exactly one of <config> or --preset");
  comex::ExperimentConfig cfg = src.preset.empty() ? comex::load_config(src.config_path) : comex::preset(src.preset);
  if (src.seed) cfg.base.seed = *src.seed;
  if (src.runs) cfg.base.runs = *src.runs;
  if (src.out) cfg.output_dir = *src.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ComEx cooperative bandit simulator"};
  app.require_subcommand(1);

  Source src;
  comex::RunOptions opts;
  auto* run = app.add_subcommand("run", "run every (variant, gate) job and write CSV/JSON outputs");
  add_source_options(run, src);
  run->add_flag("--audit", opts.audit, "also write a per-delivery audit CSV for run 0 of each job");
  run->add_flag("--dump-graph", opts.dump_graph, "write the communication graph adjacency list");
  run->add_option("--threads", opts.threads, "worker threads (default: COMEX_THREADS or hardware)");

  auto* bounds = app.add_subcommand("bounds", "print the theorem bounds for the configured instance");
  add_source_options(bounds, src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    const comex::ExperimentConfig cfg = load(src);
    if (*run) {
      for (const auto& path : comex::run_experiment(cfg, opts, std::cerr)) std::cout << path << '\n';
    } else {
      comex::print_bounds(std::cout, cfg);
    }
  } catch (const comex::ConfigParseError& e) {
    std::cerr << "error: config parse failure: " << e.what() << '\n';
    return kExitParse;
  } catch (const comex::ConfigError& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return kExitValidation;
  } catch (const comex::BoundError& e) {
    std::cerr << "error: invalid config for bounds: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
