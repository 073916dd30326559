#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "comex/engine.hpp"

namespace comex {

/// Malformed input: bad JSON, missing or mistyped field. Maps to exit code 2.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)), detail_(what) {}
  const std::string& field() const { return field_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

/// One experiment: a base simulation config fanned out over variants x gates.
struct ExperimentConfig {
  std::string name = "experiment";
  SimConfig base;
  std::vector<Variant> variants{Variant::ucb_share};
  std::vector<Gate> gates{Gate::comex, Gate::full};
  std::string output_dir = "out";
  std::vector<int> checkpoints;  // empty: T/4, T/2, T
  bool bound_report = false;
  double zeta = 1.3;

  SimConfig job(Variant v, Gate g) const;
  std::vector<int> checkpoint_times() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

nlohmann::json arm_to_json(const ArmSpec& arm);
nlohmann::json graph_to_json(const GraphSpec& spec);

/// Range checks that do not need the graph; throws ConfigError.
void validate_experiment(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
/// Throws ConfigError("preset", ...) for unknown names.
ExperimentConfig preset(const std::string& name);

}  // namespace comex
