#include "comex/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace comex {

using nlohmann::json;

SimConfig ExperimentConfig::job(Variant v, Gate g) const {
  SimConfig c = base;
  c.variant = v;
  c.gate = g;
  return c;
}

std::vector<int> ExperimentConfig::checkpoint_times() const {
  if (!checkpoints.empty()) return checkpoints;
  const int t = base.horizon;
  std::vector<int> out{std::max(1, t / 4), std::max(1, t / 2), t};
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

const std::set<std::string> kKnownFields{
    "name",       "variants", "gates",  "arms",   "sigma",  "graph", "require_connected",
    "horizon",    "gamma",    "xi",     "thompson_prior_mean", "thompson_prior_variance",
    "runs",       "seed",     "allow_gamma_beyond_diameter",   "est_cost", "output_dir",
    "checkpoints", "bound_report", "zeta"};

template <class T>
T read(const json& j, const std::string& field, const T& fallback) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigParseError(field, "expected a boolean");
    } else if constexpr (std::is_arithmetic_v<T>) {
      if (!it->is_number()) throw ConfigParseError(field, "expected a number");
      if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer()) throw ConfigParseError(field, "expected an integer");
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigParseError(field, "expected a string");
    }
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigParseError(field, e.what());
  }
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) throw ConfigParseError(field, "missing required field");
  return *it;
}

std::vector<ArmSpec> parse_arms(const json& j) {
  if (!j.is_array()) throw ConfigParseError("arms", "expected an array of arm objects");
  std::vector<ArmSpec> arms;
  for (std::size_t idx = 0; idx < j.size(); ++idx) {
    const json& a = j[idx];
    const std::string field = "arms[" + std::to_string(idx) + "]";
    if (!a.is_object()) throw ConfigParseError(field, "expected an object");
    ArmSpec spec;
    int count = 1;
    try {
      auto param = [&a](const char* key) {
        require(a, key);
        return read<double>(a, key, 0.0);
      };
      require(a, "kind");
      const std::string kind = read<std::string>(a, "kind", "");
      count = read<int>(a, "count", 1);
      if (kind == "gaussian") {
        spec = GaussianArm{param("mean"), read<double>(a, "variance", 1.0)};
      } else if (kind == "triangular01") {
        spec = Triangular01Arm{param("mode")};
      } else if (kind == "bernoulli") {
        spec = BernoulliArm{param("p")};
      } else {
        throw ConfigParseError("kind", "unknown arm kind '" + kind + "'");
      }
    } catch (const ConfigParseError& e) {
      throw ConfigParseError(field + "." + e.field(), e.detail());
    }
    if (count < 1) throw ConfigError(field + ".count", "must be >= 1");
    arms.insert(arms.end(), static_cast<std::size_t>(count), spec);
  }
  return arms;
}

GraphSpec parse_graph(const json& j) {
  if (!j.is_object()) throw ConfigParseError("graph", "expected an object");
  const std::string kind = read<std::string>(j, "kind", "");
  const int n = read<int>(j, "n", 1);
  if (kind == "erdos_renyi") return ErdosRenyi{n, read<double>(j, "p", 0.5)};
  if (kind == "complete") return Complete{n};
  if (kind == "path") return Path{n};
  if (kind == "star") return Star{n};
  if (kind == "cycle") return Cycle{n};
  throw ConfigParseError("graph.kind", "unknown graph kind '" + kind + "'");
}

template <class E, class Parse>
std::vector<E> parse_enum_list(const json& j, const std::string& field, Parse parse) {
  if (!j.is_array()) throw ConfigParseError(field, "expected an array of strings");
  std::vector<E> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw ConfigParseError(field, "expected an array of strings");
    auto v = parse(item.template get<std::string>());
    if (!v) throw ConfigParseError(field, "unknown value '" + item.template get<std::string>() + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigParseError("", "config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKnownFields.count(key)) throw ConfigParseError(key, "unknown field");

  ExperimentConfig cfg;
  cfg.name = read<std::string>(j, "name", cfg.name);
  if (j.contains("variants"))
    cfg.variants = parse_enum_list<Variant>(j["variants"], "variants", parse_variant);
  if (j.contains("gates")) cfg.gates = parse_enum_list<Gate>(j["gates"], "gates", parse_gate);

  SimConfig& s = cfg.base;
  s.arms = parse_arms(require(j, "arms"));
  if (j.contains("sigma") && !j["sigma"].is_null()) s.sigma = read<double>(j, "sigma", 1.0);
  s.graph = parse_graph(require(j, "graph"));
  s.require_connected = read<bool>(j, "require_connected", true);
  s.horizon = read<int>(j, "horizon", s.horizon);
  s.gamma = read<int>(j, "gamma", s.gamma);
  s.xi = read<double>(j, "xi", s.xi);
  s.prior.mean = read<double>(j, "thompson_prior_mean", s.prior.mean);
  s.prior.variance = read<double>(j, "thompson_prior_variance", s.prior.variance);
  s.runs = read<int>(j, "runs", s.runs);
  if (j.contains("seed")) {
    const json& seed = j["seed"];
    if (!seed.is_number_unsigned()) throw ConfigParseError("seed", "expected a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
  }
  s.allow_gamma_beyond_diameter = read<bool>(j, "allow_gamma_beyond_diameter", false);
  if (j.contains("est_cost")) {
    auto c = parse_est_cost(read<std::string>(j, "est_cost", ""));
    if (!c) throw ConfigParseError("est_cost", "expected 'per_bundle' or 'per_arm'");
    s.est_cost = *c;
  }
  cfg.output_dir = read<std::string>(j, "output_dir", cfg.output_dir);
  if (j.contains("checkpoints")) {
    if (!j["checkpoints"].is_array()) throw ConfigParseError("checkpoints", "expected an array of integers");
    for (const auto& c : j["checkpoints"]) {
      if (!c.is_number_integer()) throw ConfigParseError("checkpoints", "expected an array of integers");
      cfg.checkpoints.push_back(c.get<int>());
    }
  }
  cfg.bound_report = read<bool>(j, "bound_report", false);
  cfg.zeta = read<double>(j, "zeta", cfg.zeta);
  return cfg;
}

json arm_to_json(const ArmSpec& arm) {
  if (const auto* g = std::get_if<GaussianArm>(&arm))
    return {{"kind", "gaussian"}, {"mean", g->mean}, {"variance", g->variance}};
  if (const auto* t = std::get_if<Triangular01Arm>(&arm)) return {{"kind", "triangular01"}, {"mode", t->mode}};
  return {{"kind", "bernoulli"}, {"p", std::get<BernoulliArm>(arm).p}};
}

json graph_to_json(const GraphSpec& spec) {
  if (const auto* er = std::get_if<ErdosRenyi>(&spec)) return {{"kind", "erdos_renyi"}, {"n", er->n}, {"p", er->p}};
  if (std::holds_alternative<Complete>(spec)) return {{"kind", "complete"}, {"n", agent_count(spec)}};
  if (std::holds_alternative<Path>(spec)) return {{"kind", "path"}, {"n", agent_count(spec)}};
  if (std::holds_alternative<Star>(spec)) return {{"kind", "star"}, {"n", agent_count(spec)}};
  return {{"kind", "cycle"}, {"n", agent_count(spec)}};
}

json config_to_json(const ExperimentConfig& cfg) {
  const SimConfig& s = cfg.base;
  json arms = json::array();
  for (const auto& a : s.arms) arms.push_back(arm_to_json(a));
  json variants = json::array();
  for (auto v : cfg.variants) variants.push_back(to_string(v));
  json gates = json::array();
  for (auto g : cfg.gates) gates.push_back(to_string(g));
  json j = {
      {"name", cfg.name},
      {"variants", variants},
      {"gates", gates},
      {"arms", arms},
      {"sigma", s.sigma ? json(*s.sigma) : json(nullptr)},
      {"graph", graph_to_json(s.graph)},
      {"require_connected", s.require_connected},
      {"horizon", s.horizon},
      {"gamma", s.gamma},
      {"xi", s.xi},
      {"thompson_prior_mean", s.prior.mean},
      {"thompson_prior_variance", s.prior.variance},
      {"runs", s.runs},
      {"seed", s.seed},
      {"allow_gamma_beyond_diameter", s.allow_gamma_beyond_diameter},
      {"est_cost", to_string(s.est_cost)},
      {"output_dir", cfg.output_dir},
      {"checkpoints", cfg.checkpoints},
      {"bound_report", cfg.bound_report},
      {"zeta", cfg.zeta},
  };
  return j;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError("", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate_experiment(const ExperimentConfig& cfg) {
  if (cfg.variants.empty()) throw ConfigError("variants", "must not be empty");
  if (cfg.gates.empty()) throw ConfigError("gates", "must not be empty");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (cfg.name.empty() || cfg.name.find('/') != std::string::npos)
    throw ConfigError("name", "must be a non-empty file-name stem");
  if (cfg.base.horizon < 1) throw ConfigError("horizon", "must be >= 1");
  for (int c : cfg.checkpoints)
    if (c < 1 || c > cfg.base.horizon) throw ConfigError("checkpoints", "must lie in [1, horizon]");
  if (!(cfg.zeta > 1.0)) throw ConfigError("zeta", "must be > 1");
}

namespace {

std::vector<ArmSpec> figure_gaussian_arms() {
  std::vector<ArmSpec> arms{GaussianArm{11.0, 1.0}};
  arms.insert(arms.end(), 9, GaussianArm{10.0, 1.0});
  return arms;
}

std::vector<ArmSpec> figure_triangular_arms() {
  std::vector<ArmSpec> arms{Triangular01Arm{1.0}};
  arms.insert(arms.end(), 9, Triangular01Arm{0.0});
  return arms;
}

ExperimentConfig figure_base(std::string name, Variant v, std::vector<ArmSpec> arms, int gamma) {
  ExperimentConfig cfg;
  cfg.name = std::move(name);
  cfg.variants = {v};
  cfg.gates = {Gate::comex, Gate::full};
  cfg.base.arms = std::move(arms);
  cfg.base.graph = ErdosRenyi{100, 0.7};
  cfg.base.horizon = 500;
  cfg.base.gamma = gamma;
  cfg.base.xi = 1.01;
  cfg.base.runs = 100;
  cfg.base.seed = 2021;
  // ER(100, 0.7) has diameter 2; the reference experiments still use gamma = 5.
  cfg.base.allow_gamma_beyond_diameter = gamma > 1;
  cfg.output_dir = "out";
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-fig2a", "paper-fig2b", "paper-fig2c", "paper-fig2d", "paper-fig2e"};
}

ExperimentConfig preset(const std::string& name) {
  if (name == "paper-fig2a") return figure_base("fig2a", Variant::ucb_share, figure_triangular_arms(), 1);
  if (name == "paper-fig2b") return figure_base("fig2b", Variant::mp_ucb, figure_gaussian_arms(), 5);
  if (name == "paper-fig2c") return figure_base("fig2c", Variant::est_ucb, figure_gaussian_arms(), 1);
  if (name == "paper-fig2d") return figure_base("fig2d", Variant::lf_ucb, figure_triangular_arms(), 5);
  if (name == "paper-fig2e") return figure_base("fig2e", Variant::mp_thompson, figure_gaussian_arms(), 5);
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

}  // namespace comex
