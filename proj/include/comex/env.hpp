#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "comex/rng.hpp"

namespace comex {

struct GaussianArm {
  double mean = 0.0;
  double variance = 1.0;
};

/// Triangular distribution on [0,1] with the given mode.
struct Triangular01Arm {
  double mode = 0.5;
};

struct BernoulliArm {
  double p = 0.5;
};

using ArmSpec = std::variant<GaussianArm, Triangular01Arm, BernoulliArm>;

class EnvError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double arm_mean(const ArmSpec& arm);
/// Default sub-Gaussian proxy: sqrt(variance) for Gaussian arms, 0.5 for
/// [0,1]-bounded arms (Hoeffding).
double default_proxy(const ArmSpec& arm);
bool is_bounded01(const ArmSpec& arm);
std::string describe(const ArmSpec& arm);

struct GapProfile {
  std::vector<double> gaps;
  std::optional<double> min_gap;
  int optimal_index = 0;
};

GapProfile gap_profile(const std::vector<double>& means);

/// Immutable bandit instance shared read-only across runs.
class BanditEnv {
 public:
  BanditEnv(std::vector<ArmSpec> arms, std::optional<double> sigma_override = std::nullopt);

  int arm_count() const { return static_cast<int>(arms_.size()); }
  const std::vector<ArmSpec>& arms() const { return arms_; }
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& gaps() const { return profile_.gaps; }
  std::optional<double> min_gap() const { return profile_.min_gap; }
  int optimal_index() const { return profile_.optimal_index; }
  double sigma() const { return sigma_; }
  double max_gap() const;
  const GapProfile& profile() const { return profile_; }

  double sample(int arm, Rng& rng) const;

 private:
  std::vector<ArmSpec> arms_;
  std::vector<double> means_;
  GapProfile profile_;
  double sigma_ = 0.0;
};

BanditEnv make_env(std::vector<ArmSpec> specs, std::optional<double> sigma_override = std::nullopt);

inline double sample_reward(const BanditEnv& env, int arm, Rng& rng) { return env.sample(arm, rng); }

}  // namespace comex
