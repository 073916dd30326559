#include "comex/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace comex {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate(const ArmSpec& arm, std::size_t index) {
  auto fail = [index](const char* what) {
    throw EnvError("arm " + std::to_string(index) + ": " + what);
  };
  std::visit(overloaded{
                 [&](const GaussianArm& a) {
                   if (!std::isfinite(a.mean)) fail("gaussian mean must be finite");
                   if (!(a.variance >= 0.0) || !std::isfinite(a.variance))
                     fail("gaussian variance must be >= 0");
                 },
                 [&](const Triangular01Arm& a) {
                   if (!(a.mode >= 0.0 && a.mode <= 1.0)) fail("triangular mode must lie in [0,1]");
                 },
                 [&](const BernoulliArm& a) {
                   if (!(a.p >= 0.0 && a.p <= 1.0)) fail("bernoulli p must lie in [0,1]");
                 },
             },
             arm);
}

}  // namespace

double arm_mean(const ArmSpec& arm) {
  return std::visit(overloaded{
                        [](const GaussianArm& a) { return a.mean; },
                        [](const Triangular01Arm& a) { return (0.0 + 1.0 + a.mode) / 3.0; },
                        [](const BernoulliArm& a) { return a.p; },
                    },
                    arm);
}

double default_proxy(const ArmSpec& arm) {
  if (const auto* g = std::get_if<GaussianArm>(&arm)) return std::sqrt(g->variance);
  return 0.5;
}

bool is_bounded01(const ArmSpec& arm) { return !std::holds_alternative<GaussianArm>(arm); }

std::string describe(const ArmSpec& arm) {
  char buf[96];
  std::visit(overloaded{
                 [&](const GaussianArm& a) {
                   std::snprintf(buf, sizeof buf, "gaussian(%g, %g)", a.mean, a.variance);
                 },
                 [&](const Triangular01Arm& a) {
                   std::snprintf(buf, sizeof buf, "triangular01(%g)", a.mode);
                 },
                 [&](const BernoulliArm& a) { std::snprintf(buf, sizeof buf, "bernoulli(%g)", a.p); },
             },
             arm);
  return buf;
}

GapProfile gap_profile(const std::vector<double>& means) {
  GapProfile out;
  if (means.empty()) return out;
  // max_element returns the first maximum, so ties go to the lowest index.
  auto best = std::max_element(means.begin(), means.end());
  out.optimal_index = static_cast<int>(best - means.begin());
  out.gaps.reserve(means.size());
  for (double m : means) out.gaps.push_back(*best - m);
  for (double g : out.gaps) {
    if (g > 0.0 && (!out.min_gap || g < *out.min_gap)) out.min_gap = g;
  }
  return out;
}

BanditEnv::BanditEnv(std::vector<ArmSpec> arms, std::optional<double> sigma_override)
    : arms_(std::move(arms)) {
  if (arms_.empty()) throw EnvError("at least one arm is required");
  double proxy = 0.0;
  for (std::size_t k = 0; k < arms_.size(); ++k) {
    validate(arms_[k], k);
    means_.push_back(arm_mean(arms_[k]));
    proxy = std::max(proxy, default_proxy(arms_[k]));
  }
  if (sigma_override) {
    if (!(*sigma_override > 0.0)) throw EnvError("sigma must be > 0");
    if (*sigma_override < proxy)
      throw EnvError("sigma override " + std::to_string(*sigma_override) +
                     " is below an arm's variance proxy " + std::to_string(proxy));
    sigma_ = *sigma_override;
  } else {
    // All-degenerate Gaussian arms have proxy 0; keep sigma strictly positive.
    sigma_ = proxy > 0.0 ? proxy : 1.0;
  }
  profile_ = gap_profile(means_);
}

double BanditEnv::max_gap() const {
  return profile_.gaps.empty() ? 0.0 : *std::max_element(profile_.gaps.begin(), profile_.gaps.end());
}

double BanditEnv::sample(int arm, Rng& rng) const {
  if (arm < 0 || arm >= arm_count()) throw EnvError("invalid arm index " + std::to_string(arm));
  return std::visit(overloaded{
                        [&](const GaussianArm& a) {
                          if (a.variance == 0.0) return a.mean;
                          return std::normal_distribution<double>(a.mean, std::sqrt(a.variance))(rng);
                        },
                        [&](const Triangular01Arm& a) {
                          // Inverse CDF of Triangular(0, 1, c).
                          double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                          if (u < a.mode) return std::sqrt(u * a.mode);
                          return 1.0 - std::sqrt((1.0 - u) * (1.0 - a.mode));
                        },
                        [&](const BernoulliArm& a) {
                          double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                          return u < a.p ? 1.0 : 0.0;
                        },
                    },
                    arms_[arm]);
}

BanditEnv make_env(std::vector<ArmSpec> specs, std::optional<double> sigma_override) {
  return BanditEnv(std::move(specs), sigma_override);
}

}  // namespace comex
