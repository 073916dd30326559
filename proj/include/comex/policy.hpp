#pragma once

#include <cstdint>
#include <vector>

#include "comex/rng.hpp"

namespace comex {

/// Per-agent, per-arm observation state. obs_count includes own pulls and
/// incorporated foreign observations; pull_count only own pulls.
struct AgentEstimates {
  std::vector<std::int64_t> obs_count;
  std::vector<std::int64_t> pull_count;
  std::vector<double> reward_sum;

  AgentEstimates() = default;
  explicit AgentEstimates(int arms)
      : obs_count(arms, 0), pull_count(arms, 0), reward_sum(arms, 0.0) {}

  int arm_count() const { return static_cast<int>(obs_count.size()); }
  double mean_hat(int arm) const {
    return obs_count[arm] > 0 ? reward_sum[arm] / static_cast<double>(obs_count[arm]) : 0.0;
  }
};

struct UcbParams {
  double xi = 1.1;
  double sigma = 1.0;
};

/// C = sigma * sqrt(2 (xi+1) log t / count); +inf when count == 0.
double confidence_width(double count, double t, const UcbParams& p);
double ucb_index(double mean, double count, double t, const UcbParams& p);
double ucb_index(const AgentEstimates& est, int arm, double t, const UcbParams& p);

/// Argmax over arms of the UCB index, ties to the lowest arm.
int select_arm_ucb(const AgentEstimates& est, double t, const UcbParams& p);
/// Same rule over real-valued (consensus) counts and means.
int select_arm_ucb(const std::vector<double>& means, const std::vector<double>& counts, double t,
                   const UcbParams& p);

/// Argmax of mean_hat with unobserved arms at 0, ties to the lowest arm.
int instantaneously_best(const AgentEstimates& est);
int argmax_lowest(const std::vector<double>& values);

void update_estimates(AgentEstimates& est, int arm, double reward, bool own_pull);

struct ThompsonPrior {
  double mean = 0.0;
  double variance = 1e6;
};

/// Independent Gaussian posteriors per arm with known likelihood variance.
struct ThompsonState {
  std::vector<double> posterior_mean;
  std::vector<double> posterior_variance;
  double prior_mean = 0.0;
  double prior_variance = 1e6;
  double likelihood_variance = 1.0;

  ThompsonState() = default;
  ThompsonState(int arms, ThompsonPrior prior, double likelihood_variance);
  int arm_count() const { return static_cast<int>(posterior_mean.size()); }
};

int thompson_select(const ThompsonState& state, Rng& rng);
void thompson_update(ThompsonState& state, int arm, double reward);

/// Complete-graph index with C = sigma * sqrt(2 log(t^(xi_bar+1) N) / count).
double modified_ucb_index_complete(const AgentEstimates& est, int arm, double t, double xi_bar,
                                   double sigma, double n_agents);

}  // namespace comex
