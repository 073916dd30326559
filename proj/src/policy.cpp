#include "comex/policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace comex {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double confidence_width(double count, double t, const UcbParams& p) {
  if (count <= 0.0) return kInf;
  return p.sigma * std::sqrt(2.0 * (p.xi + 1.0) * std::log(t) / count);
}

double ucb_index(double mean, double count, double t, const UcbParams& p) {
  if (count <= 0.0) return kInf;
  return mean + confidence_width(count, t, p);
}

double ucb_index(const AgentEstimates& est, int arm, double t, const UcbParams& p) {
  return ucb_index(est.mean_hat(arm), static_cast<double>(est.obs_count[arm]), t, p);
}

int select_arm_ucb(const AgentEstimates& est, double t, const UcbParams& p) {
  int best = 0;
  double best_value = -kInf;
  for (int k = 0; k < est.arm_count(); ++k) {
    double v = ucb_index(est, k, t, p);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return best;
}

int select_arm_ucb(const std::vector<double>& means, const std::vector<double>& counts, double t,
                   const UcbParams& p) {
  int best = 0;
  double best_value = -kInf;
  for (std::size_t k = 0; k < means.size(); ++k) {
    double v = ucb_index(means[k], counts[k], t, p);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(k);
    }
  }
  return best;
}

int argmax_lowest(const std::vector<double>& values) {
  int best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = static_cast<int>(k);
  return best;
}

int instantaneously_best(const AgentEstimates& est) {
  int best = 0;
  double best_mean = est.arm_count() > 0 ? est.mean_hat(0) : 0.0;
  for (int k = 1; k < est.arm_count(); ++k) {
    double m = est.mean_hat(k);
    if (m > best_mean) {
      best_mean = m;
      best = k;
    }
  }
  return best;
}

void update_estimates(AgentEstimates& est, int arm, double reward, bool own_pull) {
  est.obs_count[arm] += 1;
  est.reward_sum[arm] += reward;
  if (own_pull) est.pull_count[arm] += 1;
}

ThompsonState::ThompsonState(int arms, ThompsonPrior prior, double lik_variance)
    : posterior_mean(arms, prior.mean),
      posterior_variance(arms, prior.variance),
      prior_mean(prior.mean),
      prior_variance(prior.variance),
      likelihood_variance(lik_variance) {
  if (!(prior.variance > 0.0)) throw std::invalid_argument("prior variance must be > 0");
  if (!(lik_variance > 0.0)) throw std::invalid_argument("likelihood variance must be > 0");
}

int thompson_select(const ThompsonState& state, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  int best = 0;
  double best_value = -kInf;
  for (int k = 0; k < state.arm_count(); ++k) {
    double y = state.posterior_mean[k] + std::sqrt(state.posterior_variance[k]) * z(rng);
    if (y > best_value) {
      best_value = y;
      best = k;
    }
  }
  return best;
}

void thompson_update(ThompsonState& state, int arm, double reward) {
  double prec = 1.0 / state.posterior_variance[arm] + 1.0 / state.likelihood_variance;
  double var = 1.0 / prec;
  state.posterior_mean[arm] =
      var * (state.posterior_mean[arm] / state.posterior_variance[arm] + reward / state.likelihood_variance);
  state.posterior_variance[arm] = var;
}

double modified_ucb_index_complete(const AgentEstimates& est, int arm, double t, double xi_bar,
                                   double sigma, double n_agents) {
  if (est.obs_count[arm] <= 0) return kInf;
  double log_term = (xi_bar + 1.0) * std::log(t) + std::log(n_agents);
  return est.mean_hat(arm) + sigma * std::sqrt(2.0 * log_term / static_cast<double>(est.obs_count[arm]));
}

}  // namespace comex
