#include "comex/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace comex {

std::string to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::ucb_share: return "ucb_share";
    case BoundVariant::mp_ucb: return "mp_ucb";
    case BoundVariant::lf_ucb: return "lf_ucb";
  }
  return "?";
}

double BoundInputs::eta(int arm) const {
  return 8.0 * (xi + 1.0) * sigma * sigma * std::log(horizon) / (gaps[arm] * gaps[arm]);
}

double BoundInputs::relay_multiplier() const {
  return std::accumulate(degrees_gamma_minus1_plus.begin(), degrees_gamma_minus1_plus.end(), 0.0);
}

BoundInputs make_bound_inputs(const BanditEnv& env, const Topology& g, int gamma, double xi, double horizon,
                              double zeta) {
  if (gamma < 1) throw BoundError("gamma must be >= 1");
  BoundInputs b;
  b.gaps = env.gaps();
  b.optimal_index = env.optimal_index();
  b.min_gap = env.min_gap().value_or(0.0);
  b.sigma = env.sigma();
  b.xi = xi;
  b.horizon = horizon;
  b.zeta = zeta;
  b.gamma = gamma;
  b.n_agents = g.size();

  const GraphAnalysis base = analyze(g, 1);
  b.chi_g = base.chi_hat();
  b.degrees = g.degrees();
  const GraphAnalysis at_gamma = gamma == 1 ? base : analyze(g, gamma);
  b.chi_gamma = at_gamma.chi_hat();
  b.gammabar_gamma = at_gamma.gammabar_hat();
  b.degrees_gamma = at_gamma.degrees_gamma;
  if (gamma == 1) {
    b.degrees_gamma_minus1_plus.assign(g.size(), 1);  // d_0 = 0
  } else {
    const GraphAnalysis below = gamma - 1 == 1 ? base : analyze(g, gamma - 1);
    b.degrees_gamma_minus1_plus = below.degrees_gamma_plus;
  }
  return b;
}

double g_term(double m, const std::vector<int>& degrees) {
  double total = m;
  for (int d : degrees) {
    if (d < 0) throw BoundError("degrees must be nonnegative");
    total += 12.0 * std::log(3.0 * (d + 1.0)) + 3.0 * std::log(d + 1.0);
  }
  return total;
}

namespace {

void check_common(const BoundInputs& b) {
  if (b.xi < kMinTheoremXi) throw BoundError("theorem bounds require xi >= 1.1");
  if (!(b.zeta > 1.0)) throw BoundError("zeta must be > 1");
  if (!(b.horizon >= 1.0)) throw BoundError("horizon must be >= 1");
  if (!(b.sigma >= 0.0)) throw BoundError("sigma must be >= 0");
  for (int k = 0; k < b.arm_count(); ++k) {
    if (k == b.optimal_index) continue;
    if (!(b.gaps[k] > 0.0)) throw BoundError("suboptimal arm " + std::to_string(k) + " has zero gap");
  }
}

// sum over suboptimal k of f(gap_k)
template <class F>
double sum_suboptimal(const BoundInputs& b, F&& f) {
  double total = 0.0;
  for (int k = 0; k < b.arm_count(); ++k)
    if (k != b.optimal_index) total += f(b.gaps[k]);
  return total;
}

}  // namespace

double regret_bound(BoundVariant v, const BoundInputs& b) {
  check_common(b);
  const double log_t = std::log(b.horizon);
  const double n = b.n_agents;
  const double lead = 8.0 * (b.xi + 1.0) * b.sigma * log_t;
  const double gap_sum = sum_suboptimal(b, [](double d) { return d; });
  switch (v) {
    case BoundVariant::ucb_share:
      return sum_suboptimal(b, [&](double d) { return lead / d * b.chi_g; }) +
             gap_sum * g_term(4.0 * n, b.degrees);
    case BoundVariant::mp_ucb:
      return sum_suboptimal(b, [&](double d) { return lead / d * b.chi_gamma; }) +
             gap_sum * ((n - b.chi_gamma) * (b.gamma - 1) + g_term(4.0 * n, b.degrees_gamma));
    case BoundVariant::lf_ucb: {
      const double dom = b.gammabar_gamma;
      return sum_suboptimal(b, [&](double d) { return lead / d * dom; }) +
             gap_sum * ((n - dom) * (3.0 * b.gamma - 1.0) + dom * g_term(4.0 * n, b.degrees_gamma));
    }
  }
  return 0.0;
}

double comm_bound(BoundVariant v, const BoundInputs& b) {
  check_common(b);
  if (!(b.min_gap > 0.0)) throw BoundError("communication bounds need a positive minimum gap");
  const double log_t = std::log(b.horizon);
  const double n = b.n_agents;
  const double k_arms = b.arm_count();
  const double lead = 8.0 * b.sigma * (b.xi + 1.0) * log_t;
  const double opt_term = n / (b.min_gap * b.min_gap);
  switch (v) {
    case BoundVariant::ucb_share: {
      const double cover = sum_suboptimal(b, [&](double d) { return b.chi_g / (d * d); });
      return lead * (opt_term + cover) + k_arms * g_term(7.0 * n, b.degrees);
    }
    case BoundVariant::mp_ucb: {
      const double relay = b.relay_multiplier();
      const double cover = sum_suboptimal(b, [&](double d) { return b.chi_gamma / (d * d); });
      const double delay = k_arms * (n - b.chi_gamma) * (b.gamma - 1);
      return (lead * (opt_term + cover) + delay) * relay + k_arms * relay * g_term(7.0 * n, b.degrees_gamma);
    }
    case BoundVariant::lf_ucb: {
      const double relay = b.relay_multiplier();
      const double dom = b.gammabar_gamma;
      const double cover = sum_suboptimal(b, [&](double d) { return dom / (d * d); });
      const double delay = k_arms * std::max(0.0, n - 3.0 * dom * (b.gamma - 1));
      return (lead * (opt_term + cover) + delay) * relay +
             k_arms * relay * dom * g_term(7.0 * n, b.degrees_gamma);
    }
  }
  return 0.0;
}

double comm_cap(const BoundInputs& b) { return b.horizon * b.relay_multiplier(); }

double comm_bound_capped(BoundVariant v, const BoundInputs& b) { return std::min(comm_bound(v, b), comm_cap(b)); }

double tail_bound(double t, double xi, double degree_bound, double zeta) {
  if (!(t >= 1.0)) throw BoundError("tail bound needs t >= 1");
  if (!(zeta > 1.0)) throw BoundError("zeta must be > 1");
  if (xi < kMinTheoremXi) throw BoundError("tail bound requires xi >= 1.1");
  if (!(degree_bound >= 0.0)) throw BoundError("degree must be >= 0");
  const double exponent = (xi + 1.0) * (1.0 - (zeta - 1.0) * (zeta - 1.0) / 16.0);
  return std::log((degree_bound + 1.0) * t) / (std::log(zeta) * std::pow(t, exponent));
}

double tail_sum_bound(double degree_bound) {
  return 12.0 * std::log(3.0 * (degree_bound + 1.0)) + 3.0 * (std::log(degree_bound + 1.0) + 1.0);
}

double regret_bound_complete_modified(const BoundInputs& b, int n_agents) {
  check_common(b);
  if (n_agents < 1) throw BoundError("need at least one agent");
  if (static_cast<int>(b.degrees.size()) != n_agents ||
      std::any_of(b.degrees.begin(), b.degrees.end(), [&](int d) { return d != n_agents - 1; }))
    throw BoundError("modified bound applies to complete graphs only");
  const double n = n_agents;
  const double gap_sum = sum_suboptimal(b, [](double d) { return d; });
  const double lead = sum_suboptimal(b, [&](double d) {
    return 8.0 * (b.xi + 1.0) * b.sigma / d * std::log(b.horizon * n);
  });
  return lead + (n + 3.0) * gap_sum + (g_term(0.0, b.degrees) / n) * gap_sum;
}

}  // namespace comex
