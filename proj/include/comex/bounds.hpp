#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "comex/env.hpp"
#include "comex/graph.hpp"

namespace comex {

class BoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BoundVariant { ucb_share, mp_ucb, lf_ucb };
std::string to_string(BoundVariant v);

/// Everything the closed-form bounds consume. Clique-cover and dominating
/// numbers are greedy surrogates, so every bound evaluated here is an upper
/// bound on the corresponding theorem's value.
struct BoundInputs {
  std::vector<double> gaps;  // all K arms; the optimal arm has gap 0
  int optimal_index = 0;
  double min_gap = 0.0;
  double sigma = 1.0;
  double xi = 1.1;
  double horizon = 1.0;
  double zeta = 1.3;
  int gamma = 1;
  int n_agents = 1;
  int chi_g = 1;           // clique cover count of G
  int chi_gamma = 1;       // clique cover count of G_gamma
  int gammabar_gamma = 1;  // dominating set size of G_gamma
  std::vector<int> degrees;                   // d(i) in G
  std::vector<int> degrees_gamma;             // d_gamma(i)
  std::vector<int> degrees_gamma_minus1_plus; // d_{gamma-1}(i) + 1

  int arm_count() const { return static_cast<int>(gaps.size()); }
  /// eta_k = 8 (xi+1) sigma^2 log T / gap_k^2
  double eta(int arm) const;
  double relay_multiplier() const;  // sum_i d_{gamma-1}(i)+
};

inline constexpr double kDefaultZeta = 1.3;
inline constexpr double kMinTheoremXi = 1.1;

BoundInputs make_bound_inputs(const BanditEnv& env, const Topology& g, int gamma, double xi, double horizon,
                              double zeta = kDefaultZeta);

/// g(M, d) = M + sum_i (12 log(3(d_i+1)) + 3 log(d_i+1)).
double g_term(double m, const std::vector<int>& degrees);

double regret_bound(BoundVariant v, const BoundInputs& b);
double comm_bound(BoundVariant v, const BoundInputs& b);
/// Trivial cap T * sum_i d_{gamma-1}(i)+ on any relay protocol's cost.
double comm_cap(const BoundInputs& b);
double comm_bound_capped(BoundVariant v, const BoundInputs& b);

/// (1/log zeta) log((d+1) t) / t^((xi+1)(1-(zeta-1)^2/16)), unclamped.
double tail_bound(double t, double xi, double degree_bound, double zeta = kDefaultZeta);
inline double tail_probability(double t, double xi, double degree_bound, double zeta = kDefaultZeta) {
  double v = tail_bound(t, xi, degree_bound, zeta);
  return v > 1.0 ? 1.0 : v;
}
/// Closed-form bound on the sum over t of tail_bound at zeta = 1.3.
double tail_sum_bound(double degree_bound);

double regret_bound_complete_modified(const BoundInputs& b, int n_agents);

}  // namespace comex
