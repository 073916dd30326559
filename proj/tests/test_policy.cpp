#include <doctest.h>

#include <cmath>
#include <limits>

#include "comex/policy.hpp"

using namespace comex;

namespace {

AgentEstimates with(std::vector<double> means, std::vector<std::int64_t> counts) {
  AgentEstimates est(static_cast<int>(means.size()));
  for (std::size_t k = 0; k < means.size(); ++k) {
    est.obs_count[k] = counts[k];
    est.reward_sum[k] = means[k] * static_cast<double>(counts[k]);
  }
  return est;
}

const UcbParams kP{1.1, 1.0};

}  // namespace

TEST_CASE("ucb_index examples") {
  AgentEstimates fresh(3);
  CHECK(ucb_index(fresh, 0, 10.0, kP) == std::numeric_limits<double>::infinity());
  CHECK(ucb_index(0.5, 1, std::exp(2.0), kP) == doctest::Approx(3.3983).epsilon(1e-4));
  CHECK(ucb_index(0.5, 7, 1.0, kP) == 0.5);
  CHECK(confidence_width(0, 5, kP) == std::numeric_limits<double>::infinity());
}

TEST_CASE("ucb_index monotonicity") {
  for (double t : {2.0, 10.0, 500.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n < 200; ++n) {
      const double v = ucb_index(1.0, n, t, kP);
      CHECK(v < prev);
      prev = v;
    }
  }
  for (int n : {1, 5, 50}) {
    double prev = -1e300;
    for (double t = 1; t < 1000; t *= 1.7) {
      const double v = ucb_index(1.0, n, t, kP);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("select_arm_ucb examples") {
  CHECK(select_arm_ucb(AgentEstimates(4), 10.0, kP) == 0);
  CHECK(select_arm_ucb(with({10, 9}, {100, 100}), 500.0, kP) == 0);
  CHECK(ucb_index(10, 100, 500, kP) == doctest::Approx(10 + std::sqrt(2 * 2.1 * std::log(500.0) / 100)));
  CHECK(ucb_index(10, 100, 500, kP) - ucb_index(9, 100, 500, kP) == doctest::Approx(1.0));
  CHECK(select_arm_ucb(with({0, 0}, {1000, 1}), 100.0, kP) == 1);
  // ties resolve to the lowest index
  CHECK(select_arm_ucb(with({3, 5, 5}, {4, 4, 4}), 20.0, kP) == 1);
  // unobserved arm beats any finite index
  CHECK(select_arm_ucb(with({100, 0}, {10, 0}), 20.0, kP) == 1);
}

TEST_CASE("select_arm_ucb is invariant to a common shift") {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> m(5);
    std::vector<std::int64_t> c(5);
    for (int k = 0; k < 5; ++k) {
      m[k] = u(rng);
      c[k] = 1 + rep % 7 + k;
    }
    std::vector<double> shifted = m;
    for (auto& v : shifted) v += 17.25;
    CHECK(select_arm_ucb(with(m, c), 50.0, kP) == select_arm_ucb(with(shifted, c), 50.0, kP));
  }
}

TEST_CASE("consensus overload matches the estimates overload") {
  AgentEstimates est = with({1.0, 2.0, 1.5}, {3, 8, 2});
  std::vector<double> means{1.0, 2.0, 1.5}, counts{3, 8, 2};
  for (double t : {1.0, 4.0, 80.0}) CHECK(select_arm_ucb(means, counts, t, kP) == select_arm_ucb(est, t, kP));
}

TEST_CASE("instantaneously_best") {
  CHECK(instantaneously_best(with({1, 1, 1}, {2, 2, 2})) == 0);
  CHECK(instantaneously_best(with({9.8, 10.2, 10.0}, {1, 1, 1})) == 1);
  AgentEstimates fresh(4);
  update_estimates(fresh, 2, 1.0, true);
  CHECK(instantaneously_best(fresh) == 2);
  // equals select_arm_ucb at t = 1 where the width vanishes
  Rng rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 100; ++rep) {
    AgentEstimates e = with({u(rng), u(rng), u(rng)}, {1, 2, 3});
    CHECK(instantaneously_best(e) == select_arm_ucb(e, 1.0, kP));
  }
}

TEST_CASE("update_estimates") {
  AgentEstimates est(2);
  update_estimates(est, 0, 1.0, true);
  CHECK(est.obs_count[0] == 1);
  CHECK(est.pull_count[0] == 1);
  CHECK(est.mean_hat(0) == 1.0);
  update_estimates(est, 0, 0.0, false);
  CHECK(est.obs_count[0] == 2);
  CHECK(est.pull_count[0] == 1);
  CHECK(est.mean_hat(0) == 0.5);

  AgentEstimates alt(1);
  for (int i = 0; i < 1000; ++i) update_estimates(alt, 0, i % 2, i % 3 == 0);
  CHECK(alt.mean_hat(0) == 0.5);
  CHECK(alt.obs_count[0] >= alt.pull_count[0]);
  CHECK(alt.mean_hat(0) * alt.obs_count[0] == doctest::Approx(alt.reward_sum[0]));
}

TEST_CASE("thompson_select") {
  Rng rng(1);
  ThompsonState one(1, {}, 1.0);
  for (int i = 0; i < 100; ++i) CHECK(thompson_select(one, rng) == 0);

  ThompsonState sharp(2, {}, 1.0);
  sharp.posterior_mean = {100, 0};
  sharp.posterior_variance = {1e-12, 1e-12};
  for (int i = 0; i < 1000; ++i) CHECK(thompson_select(sharp, rng) == 0);

  ThompsonState sym(2, {0, 1}, 1.0);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += thompson_select(sym, rng) == 0;
  CHECK(zeros / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("thompson_update is conjugate") {
  ThompsonState s(1, {0, 1e6}, 1.0);
  thompson_update(s, 0, 11.0);
  CHECK(s.posterior_mean[0] == doctest::Approx(10.99999).epsilon(1e-7));
  CHECK(s.posterior_variance[0] == doctest::Approx(0.999999).epsilon(1e-9));

  ThompsonState fixed(1, {3.0, 2.0}, 1.0);
  thompson_update(fixed, 0, 3.0);
  CHECK(fixed.posterior_mean[0] == doctest::Approx(3.0));
  CHECK(fixed.posterior_variance[0] < 2.0);

  ThompsonState many(1, {0, 1e12}, 4.0);
  double prev = many.posterior_variance[0];
  for (int i = 0; i < 50; ++i) {
    thompson_update(many, 0, 2.5);
    CHECK(many.posterior_variance[0] > 0.0);
    CHECK(many.posterior_variance[0] <= prev);
    prev = many.posterior_variance[0];
  }
  CHECK(many.posterior_mean[0] == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(many.posterior_variance[0] == doctest::Approx(4.0 / 50).epsilon(1e-9));

  ThompsonState a(1, {}, 1.0), b(1, {}, 1.0);
  thompson_update(a, 0, 1.7);
  thompson_update(a, 0, -4.2);
  thompson_update(b, 0, -4.2);
  thompson_update(b, 0, 1.7);
  CHECK(a.posterior_mean[0] == doctest::Approx(b.posterior_mean[0]).epsilon(1e-9));
  CHECK(a.posterior_variance[0] == doctest::Approx(b.posterior_variance[0]).epsilon(1e-9));
}

TEST_CASE("modified complete-graph index") {
  AgentEstimates est = with({0.7, 0.2}, {3, 5});
  for (double t : {1.0, 3.0, 100.0})
    for (int k = 0; k < 2; ++k)
      CHECK(modified_ucb_index_complete(est, k, t, 1.1, 1.0, 1.0) == doctest::Approx(ucb_index(est, k, t, kP)));
  AgentEstimates one = with({0.0}, {1});
  CHECK(modified_ucb_index_complete(one, 0, std::exp(1.0), 1.1, 1.0, std::exp(1.0)) ==
        doctest::Approx(2.4900).epsilon(1e-4));
  CHECK(modified_ucb_index_complete(est, 0, 1.0, 1.1, 1.0, 1.0) == doctest::Approx(0.7));
  CHECK(modified_ucb_index_complete(AgentEstimates(1), 0, 5, 1.1, 1, 3) == std::numeric_limits<double>::infinity());
}
