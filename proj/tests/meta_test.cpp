#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "banditms/meta.hpp"

using namespace banditms;

TEST_CASE("concentration width frozen values and edge cases") {
  CHECK(conc_width(100, 2, 0.1, 1.0) == doctest::Approx(0.21267).epsilon(1e-4));
  CHECK(conc_width(10000, 2, 0.1, 1.0) == doctest::Approx(0.02284).epsilon(1e-3));
  CHECK(conc_width(50, 4, 0.05, 0.0) == 0.0);
  CHECK(conc_width(1, 2, 0.1, 1.0) > 0.0);
  CHECK_THROWS_AS(conc_width(0, 2, 0.1, 1.0), ContractViolation);
  // Decreasing in n for n >= 3.
  for (std::int64_t n = 3; n < 1000; n *= 2)
    CHECK(conc_width(n + 1, 3, 0.05, 1.0) < conc_width(n, 3, 0.05, 1.0));
}

TEST_CASE("learner selection is the potential argmin with lowest-index ties") {
  BalancingState state(BalancingVariant::D3RB, 3, 1.0, 0.05, 1.0);
  CHECK(state.select_learner() == 0);  // all potentials equal d_min

  state.potentials = {3.0, 2.5, 2.5};
  CHECK(state.select_learner() == 1);

  state.potentials = {3.0, 2.5, 2.4};
  CHECK(state.select_learner() == 2);

  // Scale invariance of the argmin.
  for (double& phi : state.potentials) phi *= 17.0;
  CHECK(state.select_learner() == 2);
}

namespace {

BalancingState two_learner_state(BalancingVariant variant, std::int64_t ni,
                                 double ui, std::int64_t nj, double uj) {
  BalancingState state(variant, 2, 1.0, 0.1, 1.0);
  state.counts = {ni, nj};
  state.reward_sums = {ui, uj};
  state.round = ni + nj;
  return state;
}

}  // namespace

TEST_CASE("misspecification test frozen examples") {
  // LHS 0.33284 < RHS 0.87716 -> triggered.
  auto triggered = two_learner_state(BalancingVariant::D3RB, 10000, 3000, 10000, 9000);
  CHECK(triggered.misspec_test(0));

  // LHS 0.81267 > RHS 0.68733 -> not triggered.
  auto calm = two_learner_state(BalancingVariant::D3RB, 100, 50, 100, 90);
  CHECK_FALSE(calm.misspec_test(0));

  // A learner never beats its own lower confidence bound.
  BalancingState solo(BalancingVariant::D3RB, 1, 1.0, 0.1, 1.0);
  solo.counts = {500};
  solo.reward_sums = {100.0};
  CHECK_FALSE(solo.misspec_test(0));

  CHECK_THROWS_AS(two_learner_state(BalancingVariant::D3RB, 0, 0, 5, 1).misspec_test(0),
                  ContractViolation);
}

TEST_CASE("direct coefficient estimate frozen example and floor") {
  auto state = two_learner_state(BalancingVariant::ED2RB, 10000, 3000, 10000, 9000);
  CHECK(state.ed2rb_estimate(0) == doctest::Approx(55.432).epsilon(1e-3));

  // The best learner's own estimate collapses to the floor.
  CHECK(state.ed2rb_estimate(1) == 1.0);

  BalancingState solo(BalancingVariant::ED2RB, 1, 1.0, 0.1, 1.0);
  solo.counts = {100};
  solo.reward_sums = {70.0};
  CHECK(solo.ed2rb_estimate(0) == 1.0);
}

TEST_CASE("doubling update: triggered test doubles and sets the potential") {
  auto state = two_learner_state(BalancingVariant::D3RB, 9999, 2999.7, 10000, 9000);
  state.potentials = {99.99, 100.0};
  state.d3rb_update(0, 0.3);
  CHECK(state.counts[0] == 10000);
  CHECK(state.coefficients[0] == 2.0);
  CHECK(state.potentials[0] == doctest::Approx(200.0).epsilon(1e-9));

  // Untouched learner keeps all statistics.
  CHECK(state.counts[1] == 10000);
  CHECK(state.reward_sums[1] == 9000.0);
  CHECK(state.coefficients[1] == 1.0);
  CHECK(state.potentials[1] == 100.0);
}

TEST_CASE("first play with a vacuous test lands at the floor potential") {
  BalancingState state(BalancingVariant::D3RB, 2, 1.0, 0.05, 1.0);
  state.d3rb_update(0, 0.4);
  CHECK(state.coefficients[0] == 1.0);
  CHECK(state.potentials[0] == doctest::Approx(1.0));
}

TEST_CASE("clipped potential update") {
  // Large estimate: 55.432 * 100 = 5543.2 clips to 2 * 100 = 200.
  auto state = two_learner_state(BalancingVariant::ED2RB, 9999, 2999.7, 10000, 9000);
  state.potentials = {100.0, 5000.0};
  state.ed2rb_update(0, 0.3);
  CHECK(state.coefficients[0] == doctest::Approx(55.432).epsilon(1e-3));
  CHECK(state.potentials[0] == doctest::Approx(200.0).epsilon(1e-9));

  // Small estimate clips to the old potential (monotonicity floor).
  auto flat = two_learner_state(BalancingVariant::ED2RB, 9999, 8999.1, 10000, 9000);
  flat.potentials = {500.0, 500.0};
  flat.ed2rb_update(0, 0.9);
  CHECK(flat.potentials[0] == 500.0);

  // Interior value passes through unchanged.
  auto mid = two_learner_state(BalancingVariant::ED2RB, 9999, 2999.7, 10000, 9000);
  mid.potentials = {4000.0, 9000.0};
  mid.ed2rb_update(0, 0.3);
  CHECK(mid.potentials[0] == doctest::Approx(5543.2).epsilon(1e-3));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(BalancingState(BalancingVariant::D3RB, 0, 1.0, 0.05, 1.0), ConfigError);
  CHECK_THROWS_AS(BalancingState(BalancingVariant::D3RB, 2, 0.0, 0.05, 1.0), ConfigError);
  CHECK_THROWS_AS(BalancingState(BalancingVariant::D3RB, 2, 1.0, 1.5, 1.0), ConfigError);
  CHECK_THROWS_AS(BalancingState(BalancingVariant::D3RB, 2, 1.0, 0.05, 0.0), ConfigError);
}

TEST_CASE("balance diagnostics stay clean on random bounded-reward runs") {
  for (auto variant : {BalancingVariant::D3RB, BalancingVariant::ED2RB}) {
    BalancingMeta meta(variant, 4, 1.0, 0.05, 1.0);
    Rng rng(2024);
    std::bernoulli_distribution arm_quality[4] = {
        std::bernoulli_distribution(0.1), std::bernoulli_distribution(0.3),
        std::bernoulli_distribution(0.6), std::bernoulli_distribution(0.9)};
    for (int t = 0; t < 5000; ++t) {
      int i = meta.choose(rng);
      double r = arm_quality[i](rng) ? 1.0 : 0.0;
      meta.observe(i, r);
    }
    const auto& diag = meta.diagnostics();
    CHECK(diag.monotonicity_violations == 0);
    CHECK(diag.balance_violations == 0);
    CHECK(diag.doubling_bound_violations == 0);

    // Every learner keeps a coefficient at or above the floor and all
    // potentials within the variant's balance factor.
    const auto& state = meta.state();
    double factor = variant == BalancingVariant::D3RB ? 3.0 : 2.0;
    double lo = *std::min_element(state.potentials.begin(), state.potentials.end());
    double hi = *std::max_element(state.potentials.begin(), state.potentials.end());
    CHECK(hi <= factor * lo * (1.0 + 1e-9));
    for (double d : state.coefficients) CHECK(d >= 1.0);
  }
}

TEST_CASE("single-learner balancing plays learner 0 forever") {
  BalancingMeta meta(BalancingVariant::D3RB, 1, 1.0, 0.05, 1.0);
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    CHECK(meta.choose(rng) == 0);
    meta.observe(0, 0.5);
  }
  CHECK(meta.state().coefficients[0] == 1.0);  // solo test never fires
}
