#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "banditms/env.hpp"
#include "banditms/metrics.hpp"

using namespace banditms;

TEST_CASE("regret coefficient frozen values") {
  auto d = regret_coefficient({0.9, 0.9, 0.9}, 1.0);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(1.8 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(d[2] == doctest::Approx(2.7 / std::sqrt(3.0)).epsilon(1e-9));

  auto zeros = regret_coefficient({0.0, 0.0, 0.0, 0.0}, 1.0);
  for (double v : zeros) CHECK(v == 1.0);

  CHECK(regret_coefficient({2.0}, 1.0)[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(regret_coefficient({1.0}, 0.0), ContractViolation);
}

TEST_CASE("monotonic coefficient is the running maximum") {
  auto same = monotonic_coefficient({1.0, 1.27279, 1.55885});
  CHECK(same[0] == 1.0);
  CHECK(same[2] == 1.55885);

  auto capped = monotonic_coefficient({3.0, 1.0, 2.0});
  CHECK(capped == std::vector<double>{3.0, 3.0, 3.0});

  CHECK(monotonic_coefficient({}).empty());
}

TEST_CASE("coefficient definition holds on random sequences") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> unif(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> regrets(1 + rng() % 50);
    for (double& r : regrets) r = unif(rng);
    double d_min = 0.5 + unif(rng);
    auto d = regret_coefficient(regrets, d_min);
    auto d_bar = monotonic_coefficient(d);
    double cum = 0.0;
    for (std::size_t k = 0; k < regrets.size(); ++k) {
      cum += regrets[k];
      double root = std::sqrt(static_cast<double>(k + 1));
      CHECK(cum <= d[k] * root * (1.0 + 1e-12));
      if (d[k] > d_min)
        CHECK(cum == doctest::Approx(d[k] * root).epsilon(1e-12));
      CHECK(d_bar[k] >= d[k]);
      CHECK(d[k] >= d_min);
      if (k > 0) CHECK(d_bar[k] >= d_bar[k - 1]);
    }
  }
}

namespace {

RegretTrace make_trace(std::vector<double> cumulative) {
  RegretTrace trace;
  trace.cumulative_regret = std::move(cumulative);
  trace.chosen_learner.assign(trace.cumulative_regret.size(), 0);
  trace.learner_regrets.resize(1);
  return trace;
}

}  // namespace

TEST_CASE("summarize frozen example and error cases") {
  std::vector<RegretTrace> traces = {make_trace({1.0}), make_trace({2.0}),
                                     make_trace({3.0})};
  auto rows = summarize(traces, {1});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_regret == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rows[0].two_se == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK(rows[0].mean_regret_scale == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<RegretTrace> same = {make_trace({5.0, 6.0}), make_trace({5.0, 6.0})};
  auto flat = summarize(same, {2});
  CHECK(flat[0].two_se == 0.0);
  CHECK(flat[0].mean_regret_scale == doctest::Approx(6.0 / std::sqrt(2.0)));

  CHECK_THROWS_AS(summarize(same, {3}), ContractViolation);
  CHECK_THROWS_AS(summarize({make_trace({1.0})}, {1}), ContractViolation);
}

TEST_CASE("comparator quantities") {
  // Single learner: its own monotone maximum.
  RegretTrace solo;
  solo.learner_regrets = {{0.9, 0.9, 0.9}};
  solo.chosen_learner = {0, 0, 0};
  solo.cumulative_regret = {0.9, 1.8, 2.7};
  auto q = comparator_quantities(solo, 1.0);
  CHECK(q.d_bar_star == doctest::Approx(2.7 / std::sqrt(3.0)).epsilon(1e-9));
  CHECK_FALSE(q.d_star.has_value());  // no recorded balancing instants

  // An unplayed learner contributes d_min and wins the min.
  RegretTrace pair = solo;
  pair.learner_regrets.push_back({});
  auto q2 = comparator_quantities(pair, 1.0);
  CHECK(q2.d_bar_star == 1.0);

  // With recorded instants, d_star evaluates coefficients at those counts.
  RegretTrace timed;
  timed.learner_regrets = {{2.0, 0.0}, {0.5, 0.5}};
  timed.chosen_learner = {0, 1, 0, 1};
  timed.cumulative_regret = {2.0, 2.5, 2.5, 3.0};
  timed.last_nondouble_round = {3, 4};
  auto q3 = comparator_quantities(timed, 1.0);
  REQUIRE(q3.d_star.has_value());
  // Learner 0: counts at T_0=3 -> k=2 (d = 2/sqrt(2) = 1.41421), at T_1=4 -> k=2.
  // Learner 1: at T_0=3 -> k=1 (d = 1), at T_1=4 -> k=2 (d = 1).
  CHECK(*q3.d_star == doctest::Approx(1.0).epsilon(1e-9));
  // d_bar per learner: max(2, 1.41421) = 2 and max(1, 1) = 1; min is 1.
  CHECK(q3.d_bar_star == doctest::Approx(1.0).epsilon(1e-9));
}
