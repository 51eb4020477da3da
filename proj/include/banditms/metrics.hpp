#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace banditms {

// Everything recorded about one seeded repetition.
struct RegretTrace {
  std::vector<double> cumulative_regret;      // length T, non-decreasing
  std::vector<int> chosen_learner;            // length T
  std::vector<std::vector<double>> learner_regrets;  // internal-clock order
  std::uint64_t seed = 0;

  // Balancing meta-learners only.
  std::int64_t monotonicity_violations = 0;
  std::int64_t balance_violations = 0;
  std::int64_t doubling_bound_violations = 0;
  std::vector<std::int64_t> last_nondouble_round;  // T_j per learner, -1 if absent

  std::int64_t horizon() const {
    return static_cast<std::int64_t>(cumulative_regret.size());
  }
};

// d^i_(k) = max{ sum of the first k regrets / sqrt(k), d_min } for each k.
std::vector<double> regret_coefficient(const std::vector<double>& regrets,
                                       double d_min);

// Running maximum, the monotonic coefficient d-bar.
std::vector<double> monotonic_coefficient(const std::vector<double>& d_seq);

struct ComparatorQuantities {
  double d_bar_star = 0.0;                // min_i max_k d^i_(k)
  std::optional<double> d_star;           // min_i max_j d^i at round T_j
};

// Comparator quantities for one repetition. d_star needs the
// recorded T_j instants and is absent for meta-learners without them.
ComparatorQuantities comparator_quantities(const RegretTrace& trace, double d_min);

struct SummaryRow {
  std::int64_t round = 0;
  double mean_regret = 0.0;
  double two_se = 0.0;
  double mean_regret_scale = 0.0;  // mean of Reg(t)/sqrt(t)
};

// Mean and 2 * standard error of cumulative regret at each checkpoint.
std::vector<SummaryRow> summarize(const std::vector<RegretTrace>& traces,
                                  const std::vector<std::int64_t>& checkpoints);

}  // namespace banditms
