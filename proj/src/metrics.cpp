#include "banditms/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "banditms/env.hpp"

namespace banditms {

std::vector<double> regret_coefficient(const std::vector<double>& regrets,
                                       double d_min) {
  if (d_min <= 0) throw ContractViolation("regret_coefficient: d_min must be > 0");
  std::vector<double> out(regrets.size());
  double cum = 0.0;
  for (std::size_t k = 0; k < regrets.size(); ++k) {
    cum += regrets[k];
    out[k] = std::max(cum / std::sqrt(static_cast<double>(k + 1)), d_min);
  }
  return out;
}

std::vector<double> monotonic_coefficient(const std::vector<double>& d_seq) {
  std::vector<double> out(d_seq.size());
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d_seq.size(); ++k) {
    running = std::max(running, d_seq[k]);
    out[k] = running;
  }
  return out;
}

ComparatorQuantities comparator_quantities(const RegretTrace& trace, double d_min) {
  const int m = static_cast<int>(trace.learner_regrets.size());
  std::vector<std::vector<double>> coeffs(m);
  for (int i = 0; i < m; ++i)
    coeffs[i] = regret_coefficient(trace.learner_regrets[static_cast<std::size_t>(i)], d_min);

  ComparatorQuantities q;
  q.d_bar_star = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    // Unplayed learners contribute d_min (empty-max convention).
    double d_bar = coeffs[i].empty()
                       ? d_min
                       : *std::max_element(coeffs[i].begin(), coeffs[i].end());
    q.d_bar_star = std::min(q.d_bar_star, d_bar);
  }

  if (trace.last_nondouble_round.size() == static_cast<std::size_t>(m)) {
    // Count per learner at each recorded instant T_j.
    std::vector<std::vector<std::int64_t>> count_at(m, std::vector<std::int64_t>(m, 0));
    std::vector<std::int64_t> counts(m, 0);
    for (std::int64_t t = 1; t <= trace.horizon(); ++t) {
      counts[static_cast<std::size_t>(trace.chosen_learner[static_cast<std::size_t>(t - 1)])] += 1;
      for (int j = 0; j < m; ++j)
        if (trace.last_nondouble_round[static_cast<std::size_t>(j)] == t)
          for (int i = 0; i < m; ++i) count_at[i][j] = counts[i];
    }
    double d_star = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double worst = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        std::int64_t k = trace.last_nondouble_round[static_cast<std::size_t>(j)] < 0
                             ? 0
                             : count_at[i][j];
        double d = k == 0 ? d_min : coeffs[i][static_cast<std::size_t>(k - 1)];
        worst = std::max(worst, d);
      }
      d_star = std::min(d_star, worst);
    }
    q.d_star = d_star;
  }
  return q;
}

std::vector<SummaryRow> summarize(const std::vector<RegretTrace>& traces,
                                  const std::vector<std::int64_t>& checkpoints) {
  if (traces.size() < 2)
    throw ContractViolation("summarize: need at least 2 traces for a standard error");
  const double reps = static_cast<double>(traces.size());

  std::vector<SummaryRow> rows;
  rows.reserve(checkpoints.size());
  for (std::int64_t t : checkpoints) {
    if (t < 1 || t > traces.front().horizon())
      throw ContractViolation("summarize: checkpoint outside the horizon");
    SummaryRow row;
    row.round = t;
    double sum = 0.0, sum_scale = 0.0;
    for (const auto& trace : traces) {
      double r = trace.cumulative_regret[static_cast<std::size_t>(t - 1)];
      sum += r;
      sum_scale += r / std::sqrt(static_cast<double>(t));
    }
    row.mean_regret = sum / reps;
    row.mean_regret_scale = sum_scale / reps;
    double sq = 0.0;
    for (const auto& trace : traces) {
      double diff = trace.cumulative_regret[static_cast<std::size_t>(t - 1)] - row.mean_regret;
      sq += diff * diff;
    }
    double sample_std = std::sqrt(sq / (reps - 1.0));
    row.two_se = 2.0 * sample_std / std::sqrt(reps);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace banditms
