#include "banditms/meta.hpp"

#include <algorithm>
#include <cmath>

namespace banditms {

namespace {
constexpr double kRelTol = 1e-9;

double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}
}  // namespace

double conc_width(std::int64_t n, int learner_count, double delta, double c) {
  if (n < 1) throw ContractViolation("conc_width: n must be >= 1");
  if (learner_count < 1) throw ContractViolation("conc_width: M must be >= 1");
  if (delta <= 0 || delta >= 1) throw ContractViolation("conc_width: delta must lie in (0,1)");
  if (c < 0) throw ContractViolation("conc_width: c must be >= 0");
  double dn = static_cast<double>(n);
  double guarded_log = std::max(std::log(dn), 1.0);
  double level = std::log(static_cast<double>(learner_count) * guarded_log / delta);
  return c * std::sqrt(level / dn);
}

BalancingState::BalancingState(BalancingVariant variant, int learner_count,
                               double d_min, double delta, double conc_c)
    : variant(variant),
      d_min(d_min),
      delta(delta),
      conc_c(conc_c),
      counts(learner_count, 0),
      reward_sums(learner_count, 0.0),
      coefficients(learner_count, d_min),
      potentials(learner_count, d_min) {
  if (learner_count < 1) throw ConfigError("balancing: learner count must be >= 1");
  if (d_min <= 0) throw ConfigError("balancing: d_min must be > 0");
  if (delta <= 0 || delta >= 1) throw ConfigError("balancing: delta must lie in (0,1)");
  if (conc_c <= 0) throw ConfigError("balancing: concentration constant must be > 0");
}

int BalancingState::select_learner() const {
  int best = 0;
  for (int i = 1; i < learner_count(); ++i)
    if (potentials[i] < potentials[best]) best = i;
  return best;
}

double BalancingState::best_lower_bound(bool& any) const {
  any = false;
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < learner_count(); ++j) {
    if (counts[j] < 1) continue;
    any = true;
    double nj = static_cast<double>(counts[j]);
    double lcb = reward_sums[j] / nj - conc_width(counts[j], learner_count(), delta, conc_c);
    best = std::max(best, lcb);
  }
  return best;
}

bool BalancingState::misspec_test(int i) const {
  if (counts[i] < 1) throw ContractViolation("misspec_test: learner not yet played");
  bool any = false;
  double rhs = best_lower_bound(any);
  if (!any) return false;
  double ni = static_cast<double>(counts[i]);
  double lhs = reward_sums[i] / ni + coefficients[i] * std::sqrt(ni) / ni +
               conc_width(counts[i], learner_count(), delta, conc_c);
  return lhs < rhs;
}

double BalancingState::ed2rb_estimate(int i) const {
  if (counts[i] < 1) throw ContractViolation("ed2rb_estimate: learner not yet played");
  bool any = false;
  double best = best_lower_bound(any);
  if (!any) return d_min;
  double ni = static_cast<double>(counts[i]);
  double gap = best - reward_sums[i] / ni -
               conc_width(counts[i], learner_count(), delta, conc_c);
  return std::max(d_min, std::sqrt(ni) * gap);
}

void BalancingState::d3rb_update(int chosen, double reward) {
  round += 1;
  counts[chosen] += 1;
  reward_sums[chosen] += reward;
  if (misspec_test(chosen)) coefficients[chosen] *= 2.0;
  potentials[chosen] =
      coefficients[chosen] * std::sqrt(static_cast<double>(counts[chosen]));
}

void BalancingState::ed2rb_update(int chosen, double reward) {
  round += 1;
  counts[chosen] += 1;
  reward_sums[chosen] += reward;
  coefficients[chosen] = ed2rb_estimate(chosen);
  double raw =
      coefficients[chosen] * std::sqrt(static_cast<double>(counts[chosen]));
  potentials[chosen] = clip(raw, potentials[chosen], 2.0 * potentials[chosen]);
}

void BalancingState::update(int chosen, double reward) {
  if (variant == BalancingVariant::D3RB)
    d3rb_update(chosen, reward);
  else
    ed2rb_update(chosen, reward);
}

BalancingMeta::BalancingMeta(BalancingVariant variant, int learner_count,
                             double d_min, double delta, double conc_c)
    : state_(variant, learner_count, d_min, delta, conc_c) {
  diag_.doubling_counts.assign(learner_count, 0);
  diag_.last_nondouble_round.assign(learner_count, -1);
}

void BalancingMeta::observe(int learner, double reward) {
  double phi_before = state_.potentials[static_cast<std::size_t>(learner)];
  state_.update(learner, reward);
  double phi_after = state_.potentials[static_cast<std::size_t>(learner)];

  if (phi_after < phi_before * (1.0 - kRelTol)) diag_.monotonicity_violations += 1;

  double factor = state_.variant == BalancingVariant::D3RB ? 3.0 : 2.0;
  double lo = *std::min_element(state_.potentials.begin(), state_.potentials.end());
  double hi = *std::max_element(state_.potentials.begin(), state_.potentials.end());
  if (hi > factor * lo * (1.0 + kRelTol)) diag_.balance_violations += 1;

  bool doubled = phi_after >= 2.0 * phi_before * (1.0 - kRelTol);
  if (doubled) {
    diag_.doubling_counts[static_cast<std::size_t>(learner)] += 1;
    if (state_.variant == BalancingVariant::ED2RB) {
      double bound = std::log2(static_cast<double>(state_.round) *
                               std::max(1.0, 1.0 / state_.d_min));
      if (static_cast<double>(diag_.doubling_counts[static_cast<std::size_t>(learner)]) >
          bound + kRelTol)
        diag_.doubling_bound_violations += 1;
    }
  } else {
    diag_.last_nondouble_round[static_cast<std::size_t>(learner)] = state_.round;
  }
}

}  // namespace banditms
