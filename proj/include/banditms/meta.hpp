#pragma once

#include <cstdint>
#include <vector>

#include "banditms/env.hpp"
#include "banditms/rng.hpp"

namespace banditms {

// A meta-learner chooses which base learner acts each round and receives
// the observed reward afterwards. Randomized meta-learners (Corral, EXP3)
// draw from the supplied stream; deterministic ones ignore it.
class MetaLearner {
 public:
  virtual ~MetaLearner() = default;
  virtual int choose(Rng& rng) = 0;
  virtual void observe(int learner, double reward) = 0;
};

enum class BalancingVariant { D3RB, ED2RB };

// Concentration width c * sqrt(L(n)/n) with L(n) = ln(M * max(ln n, 1) / delta).
// The max(.,1) guard keeps the width finite and positive for n = 1, 2.
double conc_width(std::int64_t n, int learner_count, double delta, double c);

// Per-learner bookkeeping for the regret-balancing meta-learners and the
// two update rules (doubling with misspecification test, direct estimate
// with clipped potential).
struct BalancingState {
  BalancingVariant variant = BalancingVariant::ED2RB;
  double d_min = 1.0;
  double delta = 0.05;
  double conc_c = 1.0;
  std::int64_t round = 0;

  std::vector<std::int64_t> counts;
  std::vector<double> reward_sums;
  std::vector<double> coefficients;  // d_hat, floored at d_min
  std::vector<double> potentials;    // phi, initialized to d_min

  BalancingState(BalancingVariant variant, int learner_count, double d_min,
                 double delta, double conc_c);

  int learner_count() const { return static_cast<int>(counts.size()); }

  // argmin of the potentials, ties to the lowest index.
  int select_learner() const;

  // Highest optimistic-pessimistic average reward over played learners:
  // max_j u_hat^j/n^j - width(n^j). Returns false in `any` if none played.
  double best_lower_bound(bool& any) const;

  // True iff learner i's average reward plus its regret allowance plus its
  // width falls below the best lower confidence bound among all learners.
  // Uses statistics after the current round's increment.
  bool misspec_test(int i) const;

  // Direct regret-coefficient estimate for learner i, floored at d_min.
  double ed2rb_estimate(int i) const;

  // One full round for the chosen learner: increment statistics, then apply
  // the variant's coefficient and potential update.
  void d3rb_update(int chosen, double reward);
  void ed2rb_update(int chosen, double reward);
  void update(int chosen, double reward);
};

// Counters for the balance properties checked on every trajectory.
struct BalanceDiagnostics {
  std::int64_t monotonicity_violations = 0;
  std::int64_t balance_violations = 0;       // factor 3 (D3RB) / 2 (ED2RB)
  std::int64_t doubling_bound_violations = 0;  // ED2RB doubling-count bound
  std::vector<std::int64_t> doubling_counts;   // per learner
  std::vector<std::int64_t> last_nondouble_round;  // T_j, -1 if never
};

class BalancingMeta final : public MetaLearner {
 public:
  BalancingMeta(BalancingVariant variant, int learner_count, double d_min,
                double delta, double conc_c);

  int choose(Rng&) override { return state_.select_learner(); }
  void observe(int learner, double reward) override;

  const BalancingState& state() const { return state_; }
  const BalanceDiagnostics& diagnostics() const { return diag_; }

 private:
  BalancingState state_;
  BalanceDiagnostics diag_;
};

}  // namespace banditms
