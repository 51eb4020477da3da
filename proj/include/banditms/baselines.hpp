#pragma once

#include <cstdint>
#include <vector>

#include "banditms/meta.hpp"

namespace banditms {

// One mirror-descent step with log-barrier regularizer. Finds the normalizer
// lambda in [min loss, max loss] such that the updated distribution
// p'_j = 1 / (1/p_j + eta_j (loss_j - lambda)) sums to one.
struct OmdResult {
  std::vector<double> distribution;
  double lambda = 0.0;
};
OmdResult log_barrier_omd(const std::vector<double>& p,
                          const std::vector<double>& loss,
                          const std::vector<double>& eta);

// Corral with the stochastic wrapper: the chosen base learner is updated
// with the raw observed reward; the meta distribution is updated from the
// importance-weighted reward vector fed directly into Log-Barrier-OMD.
class CorralMeta final : public MetaLearner {
 public:
  CorralMeta(int learner_count, std::int64_t horizon, double eta);

  int choose(Rng& rng) override;
  void observe(int learner, double reward) override;

  const std::vector<double>& distribution() const { return p_; }
  const std::vector<double>& lower_bounds() const { return p_lower_; }
  const std::vector<double>& learning_rates() const { return eta_; }

 private:
  int M_;
  double gamma_;  // 1/T
  double beta_;   // e^{1/ln T}
  std::vector<double> p_;
  std::vector<double> p_lower_;
  std::vector<double> eta_;
  std::vector<double> rho_;
  int last_choice_ = -1;
};

class Exp3Meta final : public MetaLearner {
 public:
  // Defaults: eta = sqrt(ln M / (M T)), gamma = 0.1 / sqrt(T).
  Exp3Meta(int learner_count, std::int64_t horizon);
  Exp3Meta(int learner_count, double eta, double gamma);

  int choose(Rng& rng) override;
  void observe(int learner, double reward) override;

  std::vector<double> distribution() const;
  const std::vector<double>& cumulative_estimates() const { return cum_rewards_; }

 private:
  int M_;
  double eta_;
  double gamma_;
  std::vector<double> cum_rewards_;
  int last_choice_ = -1;
  double last_prob_ = 1.0;
};

// Pure exploitation over learners-as-arms: unplayed first, then highest
// average reward, ties to the lowest index.
int greedy_meta_select(const std::vector<std::int64_t>& counts,
                       const std::vector<double>& sums);

class GreedyMeta final : public MetaLearner {
 public:
  explicit GreedyMeta(int learner_count)
      : counts_(learner_count, 0), sums_(learner_count, 0.0) {}

  int choose(Rng&) override { return greedy_meta_select(counts_, sums_); }
  void observe(int learner, double reward) override {
    counts_[static_cast<std::size_t>(learner)] += 1;
    sums_[static_cast<std::size_t>(learner)] += reward;
  }

 private:
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
};

class UcbMeta final : public MetaLearner {
 public:
  UcbMeta(int learner_count, double c = 1.0, double delta = 0.1)
      : c_(c), delta_(delta), counts_(learner_count, 0), sums_(learner_count, 0.0) {}

  int choose(Rng&) override;
  void observe(int learner, double reward) override {
    counts_[static_cast<std::size_t>(learner)] += 1;
    sums_[static_cast<std::size_t>(learner)] += reward;
  }

 private:
  double c_;
  double delta_;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
};

// Regret balancing with an exponential grid of candidate regret coefficients:
// each base learner is expanded into one copy per grid value; a copy whose
// candidate bound is statistically violated is deactivated.
class RbGridMeta final : public MetaLearner {
 public:
  // `candidates` holds the candidate coefficient of each expanded copy,
  // aligned with the expanded base-learner list the harness builds.
  RbGridMeta(std::vector<double> candidates, double delta, double conc_c);

  int choose(Rng&) override;
  void observe(int learner, double reward) override;

  const std::vector<char>& active() const { return active_; }
  static std::vector<double> default_grid() { return {1.0, 2.0, 4.0, 8.0, 16.0}; }

 private:
  std::vector<double> candidates_;
  std::vector<char> active_;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  double delta_;
  double conc_c_;
};

class SingleBaseMeta final : public MetaLearner {
 public:
  explicit SingleBaseMeta(int index) : index_(index) {}
  int choose(Rng&) override { return index_; }
  void observe(int, double) override {}

 private:
  int index_;
};

}  // namespace banditms
