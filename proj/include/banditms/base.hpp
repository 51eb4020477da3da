#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "banditms/env.hpp"
#include "banditms/rng.hpp"

namespace banditms {

class BaseLearner {
 public:
  virtual ~BaseLearner() = default;
  virtual ChosenAction select(const ActionSetView& actions) = 0;
  virtual void update(const ChosenAction& action, double reward) = 0;
  virtual std::int64_t clock() const = 0;
  virtual std::unique_ptr<BaseLearner> clone() const = 0;
};

// Index rule shared by the UCB base learner and the UCB meta-learner:
// any unplayed arm first (lowest index), otherwise
//   argmax mean(a) + c * sqrt(ln(n(a)/delta) / n(a)),
// ties to the lowest index.
int ucb_index_select(const std::vector<std::int64_t>& counts,
                     const std::vector<double>& sums, double c, double delta);

class UcbLearner final : public BaseLearner {
 public:
  UcbLearner(int arms, double c, double delta = 0.1);

  ChosenAction select(const ActionSetView& actions) override;
  void update(const ChosenAction& action, double reward) override;
  std::int64_t clock() const override { return clock_; }
  std::unique_ptr<BaseLearner> clone() const override {
    return std::make_unique<UcbLearner>(*this);
  }

  const std::vector<std::int64_t>& counts() const { return counts_; }
  const std::vector<double>& sums() const { return sums_; }

 private:
  double c_;
  double delta_;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  std::int64_t clock_ = 0;
};

// Linear Thompson sampling with ridge posterior, operating on the first
// `dim` coordinates of the ambient action space (nested projection).
class LinTsLearner final : public BaseLearner {
 public:
  LinTsLearner(int dim, double c, double lambda, std::uint64_t noise_seed);

  ChosenAction select(const ActionSetView& actions) override;
  void update(const ChosenAction& action, double reward) override;
  std::int64_t clock() const override { return clock_; }
  std::unique_ptr<BaseLearner> clone() const override {
    return std::make_unique<LinTsLearner>(*this);
  }

  // theta_hat = A^-1 b and the symmetric inverse square root of A.
  struct Posterior {
    Eigen::VectorXd theta_hat;
    Eigen::MatrixXd inv_root;
  };
  Posterior posterior() const;

  // Pure function of (state, actions, noise); the learner's own stream
  // supplies the noise in select().
  ChosenAction act(const ActionSetView& actions, const Eigen::VectorXd& noise) const;

  int dim() const { return dim_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& moment() const { return moment_; }

 private:
  int dim_;
  double c_;
  double lambda_;
  Eigen::MatrixXd gram_;    // X^T X + lambda I, over the first dim_ coordinates
  Eigen::VectorXd moment_;  // X^T y
  std::int64_t clock_ = 0;
  Rng noise_rng_;
};

}  // namespace banditms
