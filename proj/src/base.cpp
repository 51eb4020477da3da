#include "banditms/base.hpp"

#include <cmath>
#include <string>

namespace banditms {

int ucb_index_select(const std::vector<std::int64_t>& counts,
                     const std::vector<double>& sums, double c, double delta) {
  const int arms = static_cast<int>(counts.size());
  for (int a = 0; a < arms; ++a)
    if (counts[a] == 0) return a;

  int best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < arms; ++a) {
    double n = static_cast<double>(counts[a]);
    double index = sums[a] / n + c * std::sqrt(std::log(n / delta) / n);
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

UcbLearner::UcbLearner(int arms, double c, double delta)
    : c_(c), delta_(delta), counts_(arms, 0), sums_(arms, 0.0) {
  if (arms < 1) throw ConfigError("ucb: arm count must be >= 1");
  if (c < 0) throw ConfigError("ucb: confidence scaling must be >= 0");
  if (delta <= 0 || delta >= 1) throw ConfigError("ucb: delta must lie in (0,1)");
}

ChosenAction UcbLearner::select(const ActionSetView& actions) {
  if (actions.kind != ActionSetView::Kind::Arms)
    throw ContractViolation("ucb learner requires a finite-arm action set");
  ChosenAction act;
  act.arm = ucb_index_select(counts_, sums_, c_, delta_);
  return act;
}

void UcbLearner::update(const ChosenAction& action, double reward) {
  auto a = static_cast<std::size_t>(action.arm);
  counts_[a] += 1;
  sums_[a] += reward;
  clock_ += 1;
}

LinTsLearner::LinTsLearner(int dim, double c, double lambda, std::uint64_t noise_seed)
    : dim_(dim),
      c_(c),
      lambda_(lambda),
      gram_(Eigen::MatrixXd::Identity(dim, dim) * lambda),
      moment_(Eigen::VectorXd::Zero(dim)),
      noise_rng_(noise_seed) {
  if (dim < 1) throw ConfigError("lints: operating dimension must be >= 1");
  if (lambda <= 0) throw ConfigError("lints: ridge parameter must be > 0");
  if (c < 0) throw ConfigError("lints: confidence scaling must be >= 0");
}

LinTsLearner::Posterior LinTsLearner::posterior() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_);
  if (eig.info() != Eigen::Success)
    throw NumericError("lints: eigendecomposition of the Gram matrix failed");
  const Eigen::VectorXd& evals = eig.eigenvalues();
  if (evals.minCoeff() <= 0.0)
    throw NumericError("lints: Gram matrix not positive definite, eigenvalue " +
                       std::to_string(evals.minCoeff()));

  Posterior post;
  post.inv_root = eig.eigenvectors() *
                  evals.cwiseSqrt().cwiseInverse().asDiagonal() *
                  eig.eigenvectors().transpose();
  post.theta_hat = eig.eigenvectors() *
                   evals.cwiseInverse().asDiagonal() *
                   (eig.eigenvectors().transpose() * moment_);

  double residual = (gram_ * post.theta_hat - moment_).norm();
  if (residual > 1e-8 * (1.0 + moment_.norm()))
    throw NumericError("lints: normal-equation residual too large: " +
                       std::to_string(residual));
  return post;
}

ChosenAction LinTsLearner::act(const ActionSetView& actions,
                               const Eigen::VectorXd& noise) const {
  if (noise.size() != dim_)
    throw ContractViolation("lints: noise dimension mismatch");
  Posterior post = posterior();
  Eigen::VectorXd theta = post.theta_hat +
                          c_ * std::sqrt(static_cast<double>(dim_)) *
                              (post.inv_root * noise);

  ChosenAction act;
  switch (actions.kind) {
    case ActionSetView::Kind::UnitSphere: {
      // Optimize over the projected set, lift with zeros beyond dim_.
      act.vec = Eigen::VectorXd::Zero(actions.dim);
      act.vec.head(dim_) = sphere_argmax(theta);
      break;
    }
    case ActionSetView::Kind::Hypercube: {
      act.vec = Eigen::VectorXd::Zero(actions.dim);
      act.vec.head(dim_) = hypercube_argmax(theta, actions.cube_scale);
      break;
    }
    case ActionSetView::Kind::Sampled: {
      if (actions.sampled == nullptr || actions.sampled->empty())
        throw ContractViolation("lints: empty sampled action set");
      int best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(actions.sampled->size()); ++i) {
        double score = (*actions.sampled)[i].head(dim_).dot(theta);
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      act.vec = (*actions.sampled)[static_cast<std::size_t>(best)];
      break;
    }
    case ActionSetView::Kind::Arms:
      throw ContractViolation("lints learner requires a linear action set");
  }
  return act;
}

ChosenAction LinTsLearner::select(const ActionSetView& actions) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd noise(dim_);
  for (int i = 0; i < dim_; ++i) noise[i] = gauss(noise_rng_);
  return act(actions, noise);
}

void LinTsLearner::update(const ChosenAction& action, double reward) {
  Eigen::VectorXd projected = action.vec.head(dim_);
  gram_.noalias() += projected * projected.transpose();
  moment_.noalias() += reward * projected;
  clock_ += 1;
}

}  // namespace banditms
