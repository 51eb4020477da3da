#include "banditms/env.hpp"

#include <algorithm>
#include <cmath>

namespace banditms {

namespace {
constexpr double kRegretTol = 1e-9;
}

void EnvironmentSpec::validate() const {
  switch (kind) {
    case EnvKind::GaussianMAB:
    case EnvKind::BernoulliMAB:
      if (means.empty()) throw ConfigError("environment.means: must be non-empty");
      if (reward_std < 0) throw ConfigError("environment.reward_std: must be >= 0");
      if (kind == EnvKind::BernoulliMAB) {
        for (double m : means)
          if (m < 0.0 || m > 1.0)
            throw ConfigError("environment.means: Bernoulli means must lie in [0,1]");
        if (reward_scale <= 0)
          throw ConfigError("environment.reward_scale: must be > 0");
      }
      break;
    case EnvKind::LinearBandit:
    case EnvKind::ContextualLinearBandit:
      if (theta_star.size() < 1)
        throw ConfigError("environment.theta_star: dimension must be >= 1");
      if (!theta_star.allFinite())
        throw ConfigError("environment.theta_star: must be finite");
      if (reward_std < 0) throw ConfigError("environment.reward_std: must be >= 0");
      if (kind == EnvKind::ContextualLinearBandit && context_size < 1)
        throw ConfigError("environment.context_size: must be >= 1");
      if (kind == EnvKind::LinearBandit &&
          action_set == ActionSetKind::SampledContext)
        throw ConfigError("environment.action_set: SampledContext requires a contextual environment");
      if (action_set == ActionSetKind::Hypercube && hypercube_scale <= 0)
        throw ConfigError("environment.hypercube_scale: must be > 0");
      break;
  }
}

Eigen::VectorXd sample_unit_sphere(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

Eigen::VectorXd sphere_argmax(const Eigen::VectorXd& theta) {
  double norm = theta.norm();
  if (norm == 0.0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(theta.size());
    e[0] = 1.0;
    return e;
  }
  return theta / norm;
}

Eigen::VectorXd hypercube_argmax(const Eigen::VectorXd& theta, double scale) {
  Eigen::VectorXd a(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    a[j] = (theta[j] >= 0.0 ? scale : -scale);
  return a;
}

Environment::Environment(EnvironmentSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {
  spec_.validate();
  switch (spec_.kind) {
    case EnvKind::GaussianMAB:
      fixed_best_value_ = *std::max_element(spec_.means.begin(), spec_.means.end());
      break;
    case EnvKind::BernoulliMAB:
      fixed_best_value_ =
          spec_.reward_scale *
          *std::max_element(spec_.means.begin(), spec_.means.end());
      break;
    case EnvKind::LinearBandit:
      if (spec_.action_set == ActionSetKind::UnitSphere) {
        fixed_best_value_ = spec_.theta_star.norm();
      } else {
        fixed_best_value_ =
            spec_.hypercube_scale * spec_.theta_star.cwiseAbs().sum();
      }
      break;
    case EnvKind::ContextualLinearBandit:
      break;  // conditional best, per sampled context
  }
}

const std::vector<Eigen::VectorXd>& Environment::sample_context() {
  if (spec_.kind != EnvKind::ContextualLinearBandit)
    throw ContractViolation("sample_context called on non-contextual environment");
  context_.clear();
  context_.reserve(spec_.context_size);
  for (int i = 0; i < spec_.context_size; ++i)
    context_.push_back(sample_unit_sphere(dim(), rng_));
  context_fresh_ = true;
  return context_;
}

ActionSetView Environment::action_set() const {
  ActionSetView view;
  switch (spec_.kind) {
    case EnvKind::GaussianMAB:
    case EnvKind::BernoulliMAB:
      view.kind = ActionSetView::Kind::Arms;
      view.arm_count = num_arms();
      break;
    case EnvKind::LinearBandit:
      view.kind = spec_.action_set == ActionSetKind::UnitSphere
                      ? ActionSetView::Kind::UnitSphere
                      : ActionSetView::Kind::Hypercube;
      view.dim = dim();
      view.cube_scale = spec_.hypercube_scale;
      break;
    case EnvKind::ContextualLinearBandit:
      if (!context_fresh_)
        throw ContractViolation("action_set requested before sample_context");
      view.kind = ActionSetView::Kind::Sampled;
      view.dim = dim();
      view.sampled = &context_;
      break;
  }
  return view;
}

double Environment::best_value() const {
  if (spec_.kind == EnvKind::ContextualLinearBandit) {
    if (!context_fresh_)
      throw ContractViolation("best_value requested before sample_context");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : context_) best = std::max(best, a.dot(spec_.theta_star));
    return best;
  }
  return fixed_best_value_;
}

double Environment::action_mean(const ChosenAction& action) const {
  switch (spec_.kind) {
    case EnvKind::GaussianMAB:
      return spec_.means[static_cast<std::size_t>(action.arm)];
    case EnvKind::BernoulliMAB:
      return spec_.reward_scale * spec_.means[static_cast<std::size_t>(action.arm)];
    default:
      return action.vec.dot(spec_.theta_star);
  }
}

void Environment::check_action(const ChosenAction& action) const {
  switch (spec_.kind) {
    case EnvKind::GaussianMAB:
    case EnvKind::BernoulliMAB:
      if (action.arm < 0 || action.arm >= num_arms())
        throw ContractViolation("arm index out of range");
      break;
    case EnvKind::LinearBandit: {
      if (action.vec.size() != dim())
        throw ContractViolation("action dimension mismatch");
      if (spec_.action_set == ActionSetKind::UnitSphere) {
        if (action.vec.norm() > 1.0 + kRegretTol)
          throw ContractViolation("action outside the unit sphere");
      } else {
        // Components of a nested learner's lifted action are zero beyond its
        // operating dimension; accept {-s, 0, +s} per coordinate.
        double s = spec_.hypercube_scale;
        for (Eigen::Index j = 0; j < action.vec.size(); ++j) {
          double v = std::abs(action.vec[j]);
          if (std::abs(v - s) > kRegretTol && v > kRegretTol)
            throw ContractViolation("action outside the hypercube");
        }
      }
      break;
    }
    case EnvKind::ContextualLinearBandit: {
      if (!context_fresh_)
        throw ContractViolation("step called before sample_context");
      bool found = false;
      for (const auto& a : context_) {
        if ((a - action.vec).lpNorm<Eigen::Infinity>() <= kRegretTol) {
          found = true;
          break;
        }
      }
      if (!found) throw ContractViolation("action is not in the sampled context");
      break;
    }
  }
}

RoundOutcome Environment::step(const ChosenAction& action) {
  check_action(action);
  double mean = action_mean(action);
  double best = best_value();

  RoundOutcome out;
  switch (spec_.kind) {
    case EnvKind::GaussianMAB:
    case EnvKind::LinearBandit:
    case EnvKind::ContextualLinearBandit: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      out.reward = mean + spec_.reward_std * gauss(rng_);
      break;
    }
    case EnvKind::BernoulliMAB: {
      std::bernoulli_distribution draw(
          spec_.means[static_cast<std::size_t>(action.arm)]);
      out.reward = spec_.reward_scale * (draw(rng_) ? 1.0 : 0.0);
      break;
    }
  }

  out.policy_value = mean;
  out.inst_regret = best - mean;
  if (out.inst_regret < 0.0) {
    if (out.inst_regret < -kRegretTol)
      throw NumericError("negative instantaneous regret: action exceeds the oracle optimum");
    out.inst_regret = 0.0;
  }
  if (spec_.kind == EnvKind::ContextualLinearBandit) context_fresh_ = false;
  return out;
}

}  // namespace banditms
