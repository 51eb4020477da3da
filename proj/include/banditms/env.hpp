#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "banditms/rng.hpp"

namespace banditms {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EnvKind { GaussianMAB, BernoulliMAB, LinearBandit, ContextualLinearBandit };
enum class ActionSetKind { UnitSphere, Hypercube, SampledContext };

struct EnvironmentSpec {
  EnvKind kind = EnvKind::GaussianMAB;
  std::vector<double> means;           // MAB only
  double reward_std = 1.0;             // Gaussian MAB / linear noise
  double reward_scale = 1.0;           // Bernoulli MAB: reward is scale * draw
  Eigen::VectorXd theta_star;          // linear only
  ActionSetKind action_set = ActionSetKind::UnitSphere;
  double hypercube_scale = 1.0;        // componentwise magnitude of cube vertices
  int context_size = 0;                // ContextualLinearBandit only

  void validate() const;
};

// The action handed to the environment: an arm index for MAB kinds,
// a full ambient-dimension vector for linear kinds.
struct ChosenAction {
  int arm = -1;
  Eigen::VectorXd vec;
};

struct RoundOutcome {
  double reward = 0.0;
  double inst_regret = 0.0;
  double policy_value = 0.0;  // true expected reward of the played action
};

// Describes the action set a policy may choose from in the current round.
struct ActionSetView {
  enum class Kind { Arms, UnitSphere, Hypercube, Sampled } kind = Kind::Arms;
  int arm_count = 0;
  int dim = 0;
  double cube_scale = 1.0;
  const std::vector<Eigen::VectorXd>* sampled = nullptr;
};

class Environment {
 public:
  Environment(EnvironmentSpec spec, std::uint64_t seed);

  const EnvironmentSpec& spec() const { return spec_; }
  int num_arms() const { return static_cast<int>(spec_.means.size()); }
  int dim() const { return static_cast<int>(spec_.theta_star.size()); }

  // Round protocol: for ContextualLinearBandit call sample_context() first,
  // then action_set(), then step(). Other kinds have a fixed action set.
  const std::vector<Eigen::VectorXd>& sample_context();
  ActionSetView action_set() const;
  RoundOutcome step(const ChosenAction& action);

  // Best expected reward over the current round's action set.
  double best_value() const;

 private:
  double action_mean(const ChosenAction& action) const;
  void check_action(const ChosenAction& action) const;

  EnvironmentSpec spec_;
  Rng rng_;
  double fixed_best_value_ = 0.0;
  std::vector<Eigen::VectorXd> context_;
  bool context_fresh_ = false;
};

// Uniform draw from the unit sphere in the given dimension.
Eigen::VectorXd sample_unit_sphere(int dim, Rng& rng);

// Closed-form argmax of <a, theta> over the unit sphere / scaled hypercube.
// theta = 0 breaks ties to the first basis vector; sign(0) -> +1.
Eigen::VectorXd sphere_argmax(const Eigen::VectorXd& theta);
Eigen::VectorXd hypercube_argmax(const Eigen::VectorXd& theta, double scale);

}  // namespace banditms
