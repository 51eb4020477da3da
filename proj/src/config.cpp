#include "banditms/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace banditms {

using nlohmann::json;

namespace {

Eigen::VectorXd ramp(int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = static_cast<double>(i);
  return v;
}

Eigen::VectorXd pad_to(const Eigen::VectorXd& v, int ambient) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ambient);
  out.head(v.size()) = v;
  return out;
}

std::vector<BaseLearnerSpec> lints_confidence_set(int dim) {
  std::vector<BaseLearnerSpec> learners;
  for (double c : {0.0, 0.16, 2.5, 5.0, 25.0}) {
    BaseLearnerSpec spec;
    spec.kind = BaseLearnerSpec::Kind::LinTs;
    spec.c = c;
    spec.dim = dim;
    spec.lambda = 1.0;
    learners.push_back(spec);
  }
  return learners;
}

std::vector<BaseLearnerSpec> lints_dimension_set(const std::vector<int>& dims) {
  std::vector<BaseLearnerSpec> learners;
  for (int d : dims) {
    BaseLearnerSpec spec;
    spec.kind = BaseLearnerSpec::Kind::LinTs;
    spec.c = 2.0;
    spec.dim = d;
    spec.lambda = 1.0;
    learners.push_back(spec);
  }
  return learners;
}

std::vector<BaseLearnerSpec> ucb_set(const std::vector<double>& scalings) {
  std::vector<BaseLearnerSpec> learners;
  for (double c : scalings) {
    BaseLearnerSpec spec;
    spec.kind = BaseLearnerSpec::Kind::Ucb;
    spec.c = c;
    spec.delta = 0.1;
    learners.push_back(spec);
  }
  return learners;
}

EnvironmentSpec gaussian_env(std::vector<double> means, double std_dev) {
  EnvironmentSpec env;
  env.kind = EnvKind::GaussianMAB;
  env.means = std::move(means);
  env.reward_std = std_dev;
  return env;
}

EnvironmentSpec sphere_env(const Eigen::VectorXd& theta) {
  EnvironmentSpec env;
  env.kind = EnvKind::LinearBandit;
  env.theta_star = theta;
  env.action_set = ActionSetKind::UnitSphere;
  env.reward_std = 1.0;
  return env;
}

EnvironmentSpec hypercube_env(const Eigen::VectorXd& theta, double scale) {
  EnvironmentSpec env;
  env.kind = EnvKind::LinearBandit;
  env.theta_star = theta;
  env.action_set = ActionSetKind::Hypercube;
  env.hypercube_scale = scale;
  env.reward_std = 1.0;
  return env;
}

EnvironmentSpec contextual_env(const Eigen::VectorXd& theta, int context_size) {
  EnvironmentSpec env;
  env.kind = EnvKind::ContextualLinearBandit;
  env.theta_star = theta;
  env.action_set = ActionSetKind::SampledContext;
  env.context_size = context_size;
  env.reward_std = 1.0;
  return env;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* k) { return it.key() == k; });
    if (!known) throw ConfigError(path + "." + it.key() + ": unknown key");
  }
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

std::string meta_kind_name(MetaKind kind) {
  switch (kind) {
    case MetaKind::D3RB: return "d3rb";
    case MetaKind::ED2RB: return "ed2rb";
    case MetaKind::Corral: return "corral";
    case MetaKind::Exp3: return "exp3";
    case MetaKind::UcbMeta: return "ucb_meta";
    case MetaKind::GreedyMeta: return "greedy_meta";
    case MetaKind::RbGrid: return "rb_grid";
    case MetaKind::SingleBase: return "single_base";
  }
  throw ConfigError("unknown meta kind");
}

MetaKind meta_kind_from_name(const std::string& name) {
  if (name == "d3rb") return MetaKind::D3RB;
  if (name == "ed2rb") return MetaKind::ED2RB;
  if (name == "corral") return MetaKind::Corral;
  if (name == "exp3") return MetaKind::Exp3;
  if (name == "ucb_meta") return MetaKind::UcbMeta;
  if (name == "greedy_meta") return MetaKind::GreedyMeta;
  if (name == "rb_grid") return MetaKind::RbGrid;
  if (name == "single_base") return MetaKind::SingleBase;
  throw ConfigError("meta.kind: unknown meta-learner '" + name + "'");
}

void ExperimentConfig::validate() const {
  environment.validate();
  if (horizon < 1) throw ConfigError("horizon: must be >= 1");
  if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (base_learners.empty()) throw ConfigError("base_learners: must be non-empty");
  if (checkpoint_stride < 0) throw ConfigError("checkpoint_stride: must be >= 0");

  bool linear = environment.kind == EnvKind::LinearBandit ||
                environment.kind == EnvKind::ContextualLinearBandit;
  for (std::size_t i = 0; i < base_learners.size(); ++i) {
    const auto& b = base_learners[i];
    std::string path = "base_learners[" + std::to_string(i) + "]";
    if (b.kind == BaseLearnerSpec::Kind::Ucb) {
      if (linear) throw ConfigError(path + ": UCB learner on a linear environment");
      if (b.delta <= 0 || b.delta >= 1) throw ConfigError(path + ".delta: must lie in (0,1)");
    } else {
      if (!linear) throw ConfigError(path + ": LinTS learner on a finite-arm environment");
      if (b.dim < 1 || b.dim > environment.theta_star.size())
        throw ConfigError(path + ".dim: must lie in [1, ambient dimension]");
      if (b.lambda <= 0) throw ConfigError(path + ".lambda: must be > 0");
    }
    if (b.c < 0) throw ConfigError(path + ".c: must be >= 0");
  }

  if (meta.kind == MetaKind::SingleBase &&
      (meta.single_index < 0 ||
       meta.single_index >= static_cast<int>(base_learners.size())))
    throw ConfigError("meta.index: out of range");
  if (meta.kind == MetaKind::RbGrid) {
    if (meta.grid.empty()) throw ConfigError("meta.grid: must be non-empty");
    for (std::size_t i = 1; i < meta.grid.size(); ++i)
      if (meta.grid[i] <= meta.grid[i - 1])
        throw ConfigError("meta.grid: must be strictly increasing");
  }
  if (meta.d_min <= 0) throw ConfigError("meta.d_min: must be > 0");
  if (meta.delta <= 0 || meta.delta >= 1) throw ConfigError("meta.delta: must lie in (0,1)");
  if (meta.conc_c <= 0) throw ConfigError("meta.c: must be > 0");
}

std::int64_t ExperimentConfig::resolved_stride() const {
  if (checkpoint_stride > 0) return checkpoint_stride;
  return std::max<std::int64_t>(1, horizon / 100);
}

std::vector<std::string> preset_names() {
  return {"exp1", "exp2", "exp3", "exp4", "exp5", "exp6",
          "expA", "expB", "expC", "expD", "expE", "expF",
          "expG", "expH", "expI", "expJ", "expK", "expL", "fig1"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.repetitions = 100;
  cfg.seed = 1;

  auto scaled_ramp = [](int d) { return Eigen::VectorXd(ramp(d) / ramp(d).norm() * 5.0); };

  if (name == "exp1") {
    cfg.environment = gaussian_env({0.5, 1.0, 0.2, 0.1, 0.6}, 1.0);
    cfg.base_learners = ucb_set(std::vector<double>(10, 0.0));
    cfg.horizon = 20000;
  } else if (name == "exp2") {
    cfg.environment = gaussian_env({0.5, 1.0, 0.2, 0.1, 0.6}, 1.0);
    cfg.base_learners = ucb_set({0.0, 4.0, 6.0, 20.0});
    cfg.horizon = 10000;
  } else if (name == "exp3") {
    cfg.environment = sphere_env(scaled_ramp(10));
    cfg.base_learners = lints_confidence_set(10);
    cfg.horizon = 1000;
  } else if (name == "exp4") {
    cfg.environment = contextual_env(ramp(10), 10);
    cfg.base_learners = lints_confidence_set(10);
    cfg.horizon = 1000;
  } else if (name == "exp5") {
    cfg.environment = sphere_env(pad_to(ramp(5), 15));
    cfg.base_learners = lints_dimension_set({2, 5, 10, 15});
    cfg.horizon = 1000;
  } else if (name == "exp6") {
    cfg.environment = contextual_env(pad_to(ramp(5) / ramp(5).norm(), 15), 10);
    cfg.base_learners = lints_dimension_set({2, 5, 10, 15});
    cfg.horizon = 20000;
  } else if (name == "expA") {
    EnvironmentSpec env;
    env.kind = EnvKind::BernoulliMAB;
    env.means = {0.1, 0.2, 0.5, 0.8};
    cfg.environment = env;
    cfg.base_learners = ucb_set({0.0, 0.08, 0.16, 0.64, 1.24, 2.5, 5.0, 10.0, 25.0});
    cfg.horizon = 20000;
  } else if (name == "expB") {
    EnvironmentSpec env;
    env.kind = EnvKind::BernoulliMAB;
    env.means = {0.1, 0.2};
    env.reward_scale = 30.0;
    cfg.environment = env;
    cfg.base_learners = ucb_set(std::vector<double>(10, 1.0));
    cfg.horizon = 20000;
  } else if (name == "expC") {
    cfg.environment = hypercube_env(scaled_ramp(5), 1.0);
    cfg.base_learners = lints_confidence_set(5);
    cfg.horizon = 1000;
  } else if (name == "expD") {
    cfg.environment = hypercube_env(scaled_ramp(10), 1.0 / std::sqrt(10.0));
    cfg.base_learners = lints_confidence_set(10);
    cfg.horizon = 1000;
  } else if (name == "expE") {
    cfg.environment = hypercube_env(scaled_ramp(100), 1.0 / std::sqrt(100.0));
    cfg.base_learners = lints_confidence_set(100);
    cfg.horizon = 1000;
  } else if (name == "expF") {
    cfg.environment = sphere_env(scaled_ramp(5));
    cfg.base_learners = lints_confidence_set(5);
    cfg.horizon = 1000;
  } else if (name == "expG") {
    cfg.environment = sphere_env(scaled_ramp(100));
    cfg.base_learners = lints_confidence_set(100);
    cfg.horizon = 1000;
  } else if (name == "expH") {
    cfg.environment = contextual_env(scaled_ramp(5), 10);
    cfg.base_learners = lints_confidence_set(5);
    cfg.horizon = 1000;
  } else if (name == "expI") {
    cfg.environment = contextual_env(scaled_ramp(100), 10);
    cfg.base_learners = lints_confidence_set(100);
    cfg.horizon = 1000;
  } else if (name == "expJ") {
    cfg.environment = sphere_env(pad_to(scaled_ramp(30), 100));
    cfg.base_learners = lints_dimension_set({10, 30, 50, 100});
    cfg.horizon = 1000;
  } else if (name == "expK") {
    cfg.environment = hypercube_env(pad_to(ramp(5), 15), 1.0 / std::sqrt(15.0));
    cfg.base_learners = lints_dimension_set({2, 5, 10, 15});
    cfg.horizon = 1000;
  } else if (name == "expL") {
    cfg.environment = hypercube_env(pad_to(scaled_ramp(30), 100), 1.0 / std::sqrt(100.0));
    cfg.base_learners = lints_dimension_set({10, 30, 50, 100});
    cfg.horizon = 1000;
  } else if (name == "fig1") {
    cfg.environment = gaussian_env({1.0, 0.6, 0.5, 0.2, 0.1}, 6.0);
    cfg.base_learners = ucb_set({3.0, 4.0});
    cfg.horizon = 10000;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j, {"name", "environment", "base_learners", "meta", "horizon",
                 "repetitions", "seed", "checkpoint_stride"},
             "config");

  ExperimentConfig cfg;
  cfg.name = j.value("name", "custom");

  if (!j.contains("environment")) throw ConfigError("config.environment: missing");
  const json& je = j["environment"];
  check_keys(je, {"kind", "means", "reward_std", "reward_scale", "theta_star",
                  "action_set", "hypercube_scale", "context_size"},
             "environment");
  std::string env_kind = je.value("kind", "");
  EnvironmentSpec env;
  if (env_kind == "gaussian_mab") env.kind = EnvKind::GaussianMAB;
  else if (env_kind == "bernoulli_mab") env.kind = EnvKind::BernoulliMAB;
  else if (env_kind == "linear") env.kind = EnvKind::LinearBandit;
  else if (env_kind == "contextual_linear") env.kind = EnvKind::ContextualLinearBandit;
  else throw ConfigError("environment.kind: unknown kind '" + env_kind + "'");
  if (je.contains("means")) env.means = je["means"].get<std::vector<double>>();
  env.reward_std = je.value("reward_std", 1.0);
  env.reward_scale = je.value("reward_scale", 1.0);
  if (je.contains("theta_star")) env.theta_star = vector_from_json(je["theta_star"]);
  if (je.contains("action_set")) {
    std::string as = je["action_set"].get<std::string>();
    if (as == "unit_sphere") env.action_set = ActionSetKind::UnitSphere;
    else if (as == "hypercube") env.action_set = ActionSetKind::Hypercube;
    else if (as == "sampled_context") env.action_set = ActionSetKind::SampledContext;
    else throw ConfigError("environment.action_set: unknown action set '" + as + "'");
  }
  if (env.kind == EnvKind::ContextualLinearBandit)
    env.action_set = ActionSetKind::SampledContext;
  env.hypercube_scale = je.value("hypercube_scale", 1.0);
  env.context_size = je.value("context_size", 0);
  cfg.environment = env;

  if (!j.contains("base_learners")) throw ConfigError("config.base_learners: missing");
  for (std::size_t i = 0; i < j["base_learners"].size(); ++i) {
    const json& jb = j["base_learners"][i];
    std::string path = "base_learners[" + std::to_string(i) + "]";
    check_keys(jb, {"kind", "c", "delta", "dim", "lambda"}, path);
    BaseLearnerSpec b;
    std::string kind = jb.value("kind", "");
    if (kind == "ucb") b.kind = BaseLearnerSpec::Kind::Ucb;
    else if (kind == "lints") b.kind = BaseLearnerSpec::Kind::LinTs;
    else throw ConfigError(path + ".kind: unknown learner '" + kind + "'");
    b.c = jb.value("c", 1.0);
    b.delta = jb.value("delta", 0.1);
    b.dim = jb.value("dim", static_cast<int>(env.theta_star.size()));
    b.lambda = jb.value("lambda", 1.0);
    cfg.base_learners.push_back(b);
  }

  if (j.contains("meta")) {
    const json& jm = j["meta"];
    check_keys(jm, {"kind", "d_min", "delta", "c", "eta", "gamma", "ucb_c",
                    "ucb_delta", "grid", "index"},
               "meta");
    cfg.meta.kind = meta_kind_from_name(jm.value("kind", "ed2rb"));
    cfg.meta.d_min = jm.value("d_min", 1.0);
    cfg.meta.delta = jm.value("delta", 0.05);
    cfg.meta.conc_c = jm.value("c", 1.0);
    if (jm.contains("eta")) {
      if (cfg.meta.kind == MetaKind::Corral) cfg.meta.corral_eta = jm["eta"].get<double>();
      else cfg.meta.exp3_eta = jm["eta"].get<double>();
    }
    if (jm.contains("gamma")) cfg.meta.exp3_gamma = jm["gamma"].get<double>();
    cfg.meta.ucb_c = jm.value("ucb_c", 1.0);
    cfg.meta.ucb_delta = jm.value("ucb_delta", 0.1);
    if (jm.contains("grid")) cfg.meta.grid = jm["grid"].get<std::vector<double>>();
    cfg.meta.single_index = jm.value("index", 0);
  }

  if (!j.contains("horizon")) throw ConfigError("config.horizon: missing");
  cfg.horizon = j["horizon"].get<std::int64_t>();
  cfg.repetitions = j.value("repetitions", 100);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.checkpoint_stride = j.value("checkpoint_stride", std::int64_t{0});

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path_or_preset) {
  auto names = preset_names();
  if (std::find(names.begin(), names.end(), path_or_preset) != names.end())
    return preset(path_or_preset);
  std::ifstream in(path_or_preset);
  if (!in) throw ConfigError("cannot open config file '" + path_or_preset + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;

  json je;
  switch (cfg.environment.kind) {
    case EnvKind::GaussianMAB: je["kind"] = "gaussian_mab"; break;
    case EnvKind::BernoulliMAB: je["kind"] = "bernoulli_mab"; break;
    case EnvKind::LinearBandit: je["kind"] = "linear"; break;
    case EnvKind::ContextualLinearBandit: je["kind"] = "contextual_linear"; break;
  }
  if (!cfg.environment.means.empty()) je["means"] = cfg.environment.means;
  je["reward_std"] = cfg.environment.reward_std;
  if (cfg.environment.kind == EnvKind::BernoulliMAB)
    je["reward_scale"] = cfg.environment.reward_scale;
  if (cfg.environment.theta_star.size() > 0) {
    std::vector<double> theta(cfg.environment.theta_star.data(),
                              cfg.environment.theta_star.data() +
                                  cfg.environment.theta_star.size());
    je["theta_star"] = theta;
    je["action_set"] = cfg.environment.action_set == ActionSetKind::UnitSphere
                           ? "unit_sphere"
                           : cfg.environment.action_set == ActionSetKind::Hypercube
                                 ? "hypercube"
                                 : "sampled_context";
    if (cfg.environment.action_set == ActionSetKind::Hypercube)
      je["hypercube_scale"] = cfg.environment.hypercube_scale;
    if (cfg.environment.kind == EnvKind::ContextualLinearBandit)
      je["context_size"] = cfg.environment.context_size;
  }
  j["environment"] = je;

  json jl = json::array();
  for (const auto& b : cfg.base_learners) {
    json jb;
    if (b.kind == BaseLearnerSpec::Kind::Ucb) {
      jb["kind"] = "ucb";
      jb["c"] = b.c;
      jb["delta"] = b.delta;
    } else {
      jb["kind"] = "lints";
      jb["c"] = b.c;
      jb["dim"] = b.dim;
      jb["lambda"] = b.lambda;
    }
    jl.push_back(jb);
  }
  j["base_learners"] = jl;

  json jm;
  jm["kind"] = meta_kind_name(cfg.meta.kind);
  double T = static_cast<double>(cfg.horizon);
  switch (cfg.meta.kind) {
    case MetaKind::D3RB:
    case MetaKind::ED2RB:
      jm["d_min"] = cfg.meta.d_min;
      jm["delta"] = cfg.meta.delta;
      jm["c"] = cfg.meta.conc_c;
      break;
    case MetaKind::Corral:
      jm["eta"] = cfg.meta.corral_eta.value_or(1.0 / std::sqrt(T));
      break;
    case MetaKind::Exp3: {
      double M = static_cast<double>(cfg.base_learners.size());
      jm["eta"] = cfg.meta.exp3_eta.value_or(std::sqrt(std::log(M) / (M * T)));
      jm["gamma"] = cfg.meta.exp3_gamma.value_or(0.1 / std::sqrt(T));
      break;
    }
    case MetaKind::UcbMeta:
      jm["ucb_c"] = cfg.meta.ucb_c;
      jm["ucb_delta"] = cfg.meta.ucb_delta;
      break;
    case MetaKind::GreedyMeta:
      break;
    case MetaKind::RbGrid:
      jm["grid"] = cfg.meta.grid;
      jm["delta"] = cfg.meta.delta;
      jm["c"] = cfg.meta.conc_c;
      break;
    case MetaKind::SingleBase:
      jm["index"] = cfg.meta.single_index;
      break;
  }
  j["meta"] = jm;

  j["horizon"] = cfg.horizon;
  j["repetitions"] = cfg.repetitions;
  j["seed"] = cfg.seed;
  j["checkpoint_stride"] = cfg.resolved_stride();
  return j.dump(2);
}

void apply_meta_override(ExperimentConfig& cfg, const std::string& name) {
  std::string kind = name;
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    kind = name.substr(0, colon);
    cfg.meta.single_index = std::stoi(name.substr(colon + 1));
  }
  cfg.meta.kind = meta_kind_from_name(kind);
  cfg.validate();
}

}  // namespace banditms
