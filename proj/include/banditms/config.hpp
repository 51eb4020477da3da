#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banditms/env.hpp"

namespace banditms {

struct BaseLearnerSpec {
  enum class Kind { Ucb, LinTs } kind = Kind::Ucb;
  double c = 1.0;
  double delta = 0.1;   // UCB only
  int dim = 1;          // LinTS only, operating dimension
  double lambda = 1.0;  // LinTS only
};

enum class MetaKind { D3RB, ED2RB, Corral, Exp3, UcbMeta, GreedyMeta, RbGrid, SingleBase };

struct MetaSpec {
  MetaKind kind = MetaKind::ED2RB;
  // Balancing (D3RB/ED2RB) and RB-Grid widths.
  double d_min = 1.0;
  double delta = 0.05;
  double conc_c = 1.0;
  // Corral / EXP3; unset means the horizon-derived default.
  std::optional<double> corral_eta;  // default 1/sqrt(T)
  std::optional<double> exp3_eta;    // default sqrt(ln M / (M T))
  std::optional<double> exp3_gamma;  // default 0.1/sqrt(T)
  // UCB-as-meta.
  double ucb_c = 1.0;
  double ucb_delta = 0.1;
  // RB-Grid candidate coefficients applied to every base learner.
  std::vector<double> grid = {1.0, 2.0, 4.0, 8.0, 16.0};
  // SingleBase.
  int single_index = 0;
};

std::string meta_kind_name(MetaKind kind);
MetaKind meta_kind_from_name(const std::string& name);

struct ExperimentConfig {
  std::string name;
  EnvironmentSpec environment;
  std::vector<BaseLearnerSpec> base_learners;
  MetaSpec meta;
  std::int64_t horizon = 1000;
  int repetitions = 100;
  std::uint64_t seed = 1;
  std::int64_t checkpoint_stride = 0;  // 0 resolves to max(1, horizon/100)

  void validate() const;
  std::int64_t resolved_stride() const;
};

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

// Accepts either a preset name or a path to a JSON config file.
ExperimentConfig load_config(const std::string& path_or_preset);
ExperimentConfig parse_config_json(const std::string& text);

// Full echo of a config with every default resolved.
std::string config_to_json(const ExperimentConfig& config);

// Replace the meta-learner, keeping its horizon-derived defaults. Accepts
// names like "d3rb", "corral", or "single_base:2".
void apply_meta_override(ExperimentConfig& config, const std::string& name);

}  // namespace banditms
