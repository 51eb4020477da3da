#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "banditms/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"banditms: bandit model-selection experiment runner"};
  app.require_subcommand(1);

  // run
  std::string config_arg;
  std::string out_dir = "out";
  std::string trace_mode = "checkpoints";
  std::string meta_override;
  int reps = -1;
  long long seed = -1;
  long long horizon = -1;
  int threads = 1;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV output");
  run->add_option("--config", config_arg,
                  "Preset name or path to a JSON config file")
      ->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--reps", reps, "Override the number of repetitions");
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--horizon", horizon, "Override the horizon");
  run->add_option("--threads", threads, "Worker threads across repetitions");
  run->add_option("--meta", meta_override,
                  "Override the meta-learner (e.g. d3rb, ed2rb, corral, "
                  "exp3, ucb, greedy, rb_grid, single_base:0)");
  run->add_option("--trace", trace_mode, "Trace granularity")
      ->check(CLI::IsMember({"full", "checkpoints"}));

  auto* list = app.add_subcommand("list-presets", "List built-in experiment presets");

  std::string summarize_dir;
  auto* summ = app.add_subcommand(
      "summarize", "Recompute the summary CSV from trace files in a directory");
  summ->add_option("dir", summarize_dir, "Directory with trace_rep*.csv files")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : banditms::preset_names()) std::cout << name << "\n";
      return 0;
    }
    if (summ->parsed()) {
      std::cout << banditms::summary_to_csv(banditms::summarize_trace_dir(summarize_dir));
      return 0;
    }

    banditms::ExperimentConfig config = banditms::load_config(config_arg);
    if (reps >= 0) config.repetitions = reps;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (horizon >= 0) config.horizon = horizon;
    if (!meta_override.empty()) banditms::apply_meta_override(config, meta_override);
    config.validate();

    banditms::RunArtifact artifact = banditms::run_experiment(config, threads);
    banditms::write_artifact(config, artifact, out_dir, trace_mode == "full");

    if (!artifact.summary.empty()) {
      const auto& last = artifact.summary.back();
      std::printf("%s: %d reps, T=%lld, final regret %.4f +/- %.4f -> %s\n",
                  config.name.c_str(), config.repetitions,
                  static_cast<long long>(config.horizon), last.mean_regret,
                  last.two_se, out_dir.c_str());
    } else {
      std::printf("%s: wrote %zu trace(s) to %s\n", config.name.c_str(),
                  artifact.traces.size(), out_dir.c_str());
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
