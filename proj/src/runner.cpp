#include "banditms/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "banditms/base.hpp"
#include "banditms/baselines.hpp"

namespace banditms {

namespace fs = std::filesystem;

namespace {

std::unique_ptr<BaseLearner> build_base_learner(const BaseLearnerSpec& spec,
                                                const EnvironmentSpec& env,
                                                std::uint64_t noise_seed) {
  if (spec.kind == BaseLearnerSpec::Kind::Ucb)
    return std::make_unique<UcbLearner>(static_cast<int>(env.means.size()),
                                        spec.c, spec.delta);
  return std::make_unique<LinTsLearner>(spec.dim, spec.c, spec.lambda, noise_seed);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<BaseLearnerSpec> expanded_base_learners(const ExperimentConfig& config,
                                                    std::vector<double>* candidates) {
  std::vector<BaseLearnerSpec> specs;
  if (config.meta.kind != MetaKind::RbGrid) {
    specs = config.base_learners;
    if (candidates) candidates->clear();
    return specs;
  }
  if (candidates) candidates->clear();
  for (const auto& base : config.base_learners) {
    for (double d : config.meta.grid) {
      specs.push_back(base);
      if (candidates) candidates->push_back(d);
    }
  }
  return specs;
}

std::unique_ptr<MetaLearner> build_meta(const ExperimentConfig& config,
                                        int learner_count) {
  double T = static_cast<double>(config.horizon);
  switch (config.meta.kind) {
    case MetaKind::D3RB:
      return std::make_unique<BalancingMeta>(BalancingVariant::D3RB, learner_count,
                                             config.meta.d_min, config.meta.delta,
                                             config.meta.conc_c);
    case MetaKind::ED2RB:
      return std::make_unique<BalancingMeta>(BalancingVariant::ED2RB, learner_count,
                                             config.meta.d_min, config.meta.delta,
                                             config.meta.conc_c);
    case MetaKind::Corral:
      return std::make_unique<CorralMeta>(
          learner_count, config.horizon,
          config.meta.corral_eta.value_or(1.0 / std::sqrt(T)));
    case MetaKind::Exp3: {
      double M = static_cast<double>(learner_count);
      double eta = config.meta.exp3_eta.value_or(std::sqrt(std::log(M) / (M * T)));
      double gamma = config.meta.exp3_gamma.value_or(0.1 / std::sqrt(T));
      return std::make_unique<Exp3Meta>(learner_count, eta, gamma);
    }
    case MetaKind::UcbMeta:
      return std::make_unique<UcbMeta>(learner_count, config.meta.ucb_c,
                                       config.meta.ucb_delta);
    case MetaKind::GreedyMeta:
      return std::make_unique<GreedyMeta>(learner_count);
    case MetaKind::RbGrid: {
      std::vector<double> candidates;
      expanded_base_learners(config, &candidates);
      return std::make_unique<RbGridMeta>(std::move(candidates), config.meta.delta,
                                          config.meta.conc_c);
    }
    case MetaKind::SingleBase:
      return std::make_unique<SingleBaseMeta>(config.meta.single_index);
  }
  throw ConfigError("unknown meta kind");
}

RegretTrace run_repetition(const ExperimentConfig& config, int rep_index,
                           const RoundObserver* observer) {
  config.validate();
  auto rep = static_cast<std::uint64_t>(rep_index);

  std::vector<double> candidates;
  std::vector<BaseLearnerSpec> specs = expanded_base_learners(config, &candidates);
  const int m = static_cast<int>(specs.size());

  Environment env(config.environment,
                  derive_stream_seed(config.seed, rep, StreamRole::Environment));
  std::vector<std::unique_ptr<BaseLearner>> learners;
  learners.reserve(specs.size());
  for (int i = 0; i < m; ++i)
    learners.push_back(build_base_learner(
        specs[static_cast<std::size_t>(i)], config.environment,
        derive_stream_seed(config.seed, rep, StreamRole::BaseLearner,
                           static_cast<std::uint64_t>(i))));
  std::unique_ptr<MetaLearner> meta = build_meta(config, m);
  Rng meta_rng(derive_stream_seed(config.seed, rep, StreamRole::Meta));

  RegretTrace trace;
  trace.seed = derive_stream_seed(config.seed, rep, StreamRole::Environment);
  trace.cumulative_regret.reserve(static_cast<std::size_t>(config.horizon));
  trace.chosen_learner.reserve(static_cast<std::size_t>(config.horizon));
  trace.learner_regrets.assign(static_cast<std::size_t>(m), {});

  const bool contextual = config.environment.kind == EnvKind::ContextualLinearBandit;
  double cumulative = 0.0;
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    try {
      if (contextual) env.sample_context();
      ActionSetView view = env.action_set();
      int chosen = meta->choose(meta_rng);
      auto ci = static_cast<std::size_t>(chosen);
      ChosenAction action = learners[ci]->select(view);
      RoundOutcome outcome = env.step(action);
      learners[ci]->update(action, outcome.reward);
      meta->observe(chosen, outcome.reward);

      cumulative += outcome.inst_regret;
      trace.cumulative_regret.push_back(cumulative);
      trace.chosen_learner.push_back(chosen);
      trace.learner_regrets[ci].push_back(outcome.inst_regret);

      if (observer) {
        RoundRecord record{t, chosen, outcome.reward, outcome.inst_regret,
                           outcome.policy_value};
        (*observer)(record, *meta);
      }
    } catch (const NumericError& e) {
      throw NumericError("round " + std::to_string(t) + ": " + e.what());
    }
  }

  if (auto* balancing = dynamic_cast<const BalancingMeta*>(meta.get())) {
    const BalanceDiagnostics& diag = balancing->diagnostics();
    trace.monotonicity_violations = diag.monotonicity_violations;
    trace.balance_violations = diag.balance_violations;
    trace.doubling_bound_violations = diag.doubling_bound_violations;
    trace.last_nondouble_round = diag.last_nondouble_round;
  }
  return trace;
}

RunArtifact run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  RunArtifact artifact;
  artifact.traces.resize(static_cast<std::size_t>(config.repetitions));
  artifact.rep_seeds.resize(static_cast<std::size_t>(config.repetitions));
  for (int r = 0; r < config.repetitions; ++r)
    artifact.rep_seeds[static_cast<std::size_t>(r)] = derive_stream_seed(
        config.seed, static_cast<std::uint64_t>(r), StreamRole::Environment);

  threads = std::max(1, std::min(threads, config.repetitions));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        int r;
        while ((r = next.fetch_add(1)) < config.repetitions)
          artifact.traces[static_cast<std::size_t>(r)] = run_repetition(config, r);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& worker : pool) worker.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  std::vector<std::int64_t> checkpoints;
  std::int64_t stride = config.resolved_stride();
  for (std::int64_t t = stride; t <= config.horizon; t += stride)
    checkpoints.push_back(t);
  if (checkpoints.empty() || checkpoints.back() != config.horizon)
    checkpoints.push_back(config.horizon);
  if (config.repetitions >= 2)
    artifact.summary = summarize(artifact.traces, checkpoints);
  return artifact;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "round,mean_regret,two_se,mean_regret_scale\n";
  for (const auto& row : rows) {
    out += std::to_string(row.round) + "," + format_double(row.mean_regret) + "," +
           format_double(row.two_se) + "," + format_double(row.mean_regret_scale) +
           "\n";
  }
  return out;
}

void write_artifact(const ExperimentConfig& config, const RunArtifact& artifact,
                    const std::string& out_dir, bool full_trace) {
  fs::create_directories(out_dir);

  {
    std::ofstream out(fs::path(out_dir) / "config.json");
    if (!out) throw NumericError("cannot write config echo in " + out_dir);
    out << config_to_json(config) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "seeds.csv");
    out << "rep,seed\n";
    for (std::size_t r = 0; r < artifact.rep_seeds.size(); ++r)
      out << r << "," << artifact.rep_seeds[r] << "\n";
  }

  std::int64_t stride = config.resolved_stride();
  for (std::size_t r = 0; r < artifact.traces.size(); ++r) {
    char name[64];
    std::snprintf(name, sizeof(name), "trace_rep%04zu.csv", r);
    std::ofstream out(fs::path(out_dir) / name);
    if (!out) throw NumericError("cannot write trace file in " + out_dir);
    out << "round,cumulative_regret,chosen_learner\n";
    const RegretTrace& trace = artifact.traces[r];
    for (std::int64_t t = 1; t <= trace.horizon(); ++t) {
      if (!full_trace && t % stride != 0 && t != trace.horizon()) continue;
      out << t << "," << format_double(trace.cumulative_regret[static_cast<std::size_t>(t - 1)])
          << "," << trace.chosen_learner[static_cast<std::size_t>(t - 1)] << "\n";
    }
  }

  if (!artifact.summary.empty()) {
    std::ofstream out(fs::path(out_dir) / "summary.csv");
    if (!out) throw NumericError("cannot write summary in " + out_dir);
    out << summary_to_csv(artifact.summary);
  }
}

std::vector<SummaryRow> summarize_trace_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("trace_rep", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2)
    throw ContractViolation("summarize: need at least 2 trace files in " + dir);

  std::vector<std::int64_t> rounds;
  std::vector<std::vector<double>> values;  // [checkpoint][rep]
  for (std::size_t f = 0; f < files.size(); ++f) {
    std::ifstream in(files[f]);
    std::string line;
    std::getline(in, line);  // header
    std::size_t idx = 0;
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string round_str, value_str;
      std::getline(ss, round_str, ',');
      std::getline(ss, value_str, ',');
      std::int64_t round = std::stoll(round_str);
      double value = std::stod(value_str);
      if (f == 0) {
        rounds.push_back(round);
        values.emplace_back();
      } else if (idx >= rounds.size() || rounds[idx] != round) {
        throw ContractViolation("summarize: trace files have mismatched checkpoints");
      }
      values[idx].push_back(value);
      ++idx;
    }
  }

  std::vector<SummaryRow> rows;
  double reps = static_cast<double>(files.size());
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    SummaryRow row;
    row.round = rounds[i];
    double sum = 0.0;
    for (double v : values[i]) sum += v;
    row.mean_regret = sum / reps;
    row.mean_regret_scale = row.mean_regret / std::sqrt(static_cast<double>(row.round));
    double sq = 0.0;
    for (double v : values[i]) sq += (v - row.mean_regret) * (v - row.mean_regret);
    row.two_se = 2.0 * std::sqrt(sq / (reps - 1.0)) / std::sqrt(reps);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace banditms
