#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "banditms/config.hpp"
#include "banditms/meta.hpp"
#include "banditms/metrics.hpp"

namespace banditms {

// Per-round callback for diagnostics; receives the round's outcome and the
// meta-learner after its update.
struct RoundRecord {
  std::int64_t round = 0;
  int learner = 0;
  double reward = 0.0;
  double inst_regret = 0.0;
  double policy_value = 0.0;
};
using RoundObserver = std::function<void(const RoundRecord&, const MetaLearner&)>;

// RB-Grid expands each base learner into one copy per grid candidate; this
// returns the expanded specs and the aligned candidate coefficients.
std::vector<BaseLearnerSpec> expanded_base_learners(const ExperimentConfig& config,
                                                    std::vector<double>* candidates);

std::unique_ptr<MetaLearner> build_meta(const ExperimentConfig& config,
                                        int learner_count);

// One full T-round loop; a deterministic function of (config, seed, rep_index).
RegretTrace run_repetition(const ExperimentConfig& config, int rep_index,
                           const RoundObserver* observer = nullptr);

struct RunArtifact {
  std::vector<RegretTrace> traces;
  std::vector<SummaryRow> summary;
  std::vector<std::uint64_t> rep_seeds;
};

RunArtifact run_experiment(const ExperimentConfig& config, int threads = 1);

// Writes config echo, per-repetition trace CSVs and summary CSV.
void write_artifact(const ExperimentConfig& config, const RunArtifact& artifact,
                    const std::string& out_dir, bool full_trace);

// Recomputes the summary from trace CSVs written by write_artifact.
std::vector<SummaryRow> summarize_trace_dir(const std::string& dir);

std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace banditms
