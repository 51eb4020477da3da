#include "banditms/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "banditms/base.hpp"

namespace banditms {

namespace {

// Sum of the updated coordinates at a given normalizer, or invalid if any
// denominator is non-positive (which can only happen past the root).
struct OmdEval {
  bool valid = false;
  double sum = 0.0;
};

OmdEval omd_eval(const std::vector<double>& p, const std::vector<double>& loss,
                 const std::vector<double>& eta, double lambda) {
  OmdEval ev;
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    double denom = 1.0 / p[j] + eta[j] * (loss[j] - lambda);
    if (denom <= 0.0) return ev;
    sum += 1.0 / denom;
  }
  ev.valid = true;
  ev.sum = sum;
  return ev;
}

}  // namespace

OmdResult log_barrier_omd(const std::vector<double>& p,
                          const std::vector<double>& loss,
                          const std::vector<double>& eta) {
  const std::size_t m = p.size();
  if (m == 0 || loss.size() != m || eta.size() != m)
    throw ContractViolation("log_barrier_omd: size mismatch");
  double psum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (p[j] <= 0.0) throw ContractViolation("log_barrier_omd: p must be strictly positive");
    if (eta[j] <= 0.0) throw ContractViolation("log_barrier_omd: eta must be positive");
    psum += p[j];
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw ContractViolation("log_barrier_omd: p must sum to one");

  double lo = *std::min_element(loss.begin(), loss.end());
  double hi = *std::max_element(loss.begin(), loss.end());

  // The objective is increasing in lambda up to the first pole, and reaches
  // one inside [lo, hi]; bisection treats invalid evaluations as overshoot.
  double lambda = lo;
  for (int iter = 0; iter < 200 && hi - lo > 0; ++iter) {
    lambda = 0.5 * (lo + hi);
    OmdEval ev = omd_eval(p, loss, eta, lambda);
    if (ev.valid && std::abs(ev.sum - 1.0) <= 1e-12) break;
    if (ev.valid && ev.sum < 1.0)
      lo = lambda;
    else
      hi = lambda;
  }

  OmdEval final_ev = omd_eval(p, loss, eta, lambda);
  if (!final_ev.valid) {
    // Walk back to the feasible side of the bracket.
    lambda = lo;
    final_ev = omd_eval(p, loss, eta, lambda);
  }
  if (!final_ev.valid || std::abs(final_ev.sum - 1.0) > 1e-8)
    throw NumericError("log_barrier_omd: root finding failed to converge");

  OmdResult result;
  result.lambda = lambda;
  result.distribution.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    result.distribution[j] = 1.0 / (1.0 / p[j] + eta[j] * (loss[j] - lambda));
  // Renormalize the residual bisection error away.
  double sum = 0.0;
  for (double v : result.distribution) sum += v;
  for (double& v : result.distribution) v /= sum;
  return result;
}

CorralMeta::CorralMeta(int learner_count, std::int64_t horizon, double eta)
    : M_(learner_count) {
  if (learner_count < 1) throw ConfigError("corral: learner count must be >= 1");
  if (horizon < 2) throw ConfigError("corral: horizon must be >= 2");
  if (eta <= 0) throw ConfigError("corral: eta must be > 0");
  double T = static_cast<double>(horizon);
  gamma_ = 1.0 / T;
  beta_ = std::exp(1.0 / std::log(T));
  p_.assign(M_, 1.0 / M_);
  p_lower_.assign(M_, 1.0 / (2.0 * M_));
  eta_.assign(M_, eta);
  rho_.assign(M_, 2.0 * static_cast<double>(M_));
}

int CorralMeta::choose(Rng& rng) {
  std::discrete_distribution<int> dist(p_.begin(), p_.end());
  last_choice_ = dist(rng);
  return last_choice_;
}

void CorralMeta::observe(int learner, double reward) {
  std::vector<double> loss(M_, 0.0);
  double prob = p_[static_cast<std::size_t>(learner)];
  if (prob <= 0.0) throw ContractViolation("corral: chosen learner has zero probability");
  loss[static_cast<std::size_t>(learner)] = reward / prob;

  OmdResult omd = log_barrier_omd(p_, loss, eta_);
  for (int j = 0; j < M_; ++j)
    p_[j] = (1.0 - gamma_) * omd.distribution[static_cast<std::size_t>(j)] +
            gamma_ / M_;

  for (int j = 0; j < M_; ++j) {
    if (p_lower_[j] > p_[j]) {
      p_lower_[j] = p_[j] / 2.0;
      eta_[j] *= beta_;
    }
    rho_[j] = 1.0 / p_lower_[j];
  }
}

Exp3Meta::Exp3Meta(int learner_count, std::int64_t horizon)
    : Exp3Meta(learner_count,
               std::sqrt(std::log(static_cast<double>(learner_count)) /
                         (static_cast<double>(learner_count) *
                          static_cast<double>(horizon))),
               0.1 / std::sqrt(static_cast<double>(horizon))) {}

Exp3Meta::Exp3Meta(int learner_count, double eta, double gamma)
    : M_(learner_count), eta_(eta), gamma_(gamma), cum_rewards_(learner_count, 0.0) {
  if (learner_count < 1) throw ConfigError("exp3: learner count must be >= 1");
  if (eta < 0) throw ConfigError("exp3: eta must be >= 0");
  if (gamma < 0 || gamma > 1) throw ConfigError("exp3: gamma must lie in [0,1]");
}

std::vector<double> Exp3Meta::distribution() const {
  double max_r = *std::max_element(cum_rewards_.begin(), cum_rewards_.end());
  std::vector<double> p(M_);
  double sum = 0.0;
  for (int i = 0; i < M_; ++i) {
    p[i] = std::exp(eta_ * (cum_rewards_[i] - max_r));
    sum += p[i];
  }
  for (int i = 0; i < M_; ++i)
    p[i] = (1.0 - gamma_) * p[i] / sum + gamma_ / M_;
  return p;
}

int Exp3Meta::choose(Rng& rng) {
  std::vector<double> p = distribution();
  std::discrete_distribution<int> dist(p.begin(), p.end());
  last_choice_ = dist(rng);
  last_prob_ = p[static_cast<std::size_t>(last_choice_)];
  return last_choice_;
}

void Exp3Meta::observe(int learner, double reward) {
  double prob = learner == last_choice_
                    ? last_prob_
                    : distribution()[static_cast<std::size_t>(learner)];
  cum_rewards_[static_cast<std::size_t>(learner)] += reward / prob;
}

int greedy_meta_select(const std::vector<std::int64_t>& counts,
                       const std::vector<double>& sums) {
  const int m = static_cast<int>(counts.size());
  for (int i = 0; i < m; ++i)
    if (counts[i] == 0) return i;
  int best = 0;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    double mean = sums[i] / static_cast<double>(counts[i]);
    if (mean > best_mean) {
      best_mean = mean;
      best = i;
    }
  }
  return best;
}

int UcbMeta::choose(Rng&) { return ucb_index_select(counts_, sums_, c_, delta_); }

RbGridMeta::RbGridMeta(std::vector<double> candidates, double delta, double conc_c)
    : candidates_(std::move(candidates)),
      active_(candidates_.size(), 1),
      counts_(candidates_.size(), 0),
      sums_(candidates_.size(), 0.0),
      delta_(delta),
      conc_c_(conc_c) {
  if (candidates_.empty()) throw ConfigError("rb_grid: candidate list must be non-empty");
  for (double d : candidates_)
    if (d <= 0) throw ConfigError("rb_grid: candidates must be positive");
}

int RbGridMeta::choose(Rng&) {
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (!active_[i]) continue;
    double value = candidates_[i] * std::sqrt(static_cast<double>(counts_[i]));
    if (value < best_value) {
      best_value = value;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void RbGridMeta::observe(int learner, double reward) {
  auto i = static_cast<std::size_t>(learner);
  if (!active_[i]) throw ContractViolation("rb_grid: update for an inactive copy");
  counts_[i] += 1;
  sums_[i] += reward;

  const int m = static_cast<int>(candidates_.size());
  double best_lcb = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int j = 0; j < m; ++j) {
    if (!active_[j] || counts_[j] < 1) continue;
    any = true;
    double nj = static_cast<double>(counts_[j]);
    best_lcb = std::max(best_lcb, sums_[j] / nj -
                                      conc_width(counts_[j], m, delta_, conc_c_));
  }
  if (!any) return;

  double ni = static_cast<double>(counts_[i]);
  double lhs = sums_[i] / ni + candidates_[i] * std::sqrt(ni) / ni +
               conc_width(counts_[i], m, delta_, conc_c_);
  if (lhs < best_lcb) {
    active_[i] = 0;
    if (std::none_of(active_.begin(), active_.end(), [](char a) { return a != 0; })) {
      // Never run out of copies: fall back to the most conservative bound.
      auto widest = std::max_element(candidates_.begin(), candidates_.end());
      active_[static_cast<std::size_t>(widest - candidates_.begin())] = 1;
    }
  }
}

}  // namespace banditms
