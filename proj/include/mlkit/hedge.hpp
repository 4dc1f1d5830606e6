#pragma once

#include <cstddef>
#include <vector>

namespace mlkit::hedge {

enum class LossKind { log, zero_one };

struct ExpertPool {
  std::vector<double> weights;  // strictly positive, sums to 1
  double eta = 1.0;             // > 0
  LossKind loss_kind = LossKind::log;
  std::size_t size() const { return weights.size(); }
};

// Per-round losses are capped here so hard 0/1 predictions keep every weight
// strictly positive.
inline constexpr double kLogLossCap = 35.0;

// Uniform weights when prior is empty, otherwise the normalized prior.
ExpertPool init_pool(std::size_t k, const std::vector<double>& prior, double eta, LossKind kind);

// log: weighted average of the predictions (Bayes mixture).
// zero_one: weighted vote over thresholded predictions; 0.5 predictions split
// their weight, an exact tie merges to 0.5.
double merge(const ExpertPool& pool, const std::vector<double>& predictions);

// w_i <- w_i * exp(-eta * loss_i), renormalized; log-space for stability.
ExpertPool update(const ExpertPool& pool, const std::vector<double>& losses);

// -ln |p - (1 - outcome)|, capped at kLogLossCap.
double log_loss(double prediction, int outcome);
// Thresholded mismatch; a 0.5 prediction always costs 0.5.
double zero_one_loss(double prediction, int outcome);

struct Round {
  std::vector<double> predictions;  // one per expert, in [0,1]
  int outcome = 0;                  // 0 or 1
};

struct RoundRecord {
  double merged = 0.0;
  double merged_loss = 0.0;
  std::vector<double> losses;   // per expert
  std::vector<double> weights;  // after the update
};

struct Trace {
  std::vector<RoundRecord> rounds;
  ExpertPool final_pool;
};

// Per round: merge, observe the outcome, score every expert, update weights.
Trace run_stream(const ExpertPool& pool, const std::vector<Round>& rounds);

}  // namespace mlkit::hedge
