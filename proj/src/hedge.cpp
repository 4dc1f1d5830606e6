#include "mlkit/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlkit::hedge {

ExpertPool init_pool(std::size_t k, const std::vector<double>& prior, double eta, LossKind kind) {
  if (k == 0) throw std::runtime_error("need at least one expert");
  if (!(eta > 0.0)) throw std::runtime_error("eta must be > 0");
  ExpertPool pool;
  pool.eta = eta;
  pool.loss_kind = kind;
  if (prior.empty()) {
    pool.weights.assign(k, 1.0 / static_cast<double>(k));
  } else {
    if (prior.size() != k) throw std::runtime_error("prior length mismatch");
    double sum = 0.0;
    for (double w : prior) {
      if (!(w > 0.0)) throw std::runtime_error("nonpositive weight");
      sum += w;
    }
    pool.weights.resize(k);
    for (std::size_t i = 0; i < k; ++i) pool.weights[i] = prior[i] / sum;
  }
  return pool;
}

namespace {

void check_predictions(const ExpertPool& pool, const std::vector<double>& predictions) {
  if (predictions.size() != pool.size()) throw std::runtime_error("prediction length mismatch");
  for (double p : predictions)
    if (!(p >= 0.0 && p <= 1.0)) throw std::runtime_error("prediction outside [0,1]");
}

}  // namespace

double merge(const ExpertPool& pool, const std::vector<double>& predictions) {
  check_predictions(pool, predictions);
  if (pool.loss_kind == LossKind::log) {
    double s = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) s += pool.weights[i] * predictions[i];
    return s;
  }
  double ones = 0.0, zeros = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (predictions[i] > 0.5)
      ones += pool.weights[i];
    else if (predictions[i] < 0.5)
      zeros += pool.weights[i];
    else {
      ones += pool.weights[i] / 2.0;
      zeros += pool.weights[i] / 2.0;
    }
  }
  if (ones > zeros) return 1.0;
  if (zeros > ones) return 0.0;
  return 0.5;
}

ExpertPool update(const ExpertPool& pool, const std::vector<double>& losses) {
  if (losses.size() != pool.size()) throw std::runtime_error("loss length mismatch");
  for (double l : losses) {
    if (l < 0.0) throw std::runtime_error("negative loss");
    if (!std::isfinite(l)) throw std::runtime_error("loss must be finite");
  }
  std::vector<double> lw(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    lw[i] = std::log(pool.weights[i]) - pool.eta * losses[i];
  double mx = *std::max_element(lw.begin(), lw.end());
  ExpertPool next = pool;
  double sum = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    next.weights[i] = std::exp(lw[i] - mx);
    sum += next.weights[i];
  }
  for (double& w : next.weights) w /= sum;
  return next;
}

double log_loss(double prediction, int outcome) {
  double mass = outcome == 1 ? prediction : 1.0 - prediction;
  if (mass <= 0.0) return kLogLossCap;
  return std::min(kLogLossCap, -std::log(mass));
}

double zero_one_loss(double prediction, int outcome) {
  if (prediction == 0.5) return 0.5;
  int guess = prediction > 0.5 ? 1 : 0;
  return guess == outcome ? 0.0 : 1.0;
}

Trace run_stream(const ExpertPool& pool, const std::vector<Round>& rounds) {
  Trace trace;
  trace.final_pool = pool;
  for (const Round& r : rounds) {
    if (r.outcome != 0 && r.outcome != 1) throw std::runtime_error("outcome must be 0 or 1");
    RoundRecord rec;
    rec.merged = merge(trace.final_pool, r.predictions);
    rec.losses.resize(r.predictions.size());
    for (std::size_t i = 0; i < r.predictions.size(); ++i)
      rec.losses[i] = trace.final_pool.loss_kind == LossKind::log
                          ? log_loss(r.predictions[i], r.outcome)
                          : zero_one_loss(r.predictions[i], r.outcome);
    rec.merged_loss = trace.final_pool.loss_kind == LossKind::log
                          ? log_loss(rec.merged, r.outcome)
                          : zero_one_loss(rec.merged, r.outcome);
    trace.final_pool = update(trace.final_pool, rec.losses);
    rec.weights = trace.final_pool.weights;
    trace.rounds.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace mlkit::hedge
