#include "softhorn/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace softhorn {

namespace {

constexpr double kEps = 1e-7;

double clamp_prob(double f) {
  if (f < kEps || f > 1.0 - kEps) {
    static bool warned = false;
    if (!warned) {
      std::fprintf(stderr,
                   "[metrics] probability clamped to [%g, %g] for the loss\n",
                   kEps, 1.0 - kEps);
      warned = true;
    }
    return f < kEps ? kEps : 1.0 - kEps;
  }
  return f;
}

void check_weight(double w) {
  if (!(w >= 0.0 && w <= 1.0))
    throw SemanticsError("target weight outside [0,1]: " + std::to_string(w));
}

}  // namespace

double wbce_loss(double f, double w) {
  check_weight(w);
  f = clamp_prob(f);
  return -(w * std::log(f) + (1.0 - w) * std::log(1.0 - f));
}

double wbce_grad(double f, double w) {
  check_weight(w);
  f = clamp_prob(f);
  return -w / f + (1.0 - w) / (1.0 - f);
}

double batch_risk(const std::vector<PredictionRecord>& records) {
  if (records.empty()) throw SemanticsError("empty batch");
  double sum = 0.0;
  for (const PredictionRecord& r : records)
    sum += wbce_loss(r.predicted_prob, r.target_weight);
  return sum / static_cast<double>(records.size());
}

double ca_at_k(const std::vector<PredictionRecord>& records, double k) {
  if (records.empty()) throw SemanticsError("empty records");
  if (!(k > 0.0)) throw SemanticsError("threshold k must be positive");
  std::size_t hits = 0;
  for (const PredictionRecord& r : records)
    if (std::abs(r.target_weight - r.predicted_prob) < k) ++hits;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::pair<double, double> accuracy_f1(
    const std::vector<PredictionRecord>& records) {
  if (records.empty()) throw SemanticsError("empty records");
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (const PredictionRecord& r : records) {
    bool pred = r.predicted_prob >= 0.5;
    if (pred == r.target_label) ++correct;
    if (pred && r.target_label) ++tp;
    if (pred && !r.target_label) ++fp;
    if (!pred && r.target_label) ++fn;
  }
  double accuracy =
      static_cast<double>(correct) / static_cast<double>(records.size());
  double f1;
  if (tp == 0 && fp == 0 && fn == 0) {
    // nothing predicted positive and nothing is positive
    std::fprintf(stderr, "[metrics] no positives on either side; F1 = 1.0\n");
    f1 = 1.0;
  } else if (tp == 0) {
    f1 = 0.0;
  } else {
    double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    f1 = 2.0 * precision * recall / (precision + recall);
  }
  return {accuracy, f1};
}

MetricsReport compute_metrics(const std::vector<PredictionRecord>& records,
                              const std::vector<double>& thresholds) {
  MetricsReport report;
  auto [acc, f1] = accuracy_f1(records);
  report.accuracy = acc;
  report.f1 = f1;
  for (double k : thresholds) report.ca_at_k[k] = ca_at_k(records, k);
  report.count = records.size();
  return report;
}

}  // namespace softhorn
