#pragma once

#include <map>
#include <string>
#include <vector>

#include "softhorn/atoms.hpp"

namespace softhorn {

struct PredictionRecord {
  std::string example_id;
  double predicted_prob = 0.5;  // model probability of True
  double target_weight = 0.0;   // dataset weight
  bool target_label = false;
};

struct MetricsReport {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::map<double, double> ca_at_k;
  std::size_t count = 0;
};

// -(w ln f + (1-w) ln(1-f)); f is clamped into [1e-7, 1-1e-7]
double wbce_loss(double f, double w);

// d/df of wbce_loss: -w/f + (1-w)/(1-f)
double wbce_grad(double f, double w);

double batch_risk(const std::vector<PredictionRecord>& records);

// fraction of records with |target - predicted| strictly below k
double ca_at_k(const std::vector<PredictionRecord>& records, double k);

// predicted label is predicted_prob >= 0.5; F1 with True positive class;
// the empty-positives corner (no predicted and no actual positives)
// reports 1.0
std::pair<double, double> accuracy_f1(
    const std::vector<PredictionRecord>& records);

MetricsReport compute_metrics(const std::vector<PredictionRecord>& records,
                              const std::vector<double>& thresholds);

}  // namespace softhorn
