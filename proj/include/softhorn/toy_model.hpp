#pragma once

#include "softhorn/jsonl.hpp"
#include "softhorn/metrics.hpp"

namespace softhorn {

// Logistic model over sparse named features; stands in for a real
// sequence classifier so the loss contract can be exercised end to end.
struct ToyConfig {
  double learning_rate = 0.1;
  int epochs = 2000;
  std::uint64_t seed = 0;  // kept for interface stability; training is
                           // full-batch and needs no randomness
  bool token_features = true;
  int hash_dim = 512;
};

using ToyFeatures = std::map<std::string, double>;

// rule-id x hypothesis-class indicator plus hashed context/hypothesis
// unigram presence
ToyFeatures featurize(const ExampleRecord& r, const ToyConfig& cfg);

class ToyModel {
 public:
  double predict(const ToyFeatures& features) const;
  double predict(const ExampleRecord& r, const ToyConfig& cfg) const {
    return predict(featurize(r, cfg));
  }

  std::map<std::string, double> weights;
};

struct TrainResult {
  ToyModel model;
  double final_risk = 0.0;
  int epochs_run = 0;
};

// Deterministic full-batch gradient descent on the weighted
// cross-entropy risk.
TrainResult train_toy(const std::vector<ExampleRecord>& dataset,
                      const ToyConfig& cfg);

double toy_batch_risk(const ToyModel& model,
                      const std::vector<ExampleRecord>& dataset,
                      const ToyConfig& cfg);

}  // namespace softhorn
