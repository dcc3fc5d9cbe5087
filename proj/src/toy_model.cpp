#include "softhorn/toy_model.hpp"

#include <cctype>
#include <cmath>

namespace softhorn {

namespace {

void add_tokens(const std::string& text, const std::string& prefix,
                int hash_dim, ToyFeatures& out) {
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::uint64_t bucket = Rng::hash_str(token) % static_cast<std::uint64_t>(
                                                      hash_dim);
    out[prefix + std::to_string(bucket)] = 1.0;  // presence, not counts
    token.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      flush();
  }
  flush();
}

}  // namespace

ToyFeatures featurize(const ExampleRecord& r, const ToyConfig& cfg) {
  ToyFeatures f;
  f["bias"] = 1.0;
  std::string rules;
  for (const std::string& id : r.rule_ids) {
    if (!rules.empty()) rules += "+";
    rules += id;
  }
  f["rc:" + rules + ":" + r.hyp_class] = 1.0;
  f["cls:" + r.hyp_class] = 1.0;
  if (cfg.token_features) {
    add_tokens(r.context, "ctx:", cfg.hash_dim, f);
    add_tokens(r.hypothesis, "hyp:", cfg.hash_dim, f);
  }
  return f;
}

double ToyModel::predict(const ToyFeatures& features) const {
  double z = 0.0;
  for (const auto& [name, value] : features) {
    auto it = weights.find(name);
    if (it != weights.end()) z += it->second * value;
  }
  return 1.0 / (1.0 + std::exp(-z));
}

TrainResult train_toy(const std::vector<ExampleRecord>& dataset,
                      const ToyConfig& cfg) {
  if (dataset.empty()) throw SemanticsError("empty training set");
  TrainResult result;

  // intern feature names once and train on dense index vectors
  std::map<std::string, int> index;
  std::vector<std::vector<std::pair<int, double>>> rows;
  rows.reserve(dataset.size());
  for (const ExampleRecord& r : dataset) {
    ToyFeatures f = featurize(r, cfg);
    std::vector<std::pair<int, double>> row;
    row.reserve(f.size());
    for (const auto& [name, value] : f) {
      auto [it, inserted] = index.emplace(name, static_cast<int>(index.size()));
      row.emplace_back(it->second, value);
    }
    rows.push_back(std::move(row));
  }

  std::vector<double> w(index.size(), 0.0), grad(index.size(), 0.0);
  const double inv_m = 1.0 / static_cast<double>(dataset.size());
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double z = 0.0;
      for (const auto& [j, v] : rows[i]) z += w[j] * v;
      double f = 1.0 / (1.0 + std::exp(-z));
      // d(wbce)/dz for a logistic output collapses to f - w
      double gz = (f - dataset[i].weight) * inv_m;
      if (!std::isfinite(gz))
        throw SemanticsError("non-finite loss gradient at epoch " +
                             std::to_string(epoch));
      for (const auto& [j, v] : rows[i]) grad[j] += gz * v;
    }
    for (std::size_t j = 0; j < w.size(); ++j)
      w[j] -= cfg.learning_rate * grad[j];
    ++result.epochs_run;
  }

  for (const auto& [name, j] : index) result.model.weights[name] = w[j];

  double risk = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double z = 0.0;
    for (const auto& [j, v] : rows[i]) z += w[j] * v;
    risk += wbce_loss(1.0 / (1.0 + std::exp(-z)), dataset[i].weight);
  }
  result.final_risk = risk * inv_m;
  if (!std::isfinite(result.final_risk))
    throw SemanticsError("non-finite final risk after training");
  return result;
}

double toy_batch_risk(const ToyModel& model,
                      const std::vector<ExampleRecord>& dataset,
                      const ToyConfig& cfg) {
  if (dataset.empty()) throw SemanticsError("empty batch");
  double risk = 0.0;
  for (const ExampleRecord& r : dataset)
    risk += wbce_loss(model.predict(r, cfg), r.weight);
  return risk / static_cast<double>(dataset.size());
}

}  // namespace softhorn
