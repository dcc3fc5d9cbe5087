#include <cmath>

#include "doctest.h"
#include "softhorn/metrics.hpp"
#include "softhorn/toy_model.hpp"

using namespace softhorn;

namespace {

std::vector<PredictionRecord> records_from(
    const std::vector<std::pair<double, double>>& pred_target) {
  std::vector<PredictionRecord> out;
  int i = 0;
  for (auto [p, w] : pred_target) {
    PredictionRecord r;
    r.example_id = "e" + std::to_string(i++);
    r.predicted_prob = p;
    r.target_weight = w;
    r.target_label = w >= 0.5;
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("wbce_loss boundary and anchor values") {
  CHECK(wbce_loss(0.3, 1.0) == doctest::Approx(-std::log(0.3)).epsilon(1e-12));
  CHECK(wbce_loss(0.7, 0.7) == doctest::Approx(0.6109).epsilon(1e-4 / 0.6109));
  CHECK(wbce_loss(0.7, 0.7) < wbce_loss(0.6, 0.7));
  CHECK(wbce_loss(0.7, 0.7) < wbce_loss(0.8, 0.7));
  CHECK(std::isfinite(wbce_loss(0.0, 0.5)));  // clamped
  CHECK(std::isfinite(wbce_loss(1.0, 0.5)));
  CHECK_THROWS_AS(wbce_loss(0.5, 1.5), SemanticsError);
}

TEST_CASE("wbce_loss has its unique minimum at f = w") {
  for (double w = 0.05; w < 1.0; w += 0.05) {
    double best_f = -1.0, best = 1e18;
    for (double f = 0.005; f < 1.0; f += 0.005) {
      double v = wbce_loss(f, w);
      if (v < best) {
        best = v;
        best_f = f;
      }
    }
    CHECK(best_f == doctest::Approx(w).epsilon(0.01));
  }
}

TEST_CASE("wbce_grad matches the finite-difference oracle") {
  CHECK(wbce_grad(0.7, 0.7) == 0.0);
  CHECK(wbce_grad(0.5, 0.5) == 0.0);
  const double h = 1e-6;
  for (int fi = 1; fi <= 9; ++fi) {
    for (int wi = 1; wi <= 9; ++wi) {
      double f = fi / 10.0, w = wi / 10.0;
      double numeric = (wbce_loss(f + h, w) - wbce_loss(f - h, w)) / (2 * h);
      double analytic = wbce_grad(f, w);
      double rel = std::abs(numeric - analytic) /
                   std::max(1.0, std::abs(analytic));
      CHECK(rel <= 1e-6);
    }
  }
}

TEST_CASE("batch_risk averages the per-example loss") {
  auto one = records_from({{0.6, 0.7}});
  CHECK(batch_risk(one) == doctest::Approx(wbce_loss(0.6, 0.7)).epsilon(1e-12));
  auto two = records_from({{0.6, 0.7}, {0.6, 0.7}});
  CHECK(batch_risk(two) == doctest::Approx(batch_risk(one)).epsilon(1e-12));
  auto binary = records_from({{0.8, 1.0}, {0.3, 0.0}});
  double plain = (-std::log(0.8) - std::log(0.7)) / 2.0;
  CHECK(batch_risk(binary) == doctest::Approx(plain).epsilon(1e-12));
  CHECK_THROWS_AS(batch_risk({}), SemanticsError);
}

TEST_CASE("ca_at_k counts strict misses") {
  auto rec = records_from(
      {{0.5, 0.52}, {0.5, 0.59}, {0.5, 0.61}, {0.5, 1.0}});  // errors .02 .09 .11 .5
  CHECK(ca_at_k(rec, 0.1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ca_at_k(rec, 2.0) == 1.0);
  auto exact = records_from({{0.3, 0.3}, {0.9, 0.9}});
  CHECK(ca_at_k(exact, 0.0001) == 1.0);

  double prev = 0.0;
  for (double k = 0.01; k <= 1.0; k += 0.01) {
    double v = ca_at_k(rec, k);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("accuracy and F1 on small confusion matrices") {
  auto perfect = records_from({{0.9, 1.0}, {0.1, 0.0}});
  auto [acc1, f11] = accuracy_f1(perfect);
  CHECK(acc1 == 1.0);
  CHECK(f11 == 1.0);

  // predictions T,T,F,F against targets T,F,T,F
  auto mixed = records_from({{0.9, 1.0}, {0.9, 0.0}, {0.1, 1.0}, {0.1, 0.0}});
  auto [acc2, f12] = accuracy_f1(mixed);
  CHECK(acc2 == doctest::Approx(0.5));
  CHECK(f12 == doctest::Approx(0.5));

  auto all_false = records_from({{0.1, 0.0}, {0.2, 0.0}});
  auto [acc3, f13] = accuracy_f1(all_false);
  CHECK(acc3 == 1.0);
  CHECK(f13 == 1.0);  // degenerate convention
}

TEST_CASE("metrics are permutation invariant") {
  auto rec = records_from(
      {{0.9, 1.0}, {0.2, 0.0}, {0.7, 0.64}, {0.4, 0.55}, {0.5, 0.3}});
  MetricsReport a = compute_metrics(rec, {0.1, 0.05});
  std::reverse(rec.begin(), rec.end());
  MetricsReport b = compute_metrics(rec, {0.1, 0.05});
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.f1 == b.f1);
  CHECK(a.ca_at_k == b.ca_at_k);
}

namespace {

ExampleRecord toy_record(const std::string& id, const std::string& cls,
                         double weight) {
  ExampleRecord r;
  r.id = id;
  r.context = "ctx";
  r.hypothesis = "hyp";
  r.weight = weight;
  r.label = weight >= 0.5;
  r.rule_ids = {"r1"};
  r.hyp_class = cls;
  return r;
}

}  // namespace

TEST_CASE("toy model converges to group mean weights on indicators") {
  std::vector<ExampleRecord> data;
  std::map<std::string, double> target = {
      {"h1", 1.0}, {"h2", 0.0}, {"h3", 0.7}, {"h4", 0.3}, {"h5", 0.2}};
  int n = 0;
  for (const auto& [cls, w] : target)
    for (int i = 0; i < 40; ++i)
      data.push_back(toy_record("t" + std::to_string(n++), cls, w));

  ToyConfig cfg;
  cfg.token_features = false;
  cfg.learning_rate = 1.0;
  cfg.epochs = 8000;
  TrainResult result = train_toy(data, cfg);

  std::map<std::string, std::pair<double, int>> sums;
  for (const ExampleRecord& r : data) {
    auto& s = sums[r.hyp_class];
    s.first += result.model.predict(r, cfg);
    s.second += 1;
  }
  for (const auto& [cls, w] : target) {
    double mean = sums[cls].first / sums[cls].second;
    CHECK(std::abs(mean - w) <= 0.02);
  }
  CHECK(result.final_risk < 1.0);
  CHECK(std::isfinite(result.final_risk));
}

TEST_CASE("toy training is deterministic and zero epochs is the identity") {
  std::vector<ExampleRecord> data;
  for (int i = 0; i < 20; ++i)
    data.push_back(toy_record("d" + std::to_string(i), i % 2 ? "h1" : "h2",
                              i % 2 ? 1.0 : 0.0));
  ToyConfig cfg;
  cfg.epochs = 50;
  TrainResult a = train_toy(data, cfg);
  TrainResult b = train_toy(data, cfg);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.final_risk == b.final_risk);

  ToyConfig none;
  none.epochs = 0;
  TrainResult zero = train_toy(data, none);
  for (const auto& [name, w] : zero.model.weights) CHECK(w == 0.0);
  CHECK(zero.model.predict(data[0], none) == 0.5);
  CHECK(zero.epochs_run == 0);
}
