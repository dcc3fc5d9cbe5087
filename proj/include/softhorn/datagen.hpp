#pragma once

#include <array>
#include <memory>

#include "softhorn/solver.hpp"
#include "softhorn/rng.hpp"

namespace softhorn {

enum class FactFormat { kNames, kLetters };

struct GenConfig {
  int n = 800;                      // target example count
  int m = 5;                        // cap on facts per context
  std::map<std::string, std::vector<std::string>> pools;
  std::uint64_t seed = 0;
  FactFormat fact_format = FactFormat::kNames;
  std::array<double, 3> split_ratios = {0.8, 0.1, 0.1};
  SolverLimits limits;

  void validate() const;
};

// Built-in constant pools: 20 person names, 10 company names and the year
// range 1800..2000; the letters format swaps non-numeric pools for A..Z.
std::map<std::string, std::vector<std::string>> default_pools(
    FactFormat format);

// One generated reasoning scene: facts plus the rules in play, with the
// facts that instantiate each rule's body recorded for verbalization.
struct GenContext {
  std::vector<Atom> facts;
  std::vector<Rule> rules;
  std::vector<std::vector<int>> trigger_idx;
};

struct Example {
  std::string id;
  std::shared_ptr<const GenContext> context;
  Atom hypothesis;
  double weight = 0.0;
  bool label = false;
  std::string hyp_class;  // h1..h8, overlap_pos/neg, chain_concl/alter
  std::vector<std::string> rule_ids;
  int depth = 0;
  int triggered_count = 0;
  int context_index = 0;  // split granularity
};

struct GenStats {
  std::size_t tie_labels = 0;  // weight exactly 0.5, labeled True
  std::size_t contexts = 0;
};

// Random facts over the rule's body and head predicates (polarity flipped
// with probability one half), topped up with a full instantiation of the
// rule body so the rule fires at least once. Returns the facts, the
// indices of the triggering facts and the triggered conclusion.
struct FactDraw {
  std::vector<Atom> facts;
  std::vector<int> trigger;
  Atom conclusion;
};
FactDraw gen_facts(const Rule& rule, int m,
                   const std::map<std::string, std::vector<std::string>>& pools,
                   const Registry& reg, Rng& rng);

// Eight hypotheses per context: a sampled fact, a triggered conclusion,
// an underivable atom, an underivable head atom, and their alterations.
std::vector<Example> gen_single_rule(const Rule& rule, const Registry& reg,
                                     const GenConfig& cfg,
                                     GenStats* stats = nullptr);

// Per-rule single data plus, for every subset of two or more rules, a
// context where exactly those rules fire on a shared conclusion pair and
// both polarities of the conclusion are emitted:
//   8|R| + 2 * sum_{x>=2} C(|R|,x)  examples per batch.
std::vector<Example> gen_overlap(const std::vector<Rule>& rules,
                                 const Registry& reg, const GenConfig& cfg,
                                 GenStats* stats = nullptr);
std::size_t overlap_batch_size(std::size_t rule_count);

// Chains of `depth` rules, each head feeding the next body; emits the
// conclusion and its alteration at every depth 0..D plus four
// closed-world hypotheses per context.
std::vector<Example> gen_chain(const std::vector<Rule>& pool, int depth,
                               const Registry& reg, const GenConfig& cfg,
                               GenStats* stats = nullptr);

struct DatasetSplit {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<Example> test;
};

// Seeded shuffle of whole contexts, then a contiguous partition; all
// hypotheses of one context land in the same split.
DatasetSplit split_dataset(std::vector<Example> examples,
                           const std::array<double, 3>& ratios, Rng& rng);

// BFS round at which each closure atom becomes derivable (facts at 0);
// equals the minimal number of chained rule applications.
std::map<int, int> derivation_depths(const GroundProgram& p);

}  // namespace softhorn
