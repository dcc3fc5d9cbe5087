#pragma once

#include <map>
#include <string>
#include <vector>

#include "softhorn/rules.hpp"
#include "softhorn/rng.hpp"

namespace softhorn {

// Sentence patterns for one predicate. Facts read "The child of Eve is
// David." while rule heads invert to "the first person is the spouse of
// the second person"; both polarities of both shapes are kept.
struct TemplateEntry {
  std::string fact_pos;
  std::string fact_neg;
  std::string head_pos;
  std::string head_neg;
};

class TemplateRegistry {
 public:
  // Default patterns for every base predicate in the registry:
  //   fact:  "The <p> of {subject} is {object}."  (+ "not" when negated)
  //   head:  "{subject} is the <p> of {object}"
  explicit TemplateRegistry(const Registry& reg);

  // Overrides, one per line:
  //   pred <TAB> fact_pos <TAB> fact_neg [<TAB> head_pos <TAB> head_neg]
  void load_overrides(const std::string& text);

  const TemplateEntry& entry(const std::string& base_name) const;

  // distinct atoms must render to distinct sentences
  void check_injective() const;

 private:
  std::map<std::string, TemplateEntry> entries_;
};

struct VerbalContext {
  std::vector<Atom> facts;
  std::vector<Rule> rules;
  // per rule, indices of the facts that instantiate its body; computed
  // from the grounding when absent
  std::vector<std::vector<int>> trigger_idx;
};

std::string verbalize_fact(const Atom& fact, const Registry& reg,
                           const TemplateRegistry& templates);

std::string verbalize_rule(const Rule& rule, const Registry& reg,
                           const TemplateRegistry& templates);

// Sentence order follows the generated layout: facts that trigger no rule
// first, then each rule followed by the facts that fire it. The optional
// rng shuffles the sentences instead.
std::string assemble_context(const VerbalContext& ctx, const Registry& reg,
                             const TemplateRegistry& templates,
                             Rng* shuffle_rng = nullptr);

struct Prompt {
  std::string context_text;
  std::string hypothesis_text;
  std::string encoded;
};

Prompt assemble_prompt(const std::string& context_text,
                       const std::string& hypothesis_text);

// Inverse of assemble_prompt on well-formed encodings.
Prompt split_prompt(const std::string& encoded);

// Fact indices instantiating each rule's body (first firing instance per
// rule, scanning facts in stored order).
std::vector<std::vector<int>> compute_trigger_indices(
    const std::vector<Atom>& facts, const std::vector<Rule>& rules,
    const Registry& reg);

}  // namespace softhorn
