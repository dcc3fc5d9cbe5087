#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "softhorn/rules.hpp"

namespace softhorn {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A ground rule instance. Comparison atoms are evaluated during grounding
// and never appear here. head < 0 marks an integrity constraint
// (falsum <- body), used for p/negp mutual exclusion.
struct GroundInstance {
  enum Source { kRule = 0, kExclusion = 1 };

  Source source = kRule;
  int rule_index = -1;  // index into the rule list for source == kRule
  bool hard = true;
  double weight = 0.0;  // log-odds weight of soft instances
  std::vector<int> body;
  int head = -1;

  bool constraint() const { return head < 0; }
};

// Grounding of a (rules, facts) context over the constants that occur in
// the facts. Only instances whose body is derivable (forward closure from
// the facts) are kept: anything else is vacuously satisfied by every
// stable model and cancels in the normalization. The Herbrand base is the
// closure plus the polarity complement of every relational atom in it.
class GroundProgram {
 public:
  const Registry& registry() const { return registry_; }
  const std::vector<Rule>& rules() const { return rules_; }

  std::size_t atom_count() const { return atoms_.size(); }
  const Atom& atom(int id) const { return atoms_.at(id); }
  std::optional<int> find_atom(const Atom& a) const;

  const std::vector<int>& facts() const { return fact_ids_; }
  bool is_fact(int id) const { return is_fact_.at(id); }
  bool in_closure(int id) const { return in_closure_.at(id); }
  bool derivable(const Atom& a) const;

  // closure atoms that are not facts, in interning order; these are the
  // only atoms that can distinguish stable models
  const std::vector<int>& candidates() const { return candidates_; }

  const std::vector<GroundInstance>& instances() const { return instances_; }
  const std::set<std::string>& domain() const { return domain_; }

  // ground rule instances (source == kRule), i.e. the triggered rules
  int triggered_count() const;

  std::string describe_atom(int id) const {
    return format_atom(atoms_.at(id), registry_);
  }

 private:
  friend GroundProgram ground(const RuleSet&, const std::vector<Atom>&);

  int intern(const Atom& a);

  Registry registry_;  // owned copy: programs outlive their rule sets
  std::vector<Rule> rules_;
  std::vector<Atom> atoms_;
  std::map<Atom, int> atom_ids_;
  std::vector<int> fact_ids_;
  std::vector<bool> is_fact_;
  std::vector<bool> in_closure_;
  std::vector<int> candidates_;
  std::vector<GroundInstance> instances_;
  std::set<std::string> domain_;
};

GroundProgram ground(const RuleSet& rules, const std::vector<Atom>& facts);

}  // namespace softhorn
