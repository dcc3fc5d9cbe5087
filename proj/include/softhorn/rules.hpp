#pragma once

#include <string>
#include <vector>

#include "softhorn/atoms.hpp"

namespace softhorn {

// Weighted Horn clause. confidence == 1.0 is the hard tier; anything in
// (0,1) is soft and maps to a log-odds weight at grounding time.
struct Rule {
  std::string id;
  double confidence = 1.0;
  std::vector<Atom> body;  // nonempty; may contain comparison atoms
  Atom head;               // relational, never a comparison

  bool hard() const { return confidence >= 1.0; }
};

struct RuleSet {
  std::vector<Rule> rules;
  Registry registry;

  const Rule* find(const std::string& id) const {
    for (const Rule& r : rules)
      if (r.id == id) return &r;
    return nullptr;
  }
};

// log-odds mapping: a single triggered soft rule of confidence c then
// yields P(head) = e^w / (1 + e^w) = c. Hard rules do not pass through
// here.
double confidence_to_weight(double c);

std::string format_rule(const Rule& r, const Registry& reg);

// Distinct variables of a rule in first-appearance order (body scan, then
// head; the head cannot introduce fresh variables).
std::vector<std::string> rule_variables(const Rule& r);

}  // namespace softhorn
