#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softhorn/rng.hpp"

namespace softhorn {

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PredId = int;

// All relational predicates are binary: a subject slot and an object slot.
// Negative polarity is encoded as a separate predicate (negp) tied to its
// positive base. Comparison predicates (<, >) only ever appear in rule
// bodies and are resolved at grounding time.
struct PredicateSig {
  std::string name;
  std::array<std::string, 2> arg_types;
  bool symmetric = false;
  bool negative_form = false;
  std::string base;  // positive counterpart when negative_form
  bool comparison = false;
};

struct Term {
  bool is_var = false;
  std::string text;

  static Term var(std::string name) { return Term{true, std::move(name)}; }
  static Term constant(std::string value) {
    return Term{false, std::move(value)};
  }

  friend bool operator==(const Term& a, const Term& b) {
    return a.is_var == b.is_var && a.text == b.text;
  }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.is_var != b.is_var) return a.is_var < b.is_var;
    return a.text < b.text;
  }
};

struct Atom {
  PredId pred = -1;
  std::array<Term, 2> args;

  bool ground() const { return !args[0].is_var && !args[1].is_var; }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.pred != b.pred) return a.pred < b.pred;
    if (!(a.args[0] == b.args[0])) return a.args[0] < b.args[0];
    return a.args[1] < b.args[1];
  }
};

// Predicate table with symmetry/type/polarity metadata. Immutable once
// finalized; every positive relational predicate is guaranteed a negative
// counterpart (synthesized as "neg<name>" when the registry file does not
// list one), so negate() is total on relational atoms.
class Registry {
 public:
  Registry();

  PredId add(PredicateSig sig);
  void finalize();

  PredId find(const std::string& name) const;
  PredId require(const std::string& name) const;
  const PredicateSig& sig(PredId id) const { return preds_.at(id); }
  PredId counterpart(PredId id) const;  // p <-> negp
  std::size_t size() const { return preds_.size(); }

  PredId less_than() const { return lt_; }
  PredId greater_than() const { return gt_; }

  bool finalized() const { return finalized_; }

  // All relational (non-comparison) predicate ids, positive forms only.
  std::vector<PredId> positive_relational() const;

 private:
  std::vector<PredicateSig> preds_;
  std::map<std::string, PredId> by_name_;
  std::vector<PredId> counterpart_;
  PredId lt_ = -1;
  PredId gt_ = -1;
  bool finalized_ = false;
};

// True when the spelling would lex as a variable in the rule DSL
// (uppercase letter followed only by digits: A, B, C2, ...).
bool spells_like_variable(const std::string& s);

std::string format_term(const Term& t);
std::string format_atom(const Atom& a, const Registry& reg);

// Complementary polarity form, same arguments. Comparison atoms have no
// complement.
Atom negate(const Atom& atom, const Registry& reg);

// Counter-hypothesis transform: symmetric predicates always negate (an
// argument swap would denote the same relation); otherwise negate with
// probability 0.5, else swap subject and object. Atoms with equal
// arguments also negate, since a swap would return the input unchanged.
Atom alter(const Atom& atom, const Registry& reg, Rng& rng);

Atom swap_args(const Atom& atom);

// Canonical form of a ground atom: symmetric predicates order their
// arguments, so p(a,b) and p(b,a) denote the same atom inside the
// reasoner. Identity for everything else.
Atom canonical(const Atom& atom, const Registry& reg);

}  // namespace softhorn
