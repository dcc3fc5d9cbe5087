#include "softhorn/atoms.hpp"

#include <cctype>

namespace softhorn {

Registry::Registry() {
  // builtin comparison predicates; arg types are unconstrained, the
  // grounder requires integer constants when it evaluates them
  lt_ = add({"<", {"", ""}, false, false, "", true});
  gt_ = add({">", {"", ""}, false, false, "", true});
}

PredId Registry::add(PredicateSig sig) {
  if (finalized_) throw SemanticsError("registry is finalized");
  if (by_name_.count(sig.name))
    throw SemanticsError("duplicate predicate '" + sig.name + "'");
  PredId id = static_cast<PredId>(preds_.size());
  by_name_[sig.name] = id;
  preds_.push_back(std::move(sig));
  counterpart_.push_back(-1);
  return id;
}

void Registry::finalize() {
  if (finalized_) return;
  // synthesize missing negative forms, then wire counterparts
  std::size_t original = preds_.size();
  for (std::size_t i = 0; i < original; ++i) {
    const PredicateSig& p = preds_[i];
    if (p.comparison || p.negative_form) continue;
    std::string neg_name = "neg" + p.name;
    if (!by_name_.count(neg_name)) {
      add({neg_name, p.arg_types, p.symmetric, true, p.name, false});
    }
  }
  for (std::size_t i = 0; i < preds_.size(); ++i) {
    const PredicateSig& p = preds_[i];
    if (p.comparison) continue;
    if (p.negative_form) {
      PredId base = find(p.base);
      if (base < 0)
        throw SemanticsError("negative form '" + p.name +
                             "' references unknown base '" + p.base + "'");
      const PredicateSig& b = preds_[base];
      if (b.negative_form)
        throw SemanticsError("base of '" + p.name + "' is itself negative");
      if (b.arg_types != p.arg_types)
        throw SemanticsError("'" + p.name + "' and '" + b.name +
                             "' disagree on argument types");
      if (b.symmetric != p.symmetric)
        throw SemanticsError("'" + p.name + "' and '" + b.name +
                             "' disagree on symmetry");
      counterpart_[i] = base;
      counterpart_[base] = static_cast<PredId>(i);
    }
  }
  for (std::size_t i = 0; i < preds_.size(); ++i) {
    if (!preds_[i].comparison && counterpart_[i] < 0)
      throw SemanticsError("predicate '" + preds_[i].name +
                           "' has no polarity counterpart");
  }
  finalized_ = true;
}

PredId Registry::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

PredId Registry::require(const std::string& name) const {
  PredId id = find(name);
  if (id < 0) throw SemanticsError("unknown predicate '" + name + "'");
  return id;
}

PredId Registry::counterpart(PredId id) const {
  PredId c = counterpart_.at(id);
  if (c < 0)
    throw SemanticsError("predicate '" + preds_.at(id).name +
                         "' has no polarity counterpart");
  return c;
}

std::vector<PredId> Registry::positive_relational() const {
  std::vector<PredId> out;
  for (std::size_t i = 0; i < preds_.size(); ++i) {
    if (!preds_[i].comparison && !preds_[i].negative_form)
      out.push_back(static_cast<PredId>(i));
  }
  return out;
}

bool spells_like_variable(const std::string& s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0])))
    return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

static bool bare_constant_ok(const std::string& s) {
  if (s.empty() || spells_like_variable(s)) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.')
      return false;
  }
  return true;
}

std::string format_term(const Term& t) {
  if (t.is_var) return t.text;
  if (bare_constant_ok(t.text)) return t.text;
  return "\"" + t.text + "\"";
}

std::string format_atom(const Atom& a, const Registry& reg) {
  return reg.sig(a.pred).name + "(" + format_term(a.args[0]) + "," +
         format_term(a.args[1]) + ")";
}

Atom negate(const Atom& atom, const Registry& reg) {
  if (reg.sig(atom.pred).comparison)
    throw SemanticsError("cannot negate comparison atom " +
                         format_atom(atom, reg));
  return Atom{reg.counterpart(atom.pred), atom.args};
}

Atom swap_args(const Atom& atom) {
  return Atom{atom.pred, {atom.args[1], atom.args[0]}};
}

Atom canonical(const Atom& atom, const Registry& reg) {
  if (!reg.sig(atom.pred).symmetric || atom.args[0].is_var ||
      atom.args[1].is_var)
    return atom;
  if (atom.args[1].text < atom.args[0].text) return swap_args(atom);
  return atom;
}

Atom alter(const Atom& atom, const Registry& reg, Rng& rng) {
  const PredicateSig& sig = reg.sig(atom.pred);
  if (sig.comparison)
    throw SemanticsError("cannot alter comparison atom " +
                         format_atom(atom, reg));
  if (sig.symmetric) return negate(atom, reg);
  if (atom.args[0] == atom.args[1]) return negate(atom, reg);
  if (rng.next_double() > 0.5) return negate(atom, reg);
  return swap_args(atom);
}

}  // namespace softhorn
