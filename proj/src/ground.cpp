#include "softhorn/ground.hpp"

#include <algorithm>
#include <cctype>

namespace softhorn {

namespace {

struct Binding {
  std::map<std::string, std::string> vars;

  bool unify(const Term& pattern, const std::string& value) {
    if (!pattern.is_var) return pattern.text == value;
    auto [it, inserted] = vars.emplace(pattern.text, value);
    return inserted || it->second == value;
  }
};

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
  }
  out = (s[0] == '-') ? -v : v;
  return true;
}

}  // namespace

int GroundProgram::intern(const Atom& a) {
  Atom c = canonical(a, registry_);
  auto [it, inserted] = atom_ids_.emplace(c, static_cast<int>(atoms_.size()));
  if (inserted) {
    atoms_.push_back(c);
    is_fact_.push_back(false);
    in_closure_.push_back(false);
  }
  return it->second;
}

std::optional<int> GroundProgram::find_atom(const Atom& a) const {
  auto it = atom_ids_.find(canonical(a, registry_));
  if (it == atom_ids_.end()) return std::nullopt;
  return it->second;
}

bool GroundProgram::derivable(const Atom& a) const {
  auto id = find_atom(a);
  return id && in_closure_[*id];
}

int GroundProgram::triggered_count() const {
  int n = 0;
  for (const GroundInstance& inst : instances_)
    if (inst.source == GroundInstance::kRule) ++n;
  return n;
}

namespace {

// Matches the relational body atoms of a rule against a set of ground
// atoms, in deterministic (atom interning) order, and reports each
// complete substitution whose comparison atoms evaluate true.
class RuleMatcher {
 public:
  RuleMatcher(const Rule& rule, const Registry& reg) : reg_(reg) {
    for (const Atom& a : rule.body) {
      if (reg.sig(a.pred).comparison)
        comparisons_.push_back(&a);
      else
        relational_.push_back(&a);
    }
  }

  template <typename Fn>
  void for_each_match(const std::vector<Atom>& atoms, Fn&& fn) const {
    Binding binding;
    std::vector<int> chosen(relational_.size(), -1);
    descend(atoms, 0, binding, chosen, fn);
  }

 private:
  template <typename Fn>
  void descend(const std::vector<Atom>& atoms, std::size_t level,
               Binding& binding, std::vector<int>& chosen, Fn&& fn) const {
    if (level == relational_.size()) {
      if (!comparisons_ok(binding)) return;
      fn(binding, chosen);
      return;
    }
    const Atom& pattern = *relational_[level];
    for (int id = 0; id < static_cast<int>(atoms.size()); ++id) {
      const Atom& cand = atoms[id];
      if (cand.pred != pattern.pred) continue;
      // symmetric atoms are stored canonically and match either way round
      int orientations =
          (reg_.sig(cand.pred).symmetric && !(cand.args[0] == cand.args[1]))
              ? 2
              : 1;
      for (int o = 0; o < orientations; ++o) {
        const Term& s = cand.args[o];
        const Term& t = cand.args[1 - o];
        Binding saved = binding;
        if (binding.unify(pattern.args[0], s.text) &&
            binding.unify(pattern.args[1], t.text)) {
          chosen[level] = id;
          descend(atoms, level + 1, binding, chosen, fn);
        }
        binding = std::move(saved);
      }
    }
  }

  bool comparisons_ok(const Binding& binding) const {
    for (const Atom* cmp : comparisons_) {
      long long lhs, rhs;
      if (!parse_int(resolve(cmp->args[0], binding), lhs) ||
          !parse_int(resolve(cmp->args[1], binding), rhs))
        throw SemanticsError("comparison atom over non-integer constants in " +
                             format_atom(*cmp, reg_));
      bool ok = (cmp->pred == reg_.less_than()) ? (lhs < rhs) : (lhs > rhs);
      if (!ok) return false;
    }
    return true;
  }

  std::string resolve(const Term& t, const Binding& binding) const {
    if (!t.is_var) return t.text;
    return binding.vars.at(t.text);
  }

  const Registry& reg_;
  std::vector<const Atom*> relational_;
  std::vector<const Atom*> comparisons_;
};

Atom substitute(const Atom& pattern, const Binding& binding) {
  Atom out;
  out.pred = pattern.pred;
  for (int i = 0; i < 2; ++i) {
    if (pattern.args[i].is_var)
      out.args[i] = Term::constant(binding.vars.at(pattern.args[i].text));
    else
      out.args[i] = pattern.args[i];
  }
  return out;
}

}  // namespace

GroundProgram ground(const RuleSet& rules, const std::vector<Atom>& facts) {
  if (!rules.registry.finalized())
    throw SemanticsError("registry must be finalized before grounding");
  GroundProgram p;
  p.registry_ = rules.registry;
  p.rules_ = rules.rules;
  const Registry& reg = p.registry_;

  for (const Atom& f : facts) {
    if (!f.ground()) throw SemanticsError("non-ground fact " + format_atom(f, reg));
    int id = p.intern(f);
    if (!p.is_fact_[id]) {
      p.is_fact_[id] = true;
      p.fact_ids_.push_back(id);
    }
    p.domain_.insert(f.args[0].text);
    p.domain_.insert(f.args[1].text);
  }

  // Phase 1: forward closure of the rules from the facts. Rounds scan a
  // snapshot of the atom table so the result does not depend on discovery
  // interleaving. Symmetric predicates need no closure of their own: their
  // atoms are interned canonically.
  std::vector<RuleMatcher> matchers;
  matchers.reserve(p.rules_.size());
  for (const Rule& r : p.rules_) matchers.emplace_back(r, reg);

  for (int id = 0; id < static_cast<int>(p.atoms_.size()); ++id)
    p.in_closure_[id] = true;

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Atom> snapshot = p.atoms_;
    for (std::size_t ri = 0; ri < p.rules_.size(); ++ri) {
      matchers[ri].for_each_match(
          snapshot, [&](const Binding& b, const std::vector<int>&) {
            Atom head = substitute(p.rules_[ri].head, b);
            int id = p.intern(head);
            if (!p.in_closure_[id]) {
              p.in_closure_[id] = true;
              changed = true;
            }
          });
    }
  }

  // Phase 2: enumerate instances against the final closure, rules first in
  // corpus order, then exclusion constraints.
  std::vector<Atom> closure_atoms = p.atoms_;  // all atoms are in closure here
  std::set<std::pair<std::vector<int>, int>> seen;
  for (std::size_t ri = 0; ri < p.rules_.size(); ++ri) {
    const Rule& r = p.rules_[ri];
    matchers[ri].for_each_match(
        closure_atoms, [&](const Binding& b, const std::vector<int>& chosen) {
          GroundInstance inst;
          inst.source = GroundInstance::kRule;
          inst.rule_index = static_cast<int>(ri);
          inst.hard = r.hard();
          inst.weight = r.hard() ? 0.0 : confidence_to_weight(r.confidence);
          inst.body = chosen;
          inst.head = p.intern(substitute(r.head, b));
          std::vector<int> key = inst.body;
          std::sort(key.begin(), key.end());
          key.push_back(static_cast<int>(ri));
          if (seen.emplace(std::move(key), inst.head).second)
            p.instances_.push_back(std::move(inst));
        });
  }
  int closure_size = static_cast<int>(p.atoms_.size());
  std::set<std::pair<int, int>> exclusion_seen;
  for (int id = 0; id < closure_size; ++id) {
    const Atom& a = p.atoms_[id];
    if (reg.sig(a.pred).comparison) continue;
    int other = p.intern(negate(a, reg));
    std::pair<int, int> key = {std::min(id, other), std::max(id, other)};
    if (!exclusion_seen.insert(key).second) continue;
    GroundInstance inst;
    inst.source = GroundInstance::kExclusion;
    inst.hard = true;
    inst.body = {key.first, key.second};
    inst.head = -1;
    p.instances_.push_back(std::move(inst));
  }

  for (int id = 0; id < static_cast<int>(p.atoms_.size()); ++id) {
    if (p.in_closure_[id] && !p.is_fact_[id]) p.candidates_.push_back(id);
  }
  return p;
}

}  // namespace softhorn
