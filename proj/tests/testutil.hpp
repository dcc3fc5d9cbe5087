#pragma once

#include <string>

#include "softhorn/parser.hpp"
#include "softhorn/solver.hpp"

namespace softhorn::testutil {

inline std::string data_path(const std::string& name) {
  return std::string(SOFTHORN_DATA_DIR) + "/" + name;
}

inline Registry demo_registry() {
  return load_registry_file(data_path("registry.txt"));
}

inline Atom fact(const std::string& text, const Registry& reg) {
  return parse_fact(text, reg);
}

// Small random programs over three predicates (one symmetric) and up to
// three constants; used to cross-check the solver against brute force.
struct RandomProgram {
  RuleSet rules;
  std::vector<Atom> facts;
};

inline Registry tiny_registry() {
  Registry reg;
  reg.add({"p", {"t", "t"}, true, false, "", false});
  reg.add({"q", {"t", "t"}, false, false, "", false});
  reg.add({"r", {"t", "t"}, false, false, "", false});
  reg.finalize();
  return reg;
}

inline RandomProgram random_program(Rng& rng) {
  RandomProgram out;
  out.rules.registry = tiny_registry();
  const Registry& reg = out.rules.registry;

  const char* consts[] = {"a", "b", "c"};
  std::size_t n_consts = 2 + rng.uniform_index(2);
  const char* vars[] = {"A", "B", "C"};
  const double confs[] = {0.3, 0.5, 0.7, 1.0};
  std::vector<PredId> pos = reg.positive_relational();

  auto random_var_atom = [&](std::size_t n_vars) {
    Atom a;
    a.pred = pos[rng.uniform_index(pos.size())];
    a.args[0] = Term::var(vars[rng.uniform_index(n_vars)]);
    a.args[1] = Term::var(vars[rng.uniform_index(n_vars)]);
    return a;
  };

  std::size_t n_rules = 1 + rng.uniform_index(3);
  for (std::size_t i = 0; i < n_rules; ++i) {
    Rule rule;
    rule.id = "g" + std::to_string(i + 1);
    rule.confidence = confs[rng.uniform_index(4)];
    std::size_t n_vars = 2 + rng.uniform_index(2);
    std::size_t n_body = 1 + rng.uniform_index(2);
    for (std::size_t b = 0; b < n_body; ++b)
      rule.body.push_back(random_var_atom(n_vars));
    // head variables drawn from the body for safety
    std::vector<std::string> bound;
    for (const Atom& a : rule.body)
      for (const Term& t : a.args) bound.push_back(t.text);
    Atom head;
    head.pred = pos[rng.uniform_index(pos.size())];
    if (rng.coin()) head = {reg.counterpart(head.pred), head.args};
    head.args[0] = Term::var(bound[rng.uniform_index(bound.size())]);
    head.args[1] = Term::var(bound[rng.uniform_index(bound.size())]);
    rule.head = head;
    out.rules.rules.push_back(std::move(rule));
  }

  std::size_t n_facts = 2 + rng.uniform_index(3);
  for (std::size_t i = 0; i < n_facts; ++i) {
    Atom f;
    f.pred = pos[rng.uniform_index(pos.size())];
    if (rng.uniform_index(4) == 0) f.pred = reg.counterpart(f.pred);
    f.args[0] = Term::constant(consts[rng.uniform_index(n_consts)]);
    f.args[1] = Term::constant(consts[rng.uniform_index(n_consts)]);
    bool dup = false;
    for (const Atom& g : out.facts) dup |= (g == f);
    if (!dup) out.facts.push_back(f);
  }
  return out;
}

}  // namespace softhorn::testutil
