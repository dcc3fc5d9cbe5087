#pragma once

#include "softhorn/ground.hpp"

namespace softhorn {

struct StableModel {
  std::vector<int> atoms;  // sorted atom ids, facts included
  int hard_count = 0;
  double soft_weight_sum = 0.0;
  double unnormalized_weight = 0.0;  // exp(soft_weight_sum)
  double probability = 0.0;

  bool contains(int id) const;
};

// Stable models that survive the hard tier (maximal count of satisfied
// hard instances), with probabilities normalized over the survivors.
struct StableModelSet {
  std::vector<StableModel> models;
  double normalizer = 0.0;
  int max_hard_count = 0;

  double probability_of(int atom_id) const;
};

struct QueryResult {
  Atom atom;
  double probability = 0.0;
};

struct SolverLimits {
  int max_candidates = 24;   // stable_models: 2^candidates interpretations
  int max_base_atoms = 16;   // brute force: 2^|base| interpretations
};

// Least fixpoint of forward chaining from the facts through definite
// clauses (pairs of body atoms and a head).
struct DefiniteClause {
  std::vector<Atom> body;
  Atom head;
};
std::vector<Atom> least_model(const std::vector<Atom>& facts,
                              const std::vector<DefiniteClause>& clauses);

// Enumerates interpretations over the derivable non-fact atoms (anything
// else can never appear in a least model), keeps the ones equal to the
// least model of their reduct, then applies the hard tier.
StableModelSet stable_models(const GroundProgram& p, SolverLimits limits = {});

// Same semantics with no candidate restriction: every subset of the full
// Herbrand base is checked. Exists as an independent oracle for the
// enumeration above.
StableModelSet brute_force_models(const GroundProgram& p,
                                  SolverLimits limits = {});

double query_probability(const GroundProgram& p, const StableModelSet& sm,
                         const Atom& atom);

QueryResult query(const GroundProgram& p, const Atom& atom,
                  SolverLimits limits = {});
QueryResult brute_force_query(const GroundProgram& p, const Atom& atom,
                              SolverLimits limits = {});

// Probability that a ground hypothesis holds, with closed-world closure:
// derivable atoms are scored by the reasoner, atoms whose complement is
// derivable score one minus the complement, and everything else is false
// when positive and true when negated.
double hypothesis_weight(const GroundProgram& p, const StableModelSet& sm,
                         const Atom& hypothesis);
double hypothesis_weight(const GroundProgram& p, const Atom& hypothesis,
                         SolverLimits limits = {});

}  // namespace softhorn
