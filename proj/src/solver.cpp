#include "softhorn/solver.hpp"

#include <algorithm>
#include <cmath>

namespace softhorn {

bool StableModel::contains(int id) const {
  return std::binary_search(atoms.begin(), atoms.end(), id);
}

double StableModelSet::probability_of(int atom_id) const {
  double p = 0.0;
  std::size_t hits = 0;
  for (const StableModel& m : models)
    if (m.contains(atom_id)) {
      p += m.probability;
      ++hits;
    }
  // atoms in every model (facts, hard conclusions) are certain; summing
  // the per-model terms would leave 1-ulp noise on exact 0/1 weights
  if (hits == models.size()) return 1.0;
  if (hits == 0) return 0.0;
  return p;
}

std::vector<Atom> least_model(const std::vector<Atom>& facts,
                              const std::vector<DefiniteClause>& clauses) {
  std::set<Atom> model(facts.begin(), facts.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const DefiniteClause& c : clauses) {
      if (model.count(c.head)) continue;
      bool fire = true;
      for (const Atom& b : c.body)
        if (!model.count(b)) {
          fire = false;
          break;
        }
      if (fire) {
        model.insert(c.head);
        changed = true;
      }
    }
  }
  return {model.begin(), model.end()};
}

namespace {

// Scratch space for one interpretation check, reused across the
// enumeration loop.
struct Evaluator {
  const GroundProgram& p;
  std::vector<char> in;       // membership by atom id
  std::vector<char> least;    // fixpoint buffer
  std::vector<const GroundInstance*> reduct;

  explicit Evaluator(const GroundProgram& prog)
      : p(prog), in(prog.atom_count(), 0), least(prog.atom_count(), 0) {}

  bool body_holds(const GroundInstance& inst, const std::vector<char>& s) const {
    for (int b : inst.body)
      if (!s[b]) return false;
    return true;
  }

  // Satisfaction of the interpretation in `in`; fills reduct with the
  // satisfied definite instances and returns (hard_count, soft_sum).
  std::pair<int, double> satisfied() {
    reduct.clear();
    int hard = 0;
    double soft = 0.0;
    for (const GroundInstance& inst : p.instances()) {
      bool body = body_holds(inst, in);
      bool sat = inst.constraint() ? !body : (!body || in[inst.head]);
      if (!sat) continue;
      if (inst.hard)
        ++hard;
      else
        soft += inst.weight;
      if (!inst.constraint()) reduct.push_back(&inst);
    }
    return {hard, soft};
  }

  // I is stable iff it equals the least model of facts plus the definite
  // instances it satisfies (vacuously satisfied ones cannot fire anyway).
  bool stable() {
    std::fill(least.begin(), least.end(), 0);
    for (int f : p.facts()) least[f] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const GroundInstance* inst : reduct) {
        if (least[inst->head]) continue;
        if (body_holds(*inst, least)) {
          least[inst->head] = 1;
          changed = true;
        }
      }
    }
    return least == in;
  }
};

StableModelSet finalize(std::vector<StableModel> raw) {
  StableModelSet out;
  if (raw.empty())
    throw SemanticsError("no stable model found; grounding is inconsistent");
  int max_hard = raw[0].hard_count;
  for (const StableModel& m : raw) max_hard = std::max(max_hard, m.hard_count);
  double max_soft = 0.0;
  bool first = true;
  for (const StableModel& m : raw) {
    if (m.hard_count != max_hard) continue;
    if (first || m.soft_weight_sum > max_soft) max_soft = m.soft_weight_sum;
    first = false;
  }
  double z_scaled = 0.0;
  for (StableModel& m : raw) {
    if (m.hard_count != max_hard) continue;
    m.unnormalized_weight = std::exp(m.soft_weight_sum);
    out.models.push_back(std::move(m));
  }
  for (const StableModel& m : out.models)
    z_scaled += std::exp(m.soft_weight_sum - max_soft);
  for (StableModel& m : out.models) {
    m.probability = std::exp(m.soft_weight_sum - max_soft) / z_scaled;
    out.normalizer += m.unnormalized_weight;
  }
  out.max_hard_count = max_hard;
  return out;
}

template <typename Seed>
StableModelSet enumerate(const GroundProgram& p, const std::vector<int>& pool,
                         Seed&& seed_interpretation) {
  if (pool.size() >= 63)
    throw BudgetError("interpretation space of 2^" +
                      std::to_string(pool.size()) + " cannot be enumerated");
  Evaluator ev(p);
  std::vector<StableModel> raw;
  const std::uint64_t total = 1ull << pool.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::fill(ev.in.begin(), ev.in.end(), 0);
    seed_interpretation(ev.in);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (1ull << i)) ev.in[pool[i]] = 1;
    }
    auto [hard, soft] = ev.satisfied();
    if (!ev.stable()) continue;
    StableModel m;
    for (int id = 0; id < static_cast<int>(p.atom_count()); ++id)
      if (ev.in[id]) m.atoms.push_back(id);
    m.hard_count = hard;
    m.soft_weight_sum = soft;
    raw.push_back(std::move(m));
  }
  return finalize(std::move(raw));
}

}  // namespace

StableModelSet stable_models(const GroundProgram& p, SolverLimits limits) {
  if (static_cast<int>(p.candidates().size()) > limits.max_candidates)
    throw BudgetError("enumeration budget exceeded: " +
                      std::to_string(p.candidates().size()) +
                      " candidate atoms (limit " +
                      std::to_string(limits.max_candidates) + ")");
  return enumerate(p, p.candidates(), [&](std::vector<char>& in) {
    for (int f : p.facts()) in[f] = 1;
  });
}

StableModelSet brute_force_models(const GroundProgram& p, SolverLimits limits) {
  if (static_cast<int>(p.atom_count()) > limits.max_base_atoms)
    throw BudgetError("Herbrand base too large for brute force: " +
                      std::to_string(p.atom_count()) + " atoms (limit " +
                      std::to_string(limits.max_base_atoms) + ")");
  std::vector<int> pool(p.atom_count());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
  // no fixed part: subsets missing a fact fail the stability check
  return enumerate(p, pool, [](std::vector<char>&) {});
}

double query_probability(const GroundProgram& p, const StableModelSet& sm,
                         const Atom& atom) {
  auto id = p.find_atom(atom);
  if (!id) return 0.0;
  return sm.probability_of(*id);
}

QueryResult query(const GroundProgram& p, const Atom& atom,
                  SolverLimits limits) {
  StableModelSet sm = stable_models(p, limits);
  return {atom, query_probability(p, sm, atom)};
}

QueryResult brute_force_query(const GroundProgram& p, const Atom& atom,
                              SolverLimits limits) {
  StableModelSet sm = brute_force_models(p, limits);
  return {atom, query_probability(p, sm, atom)};
}

double hypothesis_weight(const GroundProgram& p, const StableModelSet& sm,
                         const Atom& hypothesis) {
  const PredicateSig& sig = p.registry().sig(hypothesis.pred);
  if (sig.comparison || !hypothesis.ground())
    throw SemanticsError("hypothesis must be a relational ground atom");
  double w;
  if (p.derivable(hypothesis)) {
    w = query_probability(p, sm, hypothesis);
  } else {
    Atom complement = negate(hypothesis, p.registry());
    if (p.derivable(complement))
      w = 1.0 - query_probability(p, sm, complement);
    else
      w = sig.negative_form ? 1.0 : 0.0;
  }
  return std::min(1.0, std::max(0.0, w));
}

double hypothesis_weight(const GroundProgram& p, const Atom& hypothesis,
                         SolverLimits limits) {
  StableModelSet sm = stable_models(p, limits);
  return hypothesis_weight(p, sm, hypothesis);
}

}  // namespace softhorn
