#include "softhorn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

namespace softhorn {

namespace {

constexpr int kContextAttempts = 32;
constexpr int kDrawAttempts = 64;
constexpr double kSumLawTol = 1e-12;

const std::vector<std::string>& pool_for(
    const std::map<std::string, std::vector<std::string>>& pools,
    const std::string& type) {
  auto it = pools.find(type);
  if (it == pools.end() || it->second.empty())
    throw SemanticsError("no constant pool for type '" + type + "'");
  return it->second;
}

// polarity/argument-order neighborhood of an atom; facts are kept clear
// of each other's orbits so that alterations stay underivable
void append_orbit(const Atom& a, const Registry& reg, std::vector<Atom>& out) {
  out.push_back(a);
  out.push_back(negate(a, reg));
  if (!(a.args[0] == a.args[1])) {
    out.push_back(swap_args(a));
    out.push_back(negate(swap_args(a), reg));
  }
}

bool orbit_hits(const Atom& a, const Registry& reg,
                const std::set<Atom>& atoms) {
  std::vector<Atom> orbit;
  append_orbit(a, reg, orbit);
  for (const Atom& o : orbit)
    if (atoms.count(o)) return true;
  return false;
}

std::vector<PredId> base_predicates_of(const Rule& rule, const Registry& reg,
                                       bool include_head) {
  std::vector<PredId> out;
  auto push = [&](PredId id) {
    const PredicateSig& sig = reg.sig(id);
    if (sig.comparison) return;
    PredId base = sig.negative_form ? reg.require(sig.base) : id;
    if (std::find(out.begin(), out.end(), base) == out.end())
      out.push_back(base);
  };
  for (const Atom& a : rule.body) push(a.pred);
  if (include_head) push(rule.head.pred);
  return out;
}

PredId base_of(PredId id, const Registry& reg) {
  const PredicateSig& sig = reg.sig(id);
  return sig.negative_form ? reg.require(sig.base) : id;
}

struct BodyInstantiation {
  std::map<std::string, std::string> assignment;
  std::vector<Atom> atoms;  // grounded relational body atoms, body order
  Atom head;
};

// One sampling attempt: preset bindings respected, distinct variables of a
// type get distinct constants, comparison atoms must evaluate true.
std::optional<BodyInstantiation> try_instantiate(
    const Rule& rule, const std::map<std::string, std::string>& preset,
    const std::map<std::string, std::vector<std::string>>& pools,
    const Registry& reg, Rng& rng) {
  // variable -> type, in first-appearance order over relational atoms
  std::vector<std::pair<std::string, std::string>> vars;
  auto scan = [&](const Atom& a) {
    const PredicateSig& sig = reg.sig(a.pred);
    if (sig.comparison) return;
    for (int i = 0; i < 2; ++i) {
      if (!a.args[i].is_var) continue;
      const std::string& v = a.args[i].text;
      bool known = false;
      for (const auto& [name, type] : vars) known |= (name == v);
      if (!known) vars.emplace_back(v, sig.arg_types[i]);
    }
  };
  for (const Atom& a : rule.body) scan(a);
  scan(rule.head);

  BodyInstantiation inst;
  std::map<std::string, std::set<std::string>> used_per_type;
  for (const auto& [name, type] : vars) {
    auto preset_it = preset.find(name);
    if (preset_it != preset.end()) {
      if (used_per_type[type].count(preset_it->second)) return std::nullopt;
      inst.assignment[name] = preset_it->second;
      used_per_type[type].insert(preset_it->second);
    }
  }
  for (const auto& [name, type] : vars) {
    if (inst.assignment.count(name)) continue;
    const std::vector<std::string>& pool = pool_for(pools, type);
    std::set<std::string>& used = used_per_type[type];
    if (used.size() >= pool.size())
      throw SemanticsError("pool for type '" + type +
                           "' too small for the rule's distinct variables");
    std::string value;
    do {
      value = pool[rng.uniform_index(pool.size())];
    } while (used.count(value));
    inst.assignment[name] = value;
    used.insert(value);
  }

  auto ground_atom = [&](const Atom& a) {
    Atom out;
    out.pred = a.pred;
    for (int i = 0; i < 2; ++i)
      out.args[i] = a.args[i].is_var
                        ? Term::constant(inst.assignment.at(a.args[i].text))
                        : a.args[i];
    return out;
  };
  for (const Atom& a : rule.body) {
    const PredicateSig& sig = reg.sig(a.pred);
    if (sig.comparison) {
      Atom g = ground_atom(a);
      long long lhs = 0, rhs = 0;
      auto to_int = [](const std::string& s, long long& v) {
        char* end = nullptr;
        v = std::strtoll(s.c_str(), &end, 10);
        return end && *end == '\0' && !s.empty();
      };
      if (!to_int(g.args[0].text, lhs) || !to_int(g.args[1].text, rhs))
        throw SemanticsError("comparison over non-integer constants in rule " +
                             rule.id);
      bool ok = (a.pred == reg.less_than()) ? lhs < rhs : lhs > rhs;
      if (!ok) return std::nullopt;
      continue;
    }
    inst.atoms.push_back(ground_atom(a));
  }
  inst.head = ground_atom(rule.head);
  return inst;
}

Atom sample_atom(PredId pred,
                 const std::map<std::string, std::vector<std::string>>& pools,
                 const Registry& reg, Rng& rng) {
  const PredicateSig& sig = reg.sig(pred);
  const std::vector<std::string>& p0 = pool_for(pools, sig.arg_types[0]);
  const std::vector<std::string>& p1 = pool_for(pools, sig.arg_types[1]);
  Atom a;
  a.pred = pred;
  a.args[0] = Term::constant(p0[rng.uniform_index(p0.size())]);
  a.args[1] = Term::constant(p1[rng.uniform_index(p1.size())]);
  return a;
}

Example make_example(std::string id, std::shared_ptr<const GenContext> ctx,
                     int ctx_index, const Atom& hyp, double weight,
                     std::string hyp_class, std::vector<std::string> rule_ids,
                     int depth, int triggered, GenStats* stats) {
  Example e;
  e.id = std::move(id);
  e.context = std::move(ctx);
  e.hypothesis = hyp;
  e.weight = weight;
  e.label = weight >= 0.5;
  if (weight == 0.5) {
    if (stats) ++stats->tie_labels;
    std::fprintf(stderr, "[datagen] weight tie at 0.5 labeled True: %s\n",
                 e.id.c_str());
  }
  e.hyp_class = std::move(hyp_class);
  e.rule_ids = std::move(rule_ids);
  e.depth = depth;
  e.triggered_count = triggered;
  e.context_index = ctx_index;
  return e;
}

// predicates eligible for the underivable hypothesis h5: rule predicates
// first, the whole registry as fallback, never the head family
std::vector<PredId> h5_predicates(const std::vector<Rule>& rules,
                                  PredId head_base, const Registry& reg,
                                  const std::map<std::string,
                                                 std::vector<std::string>>& pools) {
  std::vector<PredId> cands;
  for (const Rule& r : rules)
    for (PredId id : base_predicates_of(r, reg, /*include_head=*/true))
      if (id != head_base &&
          std::find(cands.begin(), cands.end(), id) == cands.end())
        cands.push_back(id);
  if (cands.empty()) {
    for (PredId id : reg.positive_relational()) {
      if (id == head_base) continue;
      if (!pools.count(reg.sig(id).arg_types[0]) ||
          !pools.count(reg.sig(id).arg_types[1]))
        continue;
      cands.push_back(id);
    }
  }
  if (cands.empty())
    throw SemanticsError("no predicate available for unsatisfied hypotheses");
  return cands;
}

struct CwaHypotheses {
  Atom h5, h6, h7, h8;
  double w5, w6, w7, w8;
};

std::optional<CwaHypotheses> draw_cwa_hypotheses(
    const GroundProgram& prog, const StableModelSet& sms,
    const std::vector<Rule>& rules, const Atom& head_shape,
    const std::map<std::string, std::vector<std::string>>& pools,
    const Registry& reg, Rng& rng) {
  CwaHypotheses out;
  PredId head_base = base_of(head_shape.pred, reg);
  std::vector<PredId> cands = h5_predicates(rules, head_base, reg, pools);
  bool ok = false;
  for (int t = 0; t < kDrawAttempts && !ok; ++t) {
    Atom a = sample_atom(cands[rng.uniform_index(cands.size())], pools, reg, rng);
    if (!prog.derivable(a) && !prog.derivable(negate(a, reg))) {
      out.h5 = a;
      ok = true;
    }
  }
  if (!ok) return std::nullopt;
  out.h6 = negate(out.h5, reg);
  ok = false;
  for (int t = 0; t < kDrawAttempts && !ok; ++t) {
    Atom a = sample_atom(head_shape.pred, pools, reg, rng);
    if (!prog.derivable(a) && !prog.derivable(negate(a, reg))) {
      out.h7 = a;
      ok = true;
    }
  }
  if (!ok) return std::nullopt;
  out.h8 = negate(out.h7, reg);
  out.w5 = hypothesis_weight(prog, sms, out.h5);
  out.w6 = hypothesis_weight(prog, sms, out.h6);
  out.w7 = hypothesis_weight(prog, sms, out.h7);
  out.w8 = hypothesis_weight(prog, sms, out.h8);
  if (out.w5 != 0.0 || out.w6 != 1.0) return std::nullopt;
  return out;
}

}  // namespace

void GenConfig::validate() const {
  if (n < 8) throw SemanticsError("config: n must be at least 8");
  if (m < 1) throw SemanticsError("config: m must be positive");
  double sum = split_ratios[0] + split_ratios[1] + split_ratios[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw SemanticsError("config: split ratios must sum to 1");
}

std::map<std::string, std::vector<std::string>> default_pools(
    FactFormat format) {
  std::map<std::string, std::vector<std::string>> pools;
  if (format == FactFormat::kNames) {
    pools["person"] = {"Alice", "Bob",   "Carl", "David", "Eve",
                       "Frank", "Grace", "Henry", "Irene", "Jack",
                       "Kate",  "Leo",   "Mary",  "Noah",  "Olivia",
                       "Paul",  "Quinn", "Rose",  "Sam",   "Tina"};
    pools["company"] = {"Acme",     "Initech", "Globex", "Umbrella",
                        "Hooli",    "Vandelay", "Wonka", "Stark",
                        "Wayne",    "Cyberdyne"};
  } else {
    std::vector<std::string> letters;
    for (char c = 'A'; c <= 'Z'; ++c) letters.push_back(std::string(1, c));
    pools["person"] = letters;
    pools["company"] = letters;
  }
  std::vector<std::string> years;
  for (int y = 1800; y <= 2000; ++y) years.push_back(std::to_string(y));
  pools["year"] = years;
  return pools;
}

FactDraw gen_facts(const Rule& rule, int m,
                   const std::map<std::string, std::vector<std::string>>& pools,
                   const Registry& reg, Rng& rng) {
  int body_size = 0;
  for (const Atom& a : rule.body)
    if (!reg.sig(a.pred).comparison) ++body_size;
  if (m < body_size)
    throw SemanticsError("m (" + std::to_string(m) +
                         ") smaller than rule body of " + rule.id);

  FactDraw out;
  std::set<Atom> fact_set;
  int target = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(m)));
  int distractor_count = std::max(0, target - body_size);
  std::vector<PredId> dpreds = base_predicates_of(rule, reg, true);

  for (int i = 0; i < distractor_count; ++i) {
    for (int t = 0; t < kContextAttempts; ++t) {
      Atom a = sample_atom(dpreds[rng.uniform_index(dpreds.size())], pools,
                           reg, rng);
      if (rng.coin()) a = negate(a, reg);
      if (orbit_hits(a, reg, fact_set)) continue;
      fact_set.insert(a);
      out.facts.push_back(a);
      break;
    }
  }

  for (int t = 0; t < kDrawAttempts; ++t) {
    auto inst = try_instantiate(rule, {}, pools, reg, rng);
    if (!inst) continue;
    bool ok = true;
    for (const Atom& a : inst->atoms) {
      if (fact_set.count(a)) continue;  // exact reuse is fine
      if (orbit_hits(a, reg, fact_set)) {
        ok = false;
        break;
      }
    }
    if (ok && orbit_hits(inst->head, reg, fact_set)) ok = false;
    if (!ok) continue;
    for (const Atom& a : inst->atoms) {
      auto pos = std::find(out.facts.begin(), out.facts.end(), a);
      if (pos == out.facts.end()) {
        fact_set.insert(a);
        out.facts.push_back(a);
        out.trigger.push_back(static_cast<int>(out.facts.size()) - 1);
      } else {
        out.trigger.push_back(static_cast<int>(pos - out.facts.begin()));
      }
    }
    out.conclusion = inst->head;
    return out;
  }
  throw SemanticsError("could not instantiate body of rule " + rule.id +
                       " without fact collisions");
}

namespace {

// One full Algorithm-style context with its eight hypotheses.
std::vector<Example> gen_one_single_context(
    const Rule& rule, const Registry& reg, const GenConfig& cfg, Rng& rng,
    int ctx_index, const std::string& id_prefix, GenStats* stats) {
  RuleSet rs;
  rs.rules = {rule};
  rs.registry = reg;
  for (int attempt = 0; attempt < kContextAttempts; ++attempt) {
    FactDraw draw = gen_facts(rule, cfg.m, cfg.pools, reg, rng);
    GroundProgram prog = ground(rs, draw.facts);
    StableModelSet sms = stable_models(prog, cfg.limits);

    Atom h1, h2;
    double w1 = 0.0, w2 = 1.0;
    bool pair_ok = false;
    for (int t = 0; t < 8 && !pair_ok; ++t) {
      h1 = draw.facts[rng.uniform_index(draw.facts.size())];
      h2 = alter(h1, reg, rng);
      w1 = hypothesis_weight(prog, sms, h1);
      w2 = hypothesis_weight(prog, sms, h2);
      pair_ok = (w1 == 1.0 && w2 == 0.0);
    }
    if (!pair_ok) continue;

    Atom h3 = draw.conclusion;
    double w3 = hypothesis_weight(prog, sms, h3);
    Atom h4 = alter(h3, reg, rng);
    double w4 = hypothesis_weight(prog, sms, h4);
    if (h4 == negate(h3, reg) && std::abs(w3 + w4 - 1.0) > kSumLawTol)
      continue;

    auto cwa = draw_cwa_hypotheses(prog, sms, {rule}, rule.head, cfg.pools,
                                   reg, rng);
    if (!cwa) continue;

    auto ctx = std::make_shared<GenContext>();
    ctx->facts = draw.facts;
    ctx->rules = {rule};
    ctx->trigger_idx = {draw.trigger};
    int trig = prog.triggered_count();
    std::vector<std::string> ids = {rule.id};

    std::vector<Example> out;
    auto emit = [&](int k, const Atom& hyp, double w, int depth) {
      out.push_back(make_example(id_prefix + "h" + std::to_string(k), ctx,
                                 ctx_index, hyp, w, "h" + std::to_string(k),
                                 ids, depth, trig, stats));
    };
    emit(1, h1, w1, 0);
    emit(2, h2, w2, 0);
    emit(3, h3, w3, 1);
    emit(4, h4, w4, 1);
    emit(5, cwa->h5, cwa->w5, 0);
    emit(6, cwa->h6, cwa->w6, 0);
    emit(7, cwa->h7, cwa->w7, 0);
    emit(8, cwa->h8, cwa->w8, 0);
    if (stats) ++stats->contexts;
    return out;
  }
  throw SemanticsError("exhausted attempts generating a context for rule " +
                       rule.id);
}

}  // namespace

std::vector<Example> gen_single_rule(const Rule& rule, const Registry& reg,
                                     const GenConfig& cfg, GenStats* stats) {
  cfg.validate();
  int contexts = (cfg.n + 7) / 8;
  std::vector<Example> out;
  out.reserve(static_cast<std::size_t>(contexts) * 8);
  for (int ci = 0; ci < contexts; ++ci) {
    Rng rng = Rng::stream(cfg.seed, Rng::hash_str("single"),
                          Rng::hash_str(rule.id), ci);
    std::string prefix = "single-" + rule.id + "-c" + std::to_string(ci) + "-";
    auto block =
        gen_one_single_context(rule, reg, cfg, rng, ci, prefix, stats);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

std::size_t overlap_batch_size(std::size_t rule_count) {
  // 8|R| single examples plus 2 per subset of >= 2 rules
  std::size_t subsets = (std::size_t{1} << rule_count) - 1 - rule_count;
  return 8 * rule_count + 2 * subsets;
}

std::vector<Example> gen_overlap(const std::vector<Rule>& rules,
                                 const Registry& reg, const GenConfig& cfg,
                                 GenStats* stats) {
  cfg.validate();
  if (rules.size() < 2)
    throw SemanticsError("overlap generation needs at least two rules");
  if (rules.size() > 16)
    throw SemanticsError("overlap generation supports at most 16 rules");
  PredId head_base = base_of(rules[0].head.pred, reg);
  for (const Rule& r : rules) {
    if (base_of(r.head.pred, reg) != head_base)
      throw SemanticsError(
          "overlap rules must share one conclusion predicate family");
    if (!r.head.args[0].is_var || !r.head.args[1].is_var)
      throw SemanticsError("overlap rule heads must be variable pairs");
  }
  const PredicateSig& head_sig = reg.sig(head_base);

  std::size_t batch = overlap_batch_size(rules.size());
  int batches = static_cast<int>((cfg.n + batch - 1) / batch);
  std::vector<Example> out;
  int ctx_index = 0;

  for (int bi = 0; bi < batches; ++bi) {
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      Rng rng = Rng::stream(cfg.seed, Rng::hash_str("overlap-single"),
                            static_cast<std::uint64_t>(bi) * rules.size() + ri);
      std::string prefix = "overlap-b" + std::to_string(bi) + "-" +
                           rules[ri].id + "-";
      auto block = gen_one_single_context(rules[ri], reg, cfg, rng, ctx_index,
                                          prefix, stats);
      out.insert(out.end(), block.begin(), block.end());
      ++ctx_index;
    }
    for (std::uint64_t mask = 0; mask < (1ull << rules.size()); ++mask) {
      if (__builtin_popcountll(mask) < 2) continue;
      Rng rng = Rng::stream(cfg.seed, Rng::hash_str("overlap-subset"), bi, mask);
      std::vector<Rule> subset;
      for (std::size_t ri = 0; ri < rules.size(); ++ri)
        if (mask & (1ull << ri)) subset.push_back(rules[ri]);

      bool emitted = false;
      for (int attempt = 0; attempt < kContextAttempts && !emitted; ++attempt) {
        const std::vector<std::string>& p0 =
            pool_for(cfg.pools, head_sig.arg_types[0]);
        const std::vector<std::string>& p1 =
            pool_for(cfg.pools, head_sig.arg_types[1]);
        std::string a0 = p0[rng.uniform_index(p0.size())];
        std::string b0;
        bool pair_ok = false;
        for (int t = 0; t < kContextAttempts; ++t) {
          b0 = p1[rng.uniform_index(p1.size())];
          if (b0 != a0) {
            pair_ok = true;
            break;
          }
        }
        if (!pair_ok) continue;

        Atom hpos{head_base, {Term::constant(a0), Term::constant(b0)}};
        std::set<Atom> reserved;
        {
          std::vector<Atom> orb;
          append_orbit(hpos, reg, orb);
          reserved.insert(orb.begin(), orb.end());
        }

        std::set<Atom> fact_set;
        std::vector<Atom> facts;
        int body_total = 0;
        for (const Rule& r : subset)
          for (const Atom& a : r.body)
            if (!reg.sig(a.pred).comparison) ++body_total;
        int target = static_cast<int>(
            rng.uniform_index(static_cast<std::size_t>(cfg.m)));
        int distractor_count = std::max(0, target - body_total);
        std::vector<PredId> dpreds;
        for (const Rule& r : rules)
          for (PredId id : base_predicates_of(r, reg, false))
            if (std::find(dpreds.begin(), dpreds.end(), id) == dpreds.end())
              dpreds.push_back(id);
        for (int i = 0; i < distractor_count; ++i) {
          for (int t = 0; t < kContextAttempts; ++t) {
            Atom a = sample_atom(dpreds[rng.uniform_index(dpreds.size())],
                                 cfg.pools, reg, rng);
            if (rng.coin()) a = negate(a, reg);
            if (orbit_hits(a, reg, fact_set) || reserved.count(a)) continue;
            fact_set.insert(a);
            facts.push_back(a);
            break;
          }
        }

        std::vector<std::vector<int>> triggers(subset.size());
        bool all_rules_ok = true;
        for (std::size_t si = 0; si < subset.size() && all_rules_ok; ++si) {
          const Rule& r = subset[si];
          std::map<std::string, std::string> preset;
          preset[r.head.args[0].text] = a0;
          preset[r.head.args[1].text] = b0;
          bool placed = false;
          for (int t = 0; t < kContextAttempts && !placed; ++t) {
            auto inst = try_instantiate(r, preset, cfg.pools, reg, rng);
            if (!inst) continue;
            bool ok = true;
            for (const Atom& a : inst->atoms) {
              if (fact_set.count(a)) continue;
              if (orbit_hits(a, reg, fact_set) || reserved.count(a)) {
                ok = false;
                break;
              }
            }
            if (!ok) continue;
            for (const Atom& a : inst->atoms) {
              auto pos = std::find(facts.begin(), facts.end(), a);
              if (pos == facts.end()) {
                fact_set.insert(a);
                facts.push_back(a);
                triggers[si].push_back(static_cast<int>(facts.size()) - 1);
              } else {
                triggers[si].push_back(static_cast<int>(pos - facts.begin()));
              }
            }
            placed = true;
          }
          all_rules_ok = placed;
        }
        if (!all_rules_ok) continue;

        RuleSet rs;
        rs.rules = subset;
        rs.registry = reg;
        GroundProgram prog = ground(rs, facts);
        StableModelSet sms = stable_models(prog, cfg.limits);
        Atom hneg = negate(hpos, reg);
        double wpos = hypothesis_weight(prog, sms, hpos);
        double wneg = hypothesis_weight(prog, sms, hneg);

        auto ctx = std::make_shared<GenContext>();
        ctx->facts = facts;
        ctx->rules = subset;
        ctx->trigger_idx = triggers;
        std::vector<std::string> ids;
        for (const Rule& r : subset) ids.push_back(r.id);
        int trig = prog.triggered_count();
        std::string prefix =
            "overlap-b" + std::to_string(bi) + "-s" + std::to_string(mask);
        out.push_back(make_example(prefix + "-pos", ctx, ctx_index, hpos, wpos,
                                   "overlap_pos", ids, 1, trig, stats));
        out.push_back(make_example(prefix + "-neg", ctx, ctx_index, hneg, wneg,
                                   "overlap_neg", ids, 1, trig, stats));
        if (stats) ++stats->contexts;
        ++ctx_index;
        emitted = true;
      }
      if (!emitted)
        throw SemanticsError("exhausted attempts generating overlap subset");
    }
  }
  return out;
}

std::map<int, int> derivation_depths(const GroundProgram& p) {
  std::map<int, int> depth;
  std::vector<char> in(p.atom_count(), 0);
  for (int f : p.facts()) {
    in[f] = 1;
    depth[f] = 0;
  }
  int round = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++round;
    std::vector<int> newly;
    for (const GroundInstance& inst : p.instances()) {
      if (inst.constraint() || in[inst.head]) continue;
      bool fire = true;
      for (int b : inst.body)
        if (!in[b]) {
          fire = false;
          break;
        }
      if (fire) newly.push_back(inst.head);
    }
    for (int id : newly) {
      if (!in[id]) {
        in[id] = 1;
        depth[id] = round;
        changed = true;
      }
    }
  }
  return depth;
}

std::vector<Example> gen_chain(const std::vector<Rule>& pool, int depth,
                               const Registry& reg, const GenConfig& cfg,
                               GenStats* stats) {
  cfg.validate();
  if (depth < 1) throw SemanticsError("chain depth must be at least 1");

  // head of q feeds some body atom of r
  std::vector<std::vector<int>> succ(pool.size());
  for (std::size_t qi = 0; qi < pool.size(); ++qi) {
    for (std::size_t ri = 0; ri < pool.size(); ++ri) {
      for (const Atom& b : pool[ri].body) {
        if (b.pred == pool[qi].head.pred) {
          succ[qi].push_back(static_cast<int>(ri));
          break;
        }
      }
    }
  }
  // reach[i][t]: a chain of t more rules can follow rule i
  std::vector<std::vector<bool>> reach(pool.size(),
                                       std::vector<bool>(depth, false));
  for (std::size_t i = 0; i < pool.size(); ++i) reach[i][0] = true;
  for (int t = 1; t < depth; ++t)
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (int j : succ[i])
        if (reach[j][t - 1]) {
          reach[i][t] = true;
          break;
        }
  std::vector<int> starts;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (reach[i][depth - 1]) starts.push_back(static_cast<int>(i));
  if (starts.empty())
    throw SemanticsError("rule pool supports no chain of length " +
                         std::to_string(depth));

  int per_ctx = 2 * (depth + 1) + 4;
  int contexts = (cfg.n + per_ctx - 1) / per_ctx;
  std::vector<Example> out;

  for (int ci = 0; ci < contexts; ++ci) {
    Rng rng = Rng::stream(cfg.seed, Rng::hash_str("chain"), ci);
    bool emitted = false;
    for (int attempt = 0; attempt < kContextAttempts && !emitted; ++attempt) {
      std::vector<int> chain;
      chain.push_back(starts[rng.uniform_index(starts.size())]);
      bool chain_ok = true;
      for (int step = 1; step < depth && chain_ok; ++step) {
        std::vector<int> cands;
        for (int j : succ[chain.back()])
          if (reach[j][depth - 1 - step]) cands.push_back(j);
        if (cands.empty())
          chain_ok = false;
        else
          chain.push_back(cands[rng.uniform_index(cands.size())]);
      }
      if (!chain_ok) continue;

      // instantiate the chain bottom-up
      std::vector<Atom> planned;
      std::set<Atom> planned_set;
      std::set<Atom> reserved;  // orbits of the derived atoms
      std::vector<Atom> derived;
      std::vector<std::vector<Atom>> rule_fact_atoms(chain.size());
      bool inst_ok = true;
      for (std::size_t i = 0; i < chain.size() && inst_ok; ++i) {
        const Rule& r = pool[chain[i]];
        std::map<std::string, std::string> preset;
        int feed_index = -1;
        if (i > 0) {
          const Atom& prev = derived.back();
          int rel_pos = 0;
          bool bound = false;
          for (const Atom& b : r.body) {
            if (reg.sig(b.pred).comparison) continue;
            if (!bound && b.pred == prev.pred) {
              bool feasible = true;
              for (int k = 0; k < 2; ++k) {
                if (b.args[k].is_var) {
                  auto [it, ins] =
                      preset.emplace(b.args[k].text, prev.args[k].text);
                  if (!ins && it->second != prev.args[k].text) feasible = false;
                } else if (!(b.args[k] == prev.args[k])) {
                  feasible = false;
                }
              }
              if (feasible) {
                feed_index = rel_pos;
                bound = true;
              } else {
                preset.clear();
              }
            }
            ++rel_pos;
          }
          if (!bound) {
            inst_ok = false;
            break;
          }
        }
        bool placed = false;
        for (int t = 0; t < kContextAttempts && !placed; ++t) {
          auto inst = try_instantiate(r, preset, cfg.pools, reg, rng);
          if (!inst) continue;
          if (i > 0 && !(inst->atoms[feed_index] == derived.back())) continue;
          bool ok = true;
          std::vector<Atom> sides;
          for (int pos = 0; pos < static_cast<int>(inst->atoms.size()); ++pos) {
            if (static_cast<int>(i) > 0 && pos == feed_index) continue;
            sides.push_back(inst->atoms[pos]);
          }
          for (const Atom& a : sides) {
            if (planned_set.count(a)) continue;
            if (orbit_hits(a, reg, planned_set) || reserved.count(a)) {
              ok = false;
              break;
            }
          }
          if (ok) {
            // new conclusion must be fresh relative to facts and to the
            // other chain conclusions, otherwise the depth label lies
            if (orbit_hits(inst->head, reg, planned_set) ||
                reserved.count(inst->head))
              ok = false;
            for (const Atom& d : derived)
              if (inst->head == d) ok = false;
          }
          if (!ok) continue;
          for (const Atom& a : sides) {
            if (!planned_set.count(a)) {
              planned_set.insert(a);
              planned.push_back(a);
            }
            rule_fact_atoms[i].push_back(a);
          }
          std::vector<Atom> orb;
          append_orbit(inst->head, reg, orb);
          reserved.insert(orb.begin(), orb.end());
          derived.push_back(inst->head);
          placed = true;
        }
        inst_ok = placed;
      }
      if (!inst_ok) continue;

      // distractors drawn after planning so they cannot shortcut the chain
      std::vector<Atom> facts;
      std::set<Atom> fact_set = planned_set;
      int target = static_cast<int>(
          rng.uniform_index(static_cast<std::size_t>(cfg.m)));
      int distractor_count =
          std::max(0, target - static_cast<int>(planned.size()));
      std::vector<PredId> dpreds;
      for (int idx : chain)
        for (PredId id : base_predicates_of(pool[idx], reg, true))
          if (std::find(dpreds.begin(), dpreds.end(), id) == dpreds.end())
            dpreds.push_back(id);
      for (int i = 0; i < distractor_count; ++i) {
        for (int t = 0; t < kContextAttempts; ++t) {
          Atom a = sample_atom(dpreds[rng.uniform_index(dpreds.size())],
                               cfg.pools, reg, rng);
          if (rng.coin()) a = negate(a, reg);
          if (orbit_hits(a, reg, fact_set) || reserved.count(a)) continue;
          fact_set.insert(a);
          facts.push_back(a);
          break;
        }
      }
      facts.insert(facts.end(), planned.begin(), planned.end());

      // context rules: unique chain rules in first-use order
      std::vector<Rule> ctx_rules;
      std::vector<int> rule_slot(chain.size());
      for (std::size_t i = 0; i < chain.size(); ++i) {
        const Rule& r = pool[chain[i]];
        int slot = -1;
        for (std::size_t j = 0; j < ctx_rules.size(); ++j)
          if (ctx_rules[j].id == r.id) slot = static_cast<int>(j);
        if (slot < 0) {
          ctx_rules.push_back(r);
          slot = static_cast<int>(ctx_rules.size()) - 1;
        }
        rule_slot[i] = slot;
      }
      std::vector<std::vector<int>> triggers(ctx_rules.size());
      for (std::size_t i = 0; i < chain.size(); ++i) {
        for (const Atom& a : rule_fact_atoms[i]) {
          auto pos = std::find(facts.begin(), facts.end(), a);
          triggers[rule_slot[i]].push_back(
              static_cast<int>(pos - facts.begin()));
        }
      }

      RuleSet rs;
      rs.rules = ctx_rules;
      rs.registry = reg;
      GroundProgram prog = ground(rs, facts);
      StableModelSet sms = stable_models(prog, cfg.limits);

      // verify the advertised depths against the grounding
      std::map<int, int> rounds = derivation_depths(prog);
      bool depths_ok = true;
      for (std::size_t d = 0; d < derived.size(); ++d) {
        auto id = prog.find_atom(derived[d]);
        if (!id || rounds.count(*id) == 0 ||
            rounds[*id] != static_cast<int>(d) + 1) {
          depths_ok = false;
          break;
        }
      }
      if (!depths_ok) continue;

      Atom d0;
      double w0 = 0.0, w0a = 1.0;
      Atom d0a;
      bool pair_ok = false;
      for (int t = 0; t < 8 && !pair_ok; ++t) {
        d0 = facts[rng.uniform_index(facts.size())];
        d0a = alter(d0, reg, rng);
        w0 = hypothesis_weight(prog, sms, d0);
        w0a = hypothesis_weight(prog, sms, d0a);
        pair_ok = (w0 == 1.0 && w0a == 0.0);
      }
      if (!pair_ok) continue;

      struct DepthPair {
        Atom concl, alt;
        double w, wa;
      };
      std::vector<DepthPair> pairs;
      bool law_ok = true;
      for (std::size_t d = 0; d < derived.size() && law_ok; ++d) {
        DepthPair pr;
        pr.concl = derived[d];
        pr.w = hypothesis_weight(prog, sms, pr.concl);
        pr.alt = alter(pr.concl, reg, rng);
        pr.wa = hypothesis_weight(prog, sms, pr.alt);
        if (pr.alt == negate(pr.concl, reg) &&
            std::abs(pr.w + pr.wa - 1.0) > kSumLawTol)
          law_ok = false;
        pairs.push_back(pr);
      }
      if (!law_ok) continue;

      const Rule& final_rule = pool[chain.back()];
      auto cwa = draw_cwa_hypotheses(prog, sms, ctx_rules, final_rule.head,
                                     cfg.pools, reg, rng);
      if (!cwa) continue;

      auto ctx = std::make_shared<GenContext>();
      ctx->facts = facts;
      ctx->rules = ctx_rules;
      ctx->trigger_idx = triggers;
      std::vector<std::string> ids;
      for (int idx : chain) ids.push_back(pool[idx].id);
      int trig = prog.triggered_count();
      std::string prefix = "chain-c" + std::to_string(ci) + "-";

      out.push_back(make_example(prefix + "d0", ctx, ci, d0, w0, "chain_concl",
                                 ids, 0, trig, stats));
      out.push_back(make_example(prefix + "d0-alt", ctx, ci, d0a, w0a,
                                 "chain_alter", ids, 0, trig, stats));
      for (std::size_t d = 0; d < pairs.size(); ++d) {
        std::string dd = std::to_string(d + 1);
        out.push_back(make_example(prefix + "d" + dd, ctx, ci, pairs[d].concl,
                                   pairs[d].w, "chain_concl", ids,
                                   static_cast<int>(d) + 1, trig, stats));
        out.push_back(make_example(prefix + "d" + dd + "-alt", ctx, ci,
                                   pairs[d].alt, pairs[d].wa, "chain_alter",
                                   ids, static_cast<int>(d) + 1, trig, stats));
      }
      out.push_back(make_example(prefix + "h5", ctx, ci, cwa->h5, cwa->w5,
                                 "h5", ids, depth, trig, stats));
      out.push_back(make_example(prefix + "h6", ctx, ci, cwa->h6, cwa->w6,
                                 "h6", ids, depth, trig, stats));
      out.push_back(make_example(prefix + "h7", ctx, ci, cwa->h7, cwa->w7,
                                 "h7", ids, depth, trig, stats));
      out.push_back(make_example(prefix + "h8", ctx, ci, cwa->h8, cwa->w8,
                                 "h8", ids, depth, trig, stats));
      if (stats) ++stats->contexts;
      emitted = true;
    }
    if (!emitted)
      throw SemanticsError("exhausted attempts generating chain context " +
                           std::to_string(ci));
  }
  return out;
}

DatasetSplit split_dataset(std::vector<Example> examples,
                           const std::array<double, 3>& ratios, Rng& rng) {
  double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9)
    throw SemanticsError("split ratios must sum to 1");

  std::vector<int> order;  // context indices in first appearance order
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto [it, inserted] =
        members.emplace(examples[i].context_index, std::vector<std::size_t>{});
    if (inserted) order.push_back(examples[i].context_index);
    it->second.push_back(i);
  }
  int nonzero = 0;
  for (double r : ratios)
    if (r > 0.0) ++nonzero;
  if (static_cast<int>(order.size()) < nonzero)
    throw SemanticsError("fewer contexts than dataset splits");

  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_index(i)]);

  std::size_t n = order.size();
  auto count = [&](double r) {
    return static_cast<std::size_t>(std::llround(r * static_cast<double>(n)));
  };
  std::size_t n_train = std::min(count(ratios[0]), n);
  std::size_t n_dev = std::min(count(ratios[1]), n - n_train);

  DatasetSplit split;
  for (std::size_t ci = 0; ci < n; ++ci) {
    std::vector<Example>* dest = &split.test;
    if (ci < n_train)
      dest = &split.train;
    else if (ci < n_train + n_dev)
      dest = &split.dev;
    for (std::size_t ei : members[order[ci]]) dest->push_back(examples[ei]);
  }
  return split;
}

}  // namespace softhorn
