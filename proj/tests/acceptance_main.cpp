// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "softhorn/jsonl.hpp"
#include "softhorn/parser.hpp"
#include "softhorn/toy_model.hpp"
#include "testutil.hpp"

using namespace softhorn;
using testutil::data_path;
using testutil::fact;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
  void expect_near(double got, double want, double tol,
                   const std::string& label) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: got %.6f, want %.6f (tol %g)",
                    label.c_str(), got, want, tol);
      expect(false, buf);
    }
  }
  void expect_under(double seconds, double bound) {
    if (seconds > bound) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "runtime %.2fs exceeds %.0fs", seconds,
                    bound);
      expect(false, buf);
    }
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// ---------------------------------------------------------------------

void c1_family_demo(Check& c) {
  double t0 = now_seconds();
  Registry reg = testutil::demo_registry();
  RuleSet rs;
  rs.registry = reg;
  rs.rules = load_rules_file(data_path("family_demo.rules"), reg);
  std::vector<Atom> facts =
      load_facts_file(data_path("family_demo.facts"), reg);
  GroundProgram p = ground(rs, facts);
  StableModelSet sm = stable_models(p);

  c.expect_near(query_probability(p, sm, fact("spouse(Laure,Mike)", reg)),
                0.700, 0.001, "spouse(Laure,Mike)");
  c.expect_near(query_probability(p, sm, fact("spouse(Anne,Mark)", reg)),
                0.100, 0.001, "spouse(Anne,Mark)");
  double unmarried =
      query_probability(p, sm, fact("negspouse(Anne,Mike)", reg));
  c.expect(unmarried >= 0.885, "negspouse(Anne,Mike) = " +
                                   std::to_string(unmarried) + " below 0.885");
  c.expect_under(now_seconds() - t0, 1.0);
}

void c2_conflicting_pair(Check& c) {
  double t0 = now_seconds();
  Registry reg = testutil::demo_registry();
  RuleSet rs;
  rs.registry = reg;
  rs.rules = {parse_rule("0.64 :: child(A,B) -> negspouse(A,B)", reg, "r1"),
              parse_rule("0.3 :: relative(A,B) -> spouse(A,B)", reg, "r2")};
  std::vector<Atom> facts = {fact("negparent(Eve,Carl)", reg),
                             fact("child(Eve,David)", reg),
                             fact("relative(Eve,David)", reg),
                             fact("predecessor(Eve,David)", reg)};
  GroundProgram p = ground(rs, facts);
  StableModelSet sm = stable_models(p);
  c.expect_near(query_probability(p, sm, fact("negspouse(Eve,David)", reg)),
                0.55, 0.005, "negspouse(Eve,David)");
  c.expect_near(query_probability(p, sm, fact("spouse(Eve,David)", reg)),
                0.134, 0.005, "spouse(Eve,David)");
  c.expect_under(now_seconds() - t0, 1.0);
}

void c3_single_rule_identity(Check& c) {
  Registry reg = testutil::demo_registry();
  const char* shapes[] = {
      "0.5 :: parent(C,A) & child(B,C) -> spouse(A,B)",
      "0.5 :: child(A,B) -> negspouse(A,B)",
      "0.5 :: relation(A,B) -> negchild(A,B)",
      "0.5 :: successor(B,A) -> negspouse(A,B)",
      "0.5 :: child(C,B) & relative(C,A) -> negchild(A,B)",
  };
  auto pools = default_pools(FactFormat::kNames);
  Rng rng(777);
  int done = 0;
  while (done < 50) {
    Rule r = parse_rule(shapes[rng.uniform_index(5)], reg, "r1");
    r.confidence = 0.05 + 0.9 * rng.next_double();
    int body_size = static_cast<int>(r.body.size());
    FactDraw draw = gen_facts(r, body_size, pools, reg, rng);
    RuleSet rs;
    rs.registry = reg;
    rs.rules = {r};
    GroundProgram p = ground(rs, draw.facts);
    int soft = 0;
    for (const GroundInstance& inst : p.instances())
      if (inst.source == GroundInstance::kRule && !inst.hard) ++soft;
    if (soft != 1) continue;
    double got = query(p, draw.conclusion).probability;
    if (std::abs(got - r.confidence) > 1e-9) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "pair %d: q=%.12f conf=%.12f", done, got,
                    r.confidence);
      c.expect(false, buf);
      return;
    }
    ++done;
  }
}

void c4_oracle_equivalence(Check& c) {
  double t0 = now_seconds();
  Rng rng(31337);
  int done = 0, attempts = 0;
  while (done < 500 && attempts < 20000) {
    ++attempts;
    testutil::RandomProgram rp = testutil::random_program(rng);
    GroundProgram p = ground(rp.rules, rp.facts);
    if (p.atom_count() > 12) continue;
    StableModelSet fast = stable_models(p);
    StableModelSet brute = brute_force_models(p);
    for (int id = 0; id < static_cast<int>(p.atom_count()); ++id) {
      double a = fast.probability_of(id);
      double b = brute.probability_of(id);
      if (std::abs(a - b) > 1e-12) {
        c.expect(false, "program " + std::to_string(done) + " disagrees on " +
                            p.describe_atom(id));
        return;
      }
    }
    ++done;
  }
  c.expect(done == 500,
           "only " + std::to_string(done) + " programs within budget");
  c.expect_under(now_seconds() - t0, 120.0);
}

void c5_overlap_counts(Check& c) {
  Registry reg = testutil::demo_registry();
  std::vector<Rule> all =
      load_rules_file(data_path("spouse_overlap.rules"), reg);
  const std::size_t expected[] = {18, 32, 54, 92};
  for (std::size_t k = 2; k <= 5; ++k) {
    std::vector<Rule> rules(all.begin(), all.begin() + k);
    GenConfig cfg;
    cfg.n = 8;  // one batch
    cfg.m = 5;
    cfg.seed = 1000 + k;
    cfg.pools = default_pools(FactFormat::kNames);
    std::vector<Example> ex = gen_overlap(rules, reg, cfg);
    if (ex.size() != expected[k - 2]) {
      c.expect(false, "|R|=" + std::to_string(k) + " produced " +
                          std::to_string(ex.size()) + " examples, want " +
                          std::to_string(expected[k - 2]));
    }
  }
}

struct Slice {
  std::vector<ExampleRecord> records;
  std::size_t contexts = 0;
};

Slice generate_slice(const Registry& reg, std::uint64_t seed) {
  TemplateRegistry templates(reg);
  templates.load_overrides(read_file(data_path("templates.tsv")));
  ExampleRenderer renderer(reg, templates);
  Slice slice;
  GenStats stats;

  std::vector<Example> all;
  std::vector<Rule> singles =
      load_rules_file(data_path("single_demo.rules"), reg);
  GenConfig cfg;
  cfg.m = 5;
  cfg.pools = default_pools(FactFormat::kNames);
  cfg.seed = seed;
  int base = 0;
  for (const Rule& r : singles) {
    cfg.n = 1000;
    std::vector<Example> block = gen_single_rule(r, reg, cfg, &stats);
    for (Example& e : block) e.context_index += base;
    base += 100000;
    all.insert(all.end(), block.begin(), block.end());
  }

  std::vector<Rule> overlap =
      load_rules_file(data_path("spouse_overlap.rules"), reg);
  cfg.n = 2760;  // 30 batches of 92
  std::vector<Example> ob = gen_overlap(overlap, reg, cfg, &stats);
  for (Example& e : ob) e.context_index += base;
  base += 100000;
  all.insert(all.end(), ob.begin(), ob.end());

  std::vector<Rule> pool = load_rules_file(data_path("chain_pool.rules"), reg);
  cfg.n = 2400;  // 200 contexts of 12
  cfg.m = 6;
  std::vector<Example> cb = gen_chain(pool, 3, reg, cfg, &stats);
  for (Example& e : cb) e.context_index += base;
  all.insert(all.end(), cb.begin(), cb.end());

  for (const Example& e : all) slice.records.push_back(renderer.render(e));
  slice.contexts = stats.contexts;
  return slice;
}

void c6_self_consistency(Check& c) {
  double t0 = now_seconds();
  Registry reg = testutil::demo_registry();
  Slice slice = generate_slice(reg, 20260808);
  c.expect(slice.records.size() >= 10000,
           "slice has only " + std::to_string(slice.records.size()) +
               " examples");
  // audit what a consumer would read back, not the in-memory copies
  std::string path = "/tmp/softhorn_acceptance_slice.jsonl";
  write_jsonl(path, slice.records);
  std::vector<ExampleRecord> stored = read_jsonl(path);
  c.expect(stored.size() == slice.records.size(), "serialization lost rows");
  AuditReport report = audit_records(stored, reg);
  c.expect(report.weight_mismatches == 0,
           std::to_string(report.weight_mismatches) + " weight mismatches" +
               (report.notes.empty() ? "" : " (" + report.notes[0] + ")"));
  c.expect(report.label_mismatches == 0,
           std::to_string(report.label_mismatches) + " label mismatches");
  c.expect(report.law_violations == 0,
           std::to_string(report.law_violations) + " weight-law violations" +
               (report.notes.empty() ? "" : " (" + report.notes[0] + ")"));
  c.expect_under(now_seconds() - t0, 300.0);
}

void c7_split_ratios(Check& c) {
  Registry reg = testutil::demo_registry();
  auto contexts_of = [](const std::vector<Example>& part) {
    std::set<int> s;
    for (const Example& e : part) s.insert(e.context_index);
    return s.size();
  };

  std::vector<Rule> singles =
      load_rules_file(data_path("single_demo.rules"), reg);
  GenConfig cfg;
  cfg.n = 800;  // 100 contexts
  cfg.m = 5;
  cfg.seed = 5;
  cfg.pools = default_pools(FactFormat::kNames);
  std::vector<Example> sx = gen_single_rule(singles[0], reg, cfg);
  Rng r1(9);
  DatasetSplit ssp = split_dataset(sx, {0.8, 0.1, 0.1}, r1);
  c.expect(std::llabs(static_cast<long long>(contexts_of(ssp.train)) - 80) <= 1,
           "single train contexts " + std::to_string(contexts_of(ssp.train)));
  c.expect(std::llabs(static_cast<long long>(contexts_of(ssp.dev)) - 10) <= 1,
           "single dev contexts " + std::to_string(contexts_of(ssp.dev)));
  c.expect(std::llabs(static_cast<long long>(contexts_of(ssp.test)) - 10) <= 1,
           "single test contexts " + std::to_string(contexts_of(ssp.test)));

  std::vector<Rule> pool = load_rules_file(data_path("chain_pool.rules"), reg);
  cfg.n = 240;  // 20 chain contexts at depth 3
  cfg.m = 6;
  std::vector<Example> cx = gen_chain(pool, 3, reg, cfg);
  Rng r2(9);
  DatasetSplit csp = split_dataset(cx, {0.7, 0.1, 0.2}, r2);
  c.expect(std::llabs(static_cast<long long>(contexts_of(csp.train)) - 14) <= 1,
           "chain train contexts " + std::to_string(contexts_of(csp.train)));
  c.expect(std::llabs(static_cast<long long>(contexts_of(csp.dev)) - 2) <= 1,
           "chain dev contexts " + std::to_string(contexts_of(csp.dev)));
  c.expect(std::llabs(static_cast<long long>(contexts_of(csp.test)) - 4) <= 1,
           "chain test contexts " + std::to_string(contexts_of(csp.test)));

  std::vector<Rule> overlap =
      load_rules_file(data_path("spouse_overlap.rules"), reg);
  cfg.n = 460;  // 5 batches: 155 contexts
  cfg.m = 5;
  std::vector<Example> ox = gen_overlap(overlap, reg, cfg);
  Rng r3(9);
  DatasetSplit osp = split_dataset(ox, {0.7, 0.1, 0.2}, r3);
  std::size_t total = contexts_of(osp.train) + contexts_of(osp.dev) +
                      contexts_of(osp.test);
  c.expect(std::llabs(static_cast<long long>(contexts_of(osp.train)) -
                      std::llround(0.7 * total)) <= 1,
           "overlap train contexts " + std::to_string(contexts_of(osp.train)));
  c.expect(std::llabs(static_cast<long long>(contexts_of(osp.test)) -
                      std::llround(0.2 * total)) <= 1,
           "overlap test contexts " + std::to_string(contexts_of(osp.test)));
}

void c8_verbalizer_golden(Check& c) {
  Registry reg = testutil::demo_registry();
  TemplateRegistry templates(reg);
  templates.load_overrides(read_file(data_path("templates.tsv")));
  VerbalContext ctx;
  ctx.rules = load_rules_file(data_path("spouse_intro.rules"), reg);
  ctx.facts = load_facts_file(data_path("spouse_intro.facts"), reg);
  std::string context_text = assemble_context(ctx, reg, templates);
  std::string hypothesis_text =
      verbalize_fact(fact("spouse(Alice,Bob)", reg), reg, templates);
  Prompt prompt = assemble_prompt(context_text, hypothesis_text);

  const std::string want =
      "<s>The parent of Eve is not Carl. The child of Eve is David. If the "
      "child of the first person is the third person, and the parent of the "
      "third person is the second person, then the first person is the spouse "
      "of the second person. The parent of Carl is Bob. The child of Alice is "
      "Carl.</s></s>The spouse of Alice is Bob.</s>";
  if (prompt.encoded != want) {
    c.expect(false, "prompt mismatch:\n  got:  " + prompt.encoded +
                        "\n  want: " + want);
  }
}

void c9_loss_contract(Check& c) {
  double t0 = now_seconds();
  // gradient against central differences on the 9x9 grid
  const double h = 1e-6;
  for (int fi = 1; fi <= 9; ++fi) {
    for (int wi = 1; wi <= 9; ++wi) {
      double f = fi / 10.0, w = wi / 10.0;
      double numeric = (wbce_loss(f + h, w) - wbce_loss(f - h, w)) / (2 * h);
      double analytic = wbce_grad(f, w);
      double rel =
          std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic));
      if (rel > 1e-6) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "grad mismatch at f=%.1f w=%.1f", f, w);
        c.expect(false, buf);
        return;
      }
    }
  }

  Registry reg = testutil::demo_registry();
  std::vector<Rule> singles =
      load_rules_file(data_path("single_demo.rules"), reg);
  GenConfig cfg;
  cfg.n = 800;
  cfg.m = 5;
  cfg.seed = 424242;
  cfg.pools = default_pools(FactFormat::kNames);
  std::vector<Example> ex = gen_single_rule(singles[0], reg, cfg);  // conf .825

  TemplateRegistry templates(reg);
  templates.load_overrides(read_file(data_path("templates.tsv")));
  ExampleRenderer renderer(reg, templates);
  std::vector<ExampleRecord> records;
  for (const Example& e : ex) records.push_back(renderer.render(e));

  ToyConfig tcfg;
  TrainResult result = train_toy(records, tcfg);
  double sum = 0.0;
  int n = 0;
  for (const ExampleRecord& r : records) {
    if (r.hyp_class != "h3") continue;
    sum += result.model.predict(r, tcfg);
    ++n;
  }
  double mean = n ? sum / n : 0.0;
  c.expect_near(mean, 0.825, 0.05, "mean h3 prediction");

  std::vector<PredictionRecord> oracle;
  for (const ExampleRecord& r : records)
    oracle.push_back({r.id, r.weight, r.weight, r.label});
  c.expect(ca_at_k(oracle, 0.01) == 1.0, "oracle ca@0.01 below 1.0");
  c.expect_under(now_seconds() - t0, 60.0);
}

void c10_soft_chain_anchor(Check& c) {
  Registry reg = testutil::demo_registry();
  RuleSet rs;
  rs.registry = reg;
  rs.rules = {parse_rule("0.7 :: child(A,B) -> parent(B,A)", reg, "r1"),
              parse_rule("0.7 :: parent(B,A) -> relative(A,B)", reg, "r2")};
  GroundProgram p = ground(rs, {fact("child(x,y)", reg)});
  Atom concl = fact("relative(x,y)", reg);
  double fast = query(p, concl).probability;
  double brute = brute_force_query(p, concl).probability;
  c.expect_near(fast, 0.5385, 1e-3, "two-rule soft chain");
  c.expect(std::abs(fast - brute) <= 1e-12, "solver disagrees with oracle");
}

struct Criterion {
  const char* name;
  std::function<void(Check&)> fn;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"C1 household demo query anchors (0.700 / 0.100 / >=0.885)",
       c1_family_demo},
      {"C2 conflicting-pair weights (0.55 / 0.134)", c2_conflicting_pair},
      {"C3 single-trigger identity: query equals confidence (50 pairs, 1e-9)",
       c3_single_rule_identity},
      {"C4 oracle equivalence on 500 random programs (1e-12)",
       c4_oracle_equivalence},
      {"C5 overlap per-context counts {18, 32, 54, 92}", c5_overlap_counts},
      {"C6 dataset self-consistency audit on a 10k slice", c6_self_consistency},
      {"C7 split ratios 80/10/10 and 70/10/20 at context granularity",
       c7_split_ratios},
      {"C8 synthetic-English golden prompt, byte-exact", c8_verbalizer_golden},
      {"C9 loss contract: gradient check, toy fit, oracle CA@0.01",
       c9_loss_contract},
      {"C10 soft-chain anchor 0.5385 vs brute force", c10_soft_chain_anchor},
  };

  int failures = 0;
  for (Criterion& cr : criteria) {
    Check check;
    double t0 = now_seconds();
    try {
      cr.fn(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    double dt = now_seconds() - t0;
    if (check.ok) {
      std::printf("[PASS] %s (%.2fs)\n", cr.name, dt);
    } else {
      std::printf("[FAIL] %s (%.2fs)\n       %s\n", cr.name, dt,
                  check.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of %zu criteria failed\n", failures,
                            criteria.size());
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
