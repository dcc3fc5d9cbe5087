#include "doctest.h"
#include "softhorn/verbalizer.hpp"
#include "testutil.hpp"

using namespace softhorn;
using testutil::data_path;
using testutil::demo_registry;
using testutil::fact;

namespace {

const char* kIntroContext =
    "The parent of Eve is not Carl. The child of Eve is David. If the child "
    "of the first person is the third person, and the parent of the third "
    "person is the second person, then the first person is the spouse of the "
    "second person. The parent of Carl is Bob. The child of Alice is Carl.";

TemplateRegistry demo_templates(const Registry& reg) {
  TemplateRegistry t(reg);
  t.load_overrides(read_file(data_path("templates.tsv")));
  t.check_injective();
  return t;
}

}  // namespace

TEST_CASE("fact sentences follow the basic pattern") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  CHECK(verbalize_fact(fact("child(Eve,David)", reg), reg, t) ==
        "The child of Eve is David.");
  CHECK(verbalize_fact(fact("negparent(Eve,Carl)", reg), reg, t) ==
        "The parent of Eve is not Carl.");
  CHECK(verbalize_fact(fact("spouse(Alice,Bob)", reg), reg, t) ==
        "The spouse of Alice is Bob.");
  CHECK(verbalize_fact(fact("livesWith(Anne,Mark)", reg), reg, t) ==
        "Anne lives with Mark.");
}

TEST_CASE("letters format renders constants verbatim") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  CHECK(verbalize_fact(fact("child(\"A\",\"B\")", reg), reg, t) ==
        "The child of A is B.");
}

TEST_CASE("rule sentences use head-first ordinals") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  Rule r = parse_rule("1.0 :: child(A,C) & parent(C,B) -> spouse(A,B)", reg);
  CHECK(verbalize_rule(r, reg, t) ==
        "If the child of the first person is the third person, and the parent "
        "of the third person is the second person, then the first person is "
        "the spouse of the second person.");

  Rule inv = parse_rule("1.0 :: child(B,A) -> parent(A,B)", reg);
  CHECK(verbalize_rule(inv, reg, t) ==
        "If the child of the second person is the first person, then the "
        "first person is the parent of the second person.");
}

TEST_CASE("rule sentences keep ordinal phrases consistent across atoms") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  Rule r = parse_rule("0.64 :: child(A,B) -> negspouse(A,B)", reg);
  CHECK(verbalize_rule(r, reg, t) ==
        "If the child of the first person is the second person, then the "
        "first person is not the spouse of the second person.");
}

TEST_CASE("constants in rules keep their capitals") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  Rule r = parse_rule("0.5 :: livesWith(Eve,B) -> spouse(Eve,B)", reg);
  CHECK(verbalize_rule(r, reg, t) ==
        "If Eve lives with the first person, then Eve is the spouse of the "
        "first person.");
}

TEST_CASE("comparison atoms and typed ordinals verbalize") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  Rule r = parse_rule(
      "0.99 :: birthYear(B,D) & foundYear(A,C) & <(C,D) -> negfounder(A,B)",
      reg);
  std::string s = verbalize_rule(r, reg, t);
  CHECK(s.find("is less than") != std::string::npos);
  CHECK(s.find("the first company") != std::string::npos);
  CHECK(s.find("is not the founder of") != std::string::npos);
}

TEST_CASE("context assembly matches the generated layout") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  VerbalContext ctx;
  ctx.rules = load_rules_file(data_path("spouse_intro.rules"), reg);
  ctx.facts = load_facts_file(data_path("spouse_intro.facts"), reg);

  SUBCASE("trigger indices provided") {
    ctx.trigger_idx = {{2, 3}};
    CHECK(assemble_context(ctx, reg, t) == kIntroContext);
  }
  SUBCASE("trigger indices computed from the grounding") {
    CHECK(assemble_context(ctx, reg, t) == kIntroContext);
  }
}

TEST_CASE("shuffle mode permutes deterministically") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  VerbalContext ctx;
  ctx.rules = load_rules_file(data_path("spouse_intro.rules"), reg);
  ctx.facts = load_facts_file(data_path("spouse_intro.facts"), reg);

  Rng a(11), b(11), c(12);
  std::string s1 = assemble_context(ctx, reg, t, &a);
  std::string s2 = assemble_context(ctx, reg, t, &b);
  std::string s3 = assemble_context(ctx, reg, t, &c);
  CHECK(s1 == s2);
  CHECK(s3 != s1);  // one draw of many permutations
}

TEST_CASE("prompt encoding is exact and invertible") {
  Prompt p = assemble_prompt("A.", "B.");
  CHECK(p.encoded == "<s>A.</s></s>B.</s>");
  Prompt back = split_prompt(p.encoded);
  CHECK(back.context_text == "A.");
  CHECK(back.hypothesis_text == "B.");
  CHECK_THROWS_AS(assemble_prompt("", "B."), SemanticsError);

  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  VerbalContext ctx;
  ctx.rules = load_rules_file(data_path("spouse_intro.rules"), reg);
  ctx.facts = load_facts_file(data_path("spouse_intro.facts"), reg);
  std::string context_text = assemble_context(ctx, reg, t);
  std::string hyp = verbalize_fact(fact("spouse(Alice,Bob)", reg), reg, t);
  Prompt full = assemble_prompt(context_text, hyp);
  CHECK(full.encoded == std::string("<s>") + kIntroContext +
                            "</s></s>The spouse of Alice is Bob.</s>");
}

TEST_CASE("template collisions are rejected at load") {
  Registry reg = demo_registry();
  TemplateRegistry t(reg);
  CHECK_THROWS_AS(
      t.load_overrides("child\tSame {subject} {object}.\tX {subject} {object}.\n"
                       "parent\tSame {subject} {object}.\tY {subject} {object}.\n"),
      SemanticsError);
  TemplateRegistry t2(reg);
  t2.load_overrides(
      "child\tSame {subject} {object}.\tX {subject} {object}.\n"
      "parent\tOther {subject} {object}.\tY {subject} {object}.\n");
  CHECK_THROWS_AS(
      [&] {
        TemplateRegistry t3(reg);
        t3.load_overrides("child\tNo slots here.\tNone either.\n");
        t3.check_injective();
      }(),
      SemanticsError);
}

TEST_CASE("negated and positive sentences differ by the negation token") {
  Registry reg = demo_registry();
  TemplateRegistry t = demo_templates(reg);
  Rng rng(5);
  std::vector<PredId> pos = reg.positive_relational();
  for (int i = 0; i < 100; ++i) {
    PredId pid = pos[rng.uniform_index(pos.size())];
    if (t.entry(reg.sig(pid).name).fact_pos.find("The ") != 0) continue;
    Atom a;
    a.pred = pid;
    a.args[0] = Term::constant("S" + std::to_string(i));
    a.args[1] = Term::constant("O" + std::to_string(i));
    std::string p = verbalize_fact(a, reg, t);
    std::string n = verbalize_fact(negate(a, reg), reg, t);
    CHECK(n.find(" not ") != std::string::npos);
    std::string n_without = n;
    n_without.erase(n_without.find(" not"), 4);
    CHECK(n_without == p);
  }
}
