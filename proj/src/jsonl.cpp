#include "softhorn/jsonl.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "softhorn/parser.hpp"

namespace softhorn {

using ordered_json = nlohmann::ordered_json;

ExampleRecord ExampleRenderer::render(const Example& e) {
  const GenContext* key = e.context.get();
  auto text_it = text_cache_.find(key);
  if (text_it == text_cache_.end()) {
    VerbalContext vc{e.context->facts, e.context->rules,
                     e.context->trigger_idx};
    text_it =
        text_cache_.emplace(key, assemble_context(vc, reg_, templates_)).first;
    symbolic_cache_.emplace(key,
                            serialize_symbolic_context(*e.context, reg_));
  }
  ExampleRecord r;
  r.id = e.id;
  r.context = text_it->second;
  r.hypothesis = verbalize_fact(e.hypothesis, reg_, templates_);
  r.label = e.label;
  r.weight = e.weight;
  r.rule_ids = e.rule_ids;
  r.hyp_class = e.hyp_class;
  r.depth = e.depth;
  r.triggered_count = e.triggered_count;
  r.symbolic_context = symbolic_cache_.at(key);
  r.symbolic_hypothesis = format_atom(e.hypothesis, reg_);
  return r;
}

std::string serialize_symbolic_context(const GenContext& ctx,
                                       const Registry& reg) {
  std::string out;
  for (const Rule& r : ctx.rules) {
    out += format_rule(r, reg);
    out += '\n';
  }
  for (const Atom& f : ctx.facts) {
    out += format_atom(f, reg);
    out += '\n';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

SymbolicContext parse_symbolic_context(const std::string& text,
                                       const Registry& reg) {
  SymbolicContext out;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) {
      if (start > text.size()) break;
      continue;
    }
    if (line.find("::") != std::string::npos) {
      std::string id = "r" + std::to_string(out.rules.size() + 1);
      out.rules.push_back(parse_rule(line, reg, id, line_no));
    } else {
      out.facts.push_back(parse_fact(line, reg, line_no));
    }
    if (start > text.size()) break;
  }
  return out;
}

static ordered_json record_to_json(const ExampleRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["context"] = r.context;
  j["hypothesis"] = r.hypothesis;
  j["label"] = r.label;
  j["weight"] = r.weight;
  ordered_json meta;
  meta["rule_ids"] = r.rule_ids;
  meta["hyp_class"] = r.hyp_class;
  meta["depth"] = r.depth;
  meta["triggered_count"] = r.triggered_count;
  meta["symbolic_context"] = r.symbolic_context;
  meta["symbolic_hypothesis"] = r.symbolic_hypothesis;
  j["meta"] = std::move(meta);
  return j;
}

std::string record_to_json_line(const ExampleRecord& r) {
  return record_to_json(r).dump();
}

ExampleRecord record_from_json_line(const std::string& line, int line_no) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& ex) {
    throw SemanticsError("bad JSON on line " + std::to_string(line_no) + ": " +
                         ex.what());
  }
  ExampleRecord r;
  r.id = j.at("id").get<std::string>();
  r.context = j.at("context").get<std::string>();
  r.hypothesis = j.at("hypothesis").get<std::string>();
  r.label = j.at("label").get<bool>();
  r.weight = j.at("weight").get<double>();
  const auto& meta = j.at("meta");
  r.rule_ids = meta.at("rule_ids").get<std::vector<std::string>>();
  r.hyp_class = meta.at("hyp_class").get<std::string>();
  r.depth = meta.at("depth").get<int>();
  r.triggered_count = meta.at("triggered_count").get<int>();
  r.symbolic_context = meta.at("symbolic_context").get<std::string>();
  r.symbolic_hypothesis = meta.at("symbolic_hypothesis").get<std::string>();
  return r;
}

void write_jsonl(const std::string& path,
                 const std::vector<ExampleRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SemanticsError("cannot write file: " + path);
  for (const ExampleRecord& r : records) {
    out << record_to_json_line(r) << '\n';
  }
}

std::vector<ExampleRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SemanticsError("cannot open file: " + path);
  std::vector<ExampleRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(record_from_json_line(line, line_no));
  }
  return out;
}

AuditReport audit_records(const std::vector<ExampleRecord>& records,
                          const Registry& reg, SolverLimits limits) {
  AuditReport report;
  auto note = [&](const std::string& msg) {
    if (report.notes.size() < 10) report.notes.push_back(msg);
  };

  // contexts repeat across the 8-hypothesis blocks; reason each once
  std::map<std::string, std::pair<GroundProgram, StableModelSet>> cache;
  std::map<std::string, double> weight_by_id;

  for (const ExampleRecord& r : records) {
    ++report.examples;
    auto it = cache.find(r.symbolic_context);
    if (it == cache.end()) {
      SymbolicContext sc = parse_symbolic_context(r.symbolic_context, reg);
      RuleSet rs;
      rs.rules = sc.rules;
      rs.registry = reg;
      GroundProgram prog = ground(rs, sc.facts);
      StableModelSet sms = stable_models(prog, limits);
      it = cache.emplace(r.symbolic_context,
                         std::make_pair(std::move(prog), std::move(sms)))
               .first;
    }
    const GroundProgram& prog = it->second.first;
    const StableModelSet& sms = it->second.second;
    Atom hyp = parse_fact(r.symbolic_hypothesis, reg);
    double w = hypothesis_weight(prog, sms, hyp);
    weight_by_id[r.id] = r.weight;
    if (w != r.weight) {
      ++report.weight_mismatches;
      note("weight mismatch for " + r.id + ": stored " +
           std::to_string(r.weight) + ", derived " + std::to_string(w));
    }
    if (r.label != (r.weight >= 0.5)) {
      ++report.label_mismatches;
      note("label does not match weight for " + r.id);
    }
    bool law_ok = true;
    if (r.hyp_class == "h1" || r.hyp_class == "h6")
      law_ok = (r.weight == 1.0);
    else if (r.hyp_class == "h2" || r.hyp_class == "h5")
      law_ok = (r.weight == 0.0);
    else if (r.hyp_class == "h7" || r.hyp_class == "h8")
      law_ok = (r.weight == 0.0 || r.weight == 1.0);
    if (!law_ok) {
      ++report.law_violations;
      note("class law violated for " + r.id);
    }
  }

  // conclusion/alteration sum law where the alteration is a negation
  std::map<std::string, const ExampleRecord*> by_id;
  for (const ExampleRecord& r : records) by_id[r.id] = &r;
  for (const ExampleRecord& r : records) {
    std::string sibling_id;
    if (r.hyp_class == "h4") {
      sibling_id = r.id.substr(0, r.id.size() - 2) + "h3";
    } else if (r.hyp_class == "chain_alter") {
      const std::string tail = "-alt";
      if (r.id.size() > tail.size() &&
          r.id.compare(r.id.size() - tail.size(), tail.size(), tail) == 0)
        sibling_id = r.id.substr(0, r.id.size() - tail.size());
    } else {
      continue;
    }
    auto sib = by_id.find(sibling_id);
    if (sib == by_id.end()) continue;
    Atom alt = parse_fact(r.symbolic_hypothesis, reg);
    Atom concl = parse_fact(sib->second->symbolic_hypothesis, reg);
    if (alt != negate(concl, reg)) continue;  // swap-style alteration
    if (std::abs(r.weight + sib->second->weight - 1.0) > 1e-12) {
      ++report.law_violations;
      note("conclusion/negation weights of " + sibling_id + "/" + r.id +
           " do not sum to 1");
    }
  }
  return report;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace softhorn
