#pragma once

#include "softhorn/datagen.hpp"
#include "softhorn/verbalizer.hpp"

namespace softhorn {

// One dataset line. `context`/`hypothesis` carry the synthetic English,
// the symbolic fields carry the exact machine-readable scene so weights
// can be re-derived later.
struct ExampleRecord {
  std::string id;
  std::string context;
  std::string hypothesis;
  bool label = false;
  double weight = 0.0;
  std::vector<std::string> rule_ids;
  std::string hyp_class;
  int depth = 0;
  int triggered_count = 0;
  std::string symbolic_context;
  std::string symbolic_hypothesis;
};

// Renders generated examples to records, verbalizing each context once.
class ExampleRenderer {
 public:
  ExampleRenderer(const Registry& reg, const TemplateRegistry& templates)
      : reg_(reg), templates_(templates) {}

  ExampleRecord render(const Example& e);

 private:
  const Registry& reg_;
  const TemplateRegistry& templates_;
  std::map<const GenContext*, std::string> text_cache_;
  std::map<const GenContext*, std::string> symbolic_cache_;
};

// Rule lines (with confidence) followed by fact lines, newline separated.
std::string serialize_symbolic_context(const GenContext& ctx,
                                       const Registry& reg);
struct SymbolicContext {
  std::vector<Rule> rules;
  std::vector<Atom> facts;
};
SymbolicContext parse_symbolic_context(const std::string& text,
                                       const Registry& reg);

std::string record_to_json_line(const ExampleRecord& r);
ExampleRecord record_from_json_line(const std::string& line, int line_no = 0);

void write_jsonl(const std::string& path,
                 const std::vector<ExampleRecord>& records);
std::vector<ExampleRecord> read_jsonl(const std::string& path);

// Re-derives every stored weight from the stored symbolic context and
// checks the per-class weight laws; exact reproduction is required.
struct AuditReport {
  std::size_t examples = 0;
  std::size_t weight_mismatches = 0;
  std::size_t label_mismatches = 0;
  std::size_t law_violations = 0;
  std::vector<std::string> notes;  // first few offending ids

  bool ok() const {
    return weight_mismatches == 0 && label_mismatches == 0 &&
           law_violations == 0;
  }
};
AuditReport audit_records(const std::vector<ExampleRecord>& records,
                          const Registry& reg, SolverLimits limits = {});

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace softhorn
