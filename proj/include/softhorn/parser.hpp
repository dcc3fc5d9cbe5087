#pragma once

#include <string>
#include <vector>

#include "softhorn/rules.hpp"

namespace softhorn {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) +
                           ", column " + std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Rule DSL:   <conf> :: <atom> ( "&" <atom> )* "->" <atom>
// Atoms are pred(T1,T2); a term spelled as an uppercase letter followed
// only by digits is a variable, anything else (including quoted strings
// and integers) is a constant. Comparison atoms are <(A,B) and >(A,B).
Rule parse_rule(const std::string& text, const Registry& registry,
                const std::string& id = "r1", int line_no = 1);

// Ground atom, e.g. child(Eve,David) or negparent(Eve,Carl). Variables are
// rejected.
Atom parse_fact(const std::string& text, const Registry& registry,
                int line_no = 1);

// One rule per line; '#' starts a comment; blank lines ignored. Rule ids
// are assigned r1, r2, ... in file order.
std::vector<Rule> parse_rules_text(const std::string& text,
                                   const Registry& registry);
std::vector<Rule> load_rules_file(const std::string& path,
                                  const Registry& registry);

std::vector<Atom> parse_facts_text(const std::string& text,
                                   const Registry& registry);
std::vector<Atom> load_facts_file(const std::string& path,
                                  const Registry& registry);

// Registry file: one predicate per line,
//   name type1 type2 [symmetric|-] [negform-of|-]
// whitespace separated, '#' comments. Missing negative forms are
// synthesized on finalize.
Registry parse_registry_text(const std::string& text);
Registry load_registry_file(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace softhorn
