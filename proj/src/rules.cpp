#include "softhorn/rules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace softhorn {

double confidence_to_weight(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw SemanticsError("confidence " + std::to_string(c) +
                         " outside (0,1); hard rules bypass the weight map");
  return std::log(c / (1.0 - c));
}

// shortest spelling that parses back to the same double
static std::string format_confidence(double c) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), c);
  return std::string(buf, res.ptr);
}

std::string format_rule(const Rule& r, const Registry& reg) {
  std::string out = format_confidence(r.confidence) + " :: ";
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    if (i) out += " & ";
    out += format_atom(r.body[i], reg);
  }
  out += " -> " + format_atom(r.head, reg);
  return out;
}

std::vector<std::string> rule_variables(const Rule& r) {
  std::vector<std::string> vars;
  auto visit = [&](const Atom& a) {
    for (const Term& t : a.args) {
      if (t.is_var && std::find(vars.begin(), vars.end(), t.text) == vars.end())
        vars.push_back(t.text);
    }
  };
  for (const Atom& a : r.body) visit(a);
  visit(r.head);
  return vars;
}

}  // namespace softhorn
