#include "softhorn/verbalizer.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace softhorn {

namespace {

const char* kOrdinals[] = {"first", "second",  "third", "fourth",
                           "fifth", "sixth",   "seventh", "eighth",
                           "ninth", "tenth",   "eleventh", "twelfth"};

std::string fill(const std::string& pattern, const std::string& subject,
                 const std::string& object) {
  std::string out;
  out.reserve(pattern.size() + subject.size() + object.size());
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern.compare(i, 9, "{subject}") == 0) {
      out += subject;
      i += 9;
    } else if (pattern.compare(i, 8, "{object}") == 0) {
      out += object;
      i += 8;
    } else {
      out += pattern[i++];
    }
  }
  return out;
}

void check_slots(const std::string& pattern, const std::string& pred) {
  auto count = [&](const std::string& slot) {
    std::size_t n = 0, pos = 0;
    while ((pos = pattern.find(slot, pos)) != std::string::npos) {
      ++n;
      pos += slot.size();
    }
    return n;
  };
  if (count("{subject}") != 1 || count("{object}") != 1)
    throw SemanticsError("template for '" + pred +
                         "' must contain {subject} and {object} exactly once: " +
                         pattern);
}

std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] += 'a' - 'A';
  return s;
}

// mid-sentence clauses drop the capital of the pattern's own leading word;
// patterns that open with a slot keep whatever fills it (a name keeps its
// capital, an ordinal phrase is already lowercase)
bool starts_with_slot(const std::string& pattern) {
  return pattern.compare(0, 9, "{subject}") == 0 ||
         pattern.compare(0, 8, "{object}") == 0;
}

std::string clause_case(const std::string& pattern, std::string filled) {
  return starts_with_slot(pattern) ? filled : lower_first(std::move(filled));
}

std::string strip_period(std::string s) {
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

TemplateRegistry::TemplateRegistry(const Registry& reg) {
  for (PredId id : reg.positive_relational()) {
    const std::string& p = reg.sig(id).name;
    TemplateEntry e;
    e.fact_pos = "The " + p + " of {subject} is {object}.";
    e.fact_neg = "The " + p + " of {subject} is not {object}.";
    e.head_pos = "{subject} is the " + p + " of {object}";
    e.head_neg = "{subject} is not the " + p + " of {object}";
    entries_[p] = std::move(e);
  }
}

void TemplateRegistry::load_overrides(const std::string& text) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t p = 0;
    while (true) {
      std::size_t tab = line.find('\t', p);
      cols.push_back(line.substr(p, tab == std::string::npos ? tab : tab - p));
      if (tab == std::string::npos) break;
      p = tab + 1;
    }
    if (cols.size() != 3 && cols.size() != 5)
      throw SemanticsError("template line " + std::to_string(line_no) +
                           ": expected 3 or 5 tab-separated columns");
    auto it = entries_.find(cols[0]);
    if (it == entries_.end())
      throw SemanticsError("template for unknown base predicate '" + cols[0] +
                           "'");
    it->second.fact_pos = cols[1];
    it->second.fact_neg = cols[2];
    if (cols.size() == 5) {
      it->second.head_pos = cols[3];
      it->second.head_neg = cols[4];
    } else {
      it->second.head_pos = strip_period(cols[1]);
      it->second.head_neg = strip_period(cols[2]);
    }
  }
  check_injective();
}

const TemplateEntry& TemplateRegistry::entry(
    const std::string& base_name) const {
  auto it = entries_.find(base_name);
  if (it == entries_.end())
    throw SemanticsError("no sentence template for predicate '" + base_name +
                         "'");
  return it->second;
}

void TemplateRegistry::check_injective() const {
  std::set<std::string> seen;
  for (const auto& [pred, e] : entries_) {
    for (const std::string* pat : {&e.fact_pos, &e.fact_neg}) {
      check_slots(*pat, pred);
      if (!seen.insert(*pat).second)
        throw SemanticsError("colliding sentence template: " + *pat);
    }
    check_slots(e.head_pos, pred);
    check_slots(e.head_neg, pred);
  }
}

namespace {

// positive base of an atom's predicate plus its polarity
std::pair<std::string, bool> base_and_polarity(const Atom& a,
                                               const Registry& reg) {
  const PredicateSig& sig = reg.sig(a.pred);
  if (sig.comparison)
    throw SemanticsError("comparison atoms have no sentence form");
  if (sig.negative_form) return {sig.base, false};
  return {sig.name, true};
}

}  // namespace

std::string verbalize_fact(const Atom& fact, const Registry& reg,
                           const TemplateRegistry& templates) {
  auto [base, positive] = base_and_polarity(fact, reg);
  const TemplateEntry& e = templates.entry(base);
  return fill(positive ? e.fact_pos : e.fact_neg, fact.args[0].text,
              fact.args[1].text);
}

std::string verbalize_rule(const Rule& rule, const Registry& reg,
                           const TemplateRegistry& templates) {
  // ordinal phrases: head variables first, then remaining body variables,
  // numbered per type noun
  std::map<std::string, std::string> phrase;
  std::map<std::string, int> per_type;
  auto assign = [&](const Atom& a) {
    const PredicateSig& sig = reg.sig(a.pred);
    for (int i = 0; i < 2; ++i) {
      const Term& t = a.args[i];
      if (!t.is_var || phrase.count(t.text)) continue;
      if (sig.comparison) continue;  // bound by a relational atom (safety)
      int idx = per_type[sig.arg_types[i]]++;
      if (idx >= static_cast<int>(std::size(kOrdinals)))
        throw SemanticsError("too many variables of type '" +
                             sig.arg_types[i] + "' to verbalize");
      phrase[t.text] =
          "the " + std::string(kOrdinals[idx]) + " " + sig.arg_types[i];
    }
  };
  assign(rule.head);
  for (const Atom& a : rule.body) assign(a);

  auto term_phrase = [&](const Term& t) {
    return t.is_var ? phrase.at(t.text) : t.text;
  };

  std::string out = "If ";
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    const Atom& a = rule.body[i];
    if (i) out += ", and ";
    const PredicateSig& sig = reg.sig(a.pred);
    if (sig.comparison) {
      const char* op =
          (a.pred == reg.less_than()) ? " is less than " : " is greater than ";
      out += term_phrase(a.args[0]) + op + term_phrase(a.args[1]);
    } else {
      auto [base, positive] = base_and_polarity(a, reg);
      const TemplateEntry& e = templates.entry(base);
      const std::string& pattern = positive ? e.fact_pos : e.fact_neg;
      out += clause_case(pattern,
                         strip_period(fill(pattern, term_phrase(a.args[0]),
                                           term_phrase(a.args[1]))));
    }
  }
  auto [base, positive] = base_and_polarity(rule.head, reg);
  const TemplateEntry& e = templates.entry(base);
  const std::string& head_pattern = positive ? e.head_pos : e.head_neg;
  out += ", then " +
         clause_case(head_pattern,
                     fill(head_pattern, term_phrase(rule.head.args[0]),
                          term_phrase(rule.head.args[1]))) +
         ".";
  return out;
}

std::vector<std::vector<int>> compute_trigger_indices(
    const std::vector<Atom>& facts, const std::vector<Rule>& rules,
    const Registry& reg) {
  std::vector<std::vector<int>> out(rules.size());
  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    const Rule& r = rules[ri];
    std::vector<const Atom*> relational;
    for (const Atom& a : r.body)
      if (!reg.sig(a.pred).comparison) relational.push_back(&a);
    std::map<std::string, std::string> binding;
    std::vector<int> chosen(relational.size(), -1);
    // first full instantiation of the body by facts, scanning in order
    std::function<bool(std::size_t)> descend = [&](std::size_t level) -> bool {
      if (level == relational.size()) return true;
      const Atom& pattern = *relational[level];
      for (int fi = 0; fi < static_cast<int>(facts.size()); ++fi) {
        if (facts[fi].pred != pattern.pred) continue;
        int orientations = (reg.sig(pattern.pred).symmetric &&
                            !(facts[fi].args[0] == facts[fi].args[1]))
                               ? 2
                               : 1;
        for (int o = 0; o < orientations; ++o) {
          auto saved = binding;
          bool ok = true;
          for (int k = 0; k < 2 && ok; ++k) {
            const Term& t = pattern.args[k];
            const std::string& value = facts[fi].args[k == 0 ? o : 1 - o].text;
            if (!t.is_var) {
              ok = t.text == value;
            } else {
              auto [it, ins] = binding.emplace(t.text, value);
              ok = ins || it->second == value;
            }
          }
          if (ok) {
            chosen[level] = fi;
            if (descend(level + 1)) return true;
          }
          binding = std::move(saved);
        }
      }
      return false;
    };
    if (descend(0)) out[ri] = chosen;
  }
  return out;
}

std::string assemble_context(const VerbalContext& ctx, const Registry& reg,
                             const TemplateRegistry& templates,
                             Rng* shuffle_rng) {
  std::vector<std::vector<int>> triggers = ctx.trigger_idx;
  if (triggers.size() != ctx.rules.size())
    triggers = compute_trigger_indices(ctx.facts, ctx.rules, reg);

  std::vector<bool> claimed(ctx.facts.size(), false);
  std::vector<std::vector<int>> per_rule(ctx.rules.size());
  for (std::size_t ri = 0; ri < ctx.rules.size(); ++ri) {
    std::vector<int> idx = triggers[ri];
    std::sort(idx.begin(), idx.end());
    for (int fi : idx) {
      if (fi < 0 || fi >= static_cast<int>(ctx.facts.size()) || claimed[fi])
        continue;
      claimed[fi] = true;
      per_rule[ri].push_back(fi);
    }
  }

  std::vector<std::string> sentences;
  for (std::size_t fi = 0; fi < ctx.facts.size(); ++fi)
    if (!claimed[fi])
      sentences.push_back(verbalize_fact(ctx.facts[fi], reg, templates));
  for (std::size_t ri = 0; ri < ctx.rules.size(); ++ri) {
    sentences.push_back(verbalize_rule(ctx.rules[ri], reg, templates));
    for (int fi : per_rule[ri])
      sentences.push_back(verbalize_fact(ctx.facts[fi], reg, templates));
  }

  if (shuffle_rng) {
    for (std::size_t i = sentences.size(); i > 1; --i)
      std::swap(sentences[i - 1], sentences[shuffle_rng->uniform_index(i)]);
  }

  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += " ";
    out += sentences[i];
  }
  return out;
}

Prompt assemble_prompt(const std::string& context_text,
                       const std::string& hypothesis_text) {
  if (context_text.empty() || hypothesis_text.empty())
    throw SemanticsError("prompt parts must be nonempty");
  Prompt p;
  p.context_text = context_text;
  p.hypothesis_text = hypothesis_text;
  p.encoded = "<s>" + context_text + "</s></s>" + hypothesis_text + "</s>";
  return p;
}

Prompt split_prompt(const std::string& encoded) {
  const std::string open = "<s>", sep = "</s></s>", close = "</s>";
  if (encoded.compare(0, open.size(), open) != 0)
    throw SemanticsError("encoded prompt missing <s> prefix");
  std::size_t mid = encoded.find(sep);
  if (mid == std::string::npos)
    throw SemanticsError("encoded prompt missing </s></s> separator");
  if (encoded.size() < close.size() ||
      encoded.compare(encoded.size() - close.size(), close.size(), close) != 0)
    throw SemanticsError("encoded prompt missing </s> suffix");
  Prompt p;
  p.context_text = encoded.substr(open.size(), mid - open.size());
  p.hypothesis_text = encoded.substr(
      mid + sep.size(), encoded.size() - close.size() - mid - sep.size());
  p.encoded = encoded;
  return p;
}

}  // namespace softhorn
