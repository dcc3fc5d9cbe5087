#include "softhorn/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace softhorn {

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Amp, Arrow,
                 ConfSep, Lt, Gt, End };

struct Token {
  Tok kind;
  std::string text;
  int col;
};

class Lexer {
 public:
  Lexer(const std::string& src, int line_no) : src_(src), line_(line_no) {
    advance();
  }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, tok_.col);
  }

  int line() const { return line_; }

 private:
  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    int col = static_cast<int>(pos_) + 1;
    if (pos_ >= src_.size() || src_[pos_] == '#') {
      tok_ = {Tok::End, "", col};
      return;
    }
    char c = src_[pos_];
    if (c == '(') { tok_ = {Tok::LParen, "(", col}; ++pos_; return; }
    if (c == ')') { tok_ = {Tok::RParen, ")", col}; ++pos_; return; }
    if (c == ',') { tok_ = {Tok::Comma, ",", col}; ++pos_; return; }
    if (c == '&') { tok_ = {Tok::Amp, "&", col}; ++pos_; return; }
    if (c == '<') { tok_ = {Tok::Lt, "<", col}; ++pos_; return; }
    if (c == '>') { tok_ = {Tok::Gt, ">", col}; ++pos_; return; }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok_ = {Tok::Arrow, "->", col};
      pos_ += 2;
      return;
    }
    if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == ':') {
      tok_ = {Tok::ConfSep, "::", col};
      pos_ += 2;
      return;
    }
    if (c == '"') {
      std::size_t end = src_.find('"', pos_ + 1);
      if (end == std::string::npos)
        throw ParseError("unterminated string constant", line_, col);
      tok_ = {Tok::String, src_.substr(pos_ + 1, end - pos_ - 1), col};
      pos_ = end + 1;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t start = pos_;
      bool dot = false;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              (src_[pos_] == '.' && !dot))) {
        if (src_[pos_] == '.') dot = true;
        ++pos_;
      }
      tok_ = {Tok::Number, src_.substr(start, pos_ - start), col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      tok_ = {Tok::Ident, src_.substr(start, pos_ - start), col};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_;
  Token tok_;
};

Term make_term(const Token& t) {
  if (t.kind == Tok::String || t.kind == Tok::Number)
    return Term::constant(t.text);
  return spells_like_variable(t.text) ? Term::var(t.text)
                                      : Term::constant(t.text);
}

Atom parse_atom(Lexer& lx, const Registry& reg) {
  Token name = lx.take();
  Atom atom;
  if (name.kind == Tok::Lt) {
    atom.pred = reg.less_than();
  } else if (name.kind == Tok::Gt) {
    atom.pred = reg.greater_than();
  } else if (name.kind == Tok::Ident) {
    PredId id = reg.find(name.text);
    if (id < 0)
      throw ParseError("unknown predicate '" + name.text + "'", lx.line(),
                       name.col);
    atom.pred = id;
  } else {
    throw ParseError("expected predicate name", lx.line(), name.col);
  }
  if (lx.take().kind != Tok::LParen) lx.fail("expected '('");
  Token a0 = lx.take();
  if (a0.kind != Tok::Ident && a0.kind != Tok::Number && a0.kind != Tok::String)
    throw ParseError("expected term", lx.line(), a0.col);
  if (lx.take().kind != Tok::Comma) lx.fail("expected ','");
  Token a1 = lx.take();
  if (a1.kind != Tok::Ident && a1.kind != Tok::Number && a1.kind != Tok::String)
    throw ParseError("expected term", lx.line(), a1.col);
  if (lx.take().kind != Tok::RParen) lx.fail("expected ')'");
  atom.args[0] = make_term(a0);
  atom.args[1] = make_term(a1);
  return atom;
}

// every variable must be bound by a relational body atom: head safety plus
// groundability of comparison arguments
void check_safety(const Rule& r, const Registry& reg, int line_no) {
  std::vector<std::string> bound;
  for (const Atom& a : r.body) {
    if (reg.sig(a.pred).comparison) continue;
    for (const Term& t : a.args)
      if (t.is_var) bound.push_back(t.text);
  }
  auto is_bound = [&](const std::string& v) {
    for (const std::string& b : bound)
      if (b == v) return true;
    return false;
  };
  for (const Atom& a : r.body) {
    if (!reg.sig(a.pred).comparison) continue;
    for (const Term& t : a.args)
      if (t.is_var && !is_bound(t.text))
        throw ParseError("comparison variable '" + t.text +
                             "' not bound by a relational body atom",
                         line_no, 1);
  }
  for (const Term& t : r.head.args)
    if (t.is_var && !is_bound(t.text))
      throw ParseError("unsafe head variable '" + t.text + "'", line_no, 1);
}

// variables shared between slots of different types are almost always a
// typo in the rule corpus; reject them early
void check_variable_types(const Rule& r, const Registry& reg, int line_no) {
  std::map<std::string, std::string> var_type;
  auto visit = [&](const Atom& a) {
    const PredicateSig& sig = reg.sig(a.pred);
    if (sig.comparison) return;
    for (int i = 0; i < 2; ++i) {
      if (!a.args[i].is_var) continue;
      const std::string& ty = sig.arg_types[i];
      auto [it, inserted] = var_type.emplace(a.args[i].text, ty);
      if (!inserted && it->second != ty)
        throw ParseError("variable '" + a.args[i].text + "' used as both '" +
                             it->second + "' and '" + ty + "'",
                         line_no, 1);
    }
  };
  for (const Atom& a : r.body) visit(a);
  visit(r.head);
}

}  // namespace

Rule parse_rule(const std::string& text, const Registry& registry,
                const std::string& id, int line_no) {
  Lexer lx(text, line_no);
  Token conf = lx.take();
  if (conf.kind != Tok::Number)
    throw ParseError("expected confidence value", line_no, conf.col);
  double c = std::stod(conf.text);
  if (!(c > 0.0 && c <= 1.0))
    throw ParseError("confidence " + conf.text + " outside (0,1]", line_no,
                     conf.col);
  if (lx.take().kind != Tok::ConfSep) lx.fail("expected '::'");

  Rule rule;
  rule.id = id;
  rule.confidence = c;
  rule.body.push_back(parse_atom(lx, registry));
  while (lx.peek().kind == Tok::Amp) {
    lx.take();
    rule.body.push_back(parse_atom(lx, registry));
  }
  if (lx.take().kind != Tok::Arrow) lx.fail("expected '->'");
  Token head_start = lx.peek();
  rule.head = parse_atom(lx, registry);
  if (lx.peek().kind != Tok::End) lx.fail("trailing input after rule");

  if (registry.sig(rule.head.pred).comparison)
    throw ParseError("comparison atom in rule head", line_no, head_start.col);
  bool relational_body = false;
  for (const Atom& a : rule.body)
    relational_body |= !registry.sig(a.pred).comparison;
  if (!relational_body)
    throw ParseError("rule body has no relational atom", line_no, 1);
  check_safety(rule, registry, line_no);
  check_variable_types(rule, registry, line_no);
  return rule;
}

Atom parse_fact(const std::string& text, const Registry& registry,
                int line_no) {
  Lexer lx(text, line_no);
  Token start = lx.peek();
  Atom atom = parse_atom(lx, registry);
  if (lx.peek().kind != Tok::End) lx.fail("trailing input after fact");
  if (registry.sig(atom.pred).comparison)
    throw ParseError("comparison atoms cannot be asserted as facts", line_no,
                     start.col);
  if (!atom.ground())
    throw ParseError("unbound variable in fact '" + text + "'", line_no,
                     start.col);
  return atom;
}

static std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

static bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<Rule> parse_rules_text(const std::string& text,
                                   const Registry& registry) {
  std::vector<Rule> rules;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    std::string id = "r" + std::to_string(rules.size() + 1);
    rules.push_back(parse_rule(lines[i], registry, id, static_cast<int>(i + 1)));
  }
  return rules;
}

std::vector<Atom> parse_facts_text(const std::string& text,
                                   const Registry& registry) {
  std::vector<Atom> facts;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    facts.push_back(parse_fact(lines[i], registry, static_cast<int>(i + 1)));
  }
  return facts;
}

Registry parse_registry_text(const std::string& text) {
  Registry reg;
  std::vector<std::string> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    std::istringstream in(lines[i]);
    std::string name, t1, t2, sym, negof;
    in >> name >> t1 >> t2 >> sym >> negof;
    if (name.empty() || t1.empty() || t2.empty())
      throw ParseError("registry line needs 'name type1 type2'",
                       static_cast<int>(i + 1), 1);
    PredicateSig sig;
    sig.name = name;
    sig.arg_types = {t1, t2};
    sig.symmetric = (sym == "symmetric" || sym == "sym" || sym == "yes");
    if (!sym.empty() && !sig.symmetric && sym != "-")
      throw ParseError("bad symmetry flag '" + sym + "'",
                       static_cast<int>(i + 1), 1);
    if (!negof.empty() && negof != "-") {
      sig.negative_form = true;
      sig.base = negof;
    }
    reg.add(std::move(sig));
  }
  reg.finalize();
  return reg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SemanticsError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Rule> load_rules_file(const std::string& path,
                                  const Registry& registry) {
  return parse_rules_text(read_file(path), registry);
}

std::vector<Atom> load_facts_file(const std::string& path,
                                  const Registry& registry) {
  return parse_facts_text(read_file(path), registry);
}

Registry load_registry_file(const std::string& path) {
  return parse_registry_text(read_file(path));
}

}  // namespace softhorn
