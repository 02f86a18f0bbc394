#include "ppsolve/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ppsolve/errors.hpp"

namespace ppsolve {

namespace {

struct Located {
  std::string name;
  std::size_t column = 0;
};

struct RawTerm {
  Rational coeff = 1;
  std::vector<Located> vars;
};

struct RawAlternative {
  std::vector<RawTerm> terms;
  std::size_t column = 0;
};

struct RawEquation {
  Located lhs;
  std::optional<ChoiceOp> op;
  std::vector<RawAlternative> alternatives;
  std::size_t line = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  RawEquation parse() {
    RawEquation eq;
    eq.line = line_;
    skip_space();
    eq.lhs = identifier("variable name");
    skip_space();
    expect('=');
    skip_space();
    if (auto op = choice_keyword()) {
      eq.op = op;
      expect('(');
      eq.alternatives.push_back(sum());
      skip_space();
      if (peek() != ',') fail("max/min needs at least two arguments");
      while (peek() == ',') {
        ++pos_;
        eq.alternatives.push_back(sum());
        skip_space();
      }
      expect(')');
    } else {
      eq.alternatives.push_back(sum());
    }
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return eq;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, pos_ + 1, what); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Located identifier(const char* what) {
    skip_space();
    if (!ident_start(peek())) fail(std::string("expected ") + what);
    Located out{"", pos_ + 1};
    while (!at_end() && ident_char(text_[pos_])) out.name += text_[pos_++];
    return out;
  }

  std::optional<ChoiceOp> choice_keyword() {
    for (auto [word, op] : {std::pair{"max", ChoiceOp::Max}, std::pair{"min", ChoiceOp::Min}}) {
      std::string_view w(word);
      if (text_.substr(pos_, 3) != w) continue;
      std::size_t after = pos_ + 3;
      while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
      if (after < text_.size() && text_[after] == '(') {
        pos_ = after;
        return op;
      }
    }
    return std::nullopt;
  }

  Rational number() {
    std::size_t start = pos_;
    while (!at_end() && digit(text_[pos_])) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (!at_end() && digit(text_[pos_])) ++pos_;
    } else if (peek() == '/') {
      ++pos_;
      if (!digit(peek())) fail("expected denominator");
      while (!at_end() && digit(text_[pos_])) ++pos_;
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  RawTerm term() {
    skip_space();
    RawTerm t;
    if (peek() == '-') fail("negative coefficient");
    if (digit(peek()) || peek() == '.') {
      t.coeff = number();
    } else if (ident_start(peek())) {
      t.vars.push_back(identifier("variable"));
    } else {
      fail("expected a coefficient or a variable");
    }
    skip_space();
    while (peek() == '*') {
      ++pos_;
      skip_space();
      if (peek() == '-') fail("negative coefficient");
      t.vars.push_back(identifier("variable after '*'"));
      skip_space();
    }
    return t;
  }

  RawAlternative sum() {
    skip_space();
    RawAlternative alt;
    alt.column = pos_ + 1;
    alt.terms.push_back(term());
    skip_space();
    while (peek() == '+') {
      ++pos_;
      alt.terms.push_back(term());
      skip_space();
    }
    if (peek() == '-') fail("negative coefficient");
    return alt;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
  return line;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

EquationSystem parse_system(std::string_view text, const ParseOptions& options) {
  std::vector<RawEquation> raw;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = strip_comment(lines[i]);
    if (blank(line)) continue;
    raw.push_back(LineParser(line, i + 1).parse());
  }

  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> names;
  for (const auto& eq : raw) {
    if (index.count(eq.lhs.name))
      throw ParseError(eq.line, eq.lhs.column, "variable '" + eq.lhs.name + "' is defined twice");
    index.emplace(eq.lhs.name, names.size());
    names.push_back(eq.lhs.name);
  }

  std::vector<Equation> equations;
  for (const auto& eq : raw) {
    GeneralEquation g{eq.op, {}};
    for (const auto& alt : eq.alternatives) {
      ProbPolynomial p;
      Rational mass = 0;
      for (const auto& t : alt.terms) {
        mass += t.coeff;
        if (t.vars.empty()) {
          p.constant += t.coeff;
          continue;
        }
        std::map<std::size_t, unsigned> powers;
        for (const auto& v : t.vars) {
          auto it = index.find(v.name);
          if (it == index.end()) throw ParseError(eq.line, v.column, "undeclared variable '" + v.name + "'");
          ++powers[it->second];
        }
        p.terms.push_back({t.coeff, Monomial(powers.begin(), powers.end())});
      }
      if (mass > 1)
        throw ParseError(eq.line, alt.column, "coefficient sum " + to_string(mass) + " > 1");
      g.alternatives.push_back(std::move(p));
    }
    equations.push_back(classify(std::move(g)));
  }

  const Flavor flavor = infer_flavor(equations);
  if (flavor == Flavor::MaxMin && !options.allow_mixed)
    throw ParseError(1, 1, "system mixes max and min equations; the max-min flavor must be requested explicitly");
  return EquationSystem(std::move(names), std::move(equations), flavor);
}

namespace {

std::string format_polynomial(const EquationSystem& sys, const ProbPolynomial& p) {
  std::vector<std::string> parts;
  for (const auto& t : p.terms) {
    std::string s = t.coeff == 1 ? "" : to_string(t.coeff);
    for (auto [v, e] : t.monomial)
      for (unsigned k = 0; k < e; ++k) s += (s.empty() ? "" : "*") + sys.name(v);
    parts.push_back(std::move(s));
  }
  if (sgn(p.constant) != 0 || parts.empty()) parts.push_back(to_string(p.constant));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

const char* op_name(ChoiceOp op) { return op == ChoiceOp::Max ? "max" : "min"; }

}  // namespace

std::string format_equation(const EquationSystem& sys, std::size_t i) {
  std::string rhs;
  const auto& eq = sys.equation(i);
  if (const auto* l = std::get_if<LinearEquation>(&eq)) {
    ProbPolynomial p{l->constant, {}};
    for (const auto& t : l->terms) p.terms.push_back({t.coeff, {{t.var, 1}}});
    rhs = format_polynomial(sys, p);
  } else if (const auto* q = std::get_if<ProductEquation>(&eq)) {
    rhs = sys.name(q->left) + "*" + sys.name(q->right);
  } else if (const auto* c = std::get_if<ChoiceEquation>(&eq)) {
    rhs = std::string(op_name(c->op)) + "(" + sys.name(c->first) + ", " + sys.name(c->second) + ")";
  } else {
    const auto& g = std::get<GeneralEquation>(eq);
    if (!g.op) {
      rhs = format_polynomial(sys, g.alternatives.front());
    } else {
      rhs = std::string(op_name(*g.op)) + "(";
      for (std::size_t k = 0; k < g.alternatives.size(); ++k)
        rhs += (k ? ", " : "") + format_polynomial(sys, g.alternatives[k]);
      rhs += ")";
    }
  }
  return sys.name(i) + " = " + rhs;
}

std::string format_system(const EquationSystem& sys) {
  std::string out;
  for (std::size_t i = 0; i < sys.size(); ++i) out += format_equation(sys, i) + "\n";
  return out;
}

Bmdp parse_bmdp(std::string_view text) {
  struct RawRule {
    Rational probability;
    std::vector<Located> children;
    std::size_t line;
  };
  struct RawAction {
    std::string name;
    std::vector<RawRule> rules;
  };
  std::vector<std::string> types;
  std::vector<std::vector<RawAction>> actions;
  std::unordered_map<std::string, std::size_t> index;

  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line_no = ln + 1;
    auto line = strip_comment(lines[ln]);
    if (blank(line)) continue;
    std::size_t first = line.find_first_not_of(" \t");
    std::string_view body = line.substr(first);
    auto keyword_arg = [&](std::string_view kw) -> std::optional<std::string> {
      if (body.substr(0, kw.size()) != kw || body.size() == kw.size() ||
          !std::isspace(static_cast<unsigned char>(body[kw.size()])))
        return std::nullopt;
      std::istringstream rest{std::string(body.substr(kw.size()))};
      std::string name, extra;
      rest >> name;
      if (name.empty() || !ident_start(name.front()) ||
          !std::all_of(name.begin(), name.end(), ident_char) || (rest >> extra))
        throw ParseError(line_no, first + kw.size() + 2, "expected a single identifier");
      return name;
    };
    if (auto name = keyword_arg("type")) {
      if (index.count(*name)) throw ParseError(line_no, first + 1, "type '" + *name + "' declared twice");
      index.emplace(*name, types.size());
      types.push_back(*name);
      actions.emplace_back();
      continue;
    }
    if (auto name = keyword_arg("action")) {
      if (types.empty()) throw ParseError(line_no, first + 1, "action outside of a type section");
      actions.back().push_back({*name, {}});
      continue;
    }
    auto arrow = body.find("->");
    if (arrow == std::string_view::npos) throw ParseError(line_no, first + 1, "expected 'type', 'action' or a rule");
    if (types.empty()) throw ParseError(line_no, first + 1, "rule outside of a type section");
    std::string_view prob_text = body.substr(0, arrow);
    while (!prob_text.empty() && std::isspace(static_cast<unsigned char>(prob_text.back()))) prob_text.remove_suffix(1);
    RawRule rule;
    rule.line = line_no;
    try {
      rule.probability = parse_rational(prob_text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, first + 1, e.what());
    }
    if (sgn(rule.probability) <= 0) throw ParseError(line_no, first + 1, "rule probability must be positive");
    std::string_view rest = body.substr(arrow + 2);
    std::size_t offset = first + arrow + 3;
    std::size_t k = 0;
    bool empty_marker = false;
    while (k < rest.size()) {
      if (std::isspace(static_cast<unsigned char>(rest[k]))) {
        ++k;
        continue;
      }
      if (rest.substr(k, 2) == "()") {
        empty_marker = true;
        k += 2;
        continue;
      }
      if (!ident_start(rest[k])) throw ParseError(line_no, offset + k, "expected a type name");
      Located child{"", offset + k};
      while (k < rest.size() && ident_char(rest[k])) child.name += rest[k++];
      rule.children.push_back(std::move(child));
    }
    if (empty_marker && !rule.children.empty())
      throw ParseError(line_no, offset, "'()' cannot be combined with offspring");
    if (!empty_marker && rule.children.empty())
      throw ParseError(line_no, offset, "rule needs offspring or '()'");
    if (actions.back().empty()) actions.back().push_back({"default", {}});
    actions.back().back().rules.push_back(std::move(rule));
  }

  Bmdp out;
  out.types = types;
  out.actions.resize(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (auto& action : actions[t]) {
      BmdpAction a{action.name, {}};
      for (auto& rule : action.rules) {
        BmdpRule r{rule.probability, {}};
        for (const auto& child : rule.children) {
          auto it = index.find(child.name);
          if (it == index.end()) throw ParseError(rule.line, child.column, "unknown type '" + child.name + "'");
          ++r.offspring[it->second];
        }
        a.rules.push_back(std::move(r));
      }
      out.actions[t].push_back(std::move(a));
    }
  }
  out.validate();
  return out;
}

}  // namespace ppsolve
