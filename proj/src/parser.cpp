#include <algorithm>
#include <map>
#include <set>

#include "pes/error.hpp"
#include "pes/parser.hpp"

namespace pes {

namespace {

enum class SymbolClass { none, clock, control, predicate, constant };

class Parser {
public:
  Parser(std::vector<Token> toks, const std::map<std::string, std::int32_t>& overrides)
      : t_(std::move(toks)), overrides_(overrides) {}

  PesFile run() {
    collect_declarations();
    std::set<std::string> seen_sections;
    while (!at_end()) {
      const Token& tok = cur();
      if (tok.kind != TokenKind::keyword)
        fail("expected a section keyword or #define");
      if (tok.text != "#define" && !seen_sections.insert(tok.text).second)
        throw SourceError(ErrorKind::duplicate, tok.line, tok.column,
                          "section " + tok.text + " appears twice");
      if (tok.text == "#define")
        parse_define();
      else if (tok.text == "CLOCKS:")
        parse_name_section(file_.clocks, false);
      else if (tok.text == "CONTROL:")
        parse_name_section(file_.controls, true);
      else if (tok.text == "PREDICATE:")
        parse_name_section(file_.predicates, false);
      else if (tok.text == "INITIALLY:")
        parse_initially();
      else if (tok.text == "START:")
        parse_start();
      else if (tok.text == "EQUATIONS:")
        parse_equations();
      else if (tok.text == "INVARIANT:")
        parse_invariants();
      else if (tok.text == "TRANSITIONS:")
        parse_transitions();
      else
        fail("unexpected '" + tok.text + "'");
    }
    for (const char* required : {"PREDICATE:", "START:", "EQUATIONS:"})
      if (!seen_sections.count(required))
        throw SourceError(ErrorKind::syntax, cur().line, cur().column,
                          std::string("missing section ") + required);
    file_.spec_clocks = spec_clocks_;
    check_equations();
    return std::move(file_);
  }

private:
  // ---- token helpers -----------------------------------------------------------------

  const Token& cur() const { return t_[i_]; }
  const Token& ahead(std::size_t k) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  bool at_end() const { return cur().kind == TokenKind::end; }
  bool is_punct(std::string_view p) const { return cur().is(TokenKind::punct, p); }
  bool is_keyword(std::string_view k) const { return cur().is(TokenKind::keyword, k); }

  static std::string describe(const Token& t) {
    if (t.kind == TokenKind::end)
      return "end of input";
    return "'" + t.text + "'";
  }

  [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::syntax) const {
    throw SourceError(kind, cur().line, cur().column, msg + ", found " + describe(cur()));
  }

  [[noreturn]] void fail_at(const Token& t, ErrorKind kind, const std::string& msg) const {
    throw SourceError(kind, t.line, t.column, msg);
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p))
      fail("expected '" + std::string(p) + "'");
    ++i_;
  }

  void expect_keyword(std::string_view k) {
    if (!is_keyword(k))
      fail("expected '" + std::string(k) + "'");
    ++i_;
  }

  const Token& expect_identifier() {
    if (cur().kind != TokenKind::identifier)
      fail("expected an identifier");
    return t_[i_++];
  }

  // ---- symbol table --------------------------------------------------------------------

  SymbolClass classify(const std::string& name) const {
    if (clocks_.count(name) || is_spec_clock(name))
      return SymbolClass::clock;
    if (controls_.count(name))
      return SymbolClass::control;
    if (predicates_.count(name))
      return SymbolClass::predicate;
    if (defines_.count(name))
      return SymbolClass::constant;
    return SymbolClass::none;
  }

  void declare(const Token& tok, std::set<std::string>& into) {
    if (classify(tok.text) != SymbolClass::none)
      fail_at(tok, ErrorKind::duplicate, "'" + tok.text + "' is already declared");
    into.insert(tok.text);
  }

  // Reads every declaration list up front so that uses may precede declarations and so
  // that clocks appearing only in predicate bindings can be recognized.
  void collect_declarations() {
    for (std::size_t k = 0; k < t_.size(); ++k) {
      const Token& tok = t_[k];
      if (tok.is(TokenKind::keyword, "#define")) {
        if (k + 2 >= t_.size() || t_[k + 1].kind != TokenKind::identifier ||
            t_[k + 2].kind != TokenKind::integer)
          fail_at(tok, ErrorKind::syntax, "expected '#define NAME INTEGER'");
        if (classify(t_[k + 1].text) != SymbolClass::none)
          fail_at(t_[k + 1], ErrorKind::duplicate,
                  "'" + t_[k + 1].text + "' is already declared");
        auto o = overrides_.find(t_[k + 1].text);
        defines_[t_[k + 1].text] =
            o != overrides_.end() ? o->second : static_cast<std::int32_t>(t_[k + 2].value);
        continue;
      }
      std::set<std::string>* into = nullptr;
      if (tok.is(TokenKind::keyword, "CLOCKS:"))
        into = &clocks_;
      else if (tok.is(TokenKind::keyword, "CONTROL:"))
        into = &controls_;
      else if (tok.is(TokenKind::keyword, "PREDICATE:"))
        into = &predicates_;
      if (!into)
        continue;
      std::size_t saved = i_;
      i_ = k + 1;
      for (const Token* name : read_name_list(into == &controls_))
        declare(*name, *into);
      i_ = saved;
    }
    // Bare names in binding lists that are not declared become clocks local to the formula.
    for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
      if (t_[k].kind != TokenKind::identifier || !predicates_.count(t_[k].text))
        continue;
      std::size_t m = k + 1;
      while (m < t_.size() && (t_[m].is(TokenKind::punct, "[") || t_[m].is(TokenKind::punct, "{"))) {
        std::string close = t_[m].text == "[" ? "]" : "}";
        ++m;
        while (m < t_.size() && !t_[m].is(TokenKind::punct, close) && t_[m].kind != TokenKind::end) {
          const Token& item = t_[m];
          bool assigned = m + 1 < t_.size() && t_[m + 1].is(TokenKind::punct, "=");
          if (item.kind == TokenKind::identifier && !assigned &&
              classify(item.text) == SymbolClass::none)
            spec_clocks_.push_back(item.text);
          ++m;
        }
        ++m;
      }
    }
  }

  // `{a, b(2), c}`; value-count hints are dropped when allowed.
  std::vector<const Token*> read_name_list(bool allow_hints) {
    std::vector<const Token*> names;
    expect_punct("{");
    if (is_punct("}")) {
      ++i_;
      return names;
    }
    for (;;) {
      names.push_back(&expect_identifier());
      if (allow_hints && is_punct("(")) {
        ++i_;
        if (cur().kind != TokenKind::integer)
          fail("expected an integer value-count hint");
        ++i_;
        expect_punct(")");
      }
      if (is_punct(",")) {
        ++i_;
        continue;
      }
      expect_punct("}");
      return names;
    }
  }

  // ---- sections --------------------------------------------------------------------------

  void parse_define() {
    ++i_;
    const Token& name = expect_identifier();
    file_.defines.emplace_back(name.text, defines_.at(name.text));
    ++i_; // value already read during collection
  }

  void parse_name_section(std::vector<std::string>& into, bool allow_hints) {
    ++i_;
    for (const Token* name : read_name_list(allow_hints))
      into.push_back(name->text);
  }

  void parse_initially() {
    ++i_;
    file_.initially = parse_comparison_conj(SymbolClass::clock);
  }

  void parse_start() {
    ++i_;
    const Token& name = expect_identifier();
    if (!predicates_.count(name.text))
      fail_at(name, ErrorKind::validation,
              "start variable '" + name.text + "' is not a declared predicate variable");
    file_.start = name.text;
  }

  void parse_equations() {
    ++i_;
    expect_punct("{");
    while (!is_punct("}")) {
      if (cur().kind != TokenKind::integer)
        fail("expected an equation block number");
      const Token& id_tok = t_[i_++];
      if (id_tok.value <= 0)
        fail_at(id_tok, ErrorKind::syntax, "block numbers must be positive");
      expect_punct(":");
      Parity parity;
      if (is_keyword("mu"))
        parity = Parity::mu;
      else if (is_keyword("nu"))
        parity = Parity::nu;
      else
        fail("expected 'mu' or 'nu'");
      ++i_;
      const Token& var = expect_identifier();
      if (!predicates_.count(var.text))
        fail_at(var, ErrorKind::unresolved,
                "'" + var.text + "' is not a declared predicate variable");
      if (!defined_.insert(var.text).second)
        fail_at(var, ErrorKind::duplicate, "predicate variable '" + var.text + "' defined twice");
      expect_punct("=");
      Formula body = parse_formula();
      int id = static_cast<int>(id_tok.value);
      if (file_.blocks.empty() || file_.blocks.back().id != id ||
          file_.blocks.back().parity != parity)
        file_.blocks.push_back(EquationBlock{id, parity, {}});
      file_.blocks.back().equations.push_back(Equation{var.text, std::move(body)});
    }
    ++i_;
  }

  void parse_invariants() {
    ++i_;
    while (cur().kind == TokenKind::identifier || is_punct("->")) {
      InvariantClause clause;
      if (!is_punct("->"))
        clause.premise = parse_comparison_conj(SymbolClass::control);
      expect_punct("->");
      clause.bound = parse_comparison_conj(SymbolClass::clock);
      file_.invariants.push_back(std::move(clause));
    }
  }

  void parse_transitions() {
    ++i_;
    while (is_punct("(")) {
      TransitionDecl tr;
      ++i_;
      if (!is_punct(",") && !is_punct(")"))
        tr.source_guard = parse_comparison_conj(SymbolClass::control);
      if (is_punct(",")) {
        ++i_;
        tr.clock_guard = parse_comparison_conj(SymbolClass::clock);
      }
      expect_punct(")");
      expect_punct("->");
      expect_punct("(");
      std::set<std::string> assigned;
      while (!is_punct(")")) {
        const Token& name = expect_identifier();
        if (classify(name.text) != SymbolClass::control)
          fail_at(name, ErrorKind::unresolved, "'" + name.text + "' is not a control variable");
        if (!assigned.insert(name.text).second)
          fail_at(name, ErrorKind::duplicate, "control '" + name.text + "' assigned twice");
        expect_punct("=");
        std::int32_t v = parse_value();
        if (v < 0)
          fail("control values must be non-negative");
        tr.assignments.emplace_back(name.text, v);
        if (is_punct(","))
          ++i_;
        else if (!is_punct(")"))
          fail("expected ',' or ')'");
      }
      ++i_;
      if (is_punct("{")) {
        for (const Token* c : read_name_list(false)) {
          if (classify(c->text) != SymbolClass::clock || is_spec_clock(c->text))
            fail_at(*c, ErrorKind::unresolved, "'" + c->text + "' is not a declared clock");
          if (std::count(tr.resets.begin(), tr.resets.end(), c->text))
            fail_at(*c, ErrorKind::duplicate, "clock '" + c->text + "' reset twice");
          tr.resets.push_back(c->text);
        }
      }
      expect_punct(";");
      file_.transitions.push_back(std::move(tr));
    }
  }

  // ---- atoms -------------------------------------------------------------------------------

  std::int32_t parse_value() {
    if (cur().kind == TokenKind::integer)
      return static_cast<std::int32_t>(t_[i_++].value);
    if (cur().kind == TokenKind::identifier) {
      const Token& name = t_[i_++];
      auto it = defines_.find(name.text);
      if (it == defines_.end())
        fail_at(name, ErrorKind::unresolved, "'" + name.text + "' is not a defined constant");
      return it->second;
    }
    fail("expected an integer or a constant name");
  }

  bool at_compare_op() const {
    if (cur().kind != TokenKind::punct)
      return false;
    const std::string& s = cur().text;
    return s == "==" || s == "!=" || s == "<" || s == "<=" || s == ">" || s == ">=";
  }

  CompareOp parse_compare_op() {
    if (!at_compare_op())
      fail("expected a comparison operator");
    const std::string& s = t_[i_++].text;
    if (s == "==") return CompareOp::eq;
    if (s == "!=") return CompareOp::ne;
    if (s == "<") return CompareOp::lt;
    if (s == "<=") return CompareOp::le;
    if (s == ">") return CompareOp::gt;
    return CompareOp::ge;
  }

  bool is_spec_clock(const std::string& name) const {
    return std::count(spec_clocks_.begin(), spec_clocks_.end(), name) > 0;
  }

  // `name op value` where name must have class `want`. Formula-only clocks are accepted
  // only inside formulas.
  Comparison parse_comparison(SymbolClass want, bool in_formula = false) {
    const Token& name = expect_identifier();
    SymbolClass c = classify(name.text);
    if (c == SymbolClass::clock && !in_formula && is_spec_clock(name.text))
      c = SymbolClass::none;
    if (c == SymbolClass::none)
      fail_at(name, ErrorKind::unresolved, "undeclared identifier '" + name.text + "'");
    if (c != want)
      fail_at(name, ErrorKind::syntax,
              "'" + name.text + "' must be a " +
                  (want == SymbolClass::clock ? "clock" : "control variable") + " here");
    const Token& op_tok = cur();
    CompareOp op = parse_compare_op();
    if (want == SymbolClass::clock && op == CompareOp::ne)
      fail_at(op_tok, ErrorKind::syntax, "'!=' is not allowed on clocks");
    return Comparison{name.text, op, parse_value()};
  }

  std::vector<Comparison> parse_comparison_conj(SymbolClass want) {
    std::vector<Comparison> out;
    out.push_back(parse_comparison(want));
    while (is_punct("&&")) {
      ++i_;
      out.push_back(parse_comparison(want));
    }
    return out;
  }

  // ---- formulas ----------------------------------------------------------------------------

  Formula parse_formula() {
    std::size_t lhs_pos = i_;
    Formula lhs = parse_disj();
    if (!is_punct("->"))
      return lhs;
    if (!is_atom_conjunction(lhs))
      fail_at(t_[lhs_pos], ErrorKind::syntax,
              "the premise of '->' must be a conjunction of atoms");
    ++i_;
    Formula rhs = parse_formula();
    return Formula::make(Formula::Kind::implies, {std::move(lhs), std::move(rhs)});
  }

  static bool is_atom(const Formula& f) {
    return f.kind == Formula::Kind::prop_atom || f.kind == Formula::Kind::clock_atom;
  }

  static bool is_atom_conjunction(const Formula& f) {
    if (is_atom(f))
      return true;
    if (f.kind != Formula::Kind::conj)
      return false;
    return std::all_of(f.children.begin(), f.children.end(), is_atom_conjunction);
  }

  Formula parse_disj() {
    Formula first = parse_conj();
    if (!is_punct("||"))
      return first;
    std::vector<Formula> parts;
    parts.push_back(std::move(first));
    while (is_punct("||")) {
      ++i_;
      parts.push_back(parse_conj());
    }
    return Formula::make(Formula::Kind::disj, std::move(parts));
  }

  Formula parse_conj() {
    Formula first = parse_unary();
    if (!is_punct("&&"))
      return first;
    std::vector<Formula> parts;
    parts.push_back(std::move(first));
    while (is_punct("&&")) {
      ++i_;
      parts.push_back(parse_unary());
    }
    return Formula::make(Formula::Kind::conj, std::move(parts));
  }

  Formula parse_parenthesized() {
    expect_punct("(");
    Formula f = parse_formula();
    expect_punct(")");
    return f;
  }

  Formula parse_unary() {
    using K = Formula::Kind;
    if (is_punct("(") || is_punct("{")) {
      std::string close = is_punct("(") ? ")" : "}";
      ++i_;
      Formula f = parse_formula();
      expect_punct(close);
      return f;
    }
    if (is_keyword("\\forall") || is_keyword("\\exists")) {
      bool forall = is_keyword("\\forall");
      ++i_;
      expect_keyword("time");
      if (is_keyword("\\rel")) {
        ++i_;
        expect_punct("[");
        Formula rel = parse_formula();
        expect_punct("]");
        Formula body = parse_parenthesized();
        return Formula::make(forall ? K::forall_time_rel : K::exists_time_rel,
                             {std::move(rel), std::move(body)});
      }
      return Formula::make(forall ? K::forall_time : K::exists_time, {parse_parenthesized()});
    }
    if (is_keyword("\\AllAct") || is_keyword("\\ExistAct")) {
      bool all = is_keyword("\\AllAct");
      ++i_;
      return Formula::make(all ? K::all_act : K::exist_act, {parse_parenthesized()});
    }
    if (is_keyword("UnableWaitInf")) {
      ++i_;
      return Formula::make(K::unable_wait_inf);
    }
    if (is_keyword("AbleWaitInf")) {
      ++i_;
      return Formula::make(K::able_wait_inf);
    }
    if (cur().kind != TokenKind::identifier)
      fail("expected a formula");
    const Token& name = cur();
    SymbolClass c = classify(name.text);
    switch (c) {
    case SymbolClass::predicate:
      ++i_;
      return parse_var_bindings(name.text);
    case SymbolClass::control:
      return Formula::make_atom(K::prop_atom, parse_comparison(SymbolClass::control));
    case SymbolClass::clock:
      return Formula::make_atom(K::clock_atom, parse_comparison(SymbolClass::clock, true));
    case SymbolClass::constant:
      fail_at(name, ErrorKind::syntax, "constant '" + name.text + "' cannot start a formula");
    case SymbolClass::none:
      break;
    }
    fail_at(name, ErrorKind::unresolved, "undeclared identifier '" + name.text + "'");
  }

  Formula parse_var_bindings(const std::string& name) {
    Formula f = Formula::make_var(name);
    while (is_punct("[") || is_punct("{")) {
      std::string close = is_punct("[") ? "]" : "}";
      ++i_;
      while (!is_punct(close)) {
        const Token& item = expect_identifier();
        SymbolClass c = classify(item.text);
        if (is_punct("=")) {
          if (c != SymbolClass::control)
            fail_at(item, ErrorKind::unresolved, "'" + item.text + "' is not a control variable");
          ++i_;
          std::int32_t v = parse_value();
          if (v < 0)
            fail("control values must be non-negative");
          for (const auto& [n, _] : f.subst)
            if (n == item.text)
              fail_at(item, ErrorKind::duplicate, "control '" + item.text + "' substituted twice");
          f.subst.emplace_back(item.text, v);
        } else {
          if (c != SymbolClass::clock)
            fail_at(item, ErrorKind::unresolved, "'" + item.text + "' is not a clock");
          if (std::count(f.resets.begin(), f.resets.end(), item.text))
            fail_at(item, ErrorKind::duplicate, "clock '" + item.text + "' reset twice");
          f.resets.push_back(item.text);
        }
        if (is_punct(","))
          ++i_;
        else if (!is_punct(close))
          fail("expected ',' or '" + close + "'");
      }
      ++i_;
    }
    return f;
  }

  // ---- whole-file checks -------------------------------------------------------------------

  void check_equations() {
    for (const auto& p : file_.predicates)
      if (!defined_.count(p))
        throw Error(ErrorKind::validation, "predicate variable '" + p + "' has no equation");
  }

  std::vector<Token> t_;
  const std::map<std::string, std::int32_t>& overrides_;
  std::size_t i_ = 0;
  PesFile file_;
  std::map<std::string, std::int32_t> defines_;
  std::set<std::string> clocks_, controls_, predicates_;
  std::vector<std::string> spec_clocks_;
  std::set<std::string> defined_;
};

// ---- printing ----------------------------------------------------------------------------

std::string format_comparison(const Comparison& c) {
  return c.name + " " + to_string(c.op) + " " + std::to_string(c.value);
}

std::string join_comparisons(const std::vector<Comparison>& cs) {
  std::string s;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (k)
      s += " && ";
    s += format_comparison(cs[k]);
  }
  return s;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (k)
      s += ",";
    s += names[k];
  }
  return s;
}

std::string format_joined(const Formula& f, const char* sep) {
  std::string s = "(";
  for (std::size_t k = 0; k < f.children.size(); ++k) {
    if (k)
      s += sep;
    s += format_formula(f.children[k]);
  }
  return s + ")";
}

} // namespace

PesFile parse_pes(std::string_view source) { return parse_pes(source, {}); }

PesFile parse_pes(std::string_view source,
                  const std::map<std::string, std::int32_t>& overrides) {
  PesFile f = Parser(tokenize(source), overrides).run();
  for (const auto& [name, value] : overrides) {
    bool known = std::any_of(f.defines.begin(), f.defines.end(),
                             [&](const auto& d) { return d.first == name; });
    if (!known)
      throw Error(ErrorKind::config, "parameter '" + name + "' is not a #define of this file");
  }
  return f;
}

std::string format_formula(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
  case K::prop_atom:
  case K::clock_atom: return format_comparison(f.atom);
  case K::conj: return format_joined(f, " && ");
  case K::disj: return format_joined(f, " || ");
  case K::implies:
    return "(" + format_formula(f.children[0]) + " -> " + format_formula(f.children[1]) + ")";
  case K::forall_time: return "\\forall time(" + format_formula(f.children[0]) + ")";
  case K::exists_time: return "\\exists time(" + format_formula(f.children[0]) + ")";
  case K::forall_time_rel:
    return "\\forall time\\rel[" + format_formula(f.children[0]) + "](" +
           format_formula(f.children[1]) + ")";
  case K::exists_time_rel:
    return "\\exists time\\rel[" + format_formula(f.children[0]) + "](" +
           format_formula(f.children[1]) + ")";
  case K::all_act: return "\\AllAct(" + format_formula(f.children[0]) + ")";
  case K::exist_act: return "\\ExistAct(" + format_formula(f.children[0]) + ")";
  case K::unable_wait_inf: return "UnableWaitInf";
  case K::able_wait_inf: return "AbleWaitInf";
  case K::var: {
    std::string s = f.var;
    if (!f.subst.empty()) {
      s += "[";
      for (std::size_t k = 0; k < f.subst.size(); ++k) {
        if (k)
          s += ",";
        s += f.subst[k].first + "=" + std::to_string(f.subst[k].second);
      }
      s += "]";
    }
    if (!f.resets.empty())
      s += "{" + join_names(f.resets) + "}";
    return s;
  }
  }
  return "?";
}

std::string pretty_print(const PesFile& file) {
  std::string out;
  for (const auto& [name, value] : file.defines)
    out += "#define " + name + " " + std::to_string(value) + "\n";
  if (!file.clocks.empty())
    out += "CLOCKS: {" + join_names(file.clocks) + "}\n";
  if (!file.controls.empty())
    out += "CONTROL: {" + join_names(file.controls) + "}\n";
  if (!file.initially.empty())
    out += "INITIALLY: " + join_comparisons(file.initially) + "\n";
  out += "PREDICATE: {" + join_names(file.predicates) + "}\n";
  out += "START: " + file.start + "\n";
  out += "EQUATIONS: {\n";
  for (const auto& b : file.blocks)
    for (const auto& eq : b.equations)
      out += std::to_string(b.id) + ": " + to_string(b.parity) + " " + eq.var + " = " +
             format_formula(eq.body) + "\n";
  out += "}\n";
  if (!file.invariants.empty()) {
    out += "INVARIANT:\n";
    for (const auto& c : file.invariants) {
      out += "\t";
      if (!c.premise.empty())
        out += join_comparisons(c.premise) + " ";
      out += "-> " + join_comparisons(c.bound) + "\n";
    }
  }
  if (!file.transitions.empty()) {
    out += "TRANSITIONS:\n";
    for (const auto& t : file.transitions) {
      out += "\t(" + join_comparisons(t.source_guard);
      if (!t.clock_guard.empty())
        out += ", " + join_comparisons(t.clock_guard);
      out += ")->(";
      for (std::size_t k = 0; k < t.assignments.size(); ++k) {
        if (k)
          out += ", ";
        out += t.assignments[k].first + "=" + std::to_string(t.assignments[k].second);
      }
      out += ")";
      if (!t.resets.empty())
        out += "{" + join_names(t.resets) + "}";
      out += ";\n";
    }
  }
  return out;
}

} // namespace pes
