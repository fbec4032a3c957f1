#include "pes/benchgen.hpp"

#include <functional>

#include "pes/error.hpp"

namespace pes {

namespace {

using std::to_string;

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k)
      s += sep;
    s += parts[k];
  }
  return s;
}

std::vector<std::string> each(int n, const std::function<std::string(int)>& f) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i)
    out.push_back(f(i));
  return out;
}

std::vector<std::string> pairs(int n, const std::function<std::string(int, int)>& f) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      out.push_back(f(i, j));
  return out;
}

std::string p(int i) { return "p" + to_string(i); }
std::string x(int i) { return "x" + to_string(i); }

// "((p1 == v) || (p2 == v) || ...)"
std::string any_equal(int n, int v) {
  return "(" + join(each(n, [&](int i) { return "(" + p(i) + " == " + to_string(v) + ")"; }), " || ") +
         ")";
}

std::string safety(const std::string& phi) { return phi + " && \\forall time(\\AllAct(X))"; }

// Inevitability of phi.
std::string eventually(const std::string& phi, const std::string& var) {
  return "\\forall time\\rel[" + phi + "](" + phi + " || \\AllAct(" + var +
         ")) && (UnableWaitInf || \\exists time(" + phi + "))";
}

// Inevitability of phi where waiting must pass through psi.
std::string eventually_via(const std::string& phi, const std::string& psi, const std::string& var) {
  return "\\forall time\\rel[" + phi + "]( (" + psi + " || " + phi + ") && (" + phi +
         " || \\AllAct(" + var + "))) && ( UnableWaitInf || \\exists time\\rel[" + psi + "](" + phi +
         "))";
}

// Whenever `cond` fails, phi inevitably follows.
std::string response(const std::string& cond, const std::string& phi, const std::string& bind = "") {
  return "1: nu X = \\forall time( ({" + cond + "} || X2" + bind + ") && \\AllAct(X))\n2: mu X2 = " +
         eventually(phi, "X2");
}

std::string sections(const std::vector<std::string>& predicates, const std::string& equations) {
  return "PREDICATE: {" + join(predicates, ",") + "}\nSTART: X\nEQUATIONS: {\n" + equations + "\n}\n";
}

std::string one(const std::string& parity, const std::string& body) {
  return sections({"X"}, "1: " + parity + " X = " + body);
}

std::string two(const std::string& equations) { return sections({"X", "X2"}, equations); }

std::string csma_spec(Category c, int n) {
  switch (c) {
  case Category::as:
    return one("nu", "\\forall time(" + join(pairs(n, [](int i, int j) {
                        return "(" + p(i) + " != 1 || " + p(j) + " != 1 || ((" + x(i) + " < CB) && (" +
                               x(j) + " < CB)))";
                      }), " && ") + " && \\AllAct(X))");
  case Category::bs: {
    std::vector<std::string> parts;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          if (k == i || k == j)
            continue;
          parts.push_back("((" + p(i) + "==1 && " + p(j) + "==1)->(" + p(k) + "==2))");
        }
    return one("nu", " (" + join(parts, " && ") + ")\n && \\forall time(\\AllAct(X))");
  }
  case Category::al:
    return one("mu", eventually("(" + join(each(n, [](int i) {
                                  return "(" + p(i) + " == 0 && " + x(i) + " >= CB)";
                                }), " || ") + ")",
                                "X"));
  case Category::bl: return one("mu", eventually(any_equal(n, 2), "X"));
  case Category::m1: return two(response("p1 != 2", "(p1 == 1)"));
  case Category::m2: return two(response("p != 2", "(p == 0)"));
  case Category::m3: return one("mu", eventually_via(any_equal(n, 1), "(p == 0)", "X"));
  case Category::m4:
    return one("mu", any_equal(n, 1) + " || ((p == 0) && \\forall time(\\AllAct(X)))");
  default: break;
  }
  throw Error(ErrorKind::config, "category not defined for csma");
}

std::string fischer_spec(Category c, int n) {
  switch (c) {
  case Category::as:
    return one("nu", safety(join(pairs(n, [](int i, int j) {
                                   return "(" + p(i) + " != 3 || " + p(j) + " != 3)";
                                 }), " && ")));
  case Category::bs:
    // The lock variable reaches 5 only once five processes exist.
    return one("nu", std::string(n == 2 ? "(p1 != 5)" : "(p != 5)") + "&& \\forall time(\\AllAct(X))");
  case Category::al:
    return one("mu", eventually("(" + join(each(n, [](int i) { return "(" + p(i) + " == 0)"; }), " && ") +
                                    ")",
                                "X"));
  case Category::bl: return one("mu", eventually(any_equal(n, 2), "X"));
  case Category::m1: return two(response("p1 == 0", "(p1 == 3)"));
  case Category::m2: return two(response("p3 == 0", "(p3 == 3)"));
  case Category::m3: return one("mu", "\\exists time( (p1 == 3 && x1 <= 0) || \\ExistAct(X))");
  case Category::m4: {
    std::string phi = any_equal(n, 3);
    std::string f = "\\forall time( " + phi + " || \\AllAct(" + phi + ") )";
    for (int k = 1; k < 5; ++k)
      f = "\\forall time( " + phi + " || \\AllAct(" + f + ") )";
    return one("nu", f);
  }
  default: break;
  }
  throw Error(ErrorKind::config, "category not defined for fischer");
}

std::string grc_spec(Category c, int t) {
  const std::string gate = p(t + 1), ctrl = p(t + 2);
  switch (c) {
  case Category::as: return one("nu", safety("((p1 != 2) || (" + gate + " == 2))"));
  case Category::bs: return one("nu", safety("((" + gate + " != 3) || (" + ctrl + " != 1))"));
  case Category::al: return one("mu", eventually("(" + gate + "==0)", "X"));
  case Category::bl: return one("mu", eventually(any_equal(t, 1), "X"));
  case Category::m1: return two(response(gate + " != 2", "(" + gate + " == 0)"));
  case Category::m2:
    return two(response(gate + " != 2", "(" + gate + " == 0 && z <= CWAIT)", "[z]"));
  case Category::m3:
    return one("nu", "\\forall time( " + join(pairs(t, [](int i, int j) {
                        return "({" + p(i) + " != 2} || " + p(j) + " != 2)";
                      }), " && ") + " && \\AllAct(X))");
  case Category::m4:
    return one("mu", any_equal(t, 1) + " || ((" + gate + " == 0) && \\forall time(\\AllAct(X)))");
  case Category::m4ap:
    return one("mu", eventually_via(any_equal(t, 1), "(" + gate + " == 0)", "X"));
  }
  throw Error(ErrorKind::config, "category not defined for grc");
}

std::string leader_spec(Category c, int n) {
  switch (c) {
  case Category::as:
    return one("nu", safety("(" + join(each(n, [](int i) {
                                  return "(" + p(i) + " < " + to_string(i) + ")";
                                }), "\n\t&&") + "\n)"));
  case Category::bs: {
    std::vector<std::string> parts;
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        for (int d = b + 1; d <= n; ++d)
          parts.push_back("(" + p(a) + " == 0 && " + p(b) + " == 0 && " + p(d) + "==0)");
    return one("nu", safety("(" + join(parts, "\n\t||") + "\n)"));
  }
  case Category::al: {
    std::vector<std::string> parts{"(p1 == 0)"};
    for (int i = 2; i <= n; ++i)
      parts.push_back("(" + p(i) + " != 0)");
    return one("mu", eventually("(" + join(parts, " && ") + ")", "X"));
  }
  case Category::bl: return one("mu", eventually("( p3 == 1)", "X"));
  case Category::m1:
    return one("mu", eventually_via("(p2 != 0)",
                                    "(" + join(each(n, [](int i) { return "(" + p(i) + " != 2)"; }),
                                               " && ") + ")",
                                    "X"));
  case Category::m2:
    return two("1: nu X = \\forall time((({p3 == 0} || X2)) && \\AllAct(X))\n"
               "2: nu X2 = \\forall time(((p3 != 0)) && \\AllAct(X2))");
  case Category::m3:
    return two("1: mu X = X2[z]\n2: mu X2 = \\exists time(((p == 0 && z>=3)) || \\ExistAct(X2))");
  case Category::m4: {
    std::string f = "\\forall time( (p == 1))";
    for (int k = 0; k < 4; ++k)
      f = "\\forall time( (p == 1) || \\AllAct(" + f + ") )";
    return one("nu", f);
  }
  default: break;
  }
  throw Error(ErrorKind::config, "category not defined for leader");
}

std::string defines(const std::vector<std::pair<std::string, std::int32_t>>& defaults,
                    const Params& params) {
  std::string s;
  for (const auto& [name, value] : defaults) {
    auto it = params.find(name);
    s += "#define " + name + " " + to_string(it == params.end() ? value : it->second) + "\n";
  }
  return s;
}

std::vector<std::pair<std::string, std::int32_t>> define_list(Family f, Category c) {
  switch (f) {
  case Family::csma: return {{"CA", 26}, {"CB", 52}, {"CLAMBDA", 808}};
  case Family::fischer: return {{"CA", 10}, {"CB", 19}};
  case Family::grc: {
    std::vector<std::pair<std::string, std::int32_t>> d{{"CCD", 1}, {"CGLT", 2}, {"CGRT", 2},
                                                        {"CTP", 4}, {"CTDL", 1}, {"CTDU", 15}};
    if (c == Category::m2)
      d.emplace_back("CWAIT", 30);
    return d;
  }
  case Family::leader: return {{"CPD", 2}};
  }
  return {};
}

std::string header(Family f, Category c, const Params& params, int nclocks,
                   const std::string& extra_clock, const std::vector<std::string>& controls) {
  std::vector<std::string> clocks = each(nclocks, x);
  if (!extra_clock.empty())
    clocks.push_back(extra_clock);
  return defines(define_list(f, c), params) + "CLOCKS: {" + join(clocks, ",") + "}\n" +
         "CONTROL: {" + join(controls, ",") + "}\n";
}

std::string guard_line(const std::string& source, const std::string& clock_guard,
                       const std::string& assign, const std::string& resets) {
  std::string s = "\t(" + source;
  if (!clock_guard.empty())
    s += ", " + clock_guard;
  s += ")->(" + assign + ")";
  if (!resets.empty())
    s += "{" + resets + "}";
  return s + ";\n";
}

} // namespace

const char* to_string(Family f) {
  switch (f) {
  case Family::csma: return "csma";
  case Family::fischer: return "fischer";
  case Family::grc: return "grc";
  case Family::leader: return "leader";
  }
  return "?";
}

const char* to_string(Category c) {
  switch (c) {
  case Category::as: return "as";
  case Category::bs: return "bs";
  case Category::al: return "al";
  case Category::bl: return "bl";
  case Category::m1: return "m1";
  case Category::m2: return "m2";
  case Category::m3: return "m3";
  case Category::m4: return "m4";
  case Category::m4ap: return "m4ap";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view s) {
  for (Family f : {Family::csma, Family::fischer, Family::grc, Family::leader})
    if (s == to_string(f))
      return f;
  return std::nullopt;
}

std::optional<Category> parse_category(std::string_view s) {
  for (Category c : {Category::as, Category::bs, Category::al, Category::bl, Category::m1,
                     Category::m2, Category::m3, Category::m4, Category::m4ap})
    if (s == to_string(c))
      return c;
  return std::nullopt;
}

std::vector<Category> categories(Family f) {
  std::vector<Category> cs{Category::as, Category::bs, Category::al, Category::bl,
                           Category::m1, Category::m2, Category::m3, Category::m4};
  if (f == Family::grc)
    cs.push_back(Category::m4ap);
  return cs;
}

int min_processes(Family f, Category c) {
  switch (f) {
  case Family::csma: return c == Category::bs ? 3 : 2;
  case Family::fischer: return c == Category::m2 ? 3 : 2;
  case Family::grc: return 2;
  case Family::leader:
    return c == Category::bs || c == Category::bl || c == Category::m2 ? 3 : 2;
  }
  return 2;
}

void validate(const BenchSpec& spec) {
  if (spec.category == Category::m4ap && spec.family != Family::grc)
    throw Error(ErrorKind::config, "category m4ap is only defined for grc");
  int lo = min_processes(spec.family, spec.category);
  if (spec.n < lo)
    throw Error(ErrorKind::config, std::string(to_string(spec.family)) + " " +
                                       to_string(spec.category) + " needs at least " +
                                       std::to_string(lo) + " processes");
  if (spec.n > 64)
    throw Error(ErrorKind::config, "at most 64 processes are supported");
  auto known = define_list(spec.family, spec.category);
  for (const auto& [name, value] : spec.params) {
    bool found = false;
    for (const auto& d : known)
      found = found || d.first == name;
    if (!found)
      throw Error(ErrorKind::config, "unknown parameter '" + name + "' for " +
                                         to_string(spec.family) + " " + to_string(spec.category));
    if (value < 0)
      throw Error(ErrorKind::config, "parameter '" + name + "' must be non-negative");
  }
}

std::string spec_template(Family f, Category c, int n) {
  validate(BenchSpec{f, n, c, {}});
  switch (f) {
  case Family::csma: return csma_spec(c, n);
  case Family::fischer: return fischer_spec(c, n);
  case Family::grc: return grc_spec(c, n);
  case Family::leader: return leader_spec(c, n);
  }
  return {};
}

std::string gen_csma(int n, Category c, const Params& params) {
  validate(BenchSpec{Family::csma, n, c, params});
  std::vector<std::string> controls = each(n, p);
  controls.push_back("p");
  std::string s = header(Family::csma, c, params, n, "y", controls) + spec_template(Family::csma, c, n);
  s += "INVARIANT:\n";
  for (int i = 1; i <= n; ++i)
    s += "\t" + p(i) + " == 1 -> " + x(i) + " <= CLAMBDA\n\t" + p(i) + " == 2 -> " + x(i) + " < CB\n";
  s += "\tp == 2 -> y < CA\nTRANSITIONS:\n";
  auto pi = [](int i) { return p(i); };
  for (int i = 1; i <= n; ++i) {
    s += guard_line("p==0 && " + pi(i) + "==0", "", "p=1," + pi(i) + "=1", "y," + x(i));
    s += guard_line("p==0 && " + pi(i) + "==2", x(i) + " < CB", "p=1," + pi(i) + "=1", "y," + x(i));
  }
  for (int i = 1; i <= n; ++i)
    s += guard_line("p==1 && " + pi(i) + "==1", x(i) + " == CLAMBDA", "p=0," + pi(i) + "=0",
                    "y," + x(i));
  for (int i = 1; i <= n; ++i)
    for (int from : {0, 2})
      s += guard_line("p==1 && " + pi(i) + "==" + to_string(from), "y >= CA", "p=1," + pi(i) + "=2",
                      x(i));
  for (int i = 1; i <= n; ++i) {
    s += guard_line("p==1 && " + pi(i) + "==0", "y < CA", "p=2," + pi(i) + "=1", "y," + x(i));
    s += guard_line("p==1 && " + pi(i) + "==2", "y < CA && " + x(i) + " < CB", "p=2," + pi(i) + "=1",
                    "y," + x(i));
  }
  // Collision detected: every process picks one of its (source, destination) options.
  struct Option {
    int from, to;
    const char* bound;
  };
  const Option options[] = {{0, 0, nullptr}, {0, 2, nullptr}, {1, 2, "CA"}, {2, 2, "CB"}};
  std::vector<int> pick(n, 0);
  for (;;) {
    std::string source = "p == 2", guard = "y < CA", assign = "p=0", resets = "y";
    for (int i = 1; i <= n; ++i) {
      const Option& o = options[pick[i - 1]];
      source += " && " + p(i) + "==" + to_string(o.from);
      if (o.bound)
        guard += " && " + x(i) + " < " + o.bound;
      assign += "," + p(i) + "=" + to_string(o.to);
      if (o.to == 2)
        resets += "," + x(i);
    }
    s += guard_line(source, guard, assign, resets);
    int k = n - 1;
    while (k >= 0 && ++pick[k] == 4)
      pick[k--] = 0;
    if (k < 0)
      break;
  }
  return s;
}

std::string gen_fischer(int n, Category c, const Params& params) {
  validate(BenchSpec{Family::fischer, n, c, params});
  std::vector<std::string> controls = each(n, p);
  controls.push_back("p");
  std::string s =
      header(Family::fischer, c, params, n, "", controls) + spec_template(Family::fischer, c, n);
  s += "INVARIANT:\n";
  for (int i = 1; i <= n; ++i)
    s += "\t" + p(i) + " == 1 -> " + x(i) + " < CA\n";
  s += "TRANSITIONS:\n";
  for (int i = 1; i <= n; ++i) {
    std::string id = to_string(i);
    s += guard_line(p(i) + "==0 && p==0", "", p(i) + "=1, p=0", x(i));
    s += guard_line(p(i) + "==1", x(i) + " < CA", p(i) + "=2, p=" + id, x(i));
    s += guard_line(p(i) + "==2 && p==" + id, x(i) + " > CB", p(i) + "=3, p=" + id, "");
    s += guard_line(p(i) + "==2 && p!=" + id, "", p(i) + "=0", "");
    s += guard_line(p(i) + "==3", "", p(i) + "=0, p=0", "");
  }
  return s;
}

std::string gen_grc(int t, Category c, const Params& params) {
  validate(BenchSpec{Family::grc, t, c, params});
  const int g = t + 1, k = t + 2;
  const int raise = 2 * t + 1;
  auto lower = [](int j) { return j; };
  auto down = [t](int j) { return t + j; };
  std::string s = defines(define_list(Family::grc, c), params) + "CLOCKS: {" +
                  join(each(t + 2, x), ",") + "}\n";
  s += "// p1-p" + to_string(t) + " are the trains.\n// " + p(g) + " is the gate.\n// " + p(k) +
       " is the controller.\n";
  s += "CONTROL: {" + join(each(t + 2, p), ",") + "}\n";
  s += "INITIALLY: " + join(each(t + 2, [](int i) { return x(i) + " == 0"; }), " && ") + "\n";
  s += spec_template(Family::grc, c, t);
  s += "INVARIANT:\n";
  for (int i = 1; i <= t; ++i)
    s += "\t" + p(i) + " == 1 -> " + x(i) + " <= CTP\n\t" + p(i) + " == 2 -> " + x(i) + " <= CTDU\n";
  s += "\t" + p(g) + " == 1 -> " + x(g) + " <= CGLT\n\t" + p(g) + " == 3 -> " + x(g) + " <= CGRT\n";
  for (int j = 1; j <= t; ++j)
    s += "\t" + p(k) + " == " + to_string(lower(j)) + " -> " + x(k) + " <= CCD\n";
  s += "\t" + p(k) + " == " + to_string(raise) + " -> " + x(k) + " <= CCD\n";
  s += "TRANSITIONS:\n";
  auto edge = [&](int i, int from_train, int from_ctrl, const std::string& cg, int to_train,
                  int to_ctrl, const std::string& resets) {
    s += guard_line(p(i) + " == " + to_string(from_train) + " && " + p(k) + " == " +
                        to_string(from_ctrl),
                    cg, p(i) + "=" + to_string(to_train) + ", " + p(k) + "=" + to_string(to_ctrl),
                    resets);
  };
  // Approach: one more train pending.
  for (int i = 1; i <= t; ++i) {
    edge(i, 0, 0, "", 1, lower(1), x(i) + "," + x(k));
    edge(i, 0, raise, "", 1, lower(1), x(i) + "," + x(k));
    for (int j = 1; j < t; ++j)
      edge(i, 0, lower(j), "", 1, lower(j + 1), x(i));
    for (int j = 1; j < t; ++j)
      edge(i, 0, down(j), "", 1, down(j + 1), x(i));
  }
  for (int i = 1; i <= t; ++i)
    s += guard_line(p(i) + " == 1", x(i) + " == CTP", p(i) + "=2", x(i));
  // Exit: one fewer train pending; the last one raises the gate.
  for (int i = 1; i <= t; ++i) {
    std::string cg = x(i) + " >= CTDL";
    edge(i, 2, lower(1), cg, 0, raise, x(k));
    edge(i, 2, down(1), cg, 0, raise, x(k));
    for (int j = 2; j <= t; ++j)
      edge(i, 2, lower(j), cg, 0, lower(j - 1), "");
    for (int j = 2; j <= t; ++j)
      edge(i, 2, down(j), cg, 0, down(j - 1), "");
  }
  auto gate = [&](int from_gate, int from_ctrl, int to_gate, int to_ctrl) {
    s += guard_line(p(g) + " == " + to_string(from_gate) + " && " + p(k) + " == " +
                        to_string(from_ctrl),
                    "", p(g) + "=" + to_string(to_gate) + ", " + p(k) + "=" + to_string(to_ctrl),
                    x(g));
  };
  gate(2, raise, 3, 0);
  gate(1, raise, 3, 0);
  for (int j = 1; j <= t; ++j) {
    gate(0, lower(j), 1, down(j));
    gate(3, lower(j), 1, down(j));
  }
  s += guard_line(p(g) + " == 3", x(g) + " == CGRT", p(g) + "=0", "");
  s += guard_line(p(g) + " == 1", x(g) + " == CGLT", p(g) + "=2", "");
  return s;
}

std::string gen_leader(int n, Category c, const Params& params) {
  validate(BenchSpec{Family::leader, n, c, params});
  std::vector<std::string> controls = each(n, p);
  controls.push_back("p");
  std::string s =
      header(Family::leader, c, params, n, "", controls) + spec_template(Family::leader, c, n);
  s += "INVARIANT:\n";
  for (int i = 1; i <= n; ++i)
    s += "\t" + p(i) + " == 0 && p==0 -> " + x(i) + " <= CPD\n";
  s += "TRANSITIONS:\n";
  for (int j = 2; j <= n; ++j)
    for (int i = 1; i < j; ++i)
      s += guard_line(p(j) + " == 0 && " + p(i) + " == 0", x(j) + " <= CPD && " + x(i) + " <= CPD",
                      p(j) + " = " + to_string(i), x(j) + ", " + x(i));
  std::string finish = "p==0 && p1==0";
  for (int i = 2; i <= n; ++i)
    finish += " && " + p(i) + "!=0";
  s += guard_line(finish, "", "p=1", join(each(n, x), ", "));
  return s;
}

std::string generate(const BenchSpec& spec) {
  switch (spec.family) {
  case Family::csma: return gen_csma(spec.n, spec.category, spec.params);
  case Family::fischer: return gen_fischer(spec.n, spec.category, spec.params);
  case Family::grc: return gen_grc(spec.n, spec.category, spec.params);
  case Family::leader: return gen_leader(spec.n, spec.category, spec.params);
  }
  return {};
}

std::size_t transition_count(Family f, int n) {
  std::size_t k = static_cast<std::size_t>(n);
  switch (f) {
  case Family::csma: {
    std::size_t cd = 1;
    for (int i = 0; i < n; ++i)
      cd *= 4;
    return 7 * k + cd;
  }
  case Family::fischer: return 5 * k;
  case Family::grc: return 4 * k * k + 3 * k + 4;
  case Family::leader: return k * (k - 1) / 2 + 1;
  }
  return 0;
}

Params default_params(Family f, Category c) {
  Params out;
  for (const auto& [name, value] : define_list(f, c))
    out[name] = value;
  return out;
}

std::optional<bool> expected_verdict(Family f, int n, Category c) {
  if (n < min_processes(f, c) || (c == Category::m4ap && f != Family::grc))
    return std::nullopt;
  if (f == Family::fischer && c == Category::bs)
    return n <= 4;
  if (f == Family::leader && c == Category::m4)
    return n <= 4;
  for (const auto& cell : acceptance_cells())
    if (cell.family == f && cell.category == c && cell.n == n)
      return cell.expected_valid;
  return std::nullopt;
}

const std::vector<SuiteCell>& acceptance_cells() {
  using C = Category;
  static const std::vector<SuiteCell> cells = [] {
    std::vector<SuiteCell> v;
    auto add = [&](Family f, int n, C c, bool valid) { v.push_back({f, n, c, valid}); };
    add(Family::csma, 2, C::as, true);
    add(Family::csma, 3, C::bs, false);
    add(Family::csma, 2, C::al, true);
    add(Family::csma, 2, C::bl, false);
    add(Family::csma, 2, C::m1, false);
    add(Family::csma, 2, C::m2, true);
    add(Family::csma, 3, C::m3, false);
    add(Family::csma, 2, C::m4, true);
    add(Family::fischer, 2, C::as, true);
    add(Family::fischer, 4, C::bs, true);
    add(Family::fischer, 5, C::bs, false);
    add(Family::fischer, 2, C::al, true);
    add(Family::fischer, 2, C::bl, false);
    add(Family::fischer, 2, C::m1, false);
    add(Family::fischer, 3, C::m2, false);
    add(Family::fischer, 2, C::m3, false);
    add(Family::fischer, 2, C::m4, false);
    for (auto [c, valid] : std::vector<std::pair<C, bool>>{{C::as, true},
                                                          {C::bs, false},
                                                          {C::al, true},
                                                          {C::bl, false},
                                                          {C::m1, false},
                                                          {C::m2, false},
                                                          {C::m3, false},
                                                          {C::m4, true},
                                                          {C::m4ap, false}})
      add(Family::grc, 2, c, valid);
    add(Family::leader, 2, C::as, true);
    add(Family::leader, 3, C::bs, false);
    add(Family::leader, 2, C::al, true);
    add(Family::leader, 3, C::bl, false);
    add(Family::leader, 2, C::m1, false);
    add(Family::leader, 3, C::m2, true);
    add(Family::leader, 2, C::m3, true);
    for (int n = 2; n <= 5; ++n)
      add(Family::leader, n, C::m4, n <= 4);
    return v;
  }();
  return cells;
}

} // namespace pes
