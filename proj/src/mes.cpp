#include "pes/mes.hpp"

#include <algorithm>
#include <functional>

#include "pes/error.hpp"

namespace pes {

namespace {

CompareOp negate(CompareOp op) {
  switch (op) {
  case CompareOp::lt: return CompareOp::ge;
  case CompareOp::le: return CompareOp::gt;
  case CompareOp::eq: return CompareOp::ne;
  case CompareOp::ne: return CompareOp::eq;
  case CompareOp::ge: return CompareOp::lt;
  case CompareOp::gt: return CompareOp::le;
  }
  return op;
}

Term clock_term(ClockAtom a) {
  Term t;
  t.kind = Term::Kind::clock;
  t.clock = a;
  return t;
}

// Negations of the atoms of a premise, collected as disjuncts.
void negated_premise(const Formula& f, const Model& model, std::vector<Term>& out) {
  using K = Formula::Kind;
  if (f.kind == K::conj) {
    for (const auto& c : f.children)
      negated_premise(c, model, out);
    return;
  }
  if (f.kind == K::prop_atom) {
    Term t;
    t.kind = Term::Kind::prop;
    t.prop = ControlTest{model.control_index(f.atom.name), negate(f.atom.op), f.atom.value};
    out.push_back(std::move(t));
    return;
  }
  if (f.kind == K::clock_atom) {
    std::size_t c = model.clock_index(f.atom.name);
    if (f.atom.op == CompareOp::eq) {
      out.push_back(clock_term({c, CompareOp::lt, f.atom.value}));
      out.push_back(clock_term({c, CompareOp::gt, f.atom.value}));
    } else {
      out.push_back(clock_term({c, negate(f.atom.op), f.atom.value}));
    }
    return;
  }
  throw Error(ErrorKind::validation, "implication premise must be a conjunction of atoms");
}

void max_into(std::map<std::string, std::int32_t>& m, const std::string& clock, std::int32_t v) {
  auto& slot = m[clock];
  slot = std::max(slot, std::max<std::int32_t>(v, 0));
}

void formula_ceilings(const Formula& f, std::map<std::string, std::int32_t>& m) {
  if (f.kind == Formula::Kind::clock_atom)
    max_into(m, f.atom.name, f.atom.value);
  for (const auto& c : f.children)
    formula_ceilings(c, m);
}

void collect_vars(const Term& t, std::vector<std::size_t>& out) {
  if (t.kind == Term::Kind::var)
    out.push_back(t.var);
  for (const auto& c : t.children)
    collect_vars(c, out);
}

void collect_bindings(const Term& t, std::vector<const Term*>& out) {
  if (t.kind == Term::Kind::var && (!t.subst.empty() || !t.resets.empty())) {
    bool seen = std::any_of(out.begin(), out.end(), [&](const Term* o) {
      return o->subst == t.subst && o->resets == t.resets;
    });
    if (!seen)
      out.push_back(&t);
  }
  for (const auto& c : t.children)
    collect_bindings(c, out);
}

} // namespace

Term lower_formula(const Formula& f, const Model& model,
                   const std::map<std::string, std::size_t>& var_index) {
  using K = Formula::Kind;
  using TK = Term::Kind;
  Term t;
  auto lower_children = [&] {
    for (const auto& c : f.children)
      t.children.push_back(lower_formula(c, model, var_index));
  };
  switch (f.kind) {
  case K::prop_atom:
    t.kind = TK::prop;
    t.prop = ControlTest{model.control_index(f.atom.name), f.atom.op, f.atom.value};
    return t;
  case K::clock_atom:
    if (f.atom.op == CompareOp::ne)
      throw Error(ErrorKind::validation, "'!=' is not allowed on clocks");
    return clock_term({model.clock_index(f.atom.name), f.atom.op, f.atom.value});
  case K::conj: t.kind = TK::conj; break;
  case K::disj: t.kind = TK::disj; break;
  case K::implies: {
    t.kind = TK::disj;
    negated_premise(f.children.at(0), model, t.children);
    t.children.push_back(lower_formula(f.children.at(1), model, var_index));
    return t;
  }
  case K::forall_time: t.kind = TK::forall_time; break;
  case K::exists_time: t.kind = TK::exists_time; break;
  case K::forall_time_rel: t.kind = TK::forall_time_rel; break;
  case K::exists_time_rel: t.kind = TK::exists_time_rel; break;
  case K::all_act: t.kind = TK::all_act; break;
  case K::exist_act: t.kind = TK::exist_act; break;
  case K::unable_wait_inf: t.kind = TK::unable_wait_inf; return t;
  case K::able_wait_inf: t.kind = TK::able_wait_inf; return t;
  case K::var: {
    auto it = var_index.find(f.var);
    if (it == var_index.end())
      throw Error(ErrorKind::validation, "undefined predicate variable '" + f.var + "'");
    t.kind = TK::var;
    t.var = it->second;
    for (const auto& [name, value] : f.subst)
      t.subst.emplace_back(model.control_index(name), value);
    for (const auto& r : f.resets)
      t.resets.push_back(model.clock_index(r));
    return t;
  }
  }
  lower_children();
  return t;
}

MesProgram validate_mes(const Model& model) {
  const PesFile& file = model.file();
  MesProgram prog;
  std::map<std::string, std::size_t> index;
  std::map<int, Parity> block_parity;
  for (const auto& b : file.blocks) {
    auto [it, fresh] = block_parity.emplace(b.id, b.parity);
    if (!fresh && it->second != b.parity)
      throw Error(ErrorKind::validation,
                  "block " + std::to_string(b.id) + " mixes mu and nu equations");
    for (const auto& eq : b.equations) {
      if (!index.emplace(eq.var, prog.equations.size()).second)
        throw Error(ErrorKind::validation, "predicate variable '" + eq.var + "' defined twice");
      prog.equations.push_back(MesEquation{eq.var, b.id, b.parity, Term{}});
    }
  }
  for (const auto& p : file.predicates)
    if (!index.count(p))
      throw Error(ErrorKind::validation, "predicate variable '" + p + "' has no equation");
  auto start = index.find(file.start);
  if (start == index.end())
    throw Error(ErrorKind::validation, "start variable '" + file.start + "' is undefined");
  prog.start = start->second;

  std::size_t k = 0;
  for (const auto& b : file.blocks)
    for (const auto& eq : b.equations)
      prog.equations[k++].body = lower_formula(eq.body, model, index);

  // Tarjan's algorithm; components come out dependencies first.
  const std::size_t n = prog.equations.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t v = 0; v < n; ++v) {
    collect_vars(prog.equations[v].body, succ[v]);
    std::sort(succ[v].begin(), succ[v].end());
    succ[v].erase(std::unique(succ[v].begin(), succ[v].end()), succ[v].end());
  }
  std::vector<int> idx(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : succ[v]) {
      if (idx[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] != idx[v])
      return;
    MesGroup g;
    for (;;) {
      std::size_t w = stack.back();
      stack.pop_back();
      on_stack[w] = false;
      g.vars.push_back(w);
      if (w == v)
        break;
    }
    std::sort(g.vars.begin(), g.vars.end());
    g.parity = prog.equations[g.vars.front()].parity;
    for (std::size_t w : g.vars)
      if (prog.equations[w].parity != g.parity)
        throw Error(ErrorKind::validation,
                    "alternation: '" + prog.equations[g.vars.front()].var + "' and '" +
                        prog.equations[w].var + "' are mutually recursive with different parities");
    prog.order.push_back(std::move(g));
  };
  for (std::size_t v = 0; v < n; ++v)
    if (idx[v] < 0)
      visit(v);
  for (const auto& g : prog.order)
    for (std::size_t v : g.vars) {
      int id = prog.equations[v].block;
      if (std::find(prog.block_order.begin(), prog.block_order.end(), id) == prog.block_order.end())
        prog.block_order.push_back(id);
    }
  return prog;
}

std::map<std::string, std::int32_t> clock_ceilings(const PesFile& file) {
  std::map<std::string, std::int32_t> m;
  for (const auto& c : file.all_clocks())
    m[c] = 0;
  for (const auto& c : file.initially)
    max_into(m, c.name, c.value);
  for (const auto& inv : file.invariants)
    for (const auto& c : inv.bound)
      max_into(m, c.name, c.value);
  for (const auto& t : file.transitions)
    for (const auto& c : t.clock_guard)
      max_into(m, c.name, c.value);
  for (const auto& b : file.blocks)
    for (const auto& eq : b.equations)
      formula_ceilings(eq.body, m);
  return m;
}

std::vector<std::int32_t> ceiling_vector(const Model& model) {
  auto m = clock_ceilings(model.file());
  std::vector<std::int32_t> v(model.dim(), 0);
  for (const auto& [name, c] : m)
    v[model.clock_index(name)] = c;
  return v;
}

std::pair<Location, Zone> apply_var_binding(const Location& loc, const Zone& zone, const Term& v) {
  Location l = loc;
  for (const auto& [c, value] : v.subst)
    l[c] = value;
  return {std::move(l), zone.reset(v.resets)};
}

std::vector<const Term*> binding_terms(const MesProgram& program) {
  std::vector<const Term*> out;
  for (const auto& eq : program.equations)
    collect_bindings(eq.body, out);
  return out;
}

} // namespace pes
