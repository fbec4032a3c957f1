#include "pes/region_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>

#include "pes/error.hpp"

namespace pes {

namespace {

bool cmp(std::int64_t a, CompareOp op, std::int64_t b) {
  switch (op) {
  case CompareOp::lt: return a < b;
  case CompareOp::le: return a <= b;
  case CompareOp::eq: return a == b;
  case CompareOp::ne: return a != b;
  case CompareOp::ge: return a >= b;
  case CompareOp::gt: return a > b;
  }
  return false;
}

// Per clock: integer part (ceiling+1 means "above the ceiling") and fractional rank
// (0 = integral; positive ranks order the fractional parts; unused when above the ceiling).
struct Region {
  std::vector<std::int16_t> ip;
  std::vector<std::int16_t> rank;
};

} // namespace

struct RegionOracle::Impl {
  struct Test {
    std::size_t idx;
    CompareOp op;
    std::int32_t value;
  };
  struct Clause {
    std::vector<Test> premise, bound;
  };
  struct Edge {
    std::vector<Test> source, guard;
    std::vector<std::pair<std::size_t, std::int32_t>> assign;
    std::vector<std::size_t> resets;
  };
  struct Binding {
    std::vector<std::pair<std::size_t, std::int32_t>> subst;
    std::vector<std::size_t> resets;
  };
  struct State {
    std::uint32_t loc;
    Region region;
    std::int32_t delay_next = -1;
    std::vector<std::uint32_t> succ;
    std::vector<std::int32_t> bound; // per binding
  };

  const PesFile& file;
  OracleLimits limits;
  std::vector<std::string> clocks;
  std::vector<std::int32_t> ceiling;
  std::map<std::string, std::size_t> clock_idx, control_idx, var_idx;
  std::vector<Clause> invariants;
  std::vector<Edge> edges;
  std::vector<Test> initially;
  std::vector<Binding> bindings;
  std::map<const Formula*, std::size_t> binding_of;
  std::vector<const Formula*> bodies;
  std::vector<Parity> parity;

  std::vector<std::vector<std::int32_t>> locs;
  std::map<std::vector<std::int32_t>, std::uint32_t> loc_id;
  std::vector<State> states;
  std::unordered_map<std::string, std::uint32_t> state_id;

  Impl(const PesFile& f, OracleLimits l) : file(f), limits(l) {
    clocks = file.all_clocks();
    if (clocks.size() > limits.max_clocks)
      throw Error(ErrorKind::oracle_limit,
                  "region oracle supports at most " + std::to_string(limits.max_clocks) +
                      " clocks, model has " + std::to_string(clocks.size()));
    for (std::size_t k = 0; k < clocks.size(); ++k)
      clock_idx[clocks[k]] = k;
    for (std::size_t k = 0; k < file.controls.size(); ++k)
      control_idx[file.controls[k]] = k;
    ceiling.assign(clocks.size(), 0);
    auto note = [&](const Comparison& c) {
      auto& m = ceiling[clock_idx.at(c.name)];
      m = std::max(m, std::max(c.value, 0));
    };
    auto clock_test = [&](const Comparison& c) {
      note(c);
      return Test{clock_idx.at(c.name), c.op, c.value};
    };
    auto control_test = [&](const Comparison& c) {
      return Test{control_idx.at(c.name), c.op, c.value};
    };
    for (const auto& c : file.initially)
      initially.push_back(clock_test(c));
    for (const auto& inv : file.invariants) {
      Clause cl;
      for (const auto& p : inv.premise)
        cl.premise.push_back(control_test(p));
      for (const auto& b : inv.bound)
        cl.bound.push_back(clock_test(b));
      invariants.push_back(std::move(cl));
    }
    for (const auto& t : file.transitions) {
      Edge e;
      for (const auto& p : t.source_guard)
        e.source.push_back(control_test(p));
      for (const auto& g : t.clock_guard)
        e.guard.push_back(clock_test(g));
      for (const auto& [n, v] : t.assignments)
        e.assign.emplace_back(control_idx.at(n), v);
      for (const auto& r : t.resets)
        e.resets.push_back(clock_idx.at(r));
      edges.push_back(std::move(e));
    }
    for (const auto& b : file.blocks)
      for (const auto& eq : b.equations) {
        var_idx[eq.var] = bodies.size();
        bodies.push_back(&eq.body);
        parity.push_back(b.parity);
      }
    std::function<void(const Formula&)> scan = [&](const Formula& f) {
      if (f.kind == Formula::Kind::clock_atom)
        note(f.atom);
      if (f.kind == Formula::Kind::var && (!f.subst.empty() || !f.resets.empty())) {
        Binding b;
        for (const auto& [n, v] : f.subst)
          b.subst.emplace_back(control_idx.at(n), v);
        for (const auto& r : f.resets)
          b.resets.push_back(clock_idx.at(r));
        std::size_t k = 0;
        while (k < bindings.size() &&
               !(bindings[k].subst == b.subst && bindings[k].resets == b.resets))
          ++k;
        if (k == bindings.size())
          bindings.push_back(std::move(b));
        binding_of[&f] = k;
      }
      for (const auto& c : f.children)
        scan(c);
    };
    for (const Formula* body : bodies)
      scan(*body);
    for (std::int32_t m : ceiling)
      if (m > limits.max_constant)
        throw Error(ErrorKind::oracle_limit,
                    "region oracle supports constants up to " +
                        std::to_string(limits.max_constant) + ", model uses " + std::to_string(m));
    explore();
  }

  // ---- regions ---------------------------------------------------------------------------

  bool bounded(const Region& r, std::size_t c) const { return r.ip[c] <= ceiling[c]; }

  bool sat(const Region& r, const Test& t) const {
    std::size_t c = t.idx;
    if (!bounded(r, c))
      return t.op == CompareOp::gt || t.op == CompareOp::ge ||
             (t.op == CompareOp::ne);
    if (r.rank[c] == 0)
      return cmp(r.ip[c], t.op, t.value);
    // ip < x < ip + 1
    switch (t.op) {
    case CompareOp::lt:
    case CompareOp::le: return r.ip[c] < t.value;
    case CompareOp::gt:
    case CompareOp::ge: return r.ip[c] >= t.value;
    case CompareOp::eq: return false;
    case CompareOp::ne: return true;
    }
    return false;
  }

  bool sat_all(const Region& r, const std::vector<Test>& ts) const {
    return std::all_of(ts.begin(), ts.end(), [&](const Test& t) { return sat(r, t); });
  }

  static bool holds(const std::vector<std::int32_t>& loc, const std::vector<Test>& ts) {
    return std::all_of(ts.begin(), ts.end(),
                       [&](const Test& t) { return cmp(loc[t.idx], t.op, t.value); });
  }

  std::vector<Test> active_invariant(const std::vector<std::int32_t>& loc) const {
    std::vector<Test> out;
    for (const auto& cl : invariants)
      if (holds(loc, cl.premise))
        out.insert(out.end(), cl.bound.begin(), cl.bound.end());
    return out;
  }

  void canonical(Region& r) const {
    std::vector<std::int16_t> used;
    for (std::size_t c = 0; c < clocks.size(); ++c) {
      if (!bounded(r, c)) {
        r.ip[c] = static_cast<std::int16_t>(ceiling[c] + 1);
        r.rank[c] = 0;
      } else if (r.rank[c] > 0) {
        used.push_back(r.rank[c]);
      }
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (std::size_t c = 0; c < clocks.size(); ++c)
      if (bounded(r, c) && r.rank[c] > 0)
        r.rank[c] = static_cast<std::int16_t>(
            std::lower_bound(used.begin(), used.end(), r.rank[c]) - used.begin() + 1);
  }

  bool instant(const Region& r) const {
    for (std::size_t c = 0; c < clocks.size(); ++c)
      if (bounded(r, c) && r.rank[c] == 0)
        return true;
    return false;
  }

  // Next region under time elapse; false once every clock is above its ceiling.
  bool time_successor(const Region& r, Region& out) const {
    out = r;
    bool any_bounded = false;
    for (std::size_t c = 0; c < clocks.size(); ++c)
      any_bounded = any_bounded || bounded(r, c);
    if (!any_bounded)
      return false;
    if (instant(r)) {
      for (std::size_t c = 0; c < clocks.size(); ++c) {
        if (!bounded(r, c))
          continue;
        if (r.rank[c] == 0) {
          if (r.ip[c] == ceiling[c])
            out.ip[c] = static_cast<std::int16_t>(ceiling[c] + 1);
          else
            out.rank[c] = 1;
        } else {
          out.rank[c] = static_cast<std::int16_t>(r.rank[c] + 1);
        }
      }
    } else {
      std::int16_t top = 0;
      for (std::size_t c = 0; c < clocks.size(); ++c)
        if (bounded(r, c))
          top = std::max(top, r.rank[c]);
      for (std::size_t c = 0; c < clocks.size(); ++c) {
        if (bounded(r, c) && r.rank[c] == top) {
          out.ip[c] = static_cast<std::int16_t>(r.ip[c] + 1);
          out.rank[c] = 0;
        }
      }
    }
    canonical(out);
    return true;
  }

  Region reset(const Region& r, const std::vector<std::size_t>& cs) const {
    Region out = r;
    for (std::size_t c : cs) {
      out.ip[c] = 0;
      out.rank[c] = 0;
    }
    canonical(out);
    return out;
  }

  // ---- state space -----------------------------------------------------------------------

  std::int32_t intern(const std::vector<std::int32_t>& loc, const Region& r,
                      std::deque<std::uint32_t>& work) {
    auto [lit, lfresh] = loc_id.emplace(loc, static_cast<std::uint32_t>(locs.size()));
    if (lfresh) {
      locs.push_back(loc);
      if (locs.size() > limits.max_locations)
        throw Error(ErrorKind::oracle_limit, "region oracle location limit exceeded");
    }
    std::string key(reinterpret_cast<const char*>(&lit->second), sizeof(std::uint32_t));
    key.append(reinterpret_cast<const char*>(r.ip.data()), r.ip.size() * 2);
    key.append(reinterpret_cast<const char*>(r.rank.data()), r.rank.size() * 2);
    auto [sit, sfresh] = state_id.emplace(std::move(key), static_cast<std::uint32_t>(states.size()));
    if (sfresh) {
      if (states.size() >= limits.max_states)
        throw Error(ErrorKind::oracle_limit, "region oracle state limit exceeded");
      states.push_back(State{lit->second, r, -1, {}, {}});
      work.push_back(sit->second);
    }
    return static_cast<std::int32_t>(sit->second);
  }

  void explore() {
    std::vector<std::int32_t> loc0(file.controls.size(), 0);
    Region r0{std::vector<std::int16_t>(clocks.size(), 0), std::vector<std::int16_t>(clocks.size(), 0)};
    canonical(r0);
    if (!sat_all(r0, initially) || !sat_all(r0, active_invariant(loc0)))
      throw Error(ErrorKind::config, "the initial state violates INITIALLY or the invariant");
    std::deque<std::uint32_t> work;
    intern(loc0, r0, work);
    while (!work.empty()) {
      std::uint32_t s = work.front();
      work.pop_front();
      std::vector<std::int32_t> loc = locs[states[s].loc];
      Region r = states[s].region;
      auto inv = active_invariant(loc);
      Region next;
      if (time_successor(r, next) && sat_all(next, inv)) {
        std::int32_t id = intern(loc, next, work);
        states[s].delay_next = id;
      }
      for (const auto& e : edges) {
        if (!holds(loc, e.source) || !sat_all(r, e.guard))
          continue;
        std::vector<std::int32_t> tl = loc;
        for (const auto& [c, v] : e.assign)
          tl[c] = v;
        Region tr = reset(r, e.resets);
        if (!sat_all(tr, active_invariant(tl)))
          continue;
        std::int32_t id = intern(tl, tr, work);
        states[s].succ.push_back(static_cast<std::uint32_t>(id));
      }
      for (const auto& b : bindings) {
        std::vector<std::int32_t> tl = loc;
        for (const auto& [c, v] : b.subst)
          tl[c] = v;
        Region tr = reset(r, b.resets);
        std::int32_t id = -1;
        if (sat_all(tr, active_invariant(tl)))
          id = intern(tl, tr, work);
        states[s].bound.push_back(id);
      }
    }
  }

  // ---- evaluation ------------------------------------------------------------------------

  using Bits = std::vector<char>;

  // Fold along delay chains: out[s] = step(s, has_next, out[next]).
  template <class Step>
  Bits chain_fold(Step step) const {
    const std::size_t n = states.size();
    Bits out(n, 0);
    std::vector<char> done(n, 0);
    std::vector<std::uint32_t> path;
    for (std::size_t s0 = 0; s0 < n; ++s0) {
      if (done[s0])
        continue;
      path.clear();
      std::int64_t s = static_cast<std::int64_t>(s0);
      while (s >= 0 && !done[s]) {
        path.push_back(static_cast<std::uint32_t>(s));
        s = states[s].delay_next;
      }
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        std::int32_t nx = states[*it].delay_next;
        out[*it] = step(*it, nx >= 0, nx >= 0 ? out[nx] != 0 : false);
        done[*it] = 1;
      }
    }
    return out;
  }

  bool can_diverge(std::size_t s) const {
    for (const auto& t : active_invariant(locs[states[s].loc]))
      if (t.op == CompareOp::lt || t.op == CompareOp::le || t.op == CompareOp::eq)
        return false;
    return true;
  }

  bool atom_holds(const Formula& f, std::size_t s) const {
    if (f.kind == Formula::Kind::prop_atom)
      return cmp(locs[states[s].loc][control_idx.at(f.atom.name)], f.atom.op, f.atom.value);
    return sat(states[s].region, Test{clock_idx.at(f.atom.name), f.atom.op, f.atom.value});
  }

  Bits eval(const Formula& f, const std::vector<Bits>& env) const {
    using K = Formula::Kind;
    const std::size_t n = states.size();
    Bits out(n, 0);
    switch (f.kind) {
    case K::prop_atom:
    case K::clock_atom:
      for (std::size_t s = 0; s < n; ++s)
        out[s] = atom_holds(f, s);
      return out;
    case K::conj:
    case K::disj: {
      bool is_and = f.kind == K::conj;
      std::fill(out.begin(), out.end(), is_and ? 1 : 0);
      for (const auto& c : f.children) {
        Bits v = eval(c, env);
        for (std::size_t s = 0; s < n; ++s)
          out[s] = is_and ? (out[s] && v[s]) : (out[s] || v[s]);
      }
      return out;
    }
    case K::implies: {
      Bits rhs = eval(f.children[1], env);
      Bits lhs = eval(f.children[0], env);
      for (std::size_t s = 0; s < n; ++s)
        out[s] = !lhs[s] || rhs[s];
      return out;
    }
    case K::forall_time: {
      Bits t = eval(f.children[0], env);
      return chain_fold([&](std::size_t s, bool nx, bool v) { return t[s] && (!nx || v); });
    }
    case K::exists_time: {
      Bits t = eval(f.children[0], env);
      return chain_fold([&](std::size_t s, bool nx, bool v) { return t[s] || (nx && v); });
    }
    case K::forall_time_rel: {
      Bits r = eval(f.children[0], env);
      Bits t = eval(f.children[1], env);
      return chain_fold(
          [&](std::size_t s, bool nx, bool v) { return r[s] || (t[s] && (!nx || v)); });
    }
    case K::exists_time_rel: {
      Bits r = eval(f.children[0], env);
      Bits t = eval(f.children[1], env);
      // Reaching the target strictly later: the target region must be entered at an
      // instant, or lie in an open region that also satisfies the guard.
      Bits later = chain_fold([&](std::size_t s, bool nx, bool v) {
        return (t[s] && (instant(states[s].region) || r[s])) || (r[s] && nx && v);
      });
      for (std::size_t s = 0; s < n; ++s) {
        std::int32_t nx = states[s].delay_next;
        out[s] = t[s] || (r[s] && nx >= 0 && later[nx]);
      }
      return out;
    }
    case K::all_act:
    case K::exist_act: {
      Bits t = eval(f.children[0], env);
      bool all = f.kind == K::all_act;
      for (std::size_t s = 0; s < n; ++s) {
        bool acc = all;
        for (std::uint32_t w : states[s].succ)
          acc = all ? (acc && t[w]) : (acc || t[w]);
        out[s] = acc;
      }
      return out;
    }
    case K::unable_wait_inf:
    case K::able_wait_inf:
      for (std::size_t s = 0; s < n; ++s)
        out[s] = can_diverge(s) == (f.kind == K::able_wait_inf);
      return out;
    case K::var: {
      const Bits& v = env[var_idx.at(f.var)];
      auto b = binding_of.find(&f);
      if (b == binding_of.end())
        return v;
      for (std::size_t s = 0; s < n; ++s) {
        std::int32_t w = states[s].bound[b->second];
        out[s] = w >= 0 && v[w];
      }
      return out;
    }
    }
    return out;
  }

  static void collect_vars(const Formula& f, const std::map<std::string, std::size_t>& idx,
                           std::vector<std::size_t>& out) {
    if (f.kind == Formula::Kind::var)
      out.push_back(idx.at(f.var));
    for (const auto& c : f.children)
      collect_vars(c, idx, out);
  }

  // Strongly connected components of the variable dependency graph, dependencies first.
  std::vector<std::vector<std::size_t>> components() const {
    const std::size_t n = bodies.size();
    std::vector<std::vector<std::size_t>> succ(n), pred(n);
    for (std::size_t v = 0; v < n; ++v) {
      collect_vars(*bodies[v], var_idx, succ[v]);
      for (std::size_t w : succ[v])
        pred[w].push_back(v);
    }
    // Kosaraju: finish order on the graph, then sweep the reversed graph.
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> finish;
    std::function<void(std::size_t)> dfs1 = [&](std::size_t v) {
      seen[v] = 1;
      for (std::size_t w : succ[v])
        if (!seen[w])
          dfs1(w);
      finish.push_back(v);
    };
    for (std::size_t v = 0; v < n; ++v)
      if (!seen[v])
        dfs1(v);
    std::vector<int> comp(n, -1);
    std::vector<std::vector<std::size_t>> comps;
    std::function<void(std::size_t)> dfs2 = [&](std::size_t v) {
      comp[v] = static_cast<int>(comps.size() - 1);
      comps.back().push_back(v);
      for (std::size_t w : pred[v])
        if (comp[w] < 0)
          dfs2(w);
    };
    for (auto it = finish.rbegin(); it != finish.rend(); ++it)
      if (comp[*it] < 0) {
        comps.emplace_back();
        dfs2(*it);
      }
    // Kosaraju yields components in topological order of the graph (sources first).
    std::reverse(comps.begin(), comps.end());
    return comps;
  }

  Verdict check() {
    auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = states.size();
    std::vector<Bits> env(bodies.size(), Bits(n, 0));
    Stats stats;
    for (const auto& comp : components()) {
      Parity p = parity[comp.front()];
      for (std::size_t v : comp) {
        if (parity[v] != p)
          throw Error(ErrorKind::validation, "alternating fixpoints are not supported");
        env[v].assign(n, p == Parity::nu ? 1 : 0);
      }
      for (;;) {
        ++stats.iterations;
        bool changed = false;
        std::vector<Bits> next;
        for (std::size_t v : comp)
          next.push_back(eval(*bodies[v], env));
        for (std::size_t k = 0; k < comp.size(); ++k) {
          changed = changed || next[k] != env[comp[k]];
          env[comp[k]] = std::move(next[k]);
        }
        if (!changed)
          break;
      }
    }
    auto start = var_idx.find(file.start);
    if (start == var_idx.end())
      throw Error(ErrorKind::validation, "start variable '" + file.start + "' is undefined");
    Verdict v;
    v.satisfied = env[start->second][0] != 0;
    stats.nodes_expanded = n;
    stats.locations = locs.size();
    stats.milliseconds =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    v.stats = stats;
    return v;
  }
};

RegionOracle::RegionOracle(const PesFile& file, OracleLimits limits)
    : impl_(std::make_unique<Impl>(file, limits)) {}

RegionOracle::~RegionOracle() = default;

std::size_t RegionOracle::state_count() const { return impl_->states.size(); }

const std::vector<std::vector<std::int32_t>>& RegionOracle::locations() const {
  return impl_->locs;
}

Verdict RegionOracle::check() { return impl_->check(); }

Verdict region_oracle_check(const PesFile& file, OracleLimits limits) {
  return RegionOracle(file, limits).check();
}

} // namespace pes
