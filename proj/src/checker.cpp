#include "pes/checker.hpp"

#include <chrono>
#include <deque>

#include "pes/error.hpp"

namespace pes {

namespace {

Federation zero_clocks(const Federation& y, std::span<const std::size_t> clocks) {
  if (clocks.empty())
    return y;
  Zone at_zero = Zone::universe(y.dim());
  for (std::size_t c : clocks)
    at_zero = at_zero.constrained(ClockAtom{c, CompareOp::eq, 0});
  return y.intersect(at_zero);
}

} // namespace

Checker::Checker(const Model& model, const MesProgram& program, CheckOptions options)
    : model_(model), program_(program), options_(options), ceilings_(ceiling_vector(model)),
      initial_zone_(Zone::empty(model.dim())) {
  build_universe();
}

std::optional<std::size_t> Checker::find(const Location& loc) const {
  auto it = index_.find(loc);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

std::size_t Checker::intern(const Location& loc) {
  auto [it, fresh] = index_.emplace(loc, locations_.size());
  if (fresh) {
    locations_.push_back(loc);
    invariants_.push_back(model_.invariant_zone(loc));
    diverges_.push_back(model_.can_time_diverge(loc));
    universe_.emplace_back(model_.dim());
  }
  return it->second;
}

Zone Checker::normalize(std::size_t loc, const Zone& z) const {
  const Zone& inv = invariants_[loc];
  return z.up().intersect(inv).extrapolate(ceilings_).up().intersect(inv);
}

void Checker::note_zones(std::size_t live) {
  if (live > stats_.peak_zones)
    stats_.peak_zones = live;
  if (live > options_.max_zones)
    throw Error(ErrorKind::resource, "zone limit of " + std::to_string(options_.max_zones) +
                                         " exceeded; result inconclusive");
}

void Checker::build_universe() {
  SymbolicState init = model_.initial_state();
  initial_loc_ = intern(init.loc);
  initial_zone_ = init.zone;
  std::vector<const Term*> bindings = binding_terms(program_);
  std::vector<std::vector<TransitionInstance>> instances;

  std::deque<std::pair<std::size_t, Zone>> waiting;
  std::size_t stored = 0;
  auto offer = [&](std::size_t loc, const Zone& z) {
    if (z.is_empty())
      return;
    Zone n = normalize(loc, z);
    for (const auto& e : universe_[loc])
      if (n.included_in(e))
        return;
    universe_[loc].add(n);
    ++stored;
    ++stats_.zones_created;
    note_zones(stored);
    waiting.emplace_back(loc, std::move(n));
  };

  offer(initial_loc_, initial_zone_);
  while (!waiting.empty()) {
    auto [l, z] = std::move(waiting.front());
    waiting.pop_front();
    ++stats_.nodes_expanded;
    while (instances.size() < locations_.size())
      instances.push_back(model_.enabled_instances(locations_[instances.size()]));
    std::vector<TransitionInstance> out = instances[l];
    for (const auto& inst : out) {
      Zone post = model_.discrete_post(z, inst);
      if (!post.is_empty())
        offer(intern(inst.target), post);
    }
    for (const Term* b : bindings) {
      auto [target, zone] = apply_var_binding(locations_[l], z, *b);
      std::size_t t = intern(target);
      offer(t, zone.intersect(invariants_[t]));
    }
  }

  while (instances.size() < locations_.size())
    instances.push_back(model_.enabled_instances(locations_[instances.size()]));
  edges_.resize(locations_.size());
  for (std::size_t l = 0; l < locations_.size(); ++l)
    for (const auto& inst : instances[l])
      if (auto t = find(inst.target))
        edges_[l].push_back(Edge{inst, *t});
  stats_.locations = locations_.size();
  stats_.universe_zones = zone_count(universe_);
}

StateSet Checker::empty_set() const {
  StateSet s;
  s.reserve(locations_.size());
  for (std::size_t l = 0; l < locations_.size(); ++l)
    s.emplace_back(model_.dim());
  return s;
}

// ---- per-location operators -------------------------------------------------------------

Federation Checker::eval_forall_time(const StateSet& target, std::size_t loc,
                                     const Federation& z) const {
  Federation bad = universe_[loc].subtract(target[loc]);
  if (bad.is_empty())
    return z;
  return z.subtract(bad.down());
}

Federation Checker::eval_exists_time(const StateSet& target, std::size_t loc,
                                     const Federation& z) const {
  return z.intersect(target[loc].down());
}

// {v : ∃d ≥ 0. v+d ∈ t ∧ ∀d' < d. v+d' ∈ r}, for r, t within the universe at loc.
//
// For one target zone, the admissible waiting times against each blocking zone form a prefix
// of the time line, so the per-blocker conditions intersect to a condition for one common
// witness delay.
Federation Checker::exists_until(const Federation& r, const Federation& t,
                                 std::size_t loc) const {
  Federation blockers = universe_[loc].subtract(r);
  if (blockers.is_empty())
    return t.down();
  Federation result(model_.dim());
  for (const auto& tz : t) {
    // A delay path into tz stays inside its past, so only blockers meeting it matter.
    const Zone past = tz.down();
    Federation acc(past);
    for (const auto& b : blockers) {
      if (acc.is_empty())
        break;
      if (!b.may_intersect(past))
        continue;
      // Points of the past whose every delay into tz crosses b.
      Federation blocked(past.intersect(b.down()));
      blocked = blocked.subtract(tz);
      if (!blocked.is_empty())
        blocked = blocked.subtract(Federation(tz).subtract(b.up_strict()).down());
      if (!blocked.is_empty())
        acc = acc.subtract(blocked);
    }
    result.add(acc);
  }
  return result;
}

Federation Checker::eval_forall_time_rel(const StateSet& rel, const StateSet& target,
                                         std::size_t loc, const Federation& z) const {
  const Federation& u = universe_[loc];
  Federation not_rel = u.subtract(rel[loc]);
  Federation bad_end = u.subtract(target[loc]).intersect(not_rel);
  if (bad_end.is_empty())
    return z;
  return z.subtract(exists_until(not_rel, bad_end, loc));
}

Federation Checker::eval_exists_time_rel(const StateSet& rel, const StateSet& target,
                                         std::size_t loc, const Federation& z) const {
  return z.intersect(exists_until(rel[loc], target[loc], loc));
}

Federation Checker::pre(const Edge& e, const Federation& y, std::size_t) const {
  return zero_clocks(y, e.inst.resets).free(e.inst.resets).intersect(*e.inst.guard_zone);
}

Federation Checker::eval_allact(const StateSet& target, std::size_t loc,
                                const Federation& z) const {
  Federation r = z;
  for (const auto& e : edges_[loc]) {
    if (r.is_empty())
      break;
    Federation bad = universe_[e.target].subtract(target[e.target]);
    if (!bad.is_empty())
      r = r.subtract(pre(e, bad, loc));
  }
  return r;
}

Federation Checker::eval_existact(const StateSet& target, std::size_t loc,
                                  const Federation& z) const {
  Federation good(model_.dim());
  for (const auto& e : edges_[loc])
    if (!target[e.target].is_empty())
      good.add(pre(e, target[e.target], loc));
  return z.intersect(good);
}

Federation Checker::binding(const Term& v, const StateSet& s, std::size_t loc) const {
  Location l = locations_[loc];
  for (const auto& [c, value] : v.subst)
    l[c] = value;
  auto t = find(l);
  if (!t)
    return Federation(model_.dim());
  Federation y = zero_clocks(s[*t], v.resets).free(v.resets);
  return universe_[loc].intersect(y);
}

// ---- whole-set operators ----------------------------------------------------------------

#define PES_LIFT1(name, op)                                                                    \
  StateSet Checker::name(const StateSet& target) const {                                       \
    StateSet out;                                                                              \
    out.reserve(locations_.size());                                                            \
    for (std::size_t l = 0; l < locations_.size(); ++l)                                        \
      out.push_back(op(target, l, universe_[l]));                                              \
    return out;                                                                                \
  }

PES_LIFT1(forall_time, eval_forall_time)
PES_LIFT1(exists_time, eval_exists_time)
PES_LIFT1(allact, eval_allact)
PES_LIFT1(existact, eval_existact)
#undef PES_LIFT1

StateSet Checker::forall_time_rel(const StateSet& rel, const StateSet& target) const {
  StateSet out;
  out.reserve(locations_.size());
  for (std::size_t l = 0; l < locations_.size(); ++l)
    out.push_back(eval_forall_time_rel(rel, target, l, universe_[l]));
  return out;
}

StateSet Checker::exists_time_rel(const StateSet& rel, const StateSet& target) const {
  StateSet out;
  out.reserve(locations_.size());
  for (std::size_t l = 0; l < locations_.size(); ++l)
    out.push_back(eval_exists_time_rel(rel, target, l, universe_[l]));
  return out;
}

StateSet Checker::eval(const Term& t, const std::vector<StateSet>& env) const {
  std::vector<bool> active(program_.equations.size(), true);
  std::unordered_map<const Term*, StateSet> cache;
  return eval_cached(t, env, active, cache, nullptr);
}

bool Checker::depends_on(const Term& t, const std::vector<bool>& vars) const {
  if (t.kind == Term::Kind::var && vars[t.var])
    return true;
  for (const auto& c : t.children)
    if (depends_on(c, vars))
      return true;
  return false;
}

Federation Checker::eval_at(const Term& t, const std::vector<StateSet>& in, std::size_t l) const {
  using K = Term::Kind;
  const Federation& u = universe_[l];
  switch (t.kind) {
  case K::prop: return t.prop.holds(locations_[l]) ? u : Federation(model_.dim());
  case K::clock: return u.intersect(Zone::universe(model_.dim()).constrained(t.clock));
  case K::conj: {
    Federation r = in[0][l];
    for (std::size_t k = 1; k < in.size() && !r.is_empty(); ++k)
      r = r.intersect(in[k][l]);
    return r;
  }
  case K::disj: {
    Federation r = in[0][l];
    for (std::size_t k = 1; k < in.size(); ++k)
      r.add(in[k][l]);
    return r;
  }
  case K::forall_time: return eval_forall_time(in[0], l, u);
  case K::exists_time: return eval_exists_time(in[0], l, u);
  case K::forall_time_rel: return eval_forall_time_rel(in[0], in[1], l, u);
  case K::exists_time_rel: return eval_exists_time_rel(in[0], in[1], l, u);
  case K::all_act: return eval_allact(in[0], l, u);
  case K::exist_act: return eval_existact(in[0], l, u);
  case K::unable_wait_inf:
  case K::able_wait_inf:
    return diverges_[l] == (t.kind == K::able_wait_inf) ? u : Federation(model_.dim());
  case K::var: return binding(t, in[0], l);
  }
  return Federation(model_.dim());
}

bool Checker::inputs_changed(const Term& t, const std::vector<StateSet>& before,
                             const std::vector<StateSet>& now, std::size_t l) const {
  auto differs = [&](std::size_t k, std::size_t at) {
    return !before[k][at].same_representation(now[k][at]);
  };
  switch (t.kind) {
  case Term::Kind::all_act:
  case Term::Kind::exist_act:
    for (const auto& e : edges_[l])
      if (differs(0, e.target))
        return true;
    return false;
  case Term::Kind::var: {
    Location target = locations_[l];
    for (const auto& [c, value] : t.subst)
      target[c] = value;
    auto at = find(target);
    return at && differs(0, *at);
  }
  default:
    for (std::size_t k = 0; k < now.size(); ++k)
      if (differs(k, l))
        return true;
    return false;
  }
}

StateSet Checker::eval_cached(const Term& t, const std::vector<StateSet>& env,
                              const std::vector<bool>& active,
                              std::unordered_map<const Term*, StateSet>& cache,
                              MemoTable* memo) const {
  auto hit = cache.find(&t);
  if (hit != cache.end())
    return hit->second;
  if (t.kind == Term::Kind::var && t.subst.empty() && t.resets.empty())
    return env[t.var];
  std::vector<StateSet> inputs;
  if (t.kind == Term::Kind::var)
    inputs.push_back(env[t.var]);
  for (const auto& c : t.children)
    inputs.push_back(eval_cached(c, env, active, cache, memo));

  const std::size_t n = locations_.size();
  const bool dependent = depends_on(t, active);
  Memo* m = nullptr;
  if (memo && dependent) {
    auto it = memo->find(&t);
    if (it != memo->end())
      m = &it->second;
  }
  StateSet out;
  out.reserve(n);
  std::size_t recomputed = 0;
  for (std::size_t l = 0; l < n; ++l) {
    if (m && !inputs_changed(t, m->inputs, inputs, l)) {
      out.push_back(m->out[l]);
      continue;
    }
    out.push_back(eval_at(t, inputs, l));
    ++recomputed;
  }
  stats_.nodes_expanded += recomputed;
  stats_.zones_created += zone_count(out);
  if (!dependent)
    cache.emplace(&t, out);
  else if (memo)
    (*memo)[&t] = Memo{std::move(inputs), out};
  return out;
}

std::vector<StateSet> Checker::solve() {
  const std::size_t n = program_.equations.size();
  std::vector<StateSet> env(n, empty_set());
  std::size_t settled_zones = 0;
  for (const auto& group : program_.order) {
    std::vector<bool> active(n, false);
    for (std::size_t v : group.vars) {
      active[v] = true;
      env[v] = group.parity == Parity::mu ? empty_set() : universe_;
    }
    std::unordered_map<const Term*, StateSet> cache;
    MemoTable memo;
    for (;;) {
      ++stats_.iterations;
      std::vector<StateSet> next;
      for (std::size_t v : group.vars)
        next.push_back(eval_cached(program_.equations[v].body, env, active, cache, &memo));
      bool stable = true;
      std::size_t live = settled_zones + stats_.universe_zones;
      for (std::size_t k = 0; k < group.vars.size(); ++k) {
        const StateSet& old = env[group.vars[k]];
        bool same = group.parity == Parity::mu ? set_includes(old, next[k])
                                               : set_includes(next[k], old);
        stable = stable && same;
        live += zone_count(next[k]);
      }
      note_zones(live);
      for (std::size_t k = 0; k < group.vars.size(); ++k)
        env[group.vars[k]] = std::move(next[k]);
      if (stable)
        break;
    }
    for (std::size_t v : group.vars)
      settled_zones += zone_count(env[v]);
  }
  return env;
}

Verdict Checker::check() {
  auto t0 = std::chrono::steady_clock::now();
  auto sol = solve();
  Verdict v;
  v.satisfied = sol[program_.start][initial_loc_].includes(initial_zone_);
  stats_.milliseconds +=
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  v.stats = stats_;
  return v;
}

bool Checker::set_includes(const StateSet& a, const StateSet& b) {
  for (std::size_t l = 0; l < a.size(); ++l)
    if (!a[l].includes(b[l]))
      return false;
  return true;
}

bool Checker::set_equal(const StateSet& a, const StateSet& b) {
  return set_includes(a, b) && set_includes(b, a);
}

std::size_t Checker::zone_count(const StateSet& s) {
  std::size_t n = 0;
  for (const auto& f : s)
    n += f.size();
  return n;
}

Verdict check(const PesFile& file, CheckOptions options) {
  auto t0 = std::chrono::steady_clock::now();
  Model model(file);
  MesProgram program = validate_mes(model);
  Checker checker(model, program, options);
  Verdict v = checker.check();
  v.stats.milliseconds =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

} // namespace pes
