#include "pes/model.hpp"

#include <algorithm>

#include "pes/error.hpp"

namespace pes {

bool compare(std::int64_t lhs, CompareOp op, std::int64_t rhs) {
  switch (op) {
  case CompareOp::lt: return lhs < rhs;
  case CompareOp::le: return lhs <= rhs;
  case CompareOp::eq: return lhs == rhs;
  case CompareOp::ne: return lhs != rhs;
  case CompareOp::ge: return lhs >= rhs;
  case CompareOp::gt: return lhs > rhs;
  }
  return false;
}

std::size_t LocationHash::operator()(const Location& l) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (std::int32_t v : l) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

bool ControlTest::holds(const Location& loc) const { return compare(loc[control], op, value); }

Model::Model(const PesFile& file) : file_(file), clock_names_(file.all_clocks()) {
  for (const auto& c : file_.invariants) {
    CompiledInvariant ci;
    for (const auto& p : c.premise)
      ci.premise.push_back(compile_test(p));
    for (const auto& b : c.bound)
      ci.bound.push_back(compile_atom(b));
    invariants_.push_back(std::move(ci));
  }
  for (const auto& t : file_.transitions) {
    CompiledTransition ct{{}, {}, Zone::universe(dim()), {}, {}};
    for (const auto& g : t.source_guard)
      ct.source_guard.push_back(compile_test(g));
    for (const auto& g : t.clock_guard)
      ct.clock_guard.push_back(compile_atom(g));
    ct.guard_zone = constraint_to_zone(ct.clock_guard, dim());
    for (const auto& [name, value] : t.assignments)
      ct.assignments.emplace_back(control_index(name), value);
    for (const auto& r : t.resets)
      ct.resets.push_back(clock_index(r));
    transitions_.push_back(std::move(ct));
  }
  for (const auto& c : file_.initially)
    initially_.push_back(compile_atom(c));
}

std::size_t Model::clock_index(const std::string& name) const {
  auto it = std::find(clock_names_.begin(), clock_names_.end(), name);
  if (it == clock_names_.end())
    throw Error(ErrorKind::unresolved, "unknown clock '" + name + "'");
  return static_cast<std::size_t>(it - clock_names_.begin()) + 1;
}

std::size_t Model::control_index(const std::string& name) const {
  const auto& cs = file_.controls;
  auto it = std::find(cs.begin(), cs.end(), name);
  if (it == cs.end())
    throw Error(ErrorKind::unresolved, "unknown control variable '" + name + "'");
  return static_cast<std::size_t>(it - cs.begin());
}

ControlTest Model::compile_test(const Comparison& c) const {
  return ControlTest{control_index(c.name), c.op, c.value};
}

ClockAtom Model::compile_atom(const Comparison& c) const {
  return ClockAtom{clock_index(c.name), c.op, c.value};
}

std::vector<ClockAtom> Model::invariant_of(const Location& loc) const {
  std::vector<ClockAtom> out;
  for (const auto& ci : invariants_) {
    bool active = std::all_of(ci.premise.begin(), ci.premise.end(),
                              [&](const ControlTest& t) { return t.holds(loc); });
    if (active)
      out.insert(out.end(), ci.bound.begin(), ci.bound.end());
  }
  return out;
}

Zone Model::invariant_zone(const Location& loc) const {
  return constraint_to_zone(invariant_of(loc), dim());
}

std::vector<TransitionInstance> Model::enabled_instances(const Location& loc) const {
  std::vector<TransitionInstance> out;
  for (std::size_t k = 0; k < transitions_.size(); ++k) {
    const auto& t = transitions_[k];
    bool enabled = std::all_of(t.source_guard.begin(), t.source_guard.end(),
                               [&](const ControlTest& g) { return g.holds(loc); });
    if (!enabled)
      continue;
    Location target = loc;
    for (const auto& [c, v] : t.assignments)
      target[c] = v;
    out.push_back(TransitionInstance{k, loc, std::move(target), &t.guard_zone, t.resets});
  }
  return out;
}

Zone Model::discrete_post(const Zone& zone, const TransitionInstance& t) const {
  Zone z = zone.intersect(*t.guard_zone);
  if (z.is_empty())
    return z;
  return z.reset(t.resets).constrained(invariant_of(t.target));
}

bool Model::can_time_diverge(const Location& loc) const {
  for (const auto& a : invariant_of(loc))
    if (a.op == CompareOp::lt || a.op == CompareOp::le || a.op == CompareOp::eq)
      return false;
  return true;
}

SymbolicState Model::initial_state() const {
  Location loc(control_count(), 0);
  Zone z = Zone::zero(dim()).constrained(initially_).constrained(invariant_of(loc));
  if (z.is_empty())
    throw Error(ErrorKind::config, "the initial state violates INITIALLY or the invariant");
  return SymbolicState{std::move(loc), std::move(z)};
}

std::string Model::location_str(const Location& loc) const {
  std::string s = "(";
  for (std::size_t k = 0; k < loc.size(); ++k) {
    if (k)
      s += ",";
    s += file_.controls[k] + "=" + std::to_string(loc[k]);
  }
  return s + ")";
}

} // namespace pes
