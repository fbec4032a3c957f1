#pragma once

// Operational timed-automaton semantics of a parsed PES.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pes/ast.hpp"
#include "pes/zone.hpp"

namespace pes {

// Values of all control variables, in declaration order.
using Location = std::vector<std::int32_t>;

struct LocationHash {
  std::size_t operator()(const Location& l) const noexcept;
};

// `control ⋈ value` against a location.
struct ControlTest {
  std::size_t control;
  CompareOp op;
  std::int32_t value;
  bool holds(const Location& loc) const;
  bool operator==(const ControlTest&) const = default;
};

struct SymbolicState {
  Location loc;
  Zone zone;
};

struct CompiledTransition {
  std::vector<ControlTest> source_guard;
  std::vector<ClockAtom> clock_guard;
  Zone guard_zone;
  std::vector<std::pair<std::size_t, std::int32_t>> assignments;
  std::vector<std::size_t> resets; // DBM indices
};

struct TransitionInstance {
  std::size_t decl; // index into Model::transitions()
  Location source;
  Location target;
  const Zone* guard_zone;
  std::span<const std::size_t> resets;
};

class Model {
public:
  explicit Model(const PesFile& file);

  const PesFile& file() const { return file_; }
  std::size_t dim() const { return clock_names_.size() + 1; }
  std::size_t control_count() const { return file_.controls.size(); }
  const std::vector<std::string>& clock_names() const { return clock_names_; }
  const std::vector<CompiledTransition>& transitions() const { return transitions_; }

  // 1-based DBM index of a clock; throws if unknown.
  std::size_t clock_index(const std::string& name) const;
  std::size_t control_index(const std::string& name) const;

  // Atoms of every clause whose premise holds at loc.
  std::vector<ClockAtom> invariant_of(const Location& loc) const;
  Zone invariant_zone(const Location& loc) const;

  std::vector<TransitionInstance> enabled_instances(const Location& loc) const;

  // reset(zone ∩ guard, resets) ∩ invariant_of(target); empty when disabled.
  Zone discrete_post(const Zone& zone, const TransitionInstance& t) const;

  // True iff no active invariant atom bounds a clock from above.
  bool can_time_diverge(const Location& loc) const;

  // All controls 0, all clocks 0, intersected with INITIALLY and the invariant.
  SymbolicState initial_state() const;

  std::string location_str(const Location& loc) const;

private:
  struct CompiledInvariant {
    std::vector<ControlTest> premise;
    std::vector<ClockAtom> bound;
  };

  ControlTest compile_test(const Comparison& c) const;
  ClockAtom compile_atom(const Comparison& c) const;

  PesFile file_;
  std::vector<std::string> clock_names_;
  std::vector<CompiledInvariant> invariants_;
  std::vector<CompiledTransition> transitions_;
  std::vector<ClockAtom> initially_;
};

bool compare(std::int64_t lhs, CompareOp op, std::int64_t rhs);

} // namespace pes
