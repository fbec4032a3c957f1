#pragma once

// Validated modal equation system with symbols resolved against a Model.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pes/ast.hpp"
#include "pes/model.hpp"

namespace pes {

// Positive-form formula over resolved indices; implication is already lowered.
struct Term {
  enum class Kind {
    prop,
    clock,
    conj,
    disj,
    forall_time,
    exists_time,
    forall_time_rel, // children = {rel, body}
    exists_time_rel, // children = {rel, body}
    all_act,
    exist_act,
    unable_wait_inf,
    able_wait_inf,
    var,
  };

  Kind kind = Kind::conj;
  ControlTest prop{};
  ClockAtom clock{};
  std::size_t var = 0; // equation index
  std::vector<std::pair<std::size_t, std::int32_t>> subst;
  std::vector<std::size_t> resets; // DBM indices
  std::vector<Term> children;

  bool operator==(const Term&) const = default;
};

struct MesEquation {
  std::string var;
  int block = 1;
  Parity parity = Parity::nu;
  Term body;
};

// Variables solved together, in evaluation order.
struct MesGroup {
  Parity parity = Parity::nu;
  std::vector<std::size_t> vars;
};

struct MesProgram {
  std::vector<MesEquation> equations; // declaration order
  std::size_t start = 0;
  std::vector<MesGroup> order;        // dependencies first
  // Block ids in evaluation order (each id once, at its first group).
  std::vector<int> block_order;
};

// Resolves, lowers and orders the equation system; rejects cycles that mix parities and
// blocks sharing an id with different parities.
MesProgram validate_mes(const Model& model);

// Rewrites an AST formula into a Term (implications become disjunctions).
Term lower_formula(const Formula& f, const Model& model,
                   const std::map<std::string, std::size_t>& var_index);

// Largest constant compared against each clock anywhere in the file; 0 when unused.
std::map<std::string, std::int32_t> clock_ceilings(const PesFile& file);

// The ceilings in DBM index order (index 0 unused).
std::vector<std::int32_t> ceiling_vector(const Model& model);

// State at which a variable application's defining equation is evaluated.
std::pair<Location, Zone> apply_var_binding(const Location& loc, const Zone& zone, const Term& v);

// Every variable application that changes the state: (subst, resets) pairs, deduplicated.
std::vector<const Term*> binding_terms(const MesProgram& program);

} // namespace pes
