#pragma once

// Parsed form of a PES source file. Names are kept as written; every #define
// constant has already been replaced by its integer value.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pes/zone.hpp"

namespace pes {

// `name ⋈ value`, where name is a control variable or a clock.
struct Comparison {
  std::string name;
  CompareOp op = CompareOp::eq;
  std::int32_t value = 0;
  bool operator==(const Comparison&) const = default;
};

enum class Parity { mu, nu };

const char* to_string(Parity p);

struct Formula {
  enum class Kind {
    prop_atom,   // control ⋈ int
    clock_atom,  // clock ⋈ int
    conj,
    disj,
    implies,     // children[0] is an atom conjunction, children[1] the consequence
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
  Comparison atom;                                         // prop_atom / clock_atom
  std::string var;                                         // var
  std::vector<std::pair<std::string, std::int32_t>> subst; // var: control := value
  std::vector<std::string> resets;                         // var: clocks reset to 0
  std::vector<Formula> children;

  bool operator==(const Formula&) const = default;

  static Formula make_atom(Kind k, Comparison c) {
    Formula f;
    f.kind = k;
    f.atom = std::move(c);
    return f;
  }
  static Formula make(Kind k, std::vector<Formula> children = {}) {
    Formula f;
    f.kind = k;
    f.children = std::move(children);
    return f;
  }
  static Formula make_var(std::string name) {
    Formula f;
    f.kind = Kind::var;
    f.var = std::move(name);
    return f;
  }
};

struct Equation {
  std::string var;
  Formula body;
  bool operator==(const Equation&) const = default;
};

struct EquationBlock {
  int id = 1;
  Parity parity = Parity::nu;
  std::vector<Equation> equations;
  bool operator==(const EquationBlock&) const = default;
};

struct InvariantClause {
  std::vector<Comparison> premise; // control tests
  std::vector<Comparison> bound;   // clock constraints
  bool operator==(const InvariantClause&) const = default;
};

struct TransitionDecl {
  std::vector<Comparison> source_guard;                         // control tests
  std::vector<Comparison> clock_guard;                          // clock constraints
  std::vector<std::pair<std::string, std::int32_t>> assignments;
  std::vector<std::string> resets;
  bool operator==(const TransitionDecl&) const = default;
};

struct PesFile {
  std::vector<std::pair<std::string, std::int32_t>> defines; // declaration order
  std::vector<std::string> clocks;
  // Clocks that appear only inside formulas (reset through predicate bindings); they are
  // not listed under CLOCKS: and are re-inferred on parse.
  std::vector<std::string> spec_clocks;
  std::vector<std::string> controls;
  std::vector<Comparison> initially;
  std::vector<std::string> predicates;
  std::string start;
  std::vector<EquationBlock> blocks;
  std::vector<InvariantClause> invariants;
  std::vector<TransitionDecl> transitions;

  bool operator==(const PesFile&) const = default;

  // Declared clocks followed by spec clocks; position k maps to DBM index k+1.
  std::vector<std::string> all_clocks() const {
    std::vector<std::string> v = clocks;
    v.insert(v.end(), spec_clocks.begin(), spec_clocks.end());
    return v;
  }
};

} // namespace pes
