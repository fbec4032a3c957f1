#pragma once

// Global fixpoint evaluation of a modal equation system over federations.

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pes/mes.hpp"
#include "pes/model.hpp"
#include "pes/zone.hpp"

namespace pes {

struct CheckOptions {
  std::size_t max_zones = 1'000'000;
};

struct Stats {
  std::uint64_t nodes_expanded = 0; // reachability pops plus per-location evaluations
  std::uint64_t zones_created = 0;
  std::uint64_t peak_zones = 0;     // largest live zone count across stored denotations
  std::uint64_t universe_zones = 0;
  std::uint64_t locations = 0;
  std::uint64_t iterations = 0;     // fixpoint rounds over all groups
  double milliseconds = 0;
};

struct Verdict {
  bool satisfied = false;
  Stats stats;
};

// One federation per universe location (same indexing as Checker::location).
using StateSet = std::vector<Federation>;

class Checker {
public:
  Checker(const Model& model, const MesProgram& program, CheckOptions options = {});

  const Model& model() const { return model_; }
  std::size_t location_count() const { return locations_.size(); }
  const Location& location(std::size_t i) const { return locations_[i]; }
  std::optional<std::size_t> find(const Location& loc) const;

  // Symbolic states reachable from the initial state, closed under delays, transitions and
  // the state changes of variable applications; zones are extrapolated.
  const StateSet& universe() const { return universe_; }
  StateSet empty_set() const;

  // Per-location operators; z must be a subset of the universe at loc.
  Federation eval_forall_time(const StateSet& target, std::size_t loc, const Federation& z) const;
  Federation eval_exists_time(const StateSet& target, std::size_t loc, const Federation& z) const;
  Federation eval_forall_time_rel(const StateSet& rel, const StateSet& target, std::size_t loc,
                                  const Federation& z) const;
  Federation eval_exists_time_rel(const StateSet& rel, const StateSet& target, std::size_t loc,
                                  const Federation& z) const;
  Federation eval_allact(const StateSet& target, std::size_t loc, const Federation& z) const;
  Federation eval_existact(const StateSet& target, std::size_t loc, const Federation& z) const;

  // Whole-set versions applied at every location with z = universe.
  StateSet forall_time(const StateSet& target) const;
  StateSet exists_time(const StateSet& target) const;
  StateSet forall_time_rel(const StateSet& rel, const StateSet& target) const;
  StateSet exists_time_rel(const StateSet& rel, const StateSet& target) const;
  StateSet allact(const StateSet& target) const;
  StateSet existact(const StateSet& target) const;

  // Denotation of a term under an environment of variable denotations.
  StateSet eval(const Term& t, const std::vector<StateSet>& env) const;

  // Solves every equation; result indexed by equation.
  std::vector<StateSet> solve();

  Verdict check();

  const Stats& stats() const { return stats_; }

  static bool set_equal(const StateSet& a, const StateSet& b);
  static bool set_includes(const StateSet& a, const StateSet& b);
  static std::size_t zone_count(const StateSet& s);

private:
  struct Edge {
    TransitionInstance inst;
    std::size_t target;
  };

  void build_universe();
  std::size_t intern(const Location& loc);
  Zone normalize(std::size_t loc, const Zone& z) const;
  Federation pre(const Edge& e, const Federation& y, std::size_t loc) const;
  Federation exists_until(const Federation& r, const Federation& t, std::size_t loc) const;
  Federation binding(const Term& v, const StateSet& s, std::size_t loc) const;
  bool depends_on(const Term& t, const std::vector<bool>& vars) const;

  // Inputs and output of the previous evaluation of a term within one fixpoint group;
  // locations whose inputs are unchanged reuse the previous output.
  struct Memo {
    std::vector<StateSet> inputs;
    StateSet out;
  };
  using MemoTable = std::unordered_map<const Term*, Memo>;

  Federation eval_at(const Term& t, const std::vector<StateSet>& inputs, std::size_t loc) const;
  bool inputs_changed(const Term& t, const std::vector<StateSet>& before,
                      const std::vector<StateSet>& now, std::size_t loc) const;
  StateSet eval_cached(const Term& t, const std::vector<StateSet>& env,
                       const std::vector<bool>& active,
                       std::unordered_map<const Term*, StateSet>& cache, MemoTable* memo) const;
  void note_zones(std::size_t live);

  const Model& model_;
  const MesProgram& program_;
  CheckOptions options_;
  std::vector<std::int32_t> ceilings_;
  std::vector<Location> locations_;
  std::unordered_map<Location, std::size_t, LocationHash> index_;
  std::vector<Zone> invariants_;
  std::vector<bool> diverges_;
  std::vector<std::vector<Edge>> edges_;
  StateSet universe_;
  std::size_t initial_loc_ = 0;
  Zone initial_zone_;
  mutable Stats stats_;
};

// Parses nothing; builds Model and program and returns the verdict for the start variable.
Verdict check(const PesFile& file, CheckOptions options = {});

} // namespace pes
