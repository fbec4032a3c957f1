#pragma once

// Shared generators and sampling oracles for the unit tests and the acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pes/ast.hpp"
#include "pes/benchgen.hpp"
#include "pes/checker.hpp"
#include "pes/zone.hpp"

namespace pes::test {

using Rng = std::mt19937_64;

std::string read_file(const std::string& path);
std::string golden_path(const std::string& name);

// One raw difference constraint x_i - x_j ⋈ c.
struct Diff {
  std::size_t i, j;
  Bound bound;
};

// A zone together with the constraints it was built from; `holds` evaluates them directly.
struct RawZone {
  std::size_t dim = 1;
  std::vector<Diff> diffs;
  Zone zone = Zone::universe(1);

  bool holds(std::span<const std::int64_t> scaled, std::int64_t scale) const;
};

// Up to four random constraints over dim-1 clocks, constants in [-10, 10].
RawZone random_zone(Rng& rng, std::size_t dim);
// Same constraints, canonicalized through Zone::from_matrix.
Zone zone_from_diffs(std::size_t dim, const std::vector<Diff>& diffs);

// Valuation scaled by `point_scale` (index 0 is the reference clock), biased toward z.
std::vector<std::int64_t> sample_point(Rng& rng, const Zone& z);
inline constexpr std::int64_t point_scale = 8;

enum class ZoneOp {
  canonicalize,
  intersect,
  up,
  down,
  up_strict,
  reset,
  free,
  subtract,
  fed_union,
  fed_intersect,
  fed_subtract,
  fed_includes,
  fed_up,
  fed_down,
  extrapolate,
};

const std::vector<ZoneOp>& all_zone_ops();
const char* to_string(ZoneOp op);

struct PropertyReport {
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

// Random instances of one operation checked against point-sampling oracles.
PropertyReport run_zone_property(ZoneOp op, std::size_t instances, std::uint64_t seed);

// Random subset of the universe: per location a union of universe zones cut by random
// atoms, or empty, or everything.
StateSet random_state_set(Rng& rng, const Checker& checker);

struct IdentityReport {
  std::size_t sets = 0;
  std::size_t forall_violations = 0;
  std::size_t exists_violations = 0;
};

// ForallTimeRel(∅, T) == ForallTime(T) and ExistsTimeRel(⊤, T) == ExistsTime(T).
IdentityReport run_reduction_identities(const PesFile& file, std::size_t sets, std::uint64_t seed);

// #define values small enough for the region oracle (every constant <= 4).
Params shrunk_params(Family f);

struct OracleCase {
  std::string label;
  std::string source;
};

// The oracle-equivalence set: LEADER n=2,3 and FISCHER n=2 with shrunk constants, every
// category that exists at that size.
std::vector<OracleCase> oracle_cases();

// True when the checker's extrapolated universe visits exactly the locations the region
// graph reaches; `detail` receives the first difference.
bool reachable_locations_match(const PesFile& file, std::string& detail);

// Text with line comments and all whitespace removed.
std::string normalize(const std::string& text);
// PREDICATE (or START when absent) through the closing brace of EQUATIONS, comments removed.
std::string equation_section(const std::string& text);
// Replaces the equation section of `model` by `section` (keeping PREDICATE when the
// section has none).
std::string splice_equations(const std::string& model, const std::string& section);

// Families and n values of the golden listings.
struct ListingCase {
  Family family;
  Category category;
  int n;
  std::string file;
};
std::vector<ListingCase> listing_cases();

} // namespace pes::test
