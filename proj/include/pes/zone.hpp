#pragma once

// Difference-bound matrices over a fixed clock set and finite unions of them.
//
// Index 0 is the reference clock (always 0). Entry (i, j) bounds x_i - x_j.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pes {

// A bound (c, <) or (c, <=) packed into one ordered integer: raw = 2c + (non-strict ? 1 : 0).
// The packing gives (c,<) < (c,<=) < (c+1,<), so min and comparison are plain integer ops.
class Bound {
public:
  using raw_t = std::int32_t;

  static constexpr raw_t infinity_raw = std::numeric_limits<raw_t>::max();

  constexpr Bound() : raw_(infinity_raw) {}

  static constexpr Bound infinity() { return Bound(infinity_raw); }
  static constexpr Bound le(std::int32_t c) { return Bound(static_cast<raw_t>(c * 2 + 1)); }
  static constexpr Bound lt(std::int32_t c) { return Bound(static_cast<raw_t>(c * 2)); }
  static constexpr Bound from_raw(raw_t r) { return Bound(r); }
  static constexpr Bound le_zero() { return le(0); }

  constexpr bool is_infinity() const { return raw_ == infinity_raw; }
  constexpr bool is_strict() const { return !is_infinity() && (raw_ & 1) == 0; }
  constexpr std::int32_t value() const { return raw_ >> 1; }
  constexpr raw_t raw() const { return raw_; }

  // Sum of two bounds; the result is strict when either operand is.
  constexpr Bound operator+(Bound o) const {
    if (is_infinity() || o.is_infinity())
      return infinity();
    return Bound(static_cast<raw_t>(raw_ + o.raw_ - ((raw_ | o.raw_) & 1)));
  }

  // The complement of "x <= c" is "-x < -c" and vice versa.
  constexpr Bound negated() const { return Bound(static_cast<raw_t>(1 - raw_)); }

  constexpr auto operator<=>(const Bound&) const = default;

  // True when a difference d satisfies this bound. d is a value scaled by `scale`
  // relative to the integer constant.
  constexpr bool admits(std::int64_t scaled_diff, std::int64_t scale) const {
    if (is_infinity())
      return true;
    std::int64_t c = static_cast<std::int64_t>(value()) * scale;
    return is_strict() ? scaled_diff < c : scaled_diff <= c;
  }

private:
  constexpr explicit Bound(raw_t r) : raw_(r) {}
  raw_t raw_;
};

std::string to_string(Bound b);

enum class CompareOp { lt, le, eq, ne, ge, gt };

const char* to_string(CompareOp op);

// One atomic clock constraint x ⋈ c. `ne` is not a clock constraint.
struct ClockAtom {
  std::size_t clock; // 1-based DBM index
  CompareOp op;
  std::int32_t value;
  bool operator==(const ClockAtom&) const = default;
};

class Zone {
public:
  // All clocks are >= 0 and otherwise unconstrained.
  static Zone universe(std::size_t dim);
  // The single valuation where every clock is 0.
  static Zone zero(std::size_t dim);
  static Zone empty(std::size_t dim);
  // Builds from an arbitrary matrix (row-major, dim*dim) and canonicalizes it.
  static Zone from_matrix(std::size_t dim, std::vector<Bound> m);

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return empty_; }
  Bound at(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }

  // Tighten one entry and re-canonicalize.
  Zone constrained(std::size_t i, std::size_t j, Bound b) const;
  Zone constrained(const ClockAtom& a) const;
  Zone constrained(std::span<const ClockAtom> atoms) const;

  Zone intersect(const Zone& o) const;
  Zone up() const;
  Zone down() const;
  // Future that starts strictly after the zone: {w | exists e > 0, w - e in Z}.
  Zone up_strict() const;
  Zone reset(std::span<const std::size_t> clocks) const;
  Zone free(std::span<const std::size_t> clocks) const;
  // Classic per-clock maximal-constant extrapolation. ceilings[0] is ignored.
  Zone extrapolate(std::span<const std::int32_t> ceilings) const;

  // this ⊆ o
  bool included_in(const Zone& o) const;
  bool intersects(const Zone& o) const;
  // Pairwise test m_ij + o_ji >= 0; false means disjoint, true may still be disjoint when
  // the emptiness witness is a longer cycle alternating between the two matrices.
  bool may_intersect(const Zone& o) const;

  // Membership of a point given as clock values scaled by `scale` (index 0 ignored).
  bool contains(std::span<const std::int64_t> scaled, std::int64_t scale) const;
  bool contains_zero() const;

  bool operator==(const Zone& o) const;

  std::string str(std::span<const std::string> clock_names = {}) const;

private:
  Zone(std::size_t dim, std::vector<Bound> m, bool empty)
      : dim_(dim), m_(std::move(m)), empty_(empty) {}

  Bound& ref(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
  void close();

  std::size_t dim_;
  std::vector<Bound> m_;
  bool empty_;
};

// Canonical zone of the valuations satisfying every atom (clocks >= 0).
Zone constraint_to_zone(std::span<const ClockAtom> atoms, std::size_t dim);

// Exact set difference a ∖ b as pairwise-disjoint non-empty zones.
std::vector<Zone> subtract(const Zone& a, const Zone& b);

// Finite union of non-empty canonical zones, kept free of zones included in a sibling.
class Federation {
public:
  explicit Federation(std::size_t dim) : dim_(dim) {}
  Federation(Zone z);

  static Federation universe(std::size_t dim) { return Federation(Zone::universe(dim)); }

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return zones_.empty(); }
  std::size_t size() const { return zones_.size(); }
  const std::vector<Zone>& zones() const { return zones_; }
  auto begin() const { return zones_.begin(); }
  auto end() const { return zones_.end(); }

  // Adds z unless already covered; drops siblings covered by z.
  void add(const Zone& z);
  void add(const Federation& f);

  Federation unite(const Federation& o) const;
  Federation intersect(const Federation& o) const;
  Federation intersect(const Zone& z) const;
  Federation subtract(const Federation& o) const;
  Federation subtract(const Zone& z) const;
  // o ⊆ this
  bool includes(const Federation& o) const;
  bool includes(const Zone& z) const;
  bool equals(const Federation& o) const { return includes(o) && o.includes(*this); }
  // Same zones in the same order; implies equals().
  bool same_representation(const Federation& o) const { return zones_ == o.zones_; }

  Federation up() const;
  Federation down() const;
  Federation up_strict() const;
  Federation reset(std::span<const std::size_t> clocks) const;
  Federation free(std::span<const std::size_t> clocks) const;

  bool contains(std::span<const std::int64_t> scaled, std::int64_t scale) const;
  bool contains_zero() const;

  std::string str(std::span<const std::string> clock_names = {}) const;

private:
  std::size_t dim_;
  std::vector<Zone> zones_;
};

// Convenience wrappers with the set-operation names used across the code base.
inline Federation fed_union(const Federation& a, const Federation& b) { return a.unite(b); }
inline Federation fed_intersect(const Federation& a, const Federation& b) { return a.intersect(b); }
inline Federation fed_subtract(const Federation& a, const Federation& b) { return a.subtract(b); }
inline bool fed_includes(const Federation& a, const Federation& b) { return a.includes(b); }

} // namespace pes
