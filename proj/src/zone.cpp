#include "pes/zone.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace pes {

std::string to_string(Bound b) {
  if (b.is_infinity())
    return "<inf";
  return std::string(b.is_strict() ? "<" : "<=") + std::to_string(b.value());
}

const char* to_string(CompareOp op) {
  switch (op) {
  case CompareOp::lt: return "<";
  case CompareOp::le: return "<=";
  case CompareOp::eq: return "==";
  case CompareOp::ne: return "!=";
  case CompareOp::ge: return ">=";
  case CompareOp::gt: return ">";
  }
  return "?";
}

Zone Zone::universe(std::size_t dim) {
  std::vector<Bound> m(dim * dim, Bound::infinity());
  for (std::size_t i = 0; i < dim; ++i) {
    m[i * dim + i] = Bound::le_zero();
    m[0 * dim + i] = Bound::le_zero();
  }
  return Zone(dim, std::move(m), false);
}

Zone Zone::zero(std::size_t dim) {
  return Zone(dim, std::vector<Bound>(dim * dim, Bound::le_zero()), false);
}

Zone Zone::empty(std::size_t dim) {
  return Zone(dim, std::vector<Bound>(dim * dim, Bound::le_zero()), true);
}

Zone Zone::from_matrix(std::size_t dim, std::vector<Bound> m) {
  if (m.size() != dim * dim)
    throw std::invalid_argument("DBM matrix size does not match dimension");
  Zone z(dim, std::move(m), false);
  z.close();
  return z;
}

// Floyd-Warshall closure; a negative diagonal marks the zone empty.
void Zone::close() {
  if (empty_)
    return;
  const std::size_t n = dim_;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      Bound ik = m_[i * n + k];
      if (ik.is_infinity())
        continue;
      for (std::size_t j = 0; j < n; ++j) {
        Bound through = ik + m_[k * n + j];
        if (through < m_[i * n + j])
          m_[i * n + j] = through;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (m_[i * n + i] < Bound::le_zero()) {
        empty_ = true;
        return;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    m_[i * n + i] = Bound::le_zero();
}

Zone Zone::constrained(std::size_t i, std::size_t j, Bound b) const {
  if (empty_ || b >= at(i, j))
    return *this;
  Zone z = *this;
  z.ref(i, j) = b;
  // Incremental closure for one tightened edge.
  if (b + at(j, i) < Bound::le_zero())
    return Zone::empty(dim_);
  const std::size_t n = dim_;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) {
      Bound via = z.m_[a * n + i] + b + z.m_[j * n + c];
      if (via < z.m_[a * n + c])
        z.m_[a * n + c] = via;
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (z.m_[a * n + a] < Bound::le_zero())
      return Zone::empty(dim_);
    z.m_[a * n + a] = Bound::le_zero();
  }
  return z;
}

Zone Zone::constrained(const ClockAtom& a) const {
  assert(a.clock > 0 && a.clock < dim_);
  switch (a.op) {
  case CompareOp::lt: return constrained(a.clock, 0, Bound::lt(a.value));
  case CompareOp::le: return constrained(a.clock, 0, Bound::le(a.value));
  case CompareOp::ge: return constrained(0, a.clock, Bound::le(-a.value));
  case CompareOp::gt: return constrained(0, a.clock, Bound::lt(-a.value));
  case CompareOp::eq:
    return constrained(a.clock, 0, Bound::le(a.value)).constrained(0, a.clock, Bound::le(-a.value));
  case CompareOp::ne: break;
  }
  throw std::invalid_argument("'!=' is not a convex clock constraint");
}

Zone Zone::constrained(std::span<const ClockAtom> atoms) const {
  Zone z = *this;
  for (const auto& a : atoms) {
    if (z.empty_)
      break;
    z = z.constrained(a);
  }
  return z;
}

Zone Zone::intersect(const Zone& o) const {
  assert(dim_ == o.dim_);
  if (!may_intersect(o))
    return Zone::empty(dim_);
  Zone z = *this;
  bool changed = false;
  for (std::size_t k = 0; k < m_.size(); ++k) {
    if (o.m_[k] < z.m_[k]) {
      z.m_[k] = o.m_[k];
      changed = true;
    }
  }
  if (changed)
    z.close();
  return z;
}

Zone Zone::up() const {
  if (empty_)
    return *this;
  Zone z = *this;
  for (std::size_t i = 1; i < dim_; ++i)
    z.ref(i, 0) = Bound::infinity();
  return z;
}

Zone Zone::down() const {
  if (empty_)
    return *this;
  Zone z = *this;
  for (std::size_t j = 1; j < dim_; ++j) {
    Bound b = Bound::le_zero();
    for (std::size_t i = 1; i < dim_; ++i)
      b = std::min(b, z.at(i, j));
    z.ref(0, j) = b;
  }
  z.close();
  return z;
}

Zone Zone::up_strict() const {
  if (empty_)
    return *this;
  Zone z = up();
  for (std::size_t j = 1; j < dim_; ++j) {
    Bound b = z.at(0, j);
    if (!b.is_strict())
      z.ref(0, j) = Bound::lt(b.value());
  }
  z.close();
  return z;
}

Zone Zone::reset(std::span<const std::size_t> clocks) const {
  if (empty_)
    return *this;
  Zone z = *this;
  for (std::size_t x : clocks) {
    assert(x > 0 && x < dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      z.ref(x, j) = z.at(0, j);
      z.ref(j, x) = z.at(j, 0);
    }
    z.ref(x, x) = Bound::le_zero();
  }
  return z;
}

Zone Zone::free(std::span<const std::size_t> clocks) const {
  if (empty_)
    return *this;
  Zone z = *this;
  for (std::size_t x : clocks) {
    assert(x > 0 && x < dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j == x)
        continue;
      z.ref(x, j) = Bound::infinity();
      z.ref(j, x) = z.at(j, 0);
    }
  }
  return z;
}

Zone Zone::extrapolate(std::span<const std::int32_t> ceilings) const {
  if (empty_)
    return *this;
  assert(ceilings.size() >= dim_);
  Zone z = *this;
  bool changed = false;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j)
        continue;
      Bound b = z.at(i, j);
      if (b.is_infinity())
        continue;
      if (i != 0 && b > Bound::le(ceilings[i])) {
        z.ref(i, j) = Bound::infinity();
        changed = true;
      } else if (j != 0 && b < Bound::lt(-ceilings[j])) {
        z.ref(i, j) = Bound::lt(-ceilings[j]);
        changed = true;
      }
    }
  }
  if (changed)
    z.close();
  return z;
}

bool Zone::included_in(const Zone& o) const {
  if (empty_)
    return true;
  if (o.empty_)
    return false;
  for (std::size_t k = 0; k < m_.size(); ++k)
    if (m_[k] > o.m_[k])
      return false;
  return true;
}

// Canonical operands intersect iff no two-edge cycle through both is negative.
bool Zone::intersects(const Zone& o) const { return may_intersect(o) && !intersect(o).is_empty(); }

bool Zone::may_intersect(const Zone& o) const {
  assert(dim_ == o.dim_);
  if (empty_ || o.empty_)
    return false;
  const std::size_t n = dim_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m_[i * n + j] + o.m_[j * n + i] < Bound::le_zero())
        return false;
  return true;
}

bool Zone::contains(std::span<const std::int64_t> scaled, std::int64_t scale) const {
  if (empty_)
    return false;
  for (std::size_t i = 0; i < dim_; ++i) {
    std::int64_t vi = i == 0 ? 0 : scaled[i];
    for (std::size_t j = 0; j < dim_; ++j) {
      std::int64_t vj = j == 0 ? 0 : scaled[j];
      if (!at(i, j).admits(vi - vj, scale))
        return false;
    }
  }
  return true;
}

bool Zone::contains_zero() const {
  std::vector<std::int64_t> z(dim_, 0);
  return contains(z, 1);
}

bool Zone::operator==(const Zone& o) const {
  if (dim_ != o.dim_ || empty_ != o.empty_)
    return false;
  return empty_ || m_ == o.m_;
}

std::string Zone::str(std::span<const std::string> names) const {
  if (empty_)
    return "false";
  auto name = [&](std::size_t i) -> std::string {
    if (i == 0)
      return "0";
    if (i - 1 < names.size())
      return names[i - 1];
    return "x" + std::to_string(i);
  };
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i == j)
        continue;
      Bound b = at(i, j);
      if (b.is_infinity() || (i == 0 && b == Bound::le_zero()))
        continue;
      if (!first)
        os << " && ";
      first = false;
      if (i == 0)
        os << name(j) << (b.is_strict() ? " > " : " >= ") << -b.value();
      else if (j == 0)
        os << name(i) << ' ' << to_string(b);
      else
        os << name(i) << '-' << name(j) << ' ' << to_string(b);
    }
  }
  return first ? "true" : os.str();
}

Zone constraint_to_zone(std::span<const ClockAtom> atoms, std::size_t dim) {
  return Zone::universe(dim).constrained(atoms);
}

std::vector<Zone> subtract(const Zone& a, const Zone& b) {
  assert(a.dim() == b.dim());
  std::vector<Zone> out;
  if (a.is_empty())
    return out;
  if (b.is_empty() || !a.may_intersect(b)) {
    out.push_back(a);
    return out;
  }
  Zone rest = a;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n && !rest.is_empty(); ++i) {
    for (std::size_t j = 0; j < n && !rest.is_empty(); ++j) {
      if (i == j)
        continue;
      Bound f = b.at(i, j);
      if (f.is_infinity() || rest.at(i, j) <= f)
        continue;
      Zone piece = rest.constrained(j, i, f.negated());
      if (!piece.is_empty())
        out.push_back(std::move(piece));
      rest = rest.constrained(i, j, f);
    }
  }
  return out;
}

Federation::Federation(Zone z) : dim_(z.dim()) {
  if (!z.is_empty())
    zones_.push_back(std::move(z));
}

void Federation::add(const Zone& z) {
  assert(z.dim() == dim_);
  if (z.is_empty())
    return;
  for (const auto& e : zones_)
    if (z.included_in(e))
      return;
  std::erase_if(zones_, [&](const Zone& e) { return e.included_in(z); });
  zones_.push_back(z);
}

void Federation::add(const Federation& f) {
  for (const auto& z : f.zones_)
    add(z);
}

Federation Federation::unite(const Federation& o) const {
  Federation r = *this;
  r.add(o);
  return r;
}

Federation Federation::intersect(const Zone& z) const {
  Federation r(dim_);
  for (const auto& e : zones_)
    r.add(e.intersect(z));
  return r;
}

Federation Federation::intersect(const Federation& o) const {
  Federation r(dim_);
  for (const auto& a : zones_)
    for (const auto& b : o.zones_)
      if (a.may_intersect(b))
        r.add(a.intersect(b));
  return r;
}

Federation Federation::subtract(const Zone& z) const {
  if (z.is_empty())
    return *this;
  // Untouched zones go in first: none covers another, and no piece can cover one of them.
  Federation r(dim_);
  std::vector<const Zone*> hit;
  for (const auto& a : zones_) {
    if (a.may_intersect(z))
      hit.push_back(&a);
    else
      r.zones_.push_back(a);
  }
  for (const Zone* a : hit)
    for (auto& piece : pes::subtract(*a, z))
      r.add(piece);
  return r;
}

Federation Federation::subtract(const Federation& o) const {
  Federation r = *this;
  for (const auto& z : o.zones_) {
    if (r.is_empty())
      break;
    r = r.subtract(z);
  }
  return r;
}

bool Federation::includes(const Zone& z) const {
  if (z.is_empty())
    return true;
  for (const auto& e : zones_)
    if (z.included_in(e))
      return true;
  return Federation(z).subtract(*this).is_empty();
}

bool Federation::includes(const Federation& o) const {
  for (const auto& z : o.zones_)
    if (!includes(z))
      return false;
  return true;
}

Federation Federation::up() const {
  Federation r(dim_);
  for (const auto& z : zones_)
    r.add(z.up());
  return r;
}

Federation Federation::down() const {
  Federation r(dim_);
  for (const auto& z : zones_)
    r.add(z.down());
  return r;
}

Federation Federation::up_strict() const {
  Federation r(dim_);
  for (const auto& z : zones_)
    r.add(z.up_strict());
  return r;
}

Federation Federation::reset(std::span<const std::size_t> clocks) const {
  Federation r(dim_);
  for (const auto& z : zones_)
    r.add(z.reset(clocks));
  return r;
}

Federation Federation::free(std::span<const std::size_t> clocks) const {
  Federation r(dim_);
  for (const auto& z : zones_)
    r.add(z.free(clocks));
  return r;
}

bool Federation::contains(std::span<const std::int64_t> scaled, std::int64_t scale) const {
  return std::any_of(zones_.begin(), zones_.end(),
                     [&](const Zone& z) { return z.contains(scaled, scale); });
}

bool Federation::contains_zero() const {
  return std::any_of(zones_.begin(), zones_.end(), [](const Zone& z) { return z.contains_zero(); });
}

std::string Federation::str(std::span<const std::string> names) const {
  if (zones_.empty())
    return "false";
  std::string s;
  for (std::size_t k = 0; k < zones_.size(); ++k) {
    if (k)
      s += " || ";
    s += "(" + zones_[k].str(names) + ")";
  }
  return s;
}

} // namespace pes
