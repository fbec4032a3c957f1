#include "support.hpp"

#include <algorithm>
#include <set>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pes/mes.hpp"
#include "pes/model.hpp"
#include "pes/region_oracle.hpp"

namespace pes::test {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string golden_path(const std::string& name) { return std::string(PES_GOLDEN_DIR) + "/" + name; }

bool RawZone::holds(std::span<const std::int64_t> p, std::int64_t scale) const {
  for (std::size_t k = 1; k < dim; ++k)
    if (p[k] < 0)
      return false;
  for (const auto& d : diffs)
    if (!d.bound.admits(p[d.i] - p[d.j], scale))
      return false;
  return true;
}

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, int one_in) { return uniform(rng, 1, one_in) == 1; }

Zone build(std::size_t dim, const std::vector<Diff>& diffs) {
  Zone z = Zone::universe(dim);
  for (const auto& d : diffs)
    z = z.constrained(d.i, d.j, d.bound);
  return z;
}

} // namespace

RawZone random_zone(Rng& rng, std::size_t dim) {
  RawZone r;
  r.dim = dim;
  int count = uniform(rng, 0, 4);
  for (int k = 0; k < count && dim > 1; ++k) {
    std::size_t i = uniform(rng, 0, static_cast<int>(dim) - 1);
    std::size_t j = uniform(rng, 0, static_cast<int>(dim) - 1);
    if (i == j)
      j = (i + 1) % dim;
    int c = j == 0 ? uniform(rng, 0, 10) : i == 0 ? uniform(rng, -10, 0) : uniform(rng, -10, 10);
    if (coin(rng, 6) && (i == 0 || j == 0)) {
      // x == c
      std::size_t x = i == 0 ? j : i;
      int v = std::abs(c);
      r.diffs.push_back({x, 0, Bound::le(v)});
      r.diffs.push_back({0, x, Bound::le(-v)});
      continue;
    }
    r.diffs.push_back({i, j, coin(rng, 2) ? Bound::lt(c) : Bound::le(c)});
  }
  r.zone = build(dim, r.diffs);
  return r;
}

Zone zone_from_diffs(std::size_t dim, const std::vector<Diff>& diffs) {
  std::vector<Bound> m(dim * dim, Bound::infinity());
  for (std::size_t k = 0; k < dim; ++k) {
    m[k * dim + k] = Bound::le_zero();
    m[k] = Bound::le_zero();
  }
  for (const auto& d : diffs)
    m[d.i * dim + d.j] = std::min(m[d.i * dim + d.j], d.bound);
  return Zone::from_matrix(dim, std::move(m));
}

std::vector<std::int64_t> sample_point(Rng& rng, const Zone& z) {
  const std::size_t dim = z.dim();
  const std::int64_t s = point_scale;
  std::vector<std::int64_t> p(dim, 0);
  auto uniform_point = [&] {
    for (std::size_t k = 1; k < dim; ++k)
      p[k] = 2 * uniform(rng, 0, 48);
    return p;
  };
  if (z.is_empty() || coin(rng, 4))
    return uniform_point();

  std::vector<std::size_t> order;
  for (std::size_t k = 1; k < dim; ++k)
    order.push_back(k);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> chosen(dim, false);
  chosen[0] = true;
  for (std::size_t k : order) {
    std::int64_t lo = 0, hi = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j < dim; ++j) {
      if (!chosen[j])
        continue;
      Bound up = z.at(k, j);
      if (!up.is_infinity())
        hi = std::min(hi, p[j] + up.value() * s - (up.is_strict() ? 2 : 0));
      Bound low = z.at(j, k);
      if (!low.is_infinity())
        lo = std::max(lo, p[j] - low.value() * s + (low.is_strict() ? 2 : 0));
    }
    if (hi == std::numeric_limits<std::int64_t>::max())
      hi = lo + 2 * uniform(rng, 0, 24);
    if (lo > hi)
      return uniform_point();
    int pick = uniform(rng, 0, 2);
    std::int64_t v = pick == 0 ? lo : pick == 1 ? hi : lo + 2 * uniform(rng, 0, static_cast<int>((hi - lo) / 2));
    p[k] = v;
    chosen[k] = true;
  }
  if (coin(rng, 4) && dim > 1) {
    std::size_t k = uniform(rng, 1, static_cast<int>(dim) - 1);
    p[k] = std::max<std::int64_t>(0, p[k] + (coin(rng, 2) ? 2 : -2));
  }
  return p;
}

const std::vector<ZoneOp>& all_zone_ops() {
  static const std::vector<ZoneOp> ops{
      ZoneOp::canonicalize, ZoneOp::intersect,     ZoneOp::up,           ZoneOp::down,
      ZoneOp::up_strict,    ZoneOp::reset,         ZoneOp::free,         ZoneOp::subtract,
      ZoneOp::fed_union,    ZoneOp::fed_intersect, ZoneOp::fed_subtract, ZoneOp::fed_includes,
      ZoneOp::fed_up,       ZoneOp::fed_down,      ZoneOp::extrapolate};
  return ops;
}

const char* to_string(ZoneOp op) {
  switch (op) {
  case ZoneOp::canonicalize: return "canonicalize";
  case ZoneOp::intersect: return "intersect";
  case ZoneOp::up: return "up";
  case ZoneOp::down: return "down";
  case ZoneOp::up_strict: return "up_strict";
  case ZoneOp::reset: return "reset";
  case ZoneOp::free: return "free";
  case ZoneOp::subtract: return "subtract";
  case ZoneOp::fed_union: return "federation_union";
  case ZoneOp::fed_intersect: return "federation_intersect";
  case ZoneOp::fed_subtract: return "federation_subtract";
  case ZoneOp::fed_includes: return "federation_includes";
  case ZoneOp::fed_up: return "federation_up";
  case ZoneOp::fed_down: return "federation_down";
  case ZoneOp::extrapolate: return "extrapolate";
  }
  return "?";
}

namespace {

constexpr int samples_per_instance = 24;
// Delay and free-value witnesses run over the 1/8 grid up to this many units.
constexpr std::int64_t witness_limit = 24 * point_scale;

struct RawFed {
  std::vector<RawZone> parts;
  Federation fed{1};

  bool holds(std::span<const std::int64_t> p, std::int64_t scale) const {
    for (const auto& z : parts)
      if (z.holds(p, scale))
        return true;
    return false;
  }
};

RawFed random_fed(Rng& rng, std::size_t dim) {
  RawFed f;
  f.fed = Federation(dim);
  int count = uniform(rng, 0, 3);
  for (int k = 0; k < count; ++k) {
    f.parts.push_back(random_zone(rng, dim));
    f.fed.add(f.parts.back().zone);
  }
  return f;
}

template <class Holds>
bool delayed_from(const std::vector<std::int64_t>& p, Holds&& holds, std::int64_t first) {
  std::int64_t limit = witness_limit;
  for (std::size_t k = 1; k < p.size(); ++k)
    limit = std::min(limit, p[k]);
  std::vector<std::int64_t> q = p;
  for (std::int64_t d = first; d <= limit; ++d) {
    for (std::size_t k = 1; k < p.size(); ++k)
      q[k] = p[k] - d;
    if (holds(q))
      return true;
  }
  return false;
}

template <class Holds>
bool delays_into(const std::vector<std::int64_t>& p, Holds&& holds) {
  std::vector<std::int64_t> q = p;
  for (std::int64_t d = 0; d <= witness_limit; ++d) {
    for (std::size_t k = 1; k < p.size(); ++k)
      q[k] = p[k] + d;
    if (holds(q))
      return true;
  }
  return false;
}

template <class Holds>
bool some_value(const std::vector<std::int64_t>& p, std::size_t clock, Holds&& holds) {
  // Any witness lies within 10 units of another clock's value or of 0.
  std::int64_t limit = 11 * point_scale;
  for (std::size_t k = 1; k < p.size(); ++k)
    limit = std::max(limit, p[k] + 11 * point_scale);
  std::vector<std::int64_t> q = p;
  for (std::int64_t v = 0; v <= limit; ++v) {
    q[clock] = v;
    if (holds(q))
      return true;
  }
  return false;
}

std::string point_str(const std::vector<std::int64_t>& p) {
  std::string s = "(";
  for (std::size_t k = 1; k < p.size(); ++k)
    s += (k > 1 ? "," : "") + std::to_string(p[k]) + "/" + std::to_string(point_scale);
  return s + ")";
}

bool fed_reduced(const Federation& f) {
  const auto& zs = f.zones();
  for (std::size_t a = 0; a < zs.size(); ++a) {
    if (zs[a].is_empty())
      return false;
    for (std::size_t b = 0; b < zs.size(); ++b)
      if (a != b && zs[a].included_in(zs[b]))
        return false;
  }
  return true;
}

bool canonical(const Zone& z) {
  if (z.is_empty())
    return true;
  std::size_t n = z.dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (z.at(i, i) != Bound::le_zero())
      return false;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (z.at(i, k) + z.at(k, j) < z.at(i, j))
          return false;
  }
  return true;
}

} // namespace

PropertyReport run_zone_property(ZoneOp op, std::size_t instances, std::uint64_t seed) {
  Rng rng(seed ^ (static_cast<std::uint64_t>(op) * 0x9e3779b97f4a7c15ULL));
  PropertyReport rep;
  const std::int64_t s = point_scale;
  auto fail = [&](const std::string& what) {
    if (rep.failures++ == 0)
      rep.first_failure = std::string(to_string(op)) + ": " + what;
  };

  for (std::size_t inst = 0; inst < instances; ++inst) {
    ++rep.instances;
    std::size_t dim = uniform(rng, 2, 4);
    std::size_t before = rep.failures;
    auto check_points = [&](const auto& result, const auto& expected, const Zone& bias_a,
                            const Zone& bias_b) {
      for (int k = 0; k < samples_per_instance && rep.failures == before; ++k) {
        auto p = sample_point(rng, k % 2 ? bias_a : bias_b);
        bool got = result(p);
        bool want = expected(p);
        if (got != want)
          fail("point " + point_str(p) + " result " + (got ? "contains" : "excludes") +
               " but oracle says " + (want ? "member" : "non-member"));
      }
    };

    switch (op) {
    case ZoneOp::canonicalize: {
      RawZone a = random_zone(rng, dim);
      Zone z = zone_from_diffs(dim, a.diffs);
      if (!canonical(z))
        fail("from_matrix result is not closed: " + z.str());
      if (!(z == a.zone))
        fail("from_matrix and incremental tightening differ: " + z.str() + " vs " + a.zone.str());
      check_points([&](auto& p) { return z.contains(p, s); }, [&](auto& p) { return a.holds(p, s); },
                   z, Zone::universe(dim));
      break;
    }
    case ZoneOp::intersect: {
      RawZone a = random_zone(rng, dim), b = random_zone(rng, dim);
      Zone z = a.zone.intersect(b.zone);
      if (!canonical(z))
        fail("result not canonical");
      if (!z.is_empty() && !a.zone.may_intersect(b.zone))
        fail("may_intersect() rejected intersecting zones");
      if (z.is_empty() == a.zone.intersects(b.zone))
        fail("intersects() disagrees with intersect() on " + a.zone.str() + " and " +
             b.zone.str());
      check_points([&](auto& p) { return z.contains(p, s); },
                   [&](auto& p) { return a.holds(p, s) && b.holds(p, s); }, a.zone, b.zone);
      break;
    }
    case ZoneOp::up:
    case ZoneOp::up_strict: {
      RawZone a = random_zone(rng, dim);
      bool strict = op == ZoneOp::up_strict;
      Zone z = strict ? a.zone.up_strict() : a.zone.up();
      auto in_a = [&](const std::vector<std::int64_t>& q) { return a.holds(q, s); };
      check_points([&](auto& p) { return z.contains(p, s); },
                   [&](auto& p) { return delayed_from(p, in_a, strict ? 1 : 0); }, z, a.zone);
      break;
    }
    case ZoneOp::down: {
      RawZone a = random_zone(rng, dim);
      Zone z = a.zone.down();
      auto in_a = [&](const std::vector<std::int64_t>& q) { return a.holds(q, s); };
      check_points([&](auto& p) { return z.contains(p, s); },
                   [&](auto& p) { return delays_into(p, in_a); }, z, a.zone);
      break;
    }
    case ZoneOp::reset:
    case ZoneOp::free: {
      RawZone a = random_zone(rng, dim);
      std::size_t clock = uniform(rng, 1, static_cast<int>(dim) - 1);
      std::vector<std::size_t> cs{clock};
      bool is_reset = op == ZoneOp::reset;
      Zone z = is_reset ? a.zone.reset(cs) : a.zone.free(cs);
      auto in_a = [&](const std::vector<std::int64_t>& q) { return a.holds(q, s); };
      check_points([&](auto& p) { return z.contains(p, s); },
                   [&](auto& p) { return (!is_reset || p[clock] == 0) && some_value(p, clock, in_a); },
                   z, a.zone);
      if (dim >= 3) {
        std::size_t other = clock % (dim - 1) + 1;
        std::vector<std::size_t> both{clock, other}, second{other};
        Zone joint = is_reset ? a.zone.reset(both) : a.zone.free(both);
        Zone stepwise = is_reset ? z.reset(second) : z.free(second);
        if (!(joint == stepwise))
          fail("two-clock result differs from one clock at a time");
      }
      break;
    }
    case ZoneOp::subtract: {
      RawZone a = random_zone(rng, dim), b = random_zone(rng, dim);
      auto pieces = subtract(a.zone, b.zone);
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].is_empty())
          fail("empty piece");
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
          if (pieces[i].intersects(pieces[j]))
            fail("pieces overlap");
      }
      auto in_pieces = [&](auto& p) {
        for (const auto& z : pieces)
          if (z.contains(p, s))
            return true;
        return false;
      };
      check_points(in_pieces, [&](auto& p) { return a.holds(p, s) && !b.holds(p, s); }, a.zone,
                   b.zone);
      break;
    }
    case ZoneOp::fed_union:
    case ZoneOp::fed_intersect:
    case ZoneOp::fed_subtract: {
      RawFed f = random_fed(rng, dim), g = random_fed(rng, dim);
      Federation r = op == ZoneOp::fed_union       ? f.fed.unite(g.fed)
                     : op == ZoneOp::fed_intersect ? f.fed.intersect(g.fed)
                                                   : f.fed.subtract(g.fed);
      if (!fed_reduced(r))
        fail("result holds an empty or covered zone");
      auto want = [&](auto& p) {
        bool x = f.holds(p, s), y = g.holds(p, s);
        return op == ZoneOp::fed_union ? x || y : op == ZoneOp::fed_intersect ? x && y : x && !y;
      };
      Zone bias_a = f.parts.empty() ? Zone::universe(dim) : f.parts[0].zone;
      Zone bias_b = g.parts.empty() ? Zone::universe(dim) : g.parts.back().zone;
      check_points([&](auto& p) { return r.contains(p, s); }, want, bias_a, bias_b);
      break;
    }
    case ZoneOp::fed_includes: {
      RawFed f = random_fed(rng, dim), g;
      if (coin(rng, 2) && !f.parts.empty()) {
        // A subset of f: some of its zones cut by a random zone.
        g.fed = Federation(dim);
        for (const auto& part : f.parts) {
          if (coin(rng, 2))
            continue;
          RawZone cut = random_zone(rng, dim);
          RawZone piece = part;
          piece.diffs.insert(piece.diffs.end(), cut.diffs.begin(), cut.diffs.end());
          piece.zone = part.zone.intersect(cut.zone);
          g.parts.push_back(piece);
          g.fed.add(piece.zone);
        }
      } else {
        g = random_fed(rng, dim);
      }
      bool inc = f.fed.includes(g.fed);
      if (inc != g.fed.subtract(f.fed).is_empty())
        fail("includes() disagrees with emptiness of the difference");
      if (inc)
        check_points([&](auto&) { return false; },
                     [&](auto& p) { return g.holds(p, s) && !f.holds(p, s); },
                     g.parts.empty() ? Zone::universe(dim) : g.parts[0].zone, Zone::universe(dim));
      break;
    }
    case ZoneOp::fed_up:
    case ZoneOp::fed_down: {
      RawFed f = random_fed(rng, dim);
      bool is_up = op == ZoneOp::fed_up;
      Federation r = is_up ? f.fed.up() : f.fed.down();
      auto in_f = [&](const std::vector<std::int64_t>& q) { return f.holds(q, s); };
      Zone bias = r.is_empty() ? Zone::universe(dim) : r.zones()[0];
      check_points([&](auto& p) { return r.contains(p, s); },
                   [&](auto& p) { return is_up ? delayed_from(p, in_f, 0) : delays_into(p, in_f); },
                   bias, f.parts.empty() ? Zone::universe(dim) : f.parts[0].zone);
      break;
    }
    case ZoneOp::extrapolate: {
      RawZone a = random_zone(rng, dim);
      std::vector<std::int32_t> ceilings(dim, 0);
      for (std::size_t k = 1; k < dim; ++k)
        ceilings[k] = uniform(rng, 0, 10);
      Zone e = a.zone.extrapolate(ceilings);
      if (!a.zone.included_in(e))
        fail("extrapolation lost valuations");
      if (!(e.extrapolate(ceilings) == e))
        fail("extrapolation is not idempotent");
      // A zone whose constants all lie within the ceilings is left unchanged.
      bool bounded = true;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          if (!a.zone.at(i, j).is_infinity() && std::abs(a.zone.at(i, j).value()) > 10)
            bounded = false;
      std::vector<std::int32_t> high(dim, 10);
      if (bounded && !(a.zone.extrapolate(high) == a.zone))
        fail("extrapolation changed a zone within its ceilings");
      check_points([&](auto& p) { return !a.zone.contains(p, s) || e.contains(p, s); },
                   [&](auto&) { return true; }, a.zone, e);
      break;
    }
    }
  }
  return rep;
}

StateSet random_state_set(Rng& rng, const Checker& checker) {
  const auto& universe = checker.universe();
  auto ceilings = ceiling_vector(checker.model());
  std::size_t dim = checker.model().dim();
  StateSet out;
  out.reserve(universe.size());
  for (const auto& u : universe) {
    int kind = uniform(rng, 0, 7);
    if (kind == 0) {
      out.push_back(Federation(dim));
      continue;
    }
    if (kind == 1 || dim == 1) {
      out.push_back(u);
      continue;
    }
    Federation f(dim);
    for (const auto& z : u) {
      if (coin(rng, 3))
        continue;
      Zone cut = z;
      int atoms = uniform(rng, 1, 2);
      for (int a = 0; a < atoms; ++a) {
        std::size_t clock = uniform(rng, 1, static_cast<int>(dim) - 1);
        int top = std::max(ceilings[clock], 3) + 1;
        static constexpr CompareOp ops[] = {CompareOp::lt, CompareOp::le, CompareOp::ge,
                                            CompareOp::gt};
        cut = cut.constrained(ClockAtom{clock, ops[uniform(rng, 0, 3)], uniform(rng, 0, top)});
      }
      if (!cut.is_empty())
        f.add(cut);
    }
    out.push_back(std::move(f));
  }
  return out;
}

IdentityReport run_reduction_identities(const PesFile& file, std::size_t sets, std::uint64_t seed) {
  Model model(file);
  MesProgram program = validate_mes(model);
  Checker checker(model, program);
  Rng rng(seed);
  IdentityReport rep;
  StateSet none = checker.empty_set();
  const StateSet& all = checker.universe();
  for (std::size_t k = 0; k < sets; ++k) {
    StateSet t = random_state_set(rng, checker);
    ++rep.sets;
    if (!Checker::set_equal(checker.forall_time_rel(none, t), checker.forall_time(t)))
      ++rep.forall_violations;
    if (!Checker::set_equal(checker.exists_time_rel(all, t), checker.exists_time(t)))
      ++rep.exists_violations;
  }
  return rep;
}

Params shrunk_params(Family f) {
  switch (f) {
  case Family::csma: return {{"CA", 1}, {"CB", 2}, {"CLAMBDA", 3}};
  case Family::fischer: return {{"CA", 2}, {"CB", 3}};
  case Family::grc: return {{"CTP", 2}, {"CTDU", 3}};
  case Family::leader: return {};
  }
  return {};
}

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> out;
  auto add = [&](Family f, int n) {
    for (Category c : categories(f)) {
      if (n < min_processes(f, c))
        continue;
      out.push_back({std::string(to_string(f)) + " " + std::to_string(n) + " " + to_string(c),
                     generate({f, n, c, shrunk_params(f)})});
    }
  };
  add(Family::leader, 2);
  add(Family::leader, 3);
  add(Family::fischer, 2);
  return out;
}

bool reachable_locations_match(const PesFile& file, std::string& detail) {
  Model model(file);
  MesProgram program = validate_mes(model);
  Checker checker(model, program);
  RegionOracle oracle(file);
  std::set<Location> symbolic, regions;
  for (std::size_t k = 0; k < checker.location_count(); ++k)
    symbolic.insert(checker.location(k));
  for (const auto& l : oracle.locations())
    regions.insert(l);
  for (const auto& l : symbolic)
    if (!regions.count(l)) {
      detail = "location " + model.location_str(l) + " only in the zone universe";
      return false;
    }
  for (const auto& l : regions)
    if (!symbolic.count(l)) {
      detail = "location " + model.location_str(l) + " only in the region graph";
      return false;
    }
  return true;
}

namespace {

std::string strip_comments(const std::string& text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 2, "//") == 0) {
      while (i < text.size() && text[i] != '\n')
        ++i;
      if (i < text.size())
        out += '\n';
      continue;
    }
    out += text[i];
  }
  return out;
}

// [begin, end) of the equation section in comment-free text.
std::pair<std::size_t, std::size_t> section_range(const std::string& s, bool with_predicate) {
  std::size_t begin = with_predicate ? s.find("PREDICATE:") : std::string::npos;
  if (begin == std::string::npos)
    begin = s.find("START:");
  if (begin == std::string::npos)
    throw std::runtime_error("no START section");
  std::size_t eq = s.find("EQUATIONS:", begin);
  std::size_t open = eq == std::string::npos ? eq : s.find('{', eq);
  if (open == std::string::npos)
    throw std::runtime_error("no EQUATIONS section");
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    depth += s[i] == '{' ? 1 : s[i] == '}' ? -1 : 0;
    if (depth == 0)
      return {begin, i + 1};
  }
  throw std::runtime_error("unbalanced EQUATIONS section");
}

} // namespace

std::string normalize(const std::string& text) {
  std::string out;
  for (char c : strip_comments(text))
    if (!std::isspace(static_cast<unsigned char>(c)))
      out += c;
  return out;
}

std::string equation_section(const std::string& text) {
  std::string s = strip_comments(text);
  auto [b, e] = section_range(s, true);
  return s.substr(b, e - b);
}

std::string splice_equations(const std::string& model, const std::string& section) {
  std::string s = strip_comments(model);
  bool with_predicate = section.find("PREDICATE:") != std::string::npos;
  auto [b, e] = section_range(s, with_predicate);
  return s.substr(0, b) + section + s.substr(e);
}

std::vector<ListingCase> listing_cases() {
  std::vector<ListingCase> out;
  for (Family f : {Family::csma, Family::fischer, Family::grc, Family::leader})
    for (Category c : categories(f)) {
      int n = std::max(2, min_processes(f, c));
      if (f == Family::csma && c == Category::m3)
        n = 2;
      if (f == Family::leader && c == Category::m2)
        n = 3;
      out.push_back({f, c, n, std::string(to_string(f)) + "_" + to_string(c) + ".spec"});
    }
  return out;
}

} // namespace pes::test
