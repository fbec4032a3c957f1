#include <doctest.h>

#include "pes/benchgen.hpp"
#include "pes/checker.hpp"
#include "pes/error.hpp"
#include "pes/parser.hpp"
#include "pes/region_oracle.hpp"
#include "support.hpp"

using namespace pes;

TEST_CASE("region oracle agrees with the symbolic checker") {
  for (const auto& oc : test::oracle_cases()) {
    PesFile f = parse_pes(oc.source);
    INFO(oc.label);
    CHECK(region_oracle_check(f).satisfied == check(f).satisfied);
  }
}

TEST_CASE("region oracle agrees on shrunk CSMA") {
  for (Category c : categories(Family::csma)) {
    if (min_processes(Family::csma, c) > 2)
      continue;
    PesFile f = parse_pes(generate({Family::csma, 2, c, test::shrunk_params(Family::csma)}));
    INFO(std::string(to_string(c)));
    CHECK(region_oracle_check(f).satisfied == check(f).satisfied);
  }
}

TEST_CASE("extrapolation preserves reachable locations") {
  for (Family fam : {Family::csma, Family::fischer, Family::leader}) {
    PesFile f = parse_pes(generate({fam, 2, Category::as, test::shrunk_params(fam)}));
    std::string detail;
    INFO(std::string(to_string(fam)));
    CHECK_MESSAGE(test::reachable_locations_match(f, detail), detail);
  }
}

TEST_CASE("toy encodings under the oracle") {
  for (const char* name : {"toy_transitions.pes", "toy_substitution.pes", "toy_two_variable.pes"}) {
    INFO(std::string(name));
    CHECK(region_oracle_check(parse_pes(test::read_file(test::golden_path(name)))).satisfied);
  }
  CHECK_FALSE(region_oracle_check(parse_pes(test::read_file(test::golden_path("leader_4_bs.pes"))))
                  .satisfied);
}

TEST_CASE("oracle limits") {
  PesFile big = parse_pes(generate({Family::csma, 2, Category::as, {}}));
  try {
    region_oracle_check(big);
    FAIL("expected oracle limit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::oracle_limit);
  }
  OracleLimits few;
  few.max_states = 10;
  PesFile small = parse_pes(generate({Family::fischer, 2, Category::as, test::shrunk_params(Family::fischer)}));
  try {
    region_oracle_check(small, few);
    FAIL("expected oracle limit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::oracle_limit);
  }
}

TEST_CASE("oracle state count and locations") {
  PesFile f = parse_pes(generate({Family::leader, 2, Category::as, {}}));
  RegionOracle o(f);
  CHECK(o.state_count() > 0);
  CHECK_FALSE(o.locations().empty());
  CHECK(o.locations().front() == Location(f.controls.size(), 0));
}
