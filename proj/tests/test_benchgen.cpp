#include <doctest.h>

#include "pes/benchgen.hpp"
#include "pes/error.hpp"
#include "pes/mes.hpp"
#include "pes/model.hpp"
#include "pes/parser.hpp"

using namespace pes;

namespace {

const Family families[] = {Family::csma, Family::fischer, Family::grc, Family::leader};

ErrorKind gen_error(const BenchSpec& s) {
  try {
    generate(s);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a configuration error");
  return ErrorKind::lex;
}

} // namespace

TEST_CASE("family and category names") {
  for (Family f : families)
    CHECK(parse_family(to_string(f)) == f);
  for (Category c : categories(Family::grc))
    CHECK(parse_category(to_string(c)) == c);
  CHECK_FALSE(parse_family("token-ring").has_value());
  CHECK_FALSE(parse_category("m5").has_value());
  CHECK(categories(Family::grc).size() == 9);
  CHECK(categories(Family::csma).size() == 8);
}

TEST_CASE("transition counts") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(transition_count(Family::fischer, n) == 5u * n);
    CHECK(transition_count(Family::leader, n) == std::size_t(n * (n - 1) / 2 + 1));
    CHECK(transition_count(Family::grc, n) == std::size_t(4 * n * n + 3 * n + 4));
    std::size_t pow4 = 1;
    for (int k = 0; k < n; ++k)
      pow4 *= 4;
    CHECK(transition_count(Family::csma, n) == 7u * n + pow4);
    for (Family f : families) {
      if (f == Family::csma && n > 4)
        continue;
      PesFile file = parse_pes(generate({f, n, Category::as, {}}));
      INFO(std::string(to_string(f)), " n=", n);
      CHECK(file.transitions.size() == transition_count(f, n));
    }
  }
}

TEST_CASE("every benchmark parses and validates") {
  for (Family f : families)
    for (Category c : categories(f))
      for (int n = min_processes(f, c); n <= (f == Family::csma ? 3 : 4); ++n) {
        INFO(std::string(to_string(f)), " ", std::string(to_string(c)), " n=", n);
        PesFile file = parse_pes(generate({f, n, c, {}}));
        Model m(file);
        CHECK_NOTHROW(validate_mes(m));
        CHECK_NOTHROW(m.initial_state());
      }
}

TEST_CASE("invalid combinations are rejected") {
  CHECK(gen_error({Family::csma, 2, Category::bs, {}}) == ErrorKind::config);
  CHECK(gen_error({Family::leader, 2, Category::m2, {}}) == ErrorKind::config);
  CHECK(gen_error({Family::fischer, 2, Category::m4ap, {}}) == ErrorKind::config);
  CHECK(gen_error({Family::fischer, 1, Category::as, {}}) == ErrorKind::config);
  CHECK(gen_error({Family::fischer, 65, Category::as, {}}) == ErrorKind::config);
  CHECK(gen_error({Family::fischer, 2, Category::as, {{"NOPE", 1}}}) == ErrorKind::config);
  CHECK(gen_error({Family::fischer, 2, Category::as, {{"CA", -1}}}) == ErrorKind::config);
  CHECK(gen_error({Family::grc, 2, Category::as, {{"CWAIT", 3}}}) == ErrorKind::config);
  CHECK_NOTHROW(generate({Family::grc, 2, Category::m2, {{"CWAIT", 3}}}));
}

TEST_CASE("parameters override defines") {
  PesFile f = parse_pes(generate({Family::fischer, 2, Category::as, {{"CA", 2}, {"CB", 3}}}));
  std::map<std::string, std::int32_t> d(f.defines.begin(), f.defines.end());
  CHECK(d["CA"] == 2);
  CHECK(d["CB"] == 3);
  CHECK(default_params(Family::fischer, Category::as).at("CA") == 10);
  CHECK(default_params(Family::grc, Category::m2).count("CWAIT") == 1);
  CHECK(default_params(Family::grc, Category::m1).count("CWAIT") == 0);
}

TEST_CASE("expected verdict table") {
  CHECK(expected_verdict(Family::fischer, 4, Category::bs) == true);
  CHECK(expected_verdict(Family::fischer, 5, Category::bs) == false);
  CHECK(expected_verdict(Family::leader, 4, Category::m4) == true);
  CHECK(expected_verdict(Family::leader, 5, Category::m4) == false);
  CHECK(expected_verdict(Family::csma, 3, Category::bs) == false);
  CHECK_FALSE(expected_verdict(Family::csma, 2, Category::bs).has_value());
  CHECK_FALSE(expected_verdict(Family::csma, 2, Category::m4ap).has_value());
  std::size_t grc = 0;
  for (const auto& c : acceptance_cells()) {
    CHECK(expected_verdict(c.family, c.n, c.category) == c.expected_valid);
    grc += c.family == Family::grc;
  }
  CHECK(grc == 9);
}
