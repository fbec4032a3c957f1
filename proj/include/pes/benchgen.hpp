#pragma once

// Parameterized generators for the CSMA/CD, FISCHER, GRC and LEADER benchmark families.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pes {

enum class Family { csma, fischer, grc, leader };
enum class Category { as, bs, al, bl, m1, m2, m3, m4, m4ap };

const char* to_string(Family f);
const char* to_string(Category c);
std::optional<Family> parse_family(std::string_view s);
std::optional<Category> parse_category(std::string_view s);

using Params = std::map<std::string, std::int32_t>;

struct BenchSpec {
  Family family = Family::csma;
  int n = 2;
  Category category = Category::as;
  Params params;
};

// Categories defined for a family, in table order.
std::vector<Category> categories(Family f);

// Smallest process count at which the category is meaningful.
int min_processes(Family f, Category c);

// Throws Error(config) for an invalid combination or an unknown parameter name.
void validate(const BenchSpec& spec);

// Complete PES source for the benchmark.
std::string generate(const BenchSpec& spec);

std::string gen_csma(int n, Category c, const Params& params = {});
std::string gen_fischer(int n, Category c, const Params& params = {});
std::string gen_grc(int t, Category c, const Params& params = {});
std::string gen_leader(int n, Category c, const Params& params = {});

// PREDICATE, START and EQUATIONS sections for the category.
std::string spec_template(Family f, Category c, int n);

// Number of transitions emitted by the family's model at n processes.
std::size_t transition_count(Family f, int n);

// Default #define values of the family (plus CWAIT for grc m2).
Params default_params(Family f, Category c);

// Expected verdict, when known, for the benchmark at n processes.
std::optional<bool> expected_verdict(Family f, int n, Category c);

struct SuiteCell {
  Family family;
  int n;
  Category category;
  bool expected_valid;
};

// The verdict table cells the suite must reproduce.
const std::vector<SuiteCell>& acceptance_cells();

} // namespace pes
