#pragma once

// Brute-force reference semantics over the explicit clock-region graph. Shares only the AST
// with the symbolic checker.

#include <cstdint>
#include <memory>
#include <vector>

#include "pes/ast.hpp"
#include "pes/checker.hpp"

namespace pes {

struct OracleLimits {
  std::size_t max_clocks = 4;
  std::int32_t max_constant = 16;
  std::size_t max_states = 2'000'000;
  std::size_t max_locations = 10'000;
};

class RegionOracle {
public:
  explicit RegionOracle(const PesFile& file, OracleLimits limits = {});
  ~RegionOracle();
  RegionOracle(const RegionOracle&) = delete;
  RegionOracle& operator=(const RegionOracle&) = delete;

  std::size_t state_count() const;
  // Control valuations of every explored state, deduplicated, in discovery order.
  const std::vector<std::vector<std::int32_t>>& locations() const;

  Verdict check();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Verdict region_oracle_check(const PesFile& file, OracleLimits limits = {});

} // namespace pes
