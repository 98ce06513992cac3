#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmesh/chain/ghz_chain.hpp"

namespace qmesh {

struct VerifyOptions {
  int max_hops = kMaxOracleHops;
  std::uint64_t seed = 1;
  PauliTable table = correction_table();
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle, closed-form and end-to-end consistency checks; throws ParameterError
/// when max_hops is outside 1..kMaxOracleHops.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace qmesh
