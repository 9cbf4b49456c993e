#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace trdecomp {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick self-test of the library invariants on small instances: exact
/// constructions, contraction consistency, gauge invariance, descent, the
/// sampled local-minimum certificate, witness identities and one-loop
/// convergence. Runs in a few seconds.
[[nodiscard]] std::vector<CheckResult> run_invariant_suite(std::uint64_t seed = 0);

}  // namespace trdecomp
