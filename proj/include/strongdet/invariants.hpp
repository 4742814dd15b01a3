#pragma once

// Reduced-scale invariant suites: the body of `strongdet check`.

#include <cstdint>
#include <string>
#include <vector>

namespace strongdet {

struct InvariantResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Suite names accepted by run_invariant_suites.
const std::vector<std::string>& invariant_suite_names();

/// Runs the named suites (all when empty). Deterministic in `seed`.
std::vector<InvariantResult> run_invariant_suites(const std::vector<std::string>& suites, std::uint64_t seed,
                                                  unsigned threads = 1);

}  // namespace strongdet
