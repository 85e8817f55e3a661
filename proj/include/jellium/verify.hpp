#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace jellium {

struct CheckResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string measured;   // deterministic summary of what was observed
  std::string threshold;  // the bound it was held against
  double seconds = 0.0;   // wall time, reporting only (never written to CSV)
};

// The full verification battery. scratch_dir hosts the rerun-determinism
// sub-runs; seed feeds every stochastic check; threads > 1 only parallelizes
// reductions that are bitwise independent of the thread count.
std::vector<CheckResult> run_all_checks(std::uint64_t seed, int threads,
                                        bool verbose,
                                        const std::string& scratch_dir);

}  // namespace jellium
