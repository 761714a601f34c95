#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lanestab/integrate.hpp"
#include "lanestab/report.hpp"

namespace lanestab {

struct SweepJob {
  ModelParams params;
  IntegratorOptions opts;
};

struct SweepResult {
  ModelParams params;
  std::optional<Trajectory> trajectory;
  std::optional<RunSummary> summary;
  std::string error;  ///< non-empty when the run failed
};

/// Worker count from LANESTAB_THREADS, else hardware concurrency (>= 1).
std::size_t sweep_threads();

/// Runs every job, fanning out over up to `threads` workers. Results come
/// back in job order regardless of scheduling.
std::vector<SweepResult> run_sweep(const std::vector<SweepJob>& jobs,
                                   std::size_t threads);

}  // namespace lanestab
