#include "lanestab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace lanestab {

std::size_t sweep_threads() {
  if (const char* env = std::getenv("LANESTAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::vector<SweepResult> run_sweep(const std::vector<SweepJob>& jobs,
                                   std::size_t threads) {
  std::vector<SweepResult> results;
  results.reserve(jobs.size());
  for (const auto& job : jobs) {
    results.push_back({job.params, std::nullopt, std::nullopt, {}});
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      SweepResult& out = results[i];
      try {
        Trajectory traj = integrate(jobs[i].params, jobs[i].opts);
        out.summary = summarize(traj);
        out.trajectory.emplace(std::move(traj));
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };

  const std::size_t count = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, jobs.size()));
  std::vector<std::jthread> pool;
  pool.reserve(count - 1);
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return results;
}

}  // namespace lanestab
