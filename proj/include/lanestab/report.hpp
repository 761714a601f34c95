#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lanestab/integrate.hpp"
#include "lanestab/stability.hpp"

namespace lanestab {

using Json = nlohmann::ordered_json;

/// {n, omega, theta0, zeta0}
Json params_json(const ModelParams& params);

/// Stability report with the stable field names
/// params, equilibria, alpha_max, lmi, instability_zeta0, stable_regime.
Json report_json(const StabilityReport& report);

/// Aggregate numbers describing a finished run.
struct RunSummary {
  RunStatus status;
  std::optional<double> zeta_star;
  std::optional<double> diverged_at;
  std::size_t zero_count;
  double max_abs_z;
  bool bounded;
};

/// |z| ceiling for the boundedness verdict of a completed run.
inline constexpr double kBoundedLimit = 1e6;

RunSummary summarize(const Trajectory& traj);

/// Solve summary: params, equilibria (Omega > 0), stable_regime, zeta_star,
/// diverged_at, plus run statistics.
Json summary_json(const Trajectory& traj, const RunSummary& summary);

}  // namespace lanestab
