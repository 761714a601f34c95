#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lanestab/errors.hpp"
#include "lanestab/model.hpp"

namespace lanestab {

enum class StartMode {
  Offset,  ///< z(zeta0) = theta0^(1/n), dz(zeta0) = 0
  Series,  ///< quadratic expansion about zeta = 0, see series_start
};

/// Stop the run once |z - center| exceeds radius.
struct EscapeGuard {
  double center;
  double radius;
};

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double zeta_end = 60.0;
  std::size_t max_steps = 1'000'000;
  StartMode start_mode = StartMode::Offset;
  std::optional<EscapeGuard> escape;
};

/// |z| beyond which a run is reported as Diverged.
inline constexpr double kDivergenceLimit = 1e12;

/// Throws ValidationError for out-of-range tolerances or an empty interval.
void validate(const IntegratorOptions& opts, const ModelParams& params);

/// Step size underflow or step budget exhausted.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double last_zeta)
      : NumericalError(what), last_zeta_(last_zeta) {}
  double last_zeta() const noexcept { return last_zeta_; }

 private:
  double last_zeta_;
};

enum class EventKind { ZeroCrossing, Diverged, Escaped };
const char* to_string(EventKind kind) noexcept;

struct Event {
  double zeta;
  EventKind kind;
};

enum class RunStatus { Completed, Diverged, Escaped };
const char* to_string(RunStatus status) noexcept;

/// Continuous extension of one accepted Dormand-Prince step.
struct DenseStep {
  double zeta0;
  double h;
  // Per component (z, dz): the five Hairer interpolation coefficients.
  std::array<std::array<double, 5>, 2> coeff;

  State eval(double zeta) const noexcept;
};

class Trajectory {
 public:
  Trajectory(ModelParams params, std::vector<State> samples,
             std::vector<DenseStep> dense, std::vector<Event> events,
             RunStatus status, std::size_t steps_taken);

  const ModelParams& params() const noexcept { return params_; }
  std::span<const State> samples() const noexcept { return samples_; }
  std::span<const DenseStep> dense() const noexcept { return dense_; }
  std::span<const Event> events() const noexcept { return events_; }
  RunStatus status() const noexcept { return status_; }
  std::size_t steps_taken() const noexcept { return steps_taken_; }

  double zeta_begin() const noexcept { return samples_.front().zeta; }
  double zeta_end() const noexcept { return samples_.back().zeta; }

  /// Dense output anywhere in [zeta_begin, zeta_end].
  State at(double zeta) const;

  /// ζ of the Diverged/Escaped event, when the run stopped early.
  std::optional<double> terminated_at() const noexcept;

 private:
  ModelParams params_;
  std::vector<State> samples_;
  std::vector<DenseStep> dense_;
  std::vector<Event> events_;
  RunStatus status_;
  std::size_t steps_taken_;
};

/// Regular expansion about the singular point: with z0 = theta0^(1/n) and
/// c = (Omega z0^n - 1) / (6 (n + 1)), returns (zeta, z0 + c zeta^2, 2 c zeta).
/// Requires 0 < zeta_small <= 0.01.
State series_start(const ModelParams& params, double zeta_small);

/// Initial state at params.zeta_start() for the requested start mode.
State initial_state(const ModelParams& params, StartMode mode);

/// Adaptive Dormand-Prince 5(4) from params.zeta_start() to opts.zeta_end.
/// Zero crossings of z are recorded as events; |z| > kDivergenceLimit or a
/// tripped escape guard stop the run with the corresponding status.
Trajectory integrate(const ModelParams& params, const IntegratorOptions& opts);

/// Same, from an explicit initial state (its zeta replaces zeta_start).
Trajectory integrate_from(const ModelParams& params, const State& start,
                          const IntegratorOptions& opts);

/// Smallest zeta with z(zeta) = 0: sign change on the samples, then
/// bisection on the dense output to 1e-10.
std::optional<double> first_zero(const Trajectory& traj);

}  // namespace lanestab
