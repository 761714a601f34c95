#include "lanestab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lanestab {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Difference between the 5th and embedded 4th order solutions.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output (Hairer, DOPRI5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

using Vec = std::array<double, 2>;

constexpr int kMaxBisections = 40;
constexpr double kLocateTol = 1e-10;

Vec f(double zeta, const Vec& y, const ModelParams& p) {
  return rhs(zeta, y[0], y[1], p);
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (int i = 0; i < 2; ++i) {
    double acc = 0.0;
    for (const auto& [coef, k] : terms) acc += coef * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

// Bisect g on [a, b] given sign(g(a)) != sign(g(b)); returns the midpoint
// of the final bracket.
template <class G>
double bisect(G&& g, double a, double b) {
  const bool neg_a = g(a) < 0.0;
  for (int i = 0; i < kMaxBisections && b - a > kLocateTol; ++i) {
    const double mid = 0.5 * (a + b);
    if ((g(mid) < 0.0) == neg_a) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::ZeroCrossing:
      return "ZeroCrossing";
    case EventKind::Diverged:
      return "Diverged";
    case EventKind::Escaped:
      return "Escaped";
  }
  return "?";
}

const char* to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Completed:
      return "Completed";
    case RunStatus::Diverged:
      return "Diverged";
    case RunStatus::Escaped:
      return "Escaped";
  }
  return "?";
}

void validate(const IntegratorOptions& opts, const ModelParams& params) {
  if (!(opts.rel_tol > 0.0 && opts.rel_tol <= 1e-3)) {
    throw ValidationError("rel_tol", "must lie in (0, 1e-3]");
  }
  if (!(opts.abs_tol > 0.0 && opts.abs_tol <= opts.rel_tol)) {
    throw ValidationError("abs_tol", "must lie in (0, rel_tol]");
  }
  if (!std::isfinite(opts.zeta_end) || !(opts.zeta_end > params.zeta_start())) {
    throw ValidationError("zeta_end", "must be finite and > zeta_start");
  }
  if (opts.max_steps == 0) {
    throw ValidationError("max_steps", "must be positive");
  }
  if (opts.escape && !(opts.escape->radius > 0.0)) {
    throw ValidationError("escape", "radius must be > 0");
  }
}

State DenseStep::eval(double zeta) const noexcept {
  const double s = (zeta - zeta0) / h;
  const double s1 = 1.0 - s;
  Vec y;
  for (int i = 0; i < 2; ++i) {
    const auto& r = coeff[i];
    y[i] = r[0] + s * (r[1] + s1 * (r[2] + s * (r[3] + s1 * r[4])));
  }
  return {zeta, y[0], y[1]};
}

Trajectory::Trajectory(ModelParams params, std::vector<State> samples,
                       std::vector<DenseStep> dense, std::vector<Event> events,
                       RunStatus status, std::size_t steps_taken)
    : params_(params),
      samples_(std::move(samples)),
      dense_(std::move(dense)),
      events_(std::move(events)),
      status_(status),
      steps_taken_(steps_taken) {}

State Trajectory::at(double zeta) const {
  if (!(zeta >= zeta_begin() && zeta <= zeta_end())) {
    throw ValidationError("zeta", "outside the integrated range");
  }
  if (dense_.empty()) return samples_.front();
  // Step i spans samples_[i] .. samples_[i + 1].
  auto it = std::upper_bound(
      samples_.begin(), samples_.end(), zeta,
      [](double v, const State& s) { return v < s.zeta; });
  std::size_t idx = static_cast<std::size_t>(it - samples_.begin());
  idx = std::clamp<std::size_t>(idx, 1, dense_.size()) - 1;
  if (zeta == samples_[idx].zeta) return samples_[idx];
  if (zeta == samples_[idx + 1].zeta) return samples_[idx + 1];
  return dense_[idx].eval(zeta);
}

std::optional<double> Trajectory::terminated_at() const noexcept {
  for (const auto& e : events_) {
    if (e.kind == EventKind::Diverged || e.kind == EventKind::Escaped) {
      return e.zeta;
    }
  }
  return std::nullopt;
}

State series_start(const ModelParams& params, double zeta_small) {
  if (!(zeta_small > 0.0 && zeta_small <= 0.01)) {
    throw ValidationError("zeta_small", "series start needs 0 < zeta <= 0.01");
  }
  const int n = params.n();
  const double z0 = params.z0();
  const double c = (params.omega() * ipow(z0, n) - 1.0) / (6.0 * (n + 1));
  return {zeta_small, z0 + c * zeta_small * zeta_small, 2.0 * c * zeta_small};
}

State initial_state(const ModelParams& params, StartMode mode) {
  if (mode == StartMode::Series) {
    return series_start(params, params.zeta_start());
  }
  return {params.zeta_start(), params.z0(), 0.0};
}

Trajectory integrate(const ModelParams& params, const IntegratorOptions& opts) {
  validate(opts, params);
  return integrate_from(params, initial_state(params, opts.start_mode), opts);
}

Trajectory integrate_from(const ModelParams& params, const State& start,
                          const IntegratorOptions& opts) {
  if (!(start.zeta > 0.0)) {
    throw ValidationError("zeta_start", "must be > 0");
  }
  if (!(opts.zeta_end > start.zeta)) {
    throw ValidationError("zeta_end", "must be > the start zeta");
  }
  validate(opts, make_params(params.n(), params.omega(), params.theta0(),
                             start.zeta));

  const double end = opts.zeta_end;
  std::vector<State> samples{start};
  std::vector<DenseStep> dense;
  std::vector<Event> events;
  RunStatus status = RunStatus::Completed;

  double zeta = start.zeta;
  Vec y{start.z, start.dz};
  Vec k1 = f(zeta, y, params);
  double h = std::min(1e-4, (end - zeta) / 100.0);
  bool last_rejected = false;
  std::size_t steps = 0;

  while (zeta < end) {
    if (++steps > opts.max_steps) {
      throw IntegrationError("integrate: max_steps exceeded at zeta = " +
                                 std::to_string(zeta),
                             zeta);
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * zeta) {
      throw IntegrationError("integrate: step size underflow at zeta = " +
                                 std::to_string(zeta),
                             zeta);
    }
    bool final_step = false;
    if (zeta + h >= end) {
      h = end - zeta;
      final_step = true;
    }

    const Vec k2 = f(zeta + c2 * h, axpy(y, h, {{a21, &k1}}), params);
    const Vec k3 =
        f(zeta + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}), params);
    const Vec k4 = f(zeta + c4 * h,
                     axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), params);
    const Vec k5 = f(
        zeta + c5 * h,
        axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), params);
    const Vec y6 = axpy(
        y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const double zeta_new = final_step ? end : zeta + h;
    const Vec k6 = f(zeta_new, y6, params);
    const Vec y_new = axpy(
        y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const Vec k7 = f(zeta_new, y_new, params);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double sk = opts.abs_tol +
                        opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / sk) * (e / sk);
    }
    err = std::sqrt(err / 2.0);
    if (!std::isfinite(err)) err = 1e10;

    const double fac = std::pow(err, 0.2) / 0.9;
    if (err > 1.0) {
      h /= std::min(5.0, fac);
      last_rejected = true;
      continue;
    }

    DenseStep step{zeta, h, {}};
    for (int i = 0; i < 2; ++i) {
      auto& r = step.coeff[i];
      r[0] = y[i];
      r[1] = y_new[i] - y[i];
      r[2] = h * k1[i] - r[1];
      r[3] = r[1] - h * k7[i] - r[2];
      r[4] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                  d6 * k6[i] + d7 * k7[i]);
    }

    const double z_old = y[0];
    const double z_new = y_new[0];
    State node{zeta_new, y_new[0], y_new[1]};

    if ((z_old < 0.0) != (z_new < 0.0) && z_old != 0.0) {
      const double at = bisect(
          [&](double s) { return step.eval(s).z; }, zeta, zeta_new);
      events.push_back({at, EventKind::ZeroCrossing});
    }

    // Escape before divergence: an escape guard is the caller's tighter test.
    std::optional<Event> stop;
    if (opts.escape) {
      const auto [center, radius] = *opts.escape;
      const auto excess = [&](double s) {
        return std::abs(step.eval(s).z - center) - radius;
      };
      if (std::abs(z_new - center) > radius) {
        stop = Event{bisect(excess, zeta, zeta_new), EventKind::Escaped};
      }
    }
    if (!stop && std::abs(z_new) > kDivergenceLimit) {
      const auto excess = [&](double s) {
        return std::abs(step.eval(s).z) - kDivergenceLimit;
      };
      stop = Event{bisect(excess, zeta, zeta_new), EventKind::Diverged};
    }
    if (stop) {
      // End the trajectory at the located crossing, inside this step.
      const double at = std::max(stop->zeta, std::nextafter(zeta, end));
      node = step.eval(at);
      stop->zeta = at;
      step.h = h;
      samples.push_back(node);
      dense.push_back(step);
      events.push_back(*stop);
      status = stop->kind == EventKind::Escaped ? RunStatus::Escaped
                                                : RunStatus::Diverged;
      break;
    }

    samples.push_back(node);
    dense.push_back(step);
    zeta = zeta_new;
    y = y_new;
    k1 = k7;

    double fac_new = std::max(0.1, std::min(5.0, fac));
    if (last_rejected) fac_new = std::max(1.0, fac_new);
    h /= fac_new;
    last_rejected = false;
  }

  return Trajectory(params, std::move(samples), std::move(dense),
                    std::move(events), status, steps);
}

std::optional<double> first_zero(const Trajectory& traj) {
  const auto samples = traj.samples();
  const auto dense = traj.dense();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].z == 0.0) return samples[i].zeta;
    if (i + 1 < samples.size() &&
        (samples[i].z < 0.0) != (samples[i + 1].z < 0.0)) {
      const DenseStep& step = dense[i];
      return bisect([&](double s) { return step.eval(s).z; }, samples[i].zeta,
                    samples[i + 1].zeta);
    }
  }
  return std::nullopt;
}

}  // namespace lanestab
