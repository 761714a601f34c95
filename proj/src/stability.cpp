#include "lanestab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lanestab/errors.hpp"

namespace lanestab {
namespace {

void require_even(const ModelParams& params, const char* what) {
  if (!params.even()) {
    throw ValidationError("n", std::string(what) +
                                   " is built for the left equilibrium, "
                                   "which exists only for even n");
  }
}

void require_positive_zeta(double zeta) {
  if (!(zeta > 0.0)) throw ValidationError("zeta", "must be > 0");
}

// Omega^(1/n) as the reciprocal of the polished equilibrium magnitude.
double omega_root(const ModelParams& params) {
  return 1.0 / equilibrium_magnitude(params);
}

}  // namespace

std::pair<double, double> SymMat2::eigenvalues() const noexcept {
  const double half_tr = 0.5 * trace();
  const double half_diff = 0.5 * (a11 - a22);
  const double radius = std::hypot(half_diff, a12);
  return {half_tr - radius, half_tr + radius};
}

Mat2 jacobian(double zeta, double x1, const ModelParams& params,
              Branch branch) {
  require_positive_zeta(zeta);
  const int n = params.n();
  const double w = equilibrium_magnitude(params);
  const double z = x1 + (branch == Branch::Left ? -w : w);
  const double slope = params.omega() * ipow(z, n - 1) / (1.0 + 1.0 / n);
  return {0.0, 1.0, slope, -2.0 / zeta};
}

SymMat2 lmi_weight(double zeta, const ModelParams& params) {
  require_positive_zeta(zeta);
  const double c = (1.0 + 1.0 / params.n()) / omega_root(params);
  return {1.0 / zeta, 0.0, c / zeta};
}

SymMat2 lmi_weight_derivative(double zeta, const ModelParams& params) {
  require_positive_zeta(zeta);
  const double c = (1.0 + 1.0 / params.n()) / omega_root(params);
  const double z2 = zeta * zeta;
  return {-1.0 / z2, 0.0, -c / z2};
}

double lmi_rate(double zeta) {
  require_positive_zeta(zeta);
  return -1.0 / zeta;
}

SymMat2 lmi_residual(double zeta, const ModelParams& params) {
  require_even(params, "the LMI certificate");
  require_positive_zeta(zeta);
  const Mat2 a = jacobian(zeta, 0.0, params, Branch::Left);
  const Mat2 p = lmi_weight(zeta, params).full();
  const Mat2 dp = lmi_weight_derivative(zeta, params).full();
  const Mat2 m =
      a.transposed() * p + p * a + dp - lmi_rate(zeta) * p;
  return {m.a11, 0.5 * (m.a12 + m.a21), m.a22};
}

double lyapunov_V(double x1, double x2, const ModelParams& params) {
  require_even(params, "the Lyapunov function");
  const int n = params.n();
  const double w = equilibrium_magnitude(params);
  const double scale = 2.0 * w / ((n + 1.0) * (n + 1.0));
  if (n > 60) {
    // Binomial coefficients lose exactness; use the defining formula.
    const double omega = params.omega();
    return -2.0 * omega / ((n + 1.0) * (n + 1.0)) *
               (ipow(x1 - w, n + 1) + ipow(w, n + 1)) +
           2.0 * x1 / (n + 1) + x2 * x2;
  }
  const double u = -x1 / w;
  // Horner over C(n+1, k) u^(k-2), k = n+1 down to 2.
  const int m = n + 1;
  double binom = 1.0;  // C(m, m)
  double acc = 0.0;
  for (int k = m; k >= 2; --k) {
    acc = acc * u + binom;
    binom = binom * k / (m - k + 1);  // C(m, k-1)
  }
  return scale * u * u * acc + x2 * x2;
}

double lyapunov_Vdot(double x2, double zeta) {
  require_positive_zeta(zeta);
  return 0.0 - 4.0 * x2 * x2 / zeta;  // +0 rather than -0 at rest
}

double basin_alpha(const ModelParams& params) {
  require_even(params, "the basin estimate");
  const int n = params.n();
  return 4.0 * n * equilibrium_magnitude(params) / ((n + 1.0) * (n + 1.0));
}

bool basin_contains(double x1, double x2, double delta,
                    const ModelParams& params) {
  const double alpha = basin_alpha(params);
  if (!(delta > 0.0 && delta < alpha)) {
    throw ValidationError("delta", "must lie in (0, alpha_max)");
  }
  const double r = 2.0 * equilibrium_magnitude(params);
  if (std::hypot(x1, x2) > r) return false;
  return lyapunov_V(x1, x2, params) <= alpha - delta;
}

double instability_V(double x1, double x2, double zeta,
                     const ModelParams& params) {
  require_positive_zeta(zeta);
  const int n = params.n();
  const double w = equilibrium_magnitude(params);
  const double f = params.omega() * ipow(x1 + w, n) - 1.0;
  return f * x2 + (n + 1) * x2 * x2 / zeta;
}

double instability_Vdot(double x1, double x2, double zeta,
                        const ModelParams& params) {
  require_positive_zeta(zeta);
  const int n = params.n();
  const double omega = params.omega();
  const double w = equilibrium_magnitude(params);
  const double f = omega * ipow(x1 + w, n) - 1.0;
  return f * f / (n + 1) +
         x2 * x2 *
             (n * omega * ipow(x1 + w, n - 1) - 5.0 * (n + 1) / (zeta * zeta));
}

double instability_zeta0(const ModelParams& params) {
  const double omega = params.omega();
  if (!(omega > 0.0)) {
    throw ValidationError("omega", "must be > 0");
  }
  const int n = params.n();
  const double inv_n = 1.0 / n;
  return std::sqrt(1.0 + 5.0 * (1.0 + inv_n) * std::ldexp(1.0, n - 1) *
                             std::pow(omega, 1.0 - inv_n) / omega);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) {
    throw ValidationError("grid", "need 0 < lo < hi and count >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  }
  grid.back() = hi;
  return grid;
}

LmiCheck check_lmi(const ModelParams& params) {
  LmiCheck check{true, -std::numeric_limits<double>::infinity(), 0.0};
  for (double zeta : log_grid(0.1, 100.0, 50)) {
    const SymMat2 m = lmi_residual(zeta, params);
    check.worst_eig = std::max(check.worst_eig, m.eigenvalues().second);
    check.max_offdiag = std::max(check.max_offdiag, std::abs(m.a12));
  }
  check.verified = check.worst_eig <= kLmiEigenSlack &&
                   check.max_offdiag <= kLmiOffdiagSlack;
  return check;
}

StabilityReport classify(const ModelParams& params) {
  StabilityReport report{params,       equilibria(params),
                         params.stable_regime(), std::nullopt,
                         std::nullopt, std::nullopt,
                         {}};
  report.instability_zeta0 = instability_zeta0(params);
  if (params.even()) {
    report.alpha_max = basin_alpha(params);
    report.lmi = check_lmi(params);
    report.summary =
        "even n: left equilibrium asymptotically stable, right equilibrium "
        "unstable";
  } else {
    report.summary = "odd n: sole equilibrium unstable";
  }
  if (!report.stable_regime) {
    report.summary +=
        "; omega outside (0, 1): the theta0 = 1 start lies outside the basin "
        "estimate";
  }
  return report;
}

EscapeProbe probe_escape(const ModelParams& params, double z_eq,
                         double perturbation, double radius, double zeta_max,
                         double rel_tol) {
  IntegratorOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = std::min(1e-12, rel_tol);
  opts.zeta_end = zeta_max;
  opts.escape = EscapeGuard{z_eq, radius};
  const State start{params.zeta_start(), z_eq + perturbation, 0.0};
  const Trajectory traj = integrate_from(params, start, opts);
  const bool escaped = traj.status() != RunStatus::Completed;
  return {escaped, traj.terminated_at(), traj.status()};
}

}  // namespace lanestab
