#include "lanestab/closedform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lanestab/errors.hpp"

namespace lanestab {

double shc(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
  }
  return std::sinh(ax) / ax;
}

double shc_prime(double x) noexcept {
  const double ax = std::abs(x);
  double d;
  if (ax < 1e-3) {
    // x/3 + x^3/30 + x^5/840
    const double x2 = ax * ax;
    d = ax / 3.0 * (1.0 + x2 / 10.0 * (1.0 + x2 / 28.0));
  } else {
    d = (ax * std::cosh(ax) - std::sinh(ax)) / (ax * ax);
  }
  return x < 0 ? -d : d;
}

HaloProfile::HaloProfile(double theta0, double omega)
    : theta0_(theta0), omega_(omega) {
  if (!std::isfinite(theta0) || theta0 <= 0.0) {
    throw ValidationError("theta0", "must be finite and > 0");
  }
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw ValidationError("omega", "must be finite and > 0");
  }
  if (omega * theta0 >= 1.0) {
    throw ValidationError("omega",
                          "halo boundary requires omega * theta0 < 1");
  }
}

double gamma2_profile(double zeta, const HaloProfile& p) noexcept {
  const double k = std::sqrt(p.omega() / 2.0);
  return (1.0 + (p.theta0() * p.omega() - 1.0) * shc(k * zeta)) / p.omega();
}

double halo_boundary(const HaloProfile& p) {
  const double target = 1.0 / (1.0 - p.theta0() * p.omega());
  // shc is strictly increasing on (0, inf), so doubling brackets the root.
  double lo = 0.0;
  double hi = 1.0;
  while (shc(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 700.0) {
      throw NumericalError("halo_boundary: could not bracket shc(x) = " +
                           std::to_string(target));
    }
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (shc(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  x -= (shc(x) - target) / shc_prime(x);
  return x * std::sqrt(2.0 / p.omega());
}

double powerlaw_profile(double zeta, double gamma, double theta0) {
  if (!std::isfinite(gamma) || gamma == 1.0 || gamma == 0.0) {
    throw ValidationError("gamma", "power-law profile needs gamma != 0, 1");
  }
  if (!std::isfinite(theta0) || theta0 <= 0.0) {
    throw ValidationError("theta0", "must be finite and > 0");
  }
  const double e = gamma - 1.0;
  // bracket - 1, kept separate so gamma close to 1 does not lose digits.
  const double shifted =
      std::expm1(e * std::log(theta0)) - e * zeta * zeta / (6.0 * gamma);
  // Rounding slack so the boundary itself evaluates to 0.
  if (shifted < -1.0 - 1e-12) {
    throw ValidationError(
        "zeta", "beyond the power-law boundary zeta* = " +
                    std::to_string(std::sqrt(6.0 * gamma *
                                             std::pow(theta0, e) / e)));
  }
  if (shifted <= -1.0) return 0.0;
  return std::exp(std::log1p(shifted) / e);
}

double powerlaw_boundary(double gamma, double theta0) {
  if (!(gamma > 1.0)) {
    throw ValidationError("gamma", "boundary exists only for gamma > 1");
  }
  const double e = gamma - 1.0;
  return std::sqrt(6.0 * gamma * std::pow(theta0, e) / e);
}

double gaussian_profile(double zeta, double theta0) noexcept {
  return theta0 * std::exp(-zeta * zeta / 6.0);
}

double waterbag_profile(double xi, double omega) {
  const double xi0 = lane_emden_radius(omega);
  return xi >= xi0 ? 1.0 / omega : 0.0;
}

double lane_emden_radius(double omega) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw ValidationError("omega", "must be finite and > 0");
  }
  return 3.0 / std::cbrt(4.0 * std::numbers::pi * omega);
}

}  // namespace lanestab
