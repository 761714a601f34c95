#pragma once

// Closed-form density profiles for the special cases of the generalized
// Lane-Emden equation. These serve as oracles for the numerical integrator.

namespace lanestab {

/// Cardinal hyperbolic sine sinh(x)/x with shc(0) = 1.
double shc(double x) noexcept;

/// Derivative of shc.
double shc_prime(double x) noexcept;

/// gamma = 2 profile parameters; requires 0 < omega * theta0 < 1 so that the
/// halo has a finite boundary.
class HaloProfile {
 public:
  HaloProfile(double theta0, double omega);

  double theta0() const noexcept { return theta0_; }
  double omega() const noexcept { return omega_; }

 private:
  double theta0_;
  double omega_;
};

/// theta(zeta) = (1/Omega) [1 + (theta0 Omega - 1) shc(sqrt(Omega/2) zeta)].
double gamma2_profile(double zeta, const HaloProfile& p) noexcept;

/// Radius zeta_M > 0 where gamma2_profile vanishes, i.e.
/// shc(sqrt(Omega/2) zeta_M) = 1/(1 - theta0 Omega).
double halo_boundary(const HaloProfile& p);

/// Omega -> 0 profile [theta0^(gamma-1) - (gamma-1) zeta^2/(6 gamma)]^(1/(gamma-1)).
/// Throws ValidationError past the zero of the bracket.
double powerlaw_profile(double zeta, double gamma, double theta0);

/// Zero of the power-law bracket, sqrt(6 gamma theta0^(gamma-1)/(gamma-1)),
/// for gamma > 1.
double powerlaw_boundary(double gamma, double theta0);

/// Isothermal (gamma = 1) profile theta0 exp(-zeta^2/6).
double gaussian_profile(double zeta, double theta0) noexcept;

/// Isobaric (gamma = 0) water-bag profile (1/Omega) H(xi - xi0), with the
/// step taken right-continuous (H(0) = 1). Implemented exactly as the
/// closed form reads, so the density sits *outside* xi0.
double waterbag_profile(double xi, double omega);

/// xi0 = 3 / cbrt(4 pi Omega).
double lane_emden_radius(double omega);

}  // namespace lanestab
