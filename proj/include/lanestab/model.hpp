#pragma once

// Nondimensional generalized Lane-Emden problem with adiabatic index
// gamma = 1 + 1/n, written for z = theta^(1/n) as
//
//   (zeta^2 z')' = zeta^2 (Omega z^n - 1) / (n + 1)
//
// and as the first-order system y = (z, z') with
//
//   y' = ( z',  (Omega z^n - 1)/(n + 1) - 2 z'/zeta ).

#include <array>
#include <vector>

namespace lanestab {

/// x^k for integer k >= 0 by repeated squaring; exact sign for negative x.
constexpr double ipow(double x, int k) noexcept {
  double result = 1.0;
  while (k > 0) {
    if (k & 1) result *= x;
    x *= x;
    k >>= 1;
  }
  return result;
}

class ModelParams {
 public:
  int n() const noexcept { return n_; }
  double omega() const noexcept { return omega_; }
  double theta0() const noexcept { return theta0_; }
  double zeta_start() const noexcept { return zeta_start_; }

  double gamma() const noexcept { return 1.0 + 1.0 / n_; }
  bool stable_regime() const noexcept { return omega_ > 0.0 && omega_ < 1.0; }
  bool even() const noexcept { return n_ % 2 == 0; }
  /// Central value of the transformed density, theta0^(1/n).
  double z0() const;

 private:
  friend ModelParams make_params(double, double, double, double);
  ModelParams(int n, double omega, double theta0, double zeta_start)
      : n_(n), omega_(omega), theta0_(theta0), zeta_start_(zeta_start) {}

  int n_;
  double omega_;
  double theta0_;
  double zeta_start_;
};

/// Validates and builds the problem definition. `n` is taken as a real so
/// that non-integer input can be rejected rather than truncated.
/// Throws ValidationError naming the field.
ModelParams make_params(double n, double omega, double theta0,
                        double zeta_start);

struct State {
  double zeta;
  double z;
  double dz;
};

enum class EquilibriumKind { StableLeft, UnstableRight, UnstableOdd };

const char* to_string(EquilibriumKind kind) noexcept;

struct Equilibrium {
  double z_eq;
  EquilibriumKind kind;
};

/// Deviation from an equilibrium, x = (z - z_eq, dz).
struct Shifted {
  double x1;
  double x2;
};

double theta_from_z(double z, int n) noexcept;

/// Principal nonnegative root theta^(1/n); rejects theta < 0.
double z_from_theta(double theta, int n);

/// Right-hand side (dz, ddz) of the first-order system. Rejects zeta <= 0.
std::array<double, 2> rhs(double zeta, double z, double dz,
                          const ModelParams& params);

/// Omega^(-1/n), polished so that Omega * w^n == 1 to rounding.
double equilibrium_magnitude(const ModelParams& params);

/// Real fixed points ordered by z ascending. Rejects Omega == 0.
std::vector<Equilibrium> equilibria(const ModelParams& params);

Shifted shift_to_origin(const State& state, const Equilibrium& eq) noexcept;
State unshift(const Shifted& x, double zeta, const Equilibrium& eq) noexcept;

}  // namespace lanestab
