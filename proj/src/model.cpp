#include "lanestab/model.hpp"

#include <cmath>
#include <limits>

#include "lanestab/errors.hpp"

namespace lanestab {

double ModelParams::z0() const { return z_from_theta(theta0_, n_); }

ModelParams make_params(double n, double omega, double theta0,
                        double zeta_start) {
  if (!std::isfinite(n) || n < 1.0 || n != std::floor(n) ||
      n > std::numeric_limits<int>::max()) {
    throw ValidationError("n", "must be a positive integer");
  }
  if (!std::isfinite(omega) || omega < 0.0) {
    throw ValidationError("omega", "must be finite and >= 0");
  }
  if (!std::isfinite(theta0) || theta0 <= 0.0) {
    throw ValidationError("theta0", "must be finite and > 0");
  }
  if (!std::isfinite(zeta_start) || zeta_start <= 0.0) {
    throw ValidationError("zeta_start", "must be finite and > 0");
  }
  return ModelParams(static_cast<int>(n), omega, theta0, zeta_start);
}

const char* to_string(EquilibriumKind kind) noexcept {
  switch (kind) {
    case EquilibriumKind::StableLeft:
      return "StableLeft";
    case EquilibriumKind::UnstableRight:
      return "UnstableRight";
    case EquilibriumKind::UnstableOdd:
      return "UnstableOdd";
  }
  return "?";
}

double theta_from_z(double z, int n) noexcept { return ipow(z, n); }

double z_from_theta(double theta, int n) {
  if (!(theta >= 0.0)) {
    throw ValidationError("theta", "density must be >= 0");
  }
  if (n == 1) return theta;
  if (n == 2) return std::sqrt(theta);
  if (n == 3) return std::cbrt(theta);
  return std::pow(theta, 1.0 / n);
}

std::array<double, 2> rhs(double zeta, double z, double dz,
                          const ModelParams& params) {
  if (!(zeta > 0.0)) {
    throw ValidationError("zeta", "rhs is singular at zeta <= 0");
  }
  const int n = params.n();
  const double forcing = (params.omega() * ipow(z, n) - 1.0) / (n + 1);
  return {dz, forcing - 2.0 * dz / zeta};
}

double equilibrium_magnitude(const ModelParams& params) {
  const double omega = params.omega();
  if (!(omega > 0.0)) {
    throw ValidationError("omega", "no finite equilibrium when omega == 0");
  }
  const int n = params.n();
  double w = std::pow(omega, -1.0 / n);
  // One Newton step on omega * w^n - 1.
  w -= (omega * ipow(w, n) - 1.0) / (n * omega * ipow(w, n - 1));
  return w;
}

std::vector<Equilibrium> equilibria(const ModelParams& params) {
  const double w = equilibrium_magnitude(params);
  if (params.even()) {
    return {{-w, EquilibriumKind::StableLeft},
            {w, EquilibriumKind::UnstableRight}};
  }
  return {{w, EquilibriumKind::UnstableOdd}};
}

Shifted shift_to_origin(const State& state, const Equilibrium& eq) noexcept {
  return {state.z - eq.z_eq, state.dz};
}

State unshift(const Shifted& x, double zeta, const Equilibrium& eq) noexcept {
  return {zeta, x.x1 + eq.z_eq, x.x2};
}

}  // namespace lanestab
