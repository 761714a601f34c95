#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lanestab/integrate.hpp"
#include "lanestab/model.hpp"

namespace lanestab {

/// General real 2x2 matrix, row major.
struct Mat2 {
  double a11, a12, a21, a22;

  Mat2 transposed() const noexcept { return {a11, a21, a12, a22}; }
  friend Mat2 operator*(const Mat2& l, const Mat2& r) noexcept {
    return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
            l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
  }
  friend Mat2 operator+(const Mat2& l, const Mat2& r) noexcept {
    return {l.a11 + r.a11, l.a12 + r.a12, l.a21 + r.a21, l.a22 + r.a22};
  }
  friend Mat2 operator-(const Mat2& l, const Mat2& r) noexcept {
    return {l.a11 - r.a11, l.a12 - r.a12, l.a21 - r.a21, l.a22 - r.a22};
  }
  friend Mat2 operator*(double s, const Mat2& m) noexcept {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
};

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMat2 {
  double a11, a12, a22;

  Mat2 full() const noexcept { return {a11, a12, a12, a22}; }
  double trace() const noexcept { return a11 + a22; }
  double det() const noexcept { return a11 * a22 - a12 * a12; }
  /// (smaller, larger) eigenvalue from the closed-form 2x2 formula.
  std::pair<double, double> eigenvalues() const noexcept;
  double quadratic_form(double x1, double x2) const noexcept {
    return a11 * x1 * x1 + 2.0 * a12 * x1 * x2 + a22 * x2 * x2;
  }
};

enum class Branch { Left, Right };

/// Jacobian of the shifted system about the left (z_eq = -Omega^(-1/n)) or
/// right (z_eq = +Omega^(-1/n)) equilibrium, at deviation x1:
///   [[0, 1], [Omega (x1 + z_eq)^(n-1) / (1 + 1/n), -2/zeta]].
Mat2 jacobian(double zeta, double x1, const ModelParams& params, Branch branch);

/// Certificate weight P(zeta) = diag(1/zeta, (1 + 1/n)/(Omega^(1/n) zeta)).
SymMat2 lmi_weight(double zeta, const ModelParams& params);
SymMat2 lmi_weight_derivative(double zeta, const ModelParams& params);
/// Rate function g(zeta) = -1/zeta; its integral diverges to -inf.
double lmi_rate(double zeta);

/// A^T P + P A + P' - g P for the linearization about the left equilibrium.
/// Negative semidefinite iff the certificate holds at zeta. Even n only.
SymMat2 lmi_residual(double zeta, const ModelParams& params);

/// Lyapunov function for the left equilibrium (even n):
///   V = -2 Omega/(n+1)^2 [(x1 - w)^(n+1) + w^(n+1)] + 2 x1/(n+1) + x2^2,
/// with w = Omega^(-1/n). Evaluated through the equivalent expansion
///   2w/(n+1)^2 * sum_{k>=2} C(n+1, k) u^k + x2^2,  u = -x1/w,
/// which avoids cancellation near the origin.
double lyapunov_V(double x1, double x2, const ModelParams& params);

/// dV/dzeta along the flow, -4 x2^2 / zeta.
double lyapunov_Vdot(double x2, double zeta);

/// Upper level of the basin estimate, V(2w, 0) = 4n / (Omega^(1/n) (n+1)^2).
double basin_alpha(const ModelParams& params);

/// Membership in B_delta = { |x| <= 2w, V(x) <= alpha - delta }.
bool basin_contains(double x1, double x2, double delta,
                    const ModelParams& params);

/// Chetaev-type function about the right/odd equilibrium:
///   V = (Omega (x1 + w)^n - 1) x2 + (n + 1) x2^2 / zeta.
double instability_V(double x1, double x2, double zeta,
                     const ModelParams& params);

/// Its derivative along the flow,
///   (Omega (x1+w)^n - 1)^2/(n+1) + x2^2 (n Omega (x1+w)^(n-1) - 5(n+1)/zeta^2).
double instability_Vdot(double x1, double x2, double zeta,
                        const ModelParams& params);

/// zeta0 = sqrt(1 + 5 (1 + 1/n) 2^(n-1) Omega^(1-1/n) / Omega), past which
/// instability_Vdot is nonnegative for |x| < 2w with x1 >= -w/2.
double instability_zeta0(const ModelParams& params);

/// count points log-spaced on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, int count);

struct LmiCheck {
  bool verified;
  double worst_eig;
  double max_offdiag;
};

inline constexpr double kLmiEigenSlack = 1e-12;
inline constexpr double kLmiOffdiagSlack = 1e-14;

/// Evaluates lmi_residual on the 50-point log grid over [0.1, 100].
LmiCheck check_lmi(const ModelParams& params);

struct StabilityReport {
  ModelParams params;
  std::vector<Equilibrium> equilibria;
  bool stable_regime;
  std::optional<double> alpha_max;
  std::optional<LmiCheck> lmi;
  std::optional<double> instability_zeta0;
  std::string summary;
};

/// Requires Omega > 0.
StabilityReport classify(const ModelParams& params);

struct EscapeProbe {
  bool escaped;
  std::optional<double> zeta;
  RunStatus status;
};

/// Start at (z_eq + perturbation, 0) at params.zeta_start() and report
/// whether |z - z_eq| exceeds radius before zeta_max.
EscapeProbe probe_escape(const ModelParams& params, double z_eq,
                         double perturbation, double radius = 10.0,
                         double zeta_max = 50.0, double rel_tol = 1e-9);

}  // namespace lanestab
