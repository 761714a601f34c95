// Acceptance checks, one verdict line per criterion.
//   lanestab_acceptance            run all
//   lanestab_acceptance --only N   run criterion N; exit status reflects it

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <json.hpp>

#include "lanestab/cli.hpp"
#include "lanestab/closedform.hpp"
#include "lanestab/integrate.hpp"
#include "lanestab/model.hpp"
#include "lanestab/stability.hpp"
#include "oracles.hpp"

namespace {

using namespace lanestab;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Samples plus `inner` evenly spaced dense-output points inside each step.
std::vector<State> fine_states(const Trajectory& t, int inner) {
  std::vector<State> out;
  const auto samples = t.samples();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    out.push_back(samples[i]);
    const double a = samples[i].zeta, b = samples[i + 1].zeta;
    for (int k = 1; k <= inner; ++k) out.push_back(t.at(a + (b - a) * k / (inner + 1)));
  }
  out.push_back(samples.back());
  return out;
}

Verdict ac1() {
  const ModelParams p = make_params(1, 0.5, 1.0, 0.001);
  IntegratorOptions opts;
  opts.zeta_end = 10.0;
  opts.start_mode = StartMode::Series;
  const auto t0 = Clock::now();
  const Trajectory t = integrate(p, opts);
  const double runtime = seconds_since(t0);
  // Closed form rebuilt from the series shc, independently of the library.
  const auto exact = [](double zeta) { return 2.0 - testing::shc_series(zeta / 2.0); };
  double worst = 0.0;
  for (const State& s : fine_states(t, 3)) worst = std::max(worst, std::abs(s.z - exact(s.zeta)));
  return {worst <= 1e-6 && runtime < 1.0 && t.zeta_end() == 10.0,
          fmt::format("max|z - gamma2| = {:.3e} (tol 1e-6), runtime {:.3f} s (< 1 s)", worst,
                      runtime)};
}

Verdict ac2() {
  const ModelParams p = make_params(1, 0.5, 1.0, 0.001);
  IntegratorOptions opts;
  opts.zeta_end = 10.0;
  const auto zero = first_zero(integrate(p, opts));
  const double lib = halo_boundary(HaloProfile(1.0, 0.5));
  const double x = testing::bisect([](double v) { return testing::shc_series(v) - 2.0; }, 0.5, 5.0);
  const double oracle = x * std::sqrt(2.0 / 0.5);
  if (!zero) return {false, "no zero crossing found"};
  const double d = std::abs(*zero - lib);
  const bool pass = d <= 1e-6 && std::abs(lib - oracle) <= 1e-3 && std::abs(*zero - oracle) <= 1e-3;
  return {pass, fmt::format("first_zero {:.10f}, halo_boundary {:.10f}, |diff| {:.2e} (tol 1e-6), "
                            "bisection oracle {:.10f}",
                            *zero, lib, d, oracle)};
}

Verdict ac3() {
  const ModelParams p = make_params(2, 0.0, 1.0, 0.001);
  IntegratorOptions opts;
  opts.zeta_end = 6.0;
  const Trajectory t = integrate(p, opts);
  double worst = 0.0;
  for (const State& s : fine_states(t, 3)) {
    if (s.zeta > 4.2) break;
    const double exact = std::pow(1.0 - s.zeta * s.zeta / 18.0, 2.0);
    worst = std::max(worst, std::abs(s.z * s.z - exact));
  }
  const auto zero = first_zero(t);
  const double target = std::sqrt(18.0);
  const bool pass = worst <= 1e-6 && zero && std::abs(*zero - target) <= 1e-4;
  return {pass, fmt::format("max|theta - power law| = {:.3e} on [0.001, 4.2] (tol 1e-6), first "
                            "zero {:.8f} vs sqrt(18) = {:.8f} (tol 1e-4)",
                            worst, zero.value_or(NAN), target)};
}

Verdict ac4() {
  double worst = 0.0;
  for (double g : {1.0 - 1e-6, 1.0 + 1e-6}) {
    for (int i = 0; i <= 400; ++i) {
      const double zeta = 4.0 * i / 400;
      const double gauss = testing::exp_series(-zeta * zeta / 6.0);
      worst = std::max(worst, std::abs(powerlaw_profile(zeta, g, 1.0) - gaussian_profile(zeta, 1.0)));
      worst = std::max(worst, std::abs(gaussian_profile(zeta, 1.0) - gauss));
    }
  }
  return {worst <= 1e-4,
          fmt::format("max|powerlaw(1 +- 1e-6) - gaussian| = {:.3e} on [0, 4] (tol 1e-4)", worst)};
}

Verdict ac5() {
  double worst_eig = -INFINITY, worst_off = 0.0;
  int points = 0;
  for (int n : {2, 4, 6}) {
    for (double omega : {0.1, 0.5, 0.9}) {
      const ModelParams p = make_params(n, omega, 1.0, 0.001);
      for (double zeta : log_grid(0.1, 100.0, 50)) {
        const SymMat2 m = lmi_residual(zeta, p);
        worst_eig = std::max(worst_eig, m.eigenvalues().second);
        worst_off = std::max(worst_off, std::abs(m.a12));
        ++points;
      }
    }
  }
  return {worst_eig <= 1e-12 && worst_off <= 1e-14 && points == 450,
          fmt::format("{} grid points, worst eigenvalue {:.3e} (tol 1e-12), max |offdiag| {:.3e} "
                      "(tol 1e-14)",
                      points, worst_eig, worst_off)};
}

Verdict ac6() {
  double worst_uphill = 0.0, worst_rel = 0.0;
  std::size_t compared = 0;
  for (int n : {2, 4, 6}) {
    for (double omega : {0.1, 0.5, 0.9}) {
      const ModelParams p = make_params(n, omega, 1.0, 0.001);
      const double w = equilibrium_magnitude(p);
      const Trajectory t = integrate(p, IntegratorOptions{});
      const auto states = fine_states(t, 3);
      double prev = lyapunov_V(states.front().z + w, states.front().dz, p);
      for (const State& s : states) {
        const double v = lyapunov_V(s.z + w, s.dz, p);
        worst_uphill = std::max(worst_uphill, v - prev);
        prev = v;
      }
      for (const State& s : t.samples()) {
        const double vdot = lyapunov_Vdot(s.dz, s.zeta);
        if (std::abs(vdot) <= 1e-8) continue;
        const double h = std::min(1e-3, 1e-3 * s.zeta);
        const double fd = testing::lyapunov_rate_fd(s.zeta, {s.z, s.dz}, n, omega, h);
        worst_rel = std::max(worst_rel, std::abs(fd - vdot) / std::abs(vdot));
        ++compared;
      }
    }
  }
  return {worst_uphill <= 1e-8 && worst_rel <= 1e-5 && compared > 0,
          fmt::format("max uphill step {:.3e} (slack 1e-8), FD rate vs -4 x2^2/zeta worst relative "
                      "{:.3e} over {} points (tol 1e-5)",
                      worst_uphill, worst_rel, compared)};
}

// Extremum amplitudes |z - z_eq| at the zeros of dz, refined on dense output.
std::vector<double> peak_amplitudes(const Trajectory& t, double z_eq) {
  std::vector<double> amps;
  const auto s = t.samples();
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if ((s[i].dz < 0.0) == (s[i + 1].dz < 0.0) || s[i + 1].dz == 0.0) continue;
    const double zc = testing::bisect([&](double zeta) { return t.at(zeta).dz; }, s[i].zeta,
                                      s[i + 1].zeta, 80);
    amps.push_back(std::abs(t.at(zc).z - z_eq));
  }
  return amps;
}

Verdict ac7() {
  const ModelParams p = make_params(2, 0.5, 1.0, 0.001);
  IntegratorOptions opts;
  opts.zeta_end = 500.0;
  const auto t0 = Clock::now();
  const Trajectory t = integrate(p, opts);
  const double runtime = seconds_since(t0);
  const double z_eq = -1.0 / std::sqrt(0.5);
  const double dev = std::abs(t.at(500.0).z - z_eq);
  const auto amps = peak_amplitudes(t, z_eq);
  bool decreasing = amps.size() >= 3;
  for (std::size_t i = 1; i < amps.size(); ++i) decreasing = decreasing && amps[i] < amps[i - 1];
  return {dev <= 0.05 && decreasing && runtime < 5.0,
          fmt::format("|z(500) + Omega^-1/2| = {:.4f} (tol 0.05), {} peaks strictly decreasing: "
                      "{} ({:.4f} -> {:.4f}), runtime {:.3f} s (< 5 s)",
                      dev, amps.size(), decreasing ? "yes" : "no", amps.empty() ? NAN : amps.front(),
                      amps.empty() ? NAN : amps.back(), runtime)};
}

Verdict ac8() {
  const ModelParams p = make_params(1, 0.5, 1.0, 0.001);
  const EscapeProbe probe = probe_escape(p, 2.0, 1e-3, 10.0, 50.0);
  const bool reported = probe.status == RunStatus::Escaped || probe.status == RunStatus::Diverged;
  const bool pass = probe.escaped && probe.zeta && *probe.zeta < 50.0 && reported;
  return {pass, fmt::format("start z = 2.001: escaped |z - 2| > 10 at zeta = {:.4f} (< 50), status {}",
                            probe.zeta.value_or(NAN), to_string(probe.status))};
}

Verdict ac9() {
  const ModelParams p = make_params(2, 0.5, 1.0, 0.001);
  const double w = equilibrium_magnitude(p);
  const Trajectory t = integrate(p, IntegratorOptions{});
  const State s0 = t.samples().front();
  const double v0 = lyapunov_V(s0.z + w, s0.dz, p);
  const double alpha = basin_alpha(p);
  double vmax = -INFINITY;
  for (const State& s : fine_states(t, 7)) vmax = std::max(vmax, lyapunov_V(s.z + w, s.dz, p));
  return {v0 < alpha && vmax <= v0 + 1e-8,
          fmt::format("V(x0) = {:.10f} < alpha_max = {:.10f}; max V along flow - V(x0) = {:.3e} "
                      "(slack 1e-8)",
                      v0, alpha, vmax - v0)};
}

nlohmann::json sweep_index(const fs::path& dir, const std::string& n, const std::string& omega) {
  std::ostringstream out, err;
  const int code = cli::run({"sweep", "--n", n, "--omega", omega, "--out", dir.string()}, out, err);
  if (code != cli::kExitOk) throw std::runtime_error("sweep failed: " + err.str());
  std::ifstream is(dir / "index.json");
  return nlohmann::json::parse(is);
}

Verdict ac10() {
  const fs::path root = fs::temp_directory_path() / "lanestab_acceptance_ac10";
  fs::remove_all(root);
  const auto gamma_family = sweep_index(root / "gamma", "2,4,6", "0.5");
  const auto omega_family = sweep_index(root / "omega", "2", "0.1,0.5,0.9");
  fs::remove_all(root);

  bool all_bounded = true, all_two_zeros = true;
  std::string counts;
  for (const auto* family : {&gamma_family, &omega_family}) {
    for (const auto& run : (*family)["runs"]) {
      all_bounded = all_bounded && run.value("bounded", false) && run["status"] == "Completed";
      const int zeros = run.value("zero_crossings", 0);
      all_two_zeros = all_two_zeros && zeros >= 2;
      counts += fmt::format(" n={}/Omega={}:{}", run["n"].get<int>(), run["omega"].get<double>(),
                            zeros);
    }
  }
  // zeta* ordering across gamma = 1 + 1/n, reported for the record.
  std::string order;
  std::vector<std::pair<double, double>> by_gamma;
  for (const auto& run : gamma_family["runs"]) {
    const double gamma = 1.0 + 1.0 / run["n"].get<int>();
    const double zs = run.value("zeta_star", NAN);
    by_gamma.emplace_back(gamma, zs);
    order += fmt::format(" gamma={:.4f}:zeta*={:.4f}", gamma, zs);
  }
  std::sort(by_gamma.begin(), by_gamma.end());
  bool increasing = true;
  for (std::size_t i = 1; i < by_gamma.size(); ++i) {
    increasing = increasing && by_gamma[i].second > by_gamma[i - 1].second;
  }
  return {all_bounded && all_two_zeros,
          fmt::format("bounded: {}; >= 2 zeros in every run: {} (zeros:{}); zeta* vs gamma:{} -> "
                      "{} with gamma",
                      all_bounded ? "yes" : "no", all_two_zeros ? "yes" : "no", counts, order,
                      increasing ? "increasing" : "not increasing")};
}

// ---------------------------------------------------------------------------
// Property suite, hand-rolled generators.

struct PropertyLog {
  std::vector<std::string> failed;
  int checked = 0;
  void check(bool ok, const std::string& name) {
    ++checked;
    if (!ok && (failed.empty() || failed.back() != name)) failed.push_back(name);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

Verdict ac11() {
  PropertyLog log;
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int i = 0; i < 10000; ++i) {
    const double x = 20.0 * unit(rng);
    log.check(shc(-x) == shc(x), "shc parity");
    log.check(shc(x) >= 1.0, "shc positivity");
  }

  for (int i = 0; i < 10000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const double theta = 10.0 * std::abs(unit(rng));
    const double back = theta_from_z(z_from_theta(theta, n), n);
    log.check(std::abs(back - theta) <= 1e-12 * std::max(1.0, theta), "theta/z round trip");
    const ModelParams p = make_params(n, 0.1 + 0.8 * std::abs(unit(rng)), 1.0, 0.001);
    for (const Equilibrium& eq : equilibria(p)) {
      const State s{1.0 + std::abs(unit(rng)), 3.0 * unit(rng), unit(rng)};
      const State r = unshift(shift_to_origin(s, eq), s.zeta, eq);
      log.check(std::abs(r.z - s.z) <= 1e-15 * (1 + std::abs(s.z)) && r.dz == s.dz,
                "shift round trip");
    }
  }

  for (int i = 0; i < 2000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const double omega = 0.1 + 0.8 * std::abs(unit(rng));
    const ModelParams p = make_params(n, omega, 1.0, 0.001);
    const double zeta = 0.05 + 50.0 * std::abs(unit(rng));
    const double x1 = 2.0 * unit(rng);
    for (const Equilibrium& eq : equilibria(p)) {
      const Branch b = eq.kind == EquilibriumKind::StableLeft ? Branch::Left : Branch::Right;
      const Mat2 a = jacobian(zeta, x1, p, b);
      const double h = 1e-6;
      const auto f = [&](double u) { return testing::ode<double>(zeta, {u + eq.z_eq, 0.0}, n, omega)[1]; };
      const double fd = (f(x1 + h) - f(x1 - h)) / (2 * h);
      log.check(std::abs(fd - a.a21) <= 1e-6 * std::max(1.0, std::abs(a.a21)), "Jacobian vs FD");
    }
  }

  for (int i = 0; i < 10000; ++i) {
    const int n = 2 * (1 + static_cast<int>(rng() % 3));
    const double omega = 0.1 + 0.8 * std::abs(unit(rng));
    const ModelParams p = make_params(n, omega, 1.0, 0.001);
    const double zeta = std::pow(10.0, 3.0 * unit(rng));
    const double x1 = unit(rng), x2 = unit(rng);
    if (x1 == 0.0 && x2 == 0.0) continue;
    log.check(lmi_weight(zeta, p).quadratic_form(x1, x2) > 0.0, "P positive definite");

    const double r = 2.0 * std::pow(omega, -1.0 / n);
    const double y1 = r * unit(rng), y2 = r * unit(rng);
    if (std::hypot(y1, y2) <= r) log.check(lyapunov_V(y1, y2, p) >= 0.0, "Lyapunov positivity on B_r");
  }

  const fs::path dir = fs::temp_directory_path() / "lanestab_acceptance_ac11";
  std::string outputs[2];
  for (int k = 0; k < 2; ++k) {
    fs::remove_all(dir);
    std::ostringstream out, err;
    const std::string csv = (dir / "run_n2_omega0.5.csv").string();
    fs::create_directories(dir);
    cli::run({"solve", "--n", "2", "--omega", "0.5", "--out", csv}, out, err);
    cli::run({"plot", "--input", csv, "--kind", "phase"}, out, err);
    cli::run({"stability", "--n", "2", "--omega", "0.5", "--json"}, out, err);
    outputs[k] = slurp(csv) + slurp(dir / "run_n2_omega0.5.phase.svg") + out.str() + err.str();
  }
  fs::remove_all(dir);
  log.check(!outputs[0].empty() && outputs[0] == outputs[1], "CLI output determinism");

  std::string failed;
  for (const auto& f : log.failed) failed += " " + f + ";";
  return {log.failed.empty(),
          fmt::format("{} property checks, failures:{}", log.checked, failed.empty() ? " none" : failed)};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Verdict()>>> list{
      {"gamma = 2 oracle equivalence", ac1},
      {"halo boundary", ac2},
      {"Omega -> 0 power-law oracle", ac3},
      {"gamma -> 1 Gaussian limit", ac4},
      {"LMI certificate on grid", ac5},
      {"Lyapunov descent", ac6},
      {"asymptotic convergence, n = 2", ac7},
      {"odd-n instability escape", ac8},
      {"basin invariance", ac9},
      {"figure-family sweeps", ac10},
      {"property suites", ac11},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: lanestab_acceptance [--only N]\n";
      return 2;
    }
  }
  const auto& list = criteria();
  if (only < 0 || only > static_cast<int>(list.size())) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Verdict v;
    try {
      v = list[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    fmt::print("[{}] AC{} {}: {}\n", v.pass ? "PASS" : "FAIL", i + 1, list[i].first, v.detail);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
