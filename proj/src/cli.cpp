#include "lanestab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lanestab/closedform.hpp"
#include "lanestab/csv.hpp"
#include "lanestab/errors.hpp"
#include "lanestab/integrate.hpp"
#include "lanestab/model.hpp"
#include "lanestab/report.hpp"
#include "lanestab/stability.hpp"
#include "lanestab/svg.hpp"
#include "lanestab/sweep.hpp"

namespace lanestab::cli {
namespace fs = std::filesystem;

namespace {

// Library field names -> command-line flags, for error messages.
std::string flag_for(const std::string& field) {
  static const std::map<std::string, std::string> flags = {
      {"n", "--n"},
      {"omega", "--omega"},
      {"theta0", "--theta0"},
      {"zeta_start", "--zeta0"},
      {"zeta_small", "--zeta0"},
      {"zeta_end", "--zeta-end"},
      {"rel_tol", "--rtol"},
      {"abs_tol", "--atol"},
      {"max_steps", "--max-steps"},
  };
  const auto it = flags.find(field);
  if (it != flags.end()) return it->second;
  return field.rfind("--", 0) == 0 ? field : "--" + field;
}

struct RunFlags {
  double n = 2;
  double omega = 0.5;
  double theta0 = 1.0;
  double zeta0 = 0.001;
  double zeta_end = 60.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  std::string start_mode = "offset";
  std::size_t max_steps = 1'000'000;
};

void add_run_flags(CLI::App* sub, RunFlags& f, bool with_n_omega) {
  if (with_n_omega) {
    sub->add_option("--n", f.n, "polytrope index, gamma = 1 + 1/n");
    sub->add_option("--omega", f.omega, "scattering ratio Omega >= 0");
  }
  sub->add_option("--theta0", f.theta0, "central density theta(zeta0)");
  sub->add_option("--zeta0", f.zeta0, "start distance");
  sub->add_option("--zeta-end", f.zeta_end, "end distance");
  sub->add_option("--rtol", f.rtol, "relative tolerance");
  sub->add_option("--atol", f.atol, "absolute tolerance");
  sub->add_option("--start-mode", f.start_mode, "offset | series")
      ->check(CLI::IsMember({"offset", "series"}));
  sub->add_option("--max-steps", f.max_steps, "step budget per run");
}

IntegratorOptions options_from(const RunFlags& f) {
  IntegratorOptions opts;
  opts.rel_tol = f.rtol;
  opts.abs_tol = f.atol;
  opts.zeta_end = f.zeta_end;
  opts.start_mode = f.start_mode == "series" ? StartMode::Series : StartMode::Offset;
  opts.max_steps = f.max_steps;
  return opts;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("out", "cannot write " + path.string());
  return os;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("input", "cannot read " + path.string());
  return is;
}

std::string text(double v) { return format_shortest(v); }

// --- solve -----------------------------------------------------------------

struct SolveFlags {
  RunFlags run;
  std::string out;
  bool json = false;
  std::string check_oracle;
};

Json oracle_check(const Trajectory& traj, const std::string& name) {
  const ModelParams& p = traj.params();
  double worst = 0.0;
  std::size_t points = 0;
  const auto compare = [&](double numeric, double exact) {
    worst = std::max(worst, std::abs(numeric - exact));
    ++points;
  };
  if (name == "gamma2") {
    if (p.n() != 1) {
      throw ValidationError("check-oracle", "gamma2 oracle needs --n 1");
    }
    const HaloProfile halo(p.theta0(), p.omega());
    for (const State& s : traj.samples()) compare(s.z, gamma2_profile(s.zeta, halo));
  } else if (name == "powerlaw" || name == "gaussian") {
    if (p.omega() != 0.0) {
      throw ValidationError("check-oracle", name + " oracle needs --omega 0");
    }
    const double edge = powerlaw_boundary(p.gamma(), p.theta0());
    for (const State& s : traj.samples()) {
      if (s.zeta > edge) break;
      const double exact = name == "powerlaw"
                               ? powerlaw_profile(s.zeta, p.gamma(), p.theta0())
                               : gaussian_profile(s.zeta, p.theta0());
      compare(theta_from_z(s.z, p.n()), exact);
    }
  } else {
    throw ValidationError("check-oracle", "unknown oracle '" + name + "'");
  }
  return {{"name", name}, {"max_abs_error", worst}, {"points", points}};
}

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  const RunFlags& r = f.run;
  const ModelParams params = make_params(r.n, r.omega, r.theta0, r.zeta0);
  const IntegratorOptions opts = options_from(r);
  validate(opts, params);
  const Trajectory traj = integrate(params, opts);
  const RunSummary summary = summarize(traj);

  const fs::path path = f.out.empty() ? fs::path(run_file_name(params.n(), params.omega()))
                                      : fs::path(f.out);
  {
    std::ofstream os = open_output(path);
    write_trajectory_csv(os, traj);
  }

  Json j = summary_json(traj, summary);
  j["csv"] = path.generic_string();
  if (!f.check_oracle.empty()) j["oracle"] = oracle_check(traj, f.check_oracle);

  if (f.json) {
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "status: " << to_string(summary.status) << '\n'
      << "samples: " << traj.samples().size() << '\n'
      << "zeta_end: " << text(traj.zeta_end()) << '\n'
      << "bounded: " << (summary.bounded ? "true" : "false") << '\n'
      << "zero_crossings: " << summary.zero_count << '\n'
      << "max_abs_z: " << text(summary.max_abs_z) << '\n';
  if (summary.zeta_star) out << "zeta_star: " << text(*summary.zeta_star) << '\n';
  if (summary.status == RunStatus::Diverged && summary.diverged_at) {
    out << "diverged_at: " << text(*summary.diverged_at) << '\n';
  }
  if (j.contains("oracle")) {
    out << "oracle " << f.check_oracle << " max_abs_error: "
        << text(j["oracle"]["max_abs_error"].get<double>()) << '\n';
  }
  out << "csv: " << path.generic_string() << '\n';
  return kExitOk;
}

// --- stability -------------------------------------------------------------

struct StabilityFlags {
  double n = 2;
  double omega = 0.5;
  double theta0 = 1.0;
  double zeta0 = 0.001;
  bool json = false;
};

inline constexpr double kLmiFailure = 1e-10;

int cmd_stability(const StabilityFlags& f, std::ostream& out, std::ostream& err) {
  const ModelParams params = make_params(f.n, f.omega, f.theta0, f.zeta0);
  const StabilityReport report = classify(params);
  if (f.json) {
    out << report_json(report).dump(2) << '\n';
  } else {
    out << "n: " << params.n() << "  gamma: " << text(params.gamma())
        << "  omega: " << text(params.omega()) << '\n';
    for (const auto& eq : report.equilibria) {
      out << "equilibrium z = " << text(eq.z_eq) << "  " << to_string(eq.kind) << '\n';
    }
    if (report.alpha_max) out << "alpha_max: " << text(*report.alpha_max) << '\n';
    if (report.lmi) {
      out << "lmi verified: " << (report.lmi->verified ? "true" : "false")
          << "  worst eigenvalue: " << text(report.lmi->worst_eig) << '\n';
    }
    if (report.instability_zeta0) {
      out << "instability zeta0: " << text(*report.instability_zeta0) << '\n';
    }
    out << "stable_regime: " << (report.stable_regime ? "true" : "false") << '\n'
        << report.summary << '\n';
  }
  if (report.lmi && report.lmi->worst_eig > kLmiFailure) {
    err << "lmi certificate failed: worst eigenvalue "
        << text(report.lmi->worst_eig) << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

// --- sweep -----------------------------------------------------------------

std::vector<double> parse_list(const std::string& s, const std::string& field) {
  std::vector<double> values;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0.0;
    const char* b = cell.data();
    const char* e = b + cell.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (cell.empty() || ec != std::errc{} || ptr != e) {
      throw ValidationError(field, "bad list entry '" + cell + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ValidationError(field, "empty list");
  return values;
}

struct SweepFlags {
  RunFlags run;
  std::string n = "2";
  std::string omega = "0.5";
  std::string out = ".";
};

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  std::vector<SweepJob> jobs;
  const IntegratorOptions opts = options_from(f.run);
  for (double n : parse_list(f.n, "n")) {
    for (double omega : parse_list(f.omega, "omega")) {
      const ModelParams p = make_params(n, omega, f.run.theta0, f.run.zeta0);
      validate(opts, p);
      jobs.push_back({p, opts});
    }
  }

  const std::vector<SweepResult> results = run_sweep(jobs, sweep_threads());

  const fs::path dir(f.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("out", "cannot create " + dir.string());

  Json runs = Json::array();
  bool all_ok = true;
  for (const SweepResult& r : results) {
    Json entry;
    entry["n"] = r.params.n();
    entry["omega"] = r.params.omega();
    if (r.trajectory) {
      const std::string name = run_file_name(r.params.n(), r.params.omega());
      std::ofstream os = open_output(dir / name);
      write_trajectory_csv(os, *r.trajectory);
      const RunSummary& s = *r.summary;
      entry["file"] = name;
      entry["status"] = to_string(s.status);
      if (s.zeta_star) entry["zeta_star"] = *s.zeta_star;
      if (s.status == RunStatus::Diverged && s.diverged_at) {
        entry["diverged_at"] = *s.diverged_at;
      }
      entry["zero_crossings"] = s.zero_count;
      entry["max_abs_z"] = s.max_abs_z;
      entry["bounded"] = s.bounded;
    } else {
      all_ok = false;
      entry["status"] = "Failed";
      entry["error"] = r.error;
    }
    runs.push_back(std::move(entry));
    out << run_file_name(r.params.n(), r.params.omega()) << ": "
        << (r.trajectory ? to_string(r.summary->status) : "Failed") << '\n';
  }
  Json index;
  index["params"] = {{"theta0", f.run.theta0},
                     {"zeta0", f.run.zeta0},
                     {"zeta_end", f.run.zeta_end},
                     {"rtol", f.run.rtol},
                     {"atol", f.run.atol},
                     {"start_mode", f.run.start_mode}};
  index["runs"] = std::move(runs);
  {
    std::ofstream os = open_output(dir / "index.json");
    os << index.dump(2) << '\n';
  }
  out << "index: " << (dir / "index.json").generic_string() << '\n';
  return all_ok ? kExitOk : kExitNumerical;
}

// --- plot ------------------------------------------------------------------

struct PlotFlags {
  std::string input;
  std::string kind = "profile";
  std::string out;
  std::optional<double> n;
  std::optional<double> omega;
};

CsvTable load_csv(const fs::path& path) {
  std::ifstream is = open_input(path);
  return read_csv(is);
}

Series column_series(const CsvTable& t, const std::string& xs,
                     const std::string& ys, std::string label) {
  const std::size_t ix = t.column(xs);
  const std::size_t iy = t.column(ys);
  Series s{std::move(label), {}, {}};
  s.x.reserve(t.rows.size());
  s.y.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    s.x.push_back(row[ix]);
    s.y.push_back(row[iy]);
  }
  return s;
}

// Pulls (n, omega) out of a run_n{n}_omega{omega}.csv file name.
std::optional<std::pair<double, double>> params_from_name(const fs::path& p) {
  static const std::regex pattern(R"(run_n(\d+)_omega([0-9.eE+-]+)\.csv)");
  std::smatch m;
  const std::string name = p.filename().string();
  if (!std::regex_match(name, m, pattern)) return std::nullopt;
  return std::pair{std::stod(m[1].str()), std::stod(m[2].str())};
}

int cmd_plot(const PlotFlags& f, std::ostream& out) {
  const fs::path input(f.input);
  Chart chart;
  if (f.kind == "profile") {
    const CsvTable t = load_csv(input);
    chart.title = "density profile";
    chart.x_label = "zeta";
    chart.y_label = "theta";
    chart.series.push_back(column_series(t, "zeta", "theta", input.stem().string()));
  } else if (f.kind == "phase") {
    const CsvTable t = load_csv(input);
    chart.title = "phase portrait";
    chart.x_label = "z";
    chart.y_label = "dz";
    chart.series.push_back(column_series(t, "z", "dz", input.stem().string()));
    std::optional<std::pair<double, double>> np = params_from_name(input);
    if (f.n && f.omega) np = std::pair{*f.n, *f.omega};
    if (np && np->second > 0.0) {
      const ModelParams p = make_params(np->first, np->second, 1.0, 0.001);
      for (const Equilibrium& eq : equilibria(p)) {
        const bool stable = eq.kind == EquilibriumKind::StableLeft;
        chart.markers.push_back({eq.z_eq, 0.0, stable ? "black" : "red",
                                 to_string(eq.kind)});
      }
    }
  } else if (f.kind == "profile-family") {
    std::ifstream is = open_input(input);
    Json index;
    try {
      index = Json::parse(is);
    } catch (const Json::exception& e) {
      throw ValidationError("input", std::string("malformed index: ") + e.what());
    }
    if (!index.contains("runs") || !index["runs"].is_array()) {
      throw ValidationError("input", "index has no runs array");
    }
    chart.title = "density profiles";
    chart.x_label = "zeta";
    chart.y_label = "theta";
    for (const auto& run : index["runs"]) {
      if (!run.contains("file")) continue;
      const fs::path csv = input.parent_path() / run["file"].get<std::string>();
      const std::string label =
          fmt::format("n={} omega={}", run["n"].get<int>(), run["omega"].get<double>());
      chart.series.push_back(column_series(load_csv(csv), "zeta", "theta", label));
    }
  } else {
    throw ValidationError("kind", "unknown plot kind '" + f.kind + "'");
  }

  fs::path path = f.out.empty() ? input : fs::path(f.out);
  if (f.out.empty()) path.replace_extension(f.kind == "profile" ? ".svg" : "." + f.kind + ".svg");
  std::ofstream os = open_output(path);
  os << render_svg(chart);
  out << "svg: " << path.generic_string() << '\n';
  return kExitOk;
}

// --- oracle ----------------------------------------------------------------

struct OracleFlags {
  std::string kind = "gamma2";
  double theta0 = 1.0;
  double omega = 0.5;
  double gamma = 1.5;
  double zeta_end = 5.0;
  int points = 101;
  std::string out;
  bool json = false;
};

int cmd_oracle(const OracleFlags& f, std::ostream& out) {
  if (f.points < 2) throw ValidationError("points", "need at least 2");
  if (!(f.zeta_end > 0.0)) throw ValidationError("zeta-end", "must be > 0");
  std::function<double(double)> profile;
  std::optional<double> boundary;
  if (f.kind == "gamma2") {
    const HaloProfile halo(f.theta0, f.omega);
    profile = [halo](double z) { return gamma2_profile(z, halo); };
    boundary = halo_boundary(halo);
  } else if (f.kind == "powerlaw") {
    if (f.gamma > 1.0) boundary = powerlaw_boundary(f.gamma, f.theta0);
    powerlaw_profile(0.0, f.gamma, f.theta0);  // validates gamma, theta0
    const double g = f.gamma, t0 = f.theta0;
    const std::optional<double> edge = boundary;
    profile = [g, t0, edge](double z) {
      return edge && z > *edge ? 0.0 : powerlaw_profile(z, g, t0);
    };
  } else if (f.kind == "gaussian") {
    const double t0 = f.theta0;
    profile = [t0](double z) { return gaussian_profile(z, t0); };
  } else if (f.kind == "waterbag") {
    boundary = lane_emden_radius(f.omega);
    const double om = f.omega;
    profile = [om](double x) { return waterbag_profile(x, om); };
  } else {
    throw ValidationError("kind", "unknown oracle '" + f.kind + "'");
  }

  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < f.points; ++i) {
    const double z = f.zeta_end * i / (f.points - 1);
    pts.emplace_back(z, profile(z));
  }
  if (f.json) {
    Json j;
    j["kind"] = f.kind;
    if (boundary) j["boundary"] = *boundary;
    Json samples = Json::array();
    for (const auto& [z, t] : pts) samples.push_back({z, t});
    j["samples"] = std::move(samples);
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  std::ofstream file;
  if (!f.out.empty()) file = open_output(f.out);
  std::ostream& os = f.out.empty() ? out : file;
  os << "zeta,theta\n";
  for (const auto& [z, t] : pts) os << fmt::format("{:.17g},{:.17g}\n", z, t);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Lane-Emden solver and stability certificates", "lanestab"};
  app.require_subcommand(1);

  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "integrate one profile and write its CSV");
  add_run_flags(solve_cmd, solve.run, true);
  solve_cmd->add_option("--out", solve.out, "trajectory CSV path");
  solve_cmd->add_flag("--json", solve.json, "print the summary as JSON");
  solve_cmd->add_option("--check-oracle", solve.check_oracle, "gamma2 | powerlaw | gaussian");

  StabilityFlags stab;
  auto* stab_cmd = app.add_subcommand("stability", "equilibria, basin level and certificates");
  stab_cmd->add_option("--n", stab.n, "polytrope index");
  stab_cmd->add_option("--omega", stab.omega, "scattering ratio");
  stab_cmd->add_option("--theta0", stab.theta0, "central density");
  stab_cmd->add_option("--zeta0", stab.zeta0, "start distance");
  stab_cmd->add_flag("--json", stab.json, "print the report as JSON");

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "cartesian product of n and omega runs");
  add_run_flags(sweep_cmd, sweep.run, false);
  sweep_cmd->add_option("--n", sweep.n, "comma-separated n values");
  sweep_cmd->add_option("--omega", sweep.omega, "comma-separated omega values");
  sweep_cmd->add_option("--out", sweep.out, "output directory");

  PlotFlags plot;
  auto* plot_cmd = app.add_subcommand("plot", "render a trajectory CSV or sweep index to SVG");
  plot_cmd->add_option("--input", plot.input, "CSV or index.json")->required();
  plot_cmd->add_option("--kind", plot.kind, "profile | profile-family | phase")
      ->check(CLI::IsMember({"profile", "profile-family", "phase"}));
  plot_cmd->add_option("--out", plot.out, "SVG path");
  plot_cmd->add_option("--n", plot.n, "n for equilibrium markers");
  plot_cmd->add_option("--omega", plot.omega, "omega for equilibrium markers");

  OracleFlags oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "tabulate a closed-form profile");
  oracle_cmd->add_option("--kind", oracle.kind, "gamma2 | powerlaw | gaussian | waterbag")
      ->check(CLI::IsMember({"gamma2", "powerlaw", "gaussian", "waterbag"}));
  oracle_cmd->add_option("--theta0", oracle.theta0, "central density");
  oracle_cmd->add_option("--omega", oracle.omega, "scattering ratio");
  oracle_cmd->add_option("--gamma", oracle.gamma, "adiabatic index (powerlaw)");
  oracle_cmd->add_option("--zeta-end", oracle.zeta_end, "grid end");
  oracle_cmd->add_option("--points", oracle.points, "grid size");
  oracle_cmd->add_option("--out", oracle.out, "CSV path (default stdout)");
  oracle_cmd->add_flag("--json", oracle.json, "print JSON instead of CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUser;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*stab_cmd) return cmd_stability(stab, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, out);
    if (*plot_cmd) return cmd_plot(plot, out);
    if (*oracle_cmd) return cmd_oracle(oracle, out);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    const std::string prefix = e.field() + ": ";
    const std::string detail = what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
    err << flag_for(e.field()) << ": " << detail << '\n';
    return kExitUser;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUser;
}

}  // namespace lanestab::cli
