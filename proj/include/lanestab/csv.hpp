#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lanestab/integrate.hpp"

namespace lanestab {

/// Whether the trajectory CSV carries the V and Vdot columns (even n with
/// Omega > 0, where the Lyapunov function about the left equilibrium exists).
bool csv_has_lyapunov(const ModelParams& params) noexcept;

/// Writes `zeta,z,dz,theta[,V,Vdot]` at 17 significant digits, one row per
/// accepted integrator node.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ValidationError when missing.
  std::size_t column(const std::string& name) const;
};

/// Parses a numeric CSV with a header line. Throws ValidationError on
/// malformed input.
CsvTable read_csv(std::istream& is);

/// Shortest round-trip decimal form, used in file names and labels.
std::string format_shortest(double v);

/// `run_n{n}_omega{omega}.csv`
std::string run_file_name(int n, double omega);

}  // namespace lanestab
