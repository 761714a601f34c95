#include "lanestab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "lanestab/stability.hpp"

namespace lanestab {

bool csv_has_lyapunov(const ModelParams& params) noexcept {
  return params.even() && params.omega() > 0.0;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const ModelParams& p = traj.params();
  const bool with_v = csv_has_lyapunov(p);
  os << (with_v ? "zeta,z,dz,theta,V,Vdot\n" : "zeta,z,dz,theta\n");
  const double z_left = with_v ? -equilibrium_magnitude(p) : 0.0;
  fmt::memory_buffer buf;
  for (const State& s : traj.samples()) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g}",
                   s.zeta, s.z, s.dz, theta_from_z(s.z, p.n()));
    if (with_v) {
      fmt::format_to(std::back_inserter(buf), ",{:.17g},{:.17g}",
                     lyapunov_V(s.z - z_left, s.dz, p),
                     lyapunov_Vdot(s.dz, s.zeta));
    }
    buf.push_back('\n');
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ValidationError("input", "CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line) || line.empty()) {
    throw ValidationError("input", "empty CSV");
  }
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc{} || ptr != comma) {
        throw ValidationError("input", "malformed number on line " +
                                           std::to_string(lineno));
      }
      row.push_back(v);
      p = comma + 1;
    }
    if (row.size() != table.columns.size()) {
      throw ValidationError("input", "wrong column count on line " +
                                         std::to_string(lineno));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_shortest(double v) { return fmt::format("{}", v); }

std::string run_file_name(int n, double omega) {
  return fmt::format("run_n{}_omega{}.csv", n, omega);
}

}  // namespace lanestab
