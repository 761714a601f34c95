#include "lanestab/report.hpp"

#include <algorithm>
#include <cmath>

namespace lanestab {

Json params_json(const ModelParams& params) {
  Json j;
  j["n"] = params.n();
  j["omega"] = params.omega();
  j["theta0"] = params.theta0();
  j["zeta0"] = params.zeta_start();
  return j;
}

namespace {

Json equilibria_json(const std::vector<Equilibrium>& eqs) {
  Json arr = Json::array();
  for (const auto& eq : eqs) {
    arr.push_back({{"z", eq.z_eq}, {"kind", to_string(eq.kind)}});
  }
  return arr;
}

}  // namespace

Json report_json(const StabilityReport& report) {
  Json j;
  j["params"] = params_json(report.params);
  j["equilibria"] = equilibria_json(report.equilibria);
  if (report.alpha_max) j["alpha_max"] = *report.alpha_max;
  if (report.lmi) {
    j["lmi"] = {{"verified", report.lmi->verified},
                {"worst_eig", report.lmi->worst_eig},
                {"max_offdiag", report.lmi->max_offdiag}};
  }
  if (report.instability_zeta0) {
    j["instability_zeta0"] = *report.instability_zeta0;
  }
  j["stable_regime"] = report.stable_regime;
  j["summary"] = report.summary;
  return j;
}

RunSummary summarize(const Trajectory& traj) {
  RunSummary s{traj.status(), first_zero(traj), traj.terminated_at(), 0, 0.0,
               false};
  for (const auto& e : traj.events()) {
    if (e.kind == EventKind::ZeroCrossing) ++s.zero_count;
  }
  for (const auto& st : traj.samples()) {
    s.max_abs_z = std::max(s.max_abs_z, std::abs(st.z));
  }
  s.bounded = s.status == RunStatus::Completed && s.max_abs_z <= kBoundedLimit;
  return s;
}

Json summary_json(const Trajectory& traj, const RunSummary& summary) {
  const ModelParams& p = traj.params();
  Json j;
  j["params"] = params_json(p);
  if (p.omega() > 0.0) j["equilibria"] = equilibria_json(equilibria(p));
  j["stable_regime"] = p.stable_regime();
  if (summary.zeta_star) j["zeta_star"] = *summary.zeta_star;
  if (summary.status == RunStatus::Diverged && summary.diverged_at) {
    j["diverged_at"] = *summary.diverged_at;
  }
  j["status"] = to_string(summary.status);
  j["bounded"] = summary.bounded;
  j["zero_crossings"] = summary.zero_count;
  j["max_abs_z"] = summary.max_abs_z;
  j["zeta_end"] = traj.zeta_end();
  j["samples"] = traj.samples().size();
  return j;
}

}  // namespace lanestab
