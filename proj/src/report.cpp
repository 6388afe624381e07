#include "scalerk/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace scalerk {

std::string OutputHeader::comment_line() const {
  return "# " + tool + " " + version + " config_hash=" + config_hash;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json config_echo(const std::string& dump) {
  nlohmann::json out = nlohmann::json::object();
  std::istringstream in(dump);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace

void write_study_csv(std::ostream& os, const StudyResult& result, const OutputHeader& header) {
  os << header.comment_line() << "\n";
  for (const auto& r : result.rows)
    if (!r.ok) os << "# failed ell=" << format_double(r.ell) << " h=" << format_double(r.h) << ": " << r.failure << "\n";
  for (const auto& o : result.orders)
    if (!o.ok) os << "# fit failed ell=" << format_double(o.ell) << ": " << o.failure << "\n";
  os << "ell,h,n_steps,err_max,err_final,q_est,q_pred,fit_residual,solver_iters_mean\n";
  for (const auto& r : result.rows) {
    const OrderEstimate* o = result.order_for(r.ell);
    os << format_double(r.ell) << ',' << format_double(r.h) << ',' << r.n_steps << ',' << format_double(r.err_max) << ','
       << format_double(r.err_final) << ',' << format_double(o ? o->q_est : NAN) << ','
       << format_double(o ? o->q_pred : NAN) << ',' << format_double(o ? o->fit_residual : NAN) << ','
       << format_double(r.solver_iters_mean) << "\n";
  }
}

void write_study_json(std::ostream& os, const StudyResult& result, const OutputHeader& header, bool step_errors) {
  nlohmann::json j;
  j["tool"] = header.tool;
  j["version"] = header.version;
  j["config_hash"] = header.config_hash;
  j["config"] = config_echo(header.config_dump);
  j["tableau"] = {{"name", result.config.tableau.name}, {"order", result.config.tableau.order},
                  {"stages", result.config.tableau.stages()}};
  j["metadata"] = {{"runtime_seconds", result.runtime_seconds},
                   {"solver_iters_mean", json_number(result.solver_iters_mean)},
                   {"solver_iters_max", result.solver_iters_max},
                   {"complete", result.complete()}};
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : result.rows) {
    nlohmann::json row = {{"ell", r.ell},
                          {"h", r.h},
                          {"n_steps", r.n_steps},
                          {"err_max", json_number(r.err_max)},
                          {"err_final", json_number(r.err_final)},
                          {"solver_iters_mean", json_number(r.solver_iters_mean)},
                          {"ok", r.ok}};
    if (!r.ok) row["failure"] = r.failure;
    if (step_errors) row["step_errors"] = r.step_errors;
    rows.push_back(row);
  }
  auto& orders = j["orders"] = nlohmann::json::array();
  for (const auto& o : result.orders) {
    nlohmann::json e = {{"ell", o.ell},
                        {"q_est", json_number(o.q_est)},
                        {"q_pred", o.q_pred},
                        {"log_c", json_number(o.log_c)},
                        {"fit_residual", json_number(o.fit_residual)},
                        {"ok", o.ok}};
    if (!o.ok) e["failure"] = o.failure;
    orders.push_back(e);
  }
  os << j.dump(2) << "\n";
}

void write_plot_data(std::ostream& os, const StudyResult& result, const OutputHeader& header) {
  os << header.comment_line() << "\n";
  os << "# series q_est\n# ell q_est\n";
  for (const auto& o : result.orders) os << format_double(o.ell) << ' ' << format_double(o.q_est) << "\n";
  os << "\n\n# series q_pred\n# ell q_pred\n";
  for (const auto& o : result.orders) os << format_double(o.ell) << ' ' << format_double(o.q_pred) << "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj, const std::vector<int>& step_index,
                          const OutputHeader& header) {
  os << header.comment_line() << "\n";
  os << "step,t,y_norm,iterations\n";
  for (std::size_t n = 0; n < traj.states.size(); ++n)
    os << step_index[n] << ',' << format_double(traj.times[n]) << ',' << format_double(y_norm(traj.states[n])) << ','
       << traj.iterations[n] << "\n";
}

void write_coefficient_dump(std::ostream& os, const Trajectory<double>& traj, const std::vector<int>& step_index,
                            const OutputHeader& header) {
  os << header.comment_line() << "\n";
  os << "step,t,component,k,re,im\n";
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const auto& s = traj.states[n];
    for (int c = 0; c < s.dim(); ++c)
      for (Eigen::Index j = 0; j < s.modes(); ++j) {
        const auto v = s.coeffs()(j, c);
        os << step_index[n] << ',' << format_double(traj.times[n]) << ',' << c << ',' << s.mode(j) << ','
           << format_double(v.real()) << ',' << format_double(v.imag()) << "\n";
      }
  }
}

void write_astability_report(std::ostream& os, const AStabilityReport& rep) {
  os << "tableau " << rep.name << ": stages s=" << rep.stages << ", order p=" << rep.order << "\n";
  os << "  samples: " << rep.samples << " (imaginary axis |y| in [" << rep.plan.imag_min << ", " << rep.plan.imag_max
     << "], " << rep.plan.imag_count << " log-spaced; left half-plane " << rep.plan.real_count << " x "
     << 2 * rep.plan.grid_imag_count + 1 << ")\n";
  os << "  max |S(z)| = " << format_double(rep.max_abs_s) << " at z = " << rep.max_abs_s_at << "\n";
  os << "  |S(inf)| = " << format_double(rep.abs_s_infinity) << "\n";
  os << "  cond(alpha) = " << format_double(rep.alpha_condition) << "\n";
  os << "  min sigma_min(I - z alpha) = " << format_double(rep.min_sigma) << " at z = " << rep.min_sigma_at << "\n";
  os << "  RK1: " << (rep.rk1 ? "pass" : "FAIL") << "\n";
  os << "  RK2: " << (rep.rk2 ? "pass" : "FAIL") << "\n";
  for (const auto& r : rep.reasons) os << "  reason: " << r << "\n";
}

void write_bounds_report(std::ostream& os, const BoundsReport& rep) {
  os << rep.name << ":\n";
  for (const auto& e : rep.entries)
    os << "  eps=" << format_double(e.eps) << " param=" << format_double(e.param) << " value=" << format_double(e.value)
       << " bound=" << format_double(e.bound) << (e.pass ? " ok" : " VIOLATION") << "\n";
  for (const auto& s : rep.slopes)
    os << "  eps=" << format_double(s.eps) << " fitted h-slope=" << format_double(s.slope) << " constant in ["
       << format_double(s.c_min) << ", " << format_double(s.c_max) << "]" << (s.pass ? " ok" : " VIOLATION") << "\n";
  for (const auto& v : rep.violations) os << "  violation: " << v << "\n";
}

}  // namespace scalerk
