#include "scalerk/galerkin.hpp"

#include <algorithm>
#include <limits>

namespace scalerk {

namespace {

// Errors at roundoff level (exact projections) leave the slope undefined.
void finish_fit(ProjectionErrorResult& out) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& p : out.points) xy.emplace_back(p.m, p.max_error);
  const bool fittable = xy.size() >= 2 && std::all_of(xy.begin(), xy.end(), [](const auto& p) { return p.second > 0; });
  if (!fittable) {
    out.slope = out.intercept = out.fit_residual = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const auto fit = fit_power_law(xy);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.fit_residual = fit.max_residual;
}

}  // namespace

ProjectionErrorResult flow_projection_error(const Problem<double>& problem, const StateVector<double>& u0, double T,
                                            std::vector<double> m_list, double h_ref, const ButcherTableau<double>& tab,
                                            const StageSolveConfig& cfg) {
  if (!(T > 0) || !(h_ref > 0)) throw std::invalid_argument("flow_projection_error needs T > 0 and h_ref > 0");
  std::sort(m_list.begin(), m_list.end());
  const int steps = static_cast<int>(std::llround(T / h_ref));
  const auto full = integrate(problem, u0, h_ref, steps, tab, cfg);

  ProjectionErrorResult out;
  for (double m : m_list) {
    const auto proj = integrate_projected(problem, u0, h_ref, steps, m, tab, cfg);
    ProjectionErrorPoint pt;
    pt.m = m;
    for (std::size_t n = 0; n < full.states.size(); ++n) {
      const double e = y_norm(full.states[n] - proj.states[n]);
      pt.max_error = std::max(pt.max_error, e);
      pt.final_error = e;
    }
    out.points.push_back(pt);
  }
  finish_fit(out);
  return out;
}

ProjectionErrorResult step_projection_error(const Problem<double>& problem, const StateVector<double>& u, double h,
                                            std::vector<double> m_list, const ButcherTableau<double>& tab,
                                            const StageSolveConfig& cfg) {
  std::sort(m_list.begin(), m_list.end());
  const auto full = step(problem, u, h, tab, cfg);
  ProjectionErrorResult out;
  for (double m : m_list) {
    const double e = y_norm(full - step_projected(problem, u, h, m, tab, cfg));
    out.points.push_back({m, e, e});
  }
  finish_fit(out);
  return out;
}

}  // namespace scalerk
