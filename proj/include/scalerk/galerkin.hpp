#pragma once

// Galerkin truncation: the projected system du_m/dt = A u_m + P_m B(u_m) and
// its Runge-Kutta method Psi_m = psi_m o P_m.

#include "scalerk/fit.hpp"
#include "scalerk/integrator.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace scalerk {

/// P_m B(P_m U).
template <typename Real>
StateVector<Real> projected_nonlinearity(const Problem<Real>& problem, const StateVector<Real>& state, Real m) {
  const auto& spec = problem.spectrum();
  return project(spec, nonlinearity(problem, project(spec, state, m, Part::P)), m, Part::P);
}

template <typename Real>
RungeKuttaStepper<Real> projected_stepper(const Problem<Real>& problem, const ButcherTableau<Real>& tab, Real h, Real m,
                                          const StageSolveConfig& cfg = {}) {
  return RungeKuttaStepper<Real>(problem.spectrum(), tab, h, cfg, [&problem, m](const StateVector<Real>& w) {
    return projected_nonlinearity(problem, w, m);
  });
}

/// One step of Psi^h_m = psi^h_m o P_m.
template <typename Real>
StateVector<Real> step_projected(const Problem<Real>& problem, const StateVector<Real>& u, Real h, Real m,
                                 const ButcherTableau<Real>& tab, const StageSolveConfig& cfg = {}) {
  return projected_stepper(problem, tab, h, m, cfg).step(project(problem.spectrum(), u, m, Part::P));
}

template <typename Real>
Trajectory<Real> integrate_projected(const Problem<Real>& problem, const StateVector<Real>& u0, Real h, int steps, Real m,
                                     const ButcherTableau<Real>& tab, const StageSolveConfig& cfg = {}, int stride = 1) {
  return projected_stepper(problem, tab, h, m, cfg).integrate(project(problem.spectrum(), u0, m, Part::P), steps, stride);
}

/// Cutoff m(h) = ceil(h^{-p/(p+1)}) balancing projection and time errors.
inline double coupling_m(double h, int p) {
  if (!(h > 0)) throw std::invalid_argument("coupling_m requires h > 0");
  if (p < 1) throw std::invalid_argument("coupling_m requires p >= 1");
  return std::ceil(std::pow(h, -double(p) / double(p + 1)));
}

struct ProjectionErrorPoint {
  double m = 0;
  double max_error = 0;
  double final_error = 0;
};

struct ProjectionErrorResult {
  std::vector<ProjectionErrorPoint> points;  // sorted by m
  double slope = 0;                          // fitted d log(max_error) / d log(m); NaN if any error is zero
  double intercept = 0;
  double fit_residual = 0;
};

/// Max over time steps of ||Phi(U0) - Phi_m(P_m U0)||_Y, both integrated with
/// step h_ref up to time T, for each cutoff m.
ProjectionErrorResult flow_projection_error(const Problem<double>& problem, const StateVector<double>& u0, double T,
                                            std::vector<double> m_list, double h_ref, const ButcherTableau<double>& tab,
                                            const StageSolveConfig& cfg = {});

/// ||Psi^h(U) - Psi^h_m(U)||_Y for each cutoff m.
ProjectionErrorResult step_projection_error(const Problem<double>& problem, const StateVector<double>& u, double h,
                                            std::vector<double> m_list, const ButcherTableau<double>& tab,
                                            const StageSolveConfig& cfg = {});

}  // namespace scalerk
