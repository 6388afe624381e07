#pragma once

// Convergence-order experiments for rough initial data and the operator
// bound diagnostics that accompany them.

#include "scalerk/fit.hpp"
#include "scalerk/galerkin.hpp"

#include <string>
#include <vector>

namespace scalerk {

enum class ErrorNorm { Y, Yell };

struct StudyConfig {
  ProblemSpec problem;
  ButcherTableau<double> tableau = builtin_tableau<double>("midpoint");
  double T = 0.5;
  std::vector<double> ells{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> h_list{0.1, 0.095, 0.09, 0.085, 0.08, 0.075, 0.07, 0.065, 0.06, 0.055, 0.05};
  std::vector<double> h_list_ell0{0.1, 0.09, 0.08, 0.07, 0.06, 0.05};
  double h_ref = 1e-3;
  double h_ref_ell0 = 1e-4;
  int N = 1000;
  double epsilon = 1e-8;
  ErrorNorm error_norm = ErrorNorm::Y;
  StageSolveConfig solver;
  int threads = 0;  // 0: hardware concurrency
  bool keep_step_errors = false;

  /// Same experiment on a 256-point grid.
  static StudyConfig fast();

  const std::vector<double>& steps_for(double ell) const { return ell == 0.0 ? h_list_ell0 : h_list; }
  double reference_step_for(double ell) const { return ell == 0.0 ? h_ref_ell0 : h_ref; }

  /// ProblemSpec with K = N / 2.
  ProblemSpec problem_spec() const;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct StudyRow {
  double ell = 0;
  double h = 0;
  int n_steps = 0;
  double err_max = 0;
  double err_final = 0;
  double solver_iters_mean = 0;
  bool ok = true;
  std::string failure;
  std::vector<double> step_errors;
};

struct OrderEstimate {
  double ell = 0;
  double q_est = 0;
  double q_pred = 0;
  double log_c = 0;
  double fit_residual = 0;
  bool ok = true;
  std::string failure;
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyRow> rows;          // sorted by (ell, descending h)
  std::vector<OrderEstimate> orders;   // sorted by ell
  double runtime_seconds = 0;
  double solver_iters_mean = 0;
  int solver_iters_max = 0;

  bool complete() const;
  const OrderEstimate* order_for(double ell) const;
};

struct TrajectoryError {
  std::vector<double> times;
  std::vector<double> errors;  // E^n for n = 1 .. N
  double max_error = 0;
  double final_error = 0;
};

class TrajectoryAlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of comparison steps floor(T / h), robust to round-off.
int comparison_steps(double T, double h);

/// Reference solution at t_n = n h, n = 0 .. floor(T/h), using round(h/h_ref)
/// sub-steps per interval so every comparison time is hit exactly.
Trajectory<double> reference_trajectory(const Problem<double>& problem, const StateVector<double>& u0, double h,
                                        double T, double h_ref, const ButcherTableau<double>& tab,
                                        const StageSolveConfig& cfg = {});

/// E^n = ||reference(t_n) - approx(t_n)|| at every approx time t_n > 0.
TrajectoryError compare_trajectories(const Trajectory<double>& approx, const Trajectory<double>& reference,
                                     ErrorNorm norm = ErrorNorm::Y, double ell = 0.0);

/// Integrates U0 with step h up to T and compares with the reference.
TrajectoryError trajectory_error(const Problem<double>& problem, const StateVector<double>& u0, double h, double T,
                                 const Trajectory<double>& reference, const ButcherTableau<double>& tab,
                                 const StageSolveConfig& cfg = {}, ErrorNorm norm = ErrorNorm::Y, double ell = 0.0);

/// Slope q of log E = log c + q log h. Throws on E <= 0 (error saturated).
PowerLawFit estimate_order(const std::vector<std::pair<double, double>>& h_and_error);

/// min(p, p ell / (p + 1)).
double predicted_order(double ell, int p);

StudyResult run_study(const StudyConfig& cfg);

struct BoundEntry {
  double eps = 0;
  double param = 0;  // T or h
  double value = 0;
  double bound = 0;
  bool pass = true;
};

struct BoundSlope {
  double eps = 0;
  double slope = 0;
  double c_min = 0;
  double c_max = 0;
  bool pass = true;
};

struct BoundsReport {
  std::string name;
  std::vector<BoundEntry> entries;
  std::vector<BoundSlope> slopes;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

/// sup_k ||e^{T A_k} - I||_{Y_eps -> Y} against (1 + 2 e^{T omega}) T^eps.
BoundsReport semigroup_continuity_check(const Problem<double>& problem, const std::vector<double>& eps_list,
                                        const std::vector<double>& T_list);

/// sup_k ||(I - h a (x) A_k)^{-1} - I||_{Y_eps^s -> Y^s}; fitted h-slope must reach eps - 0.05.
BoundsReport resolvent_continuity_check(const ButcherTableau<double>& tab, const Problem<double>& problem,
                                        const std::vector<double>& eps_list, const std::vector<double>& h_list);

}  // namespace scalerk
