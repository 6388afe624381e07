#include "scalerk/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace scalerk {

StudyConfig StudyConfig::fast() {
  StudyConfig cfg;
  cfg.N = 256;
  return cfg;
}

ProblemSpec StudyConfig::problem_spec() const {
  ProblemSpec spec = problem;
  spec.K = N / 2;
  return spec;
}

void StudyConfig::validate() const {
  if (!(T > 0)) throw std::invalid_argument("study.T must be positive");
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("study.N must be even and at least 4");
  if (ells.empty()) throw std::invalid_argument("study.ells must not be empty");
  if (!(epsilon > 0)) throw std::invalid_argument("study.epsilon must be positive");
  solver.validate();
  validate_tableau(tableau);
  for (double ell : ells) {
    if (ell < 0) throw std::invalid_argument("study.ells entries must be non-negative");
    const auto& hs = steps_for(ell);
    const double href = reference_step_for(ell);
    if (hs.empty()) throw std::invalid_argument("study h list must not be empty");
    if (!(href > 0)) throw std::invalid_argument("study reference step must be positive");
    for (double h : hs) {
      if (!(h > href)) {
        std::ostringstream os;
        os << "study step h=" << h << " must exceed the reference step " << href;
        throw std::invalid_argument(os.str());
      }
      if (h > T) throw std::invalid_argument("study steps must not exceed T");
    }
  }
}

bool StudyResult::complete() const {
  return std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.ok; }) &&
         std::all_of(orders.begin(), orders.end(), [](const OrderEstimate& o) { return o.ok; });
}

const OrderEstimate* StudyResult::order_for(double ell) const {
  for (const auto& o : orders)
    if (std::abs(o.ell - ell) < 1e-12) return &o;
  return nullptr;
}

int comparison_steps(double T, double h) {
  return static_cast<int>(std::floor(T / h * (1.0 + 1e-12)));
}

Trajectory<double> reference_trajectory(const Problem<double>& problem, const StateVector<double>& u0, double h,
                                        double T, double h_ref, const ButcherTableau<double>& tab,
                                        const StageSolveConfig& cfg) {
  if (!(h > 0) || !(h_ref > 0)) throw std::invalid_argument("reference_trajectory needs positive steps");
  const int sub = std::max(1, static_cast<int>(std::llround(h / h_ref)));
  const int blocks = comparison_steps(T, h);
  RungeKuttaStepper<double> stepper(problem, tab, h / sub, cfg);
  Trajectory<double> out;
  out.times.push_back(0.0);
  out.states.push_back(u0);
  out.iterations.push_back(0);
  StateVector<double> u = u0;
  for (int n = 1; n <= blocks; ++n) {
    int total = 0;
    for (int i = 0; i < sub; ++i) {
      int iters = 0;
      try {
        u = stepper.step(u, &iters);
      } catch (const StageSolveError& e) {
        throw StageSolveError("reference step " + std::to_string((n - 1) * sub + i + 1) + ": " + e.what(),
                              e.iterations(), e.last_update());
      }
      total += iters;
    }
    out.times.push_back(n * h);
    out.states.push_back(u);
    out.iterations.push_back(total);
  }
  return out;
}

TrajectoryError compare_trajectories(const Trajectory<double>& approx, const Trajectory<double>& reference, ErrorNorm norm,
                                     double ell) {
  TrajectoryError out;
  std::size_t r = 0;
  for (std::size_t n = 1; n < approx.times.size(); ++n) {
    const double t = approx.times[n];
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    while (r < reference.times.size() && reference.times[r] < t - tol) ++r;
    if (r == reference.times.size() || std::abs(reference.times[r] - t) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "reference trajectory has no state at t_" << n << " = " << t;
      throw TrajectoryAlignmentError(os.str());
    }
    const auto diff = reference.states[r] - approx.states[n];
    const double e = norm == ErrorNorm::Y ? y_norm(diff) : scale_norm(diff, ell);
    out.times.push_back(t);
    out.errors.push_back(e);
    out.max_error = std::max(out.max_error, e);
    out.final_error = e;
  }
  return out;
}

TrajectoryError trajectory_error(const Problem<double>& problem, const StateVector<double>& u0, double h, double T,
                                 const Trajectory<double>& reference, const ButcherTableau<double>& tab,
                                 const StageSolveConfig& cfg, ErrorNorm norm, double ell) {
  const auto approx = integrate(problem, u0, h, comparison_steps(T, h), tab, cfg);
  return compare_trajectories(approx, reference, norm, ell);
}

PowerLawFit estimate_order(const std::vector<std::pair<double, double>>& h_and_error) {
  for (const auto& [h, e] : h_and_error) {
    if (!(e > 0)) {
      std::ostringstream os;
      os << "error " << e << " at h=" << h << " is not positive (below solver tolerance: saturated)";
      throw std::domain_error(os.str());
    }
  }
  for (std::size_t i = 0; i < h_and_error.size(); ++i)
    for (std::size_t j = i + 1; j < h_and_error.size(); ++j)
      if (h_and_error[i].first == h_and_error[j].first) throw std::invalid_argument("estimate_order needs distinct h");
  return fit_power_law(h_and_error);
}

double predicted_order(double ell, int p) {
  if (ell < 0 || p < 1) throw std::invalid_argument("predicted_order needs ell >= 0 and p >= 1");
  return std::min(double(p), double(p) * ell / double(p + 1));
}

namespace {

template <typename Task>
void run_parallel(std::size_t count, int threads, Task&& task) {
  unsigned workers = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) task(i);
  };
  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Problem<double> problem(cfg.problem_spec());

  std::vector<double> ells = cfg.ells;
  std::sort(ells.begin(), ells.end());
  ells.erase(std::unique(ells.begin(), ells.end()), ells.end());

  std::vector<StateVector<double>> initial;
  for (double ell : ells) initial.push_back(initial_data(problem, ell, cfg.epsilon));

  struct Task {
    std::size_t ell_index;
    double h;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    std::vector<double> hs = cfg.steps_for(ells[i]);
    std::sort(hs.begin(), hs.end(), std::greater<>());
    for (double h : hs) tasks.push_back({i, h});
  }

  std::vector<StudyRow> rows(tasks.size());
  std::vector<long long> iter_totals(tasks.size(), 0), iter_counts(tasks.size(), 0);
  std::vector<int> iter_max(tasks.size(), 0);

  run_parallel(tasks.size(), cfg.threads, [&](std::size_t t) {
    const auto& task = tasks[t];
    const double ell = ells[task.ell_index];
    StudyRow& row = rows[t];
    row.ell = ell;
    row.h = task.h;
    row.n_steps = comparison_steps(cfg.T, task.h);
    try {
      const auto& u0 = initial[task.ell_index];
      const auto reference =
          reference_trajectory(problem, u0, task.h, cfg.T, cfg.reference_step_for(ell), cfg.tableau, cfg.solver);
      const auto approx = integrate(problem, u0, task.h, row.n_steps, cfg.tableau, cfg.solver);
      const auto err = compare_trajectories(approx, reference, cfg.error_norm, ell);
      row.err_max = err.max_error;
      row.err_final = err.final_error;
      if (cfg.keep_step_errors) row.step_errors = err.errors;
      long long total = 0;
      for (std::size_t n = 1; n < approx.iterations.size(); ++n) {
        total += approx.iterations[n];
        iter_max[t] = std::max(iter_max[t], approx.iterations[n]);
      }
      row.solver_iters_mean = row.n_steps > 0 ? double(total) / double(row.n_steps) : 0.0;
      iter_totals[t] = total;
      iter_counts[t] = row.n_steps;
    } catch (const std::exception& e) {
      row.ok = false;
      row.failure = e.what();
      row.err_max = row.err_final = row.solver_iters_mean = std::numeric_limits<double>::quiet_NaN();
    }
  });

  StudyResult result;
  result.config = cfg;
  result.rows = std::move(rows);

  for (double ell : ells) {
    OrderEstimate est;
    est.ell = ell;
    est.q_pred = predicted_order(ell, cfg.tableau.order);
    std::vector<std::pair<double, double>> pairs;
    for (const auto& r : result.rows)
      if (r.ell == ell && r.ok) pairs.emplace_back(r.h, r.err_max);
    try {
      const auto fit = estimate_order(pairs);
      est.q_est = fit.slope;
      est.log_c = fit.intercept;
      est.fit_residual = fit.max_residual;
    } catch (const std::exception& e) {
      est.ok = false;
      est.failure = e.what();
      est.q_est = est.log_c = est.fit_residual = std::numeric_limits<double>::quiet_NaN();
    }
    result.orders.push_back(est);
  }

  long long total = 0, count = 0;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    total += iter_totals[t];
    count += iter_counts[t];
    result.solver_iters_max = std::max(result.solver_iters_max, iter_max[t]);
  }
  result.solver_iters_mean = count > 0 ? double(total) / double(count) : 0.0;
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

void require_unit_interval(const std::vector<double>& eps_list) {
  for (double eps : eps_list)
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("bound exponent eps must lie in [0,1]");
}

std::string describe(const char* what, double eps, double param, double value, double bound) {
  std::ostringstream os;
  os << what << " eps=" << eps << " at " << param << ": " << value << " > " << bound;
  return os.str();
}

}  // namespace

BoundsReport semigroup_continuity_check(const Problem<double>& problem, const std::vector<double>& eps_list,
                                        const std::vector<double>& T_list) {
  require_unit_interval(eps_list);
  const auto& spec = problem.spectrum();
  BoundsReport rep;
  rep.name = "semigroup_continuity";
  for (double T : T_list) {
    if (T < 0) throw std::invalid_argument("semigroup check times must be non-negative");
    const auto blocks = semigroup_blocks(spec, T);
    for (double eps : eps_list) {
      double sup = 0;
      for (Eigen::Index j = 0; j < spec.modes(); ++j) {
        const ComplexMatrix<double> diff =
            blocks[std::size_t(j)] - ComplexMatrix<double>::Identity(spec.dim(), spec.dim());
        sup = std::max(sup, block_operator_norm(spec, j, diff, eps));
      }
      BoundEntry e{eps, T, sup, (1.0 + 2.0 * std::exp(T * spec.omega)) * std::pow(T, eps), true};
      e.pass = e.value <= e.bound * (1.0 + 1e-12);
      if (!e.pass) rep.violations.push_back(describe("semigroup", eps, T, e.value, e.bound));
      rep.entries.push_back(e);
    }
  }
  return rep;
}

BoundsReport resolvent_continuity_check(const ButcherTableau<double>& tab, const Problem<double>& problem,
                                        const std::vector<double>& eps_list, const std::vector<double>& h_list) {
  require_unit_interval(eps_list);
  const auto& spec = problem.spectrum();
  const int s = tab.stages();
  const int d = spec.dim();
  BoundsReport rep;
  rep.name = "resolvent_continuity";

  std::map<double, std::vector<std::pair<double, double>>> series;
  for (double h : h_list) {
    if (h < 0) throw std::invalid_argument("resolvent check steps must be non-negative");
    const StageResolvent<double> resolvent(spec, tab, h);
    // Lambda = sup_k ||(I - h a (x) A_k)^{-1}||_{Y^s -> Y^s}
    double lambda = 0;
    std::vector<double> diff_norm(std::size_t(spec.modes()));
    for (Eigen::Index j = 0; j < spec.modes(); ++j) {
      Eigen::VectorXd scale(s * d);
      const auto dj = spec.y_scaling(j);
      for (int i = 0; i < s; ++i) scale.segment(i * d, d) = dj;
      const ComplexMatrix<double> inv = scale.asDiagonal() * resolvent.block_inverse(j) * scale.cwiseInverse().asDiagonal();
      lambda = std::max(lambda, Eigen::JacobiSVD<ComplexMatrix<double>>(inv).singularValues()[0]);
      const ComplexMatrix<double> diff = inv - ComplexMatrix<double>::Identity(s * d, s * d);
      diff_norm[std::size_t(j)] = Eigen::JacobiSVD<ComplexMatrix<double>>(diff).singularValues()[0];
    }
    for (double eps : eps_list) {
      double sup = 0;
      for (Eigen::Index j = 0; j < spec.modes(); ++j)
        sup = std::max(sup, diff_norm[std::size_t(j)] / std::pow(std::max(spec.moduli[j], 1.0), eps));
      BoundEntry e{eps, h, sup, lambda + 1.0, true};
      e.pass = e.value <= e.bound;
      if (!e.pass) rep.violations.push_back(describe("resolvent", eps, h, e.value, e.bound));
      rep.entries.push_back(e);
      if (h > 0 && sup > 0) series[eps].emplace_back(h, sup);
    }
  }

  for (double eps : eps_list) {
    const auto& pts = series[eps];
    BoundSlope sl;
    sl.eps = eps;
    if (pts.size() < 2) {
      sl.pass = false;
      rep.violations.push_back("resolvent: fewer than two positive h samples for eps=" + std::to_string(eps));
      rep.slopes.push_back(sl);
      continue;
    }
    sl.slope = fit_power_law(pts).slope;
    sl.c_min = std::numeric_limits<double>::infinity();
    for (const auto& [h, v] : pts) {
      const double c = v / std::pow(h, eps);
      sl.c_min = std::min(sl.c_min, c);
      sl.c_max = std::max(sl.c_max, c);
    }
    sl.pass = sl.slope >= eps - 0.05 && std::isfinite(sl.c_max) && sl.c_max <= 10.0 * sl.c_min;
    if (!sl.pass) {
      std::ostringstream os;
      os << "resolvent eps=" << eps << ": slope " << sl.slope << " (need >= " << eps - 0.05 << "), constant range ["
         << sl.c_min << ", " << sl.c_max << "]";
      rep.violations.push_back(os.str());
    }
    rep.slopes.push_back(sl);
  }
  return rep;
}

}  // namespace scalerk
