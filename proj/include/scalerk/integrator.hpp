#pragma once

// Implicit Runge-Kutta time stepping for dU/dt = A U + B(U).
//
// Stages solve W = (id - h a A)^{-1} (1 U + h a B(W)) by fixed-point
// iteration; the linear part is inverted exactly mode by mode. The step is
// Psi(U) = U + h b^T (id - h a A)^{-1} (1 A U + B(W)), which equals
// S(hA) U + h b^T (id - h a A)^{-1} B(W).

#include "scalerk/problem.hpp"
#include "scalerk/tableau.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <functional>
#include <string>
#include <vector>

namespace scalerk {

struct StageSolveConfig {
  double rel_tol = 1e-12;
  int max_iter = 100;

  void validate() const {
    if (!(rel_tol > 0)) throw std::invalid_argument("stage solver rel_tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("stage solver max_iter must be at least 1");
  }
};

class StageSolveError : public std::runtime_error {
 public:
  StageSolveError(const std::string& what, int iterations, double last_update)
      : std::runtime_error(what), iterations_(iterations), last_update_(last_update) {}
  int iterations() const { return iterations_; }
  double last_update() const { return last_update_; }

 private:
  int iterations_;
  double last_update_;
};

template <typename Real = double>
struct StageVector {
  std::vector<StateVector<Real>> stages;

  int size() const { return static_cast<int>(stages.size()); }
};

/// max_i ||W^i||_Y.
template <typename Real>
Real stage_norm(const StageVector<Real>& w) {
  Real out = 0;
  for (const auto& s : w.stages) out = std::max(out, y_norm(s));
  return out;
}

/// (id - h a A)^{-1} on Y^s, factored once per (spectrum, tableau, h).
template <typename Real = double>
class StageResolvent {
 public:
  StageResolvent(const OperatorSpectrum<Real>& spectrum, const ButcherTableau<Real>& tab, Real h)
      : stages_(tab.stages()), dim_(spectrum.dim()), h_(h) {
    using CMat = ComplexMatrix<Real>;
    const int n = stages_ * dim_;
    const CMat alpha = tab.a.template cast<std::complex<Real>>();
    inverses_.reserve(spectrum.blocks.size());
    for (const auto& blk : spectrum.blocks) {
      const CMat m = CMat::Identity(n, n) - h * CMat(Eigen::kroneckerProduct(alpha, blk));
      Eigen::PartialPivLU<CMat> lu(m);
      using std::abs;
      if (!(abs(lu.determinant()) > Real(0))) throw std::domain_error("I - h (alpha kron A_k) is singular");
      inverses_.push_back(lu.inverse());
    }
  }

  Real h() const { return h_; }
  int stages() const { return stages_; }
  const ComplexMatrix<Real>& block_inverse(Eigen::Index j) const { return inverses_[static_cast<std::size_t>(j)]; }

  StageVector<Real> apply(const StageVector<Real>& rhs) const {
    StageVector<Real> out = rhs;
    const Eigen::Index modes = rhs.stages.front().modes();
    ComplexVector<Real> packed(stages_ * dim_);
    for (Eigen::Index j = 0; j < modes; ++j) {
      for (int i = 0; i < stages_; ++i) packed.segment(i * dim_, dim_) = rhs.stages[i].coeffs().row(j).transpose();
      const ComplexVector<Real> x = inverses_[static_cast<std::size_t>(j)] * packed;
      for (int i = 0; i < stages_; ++i) out.stages[i].coeffs().row(j) = x.segment(i * dim_, dim_).transpose();
    }
    return out;
  }

  /// (id - h a A)^{-1} applied to the replicated state 1 U.
  StageVector<Real> apply_replicated(const StateVector<Real>& u) const {
    return apply(StageVector<Real>{std::vector<StateVector<Real>>(static_cast<std::size_t>(stages_), u)});
  }

 private:
  int stages_;
  int dim_;
  Real h_;
  std::vector<ComplexMatrix<Real>> inverses_;
};

template <typename Real = double>
struct StageSolution {
  StageVector<Real> stages;
  int iterations = 0;
  Real last_update = 0;
};

template <typename Real = double>
struct Trajectory {
  std::vector<Real> times;
  std::vector<StateVector<Real>> states;
  std::vector<int> iterations;  // stage iterations for the step ending at each state (0 for the start)
};

template <typename Real = double>
class RungeKuttaStepper {
 public:
  using Nonlinearity = std::function<StateVector<Real>(const StateVector<Real>&)>;

  RungeKuttaStepper(const Problem<Real>& problem, ButcherTableau<Real> tab, Real h, StageSolveConfig cfg = {})
      : RungeKuttaStepper(problem.spectrum(), std::move(tab), h, cfg,
                          [&problem](const StateVector<Real>& w) { return nonlinearity(problem, w); }) {}

  RungeKuttaStepper(const OperatorSpectrum<Real>& spectrum, ButcherTableau<Real> tab, Real h, StageSolveConfig cfg,
                    Nonlinearity b)
      : spectrum_(&spectrum),
        tab_(std::move(tab)),
        h_(h),
        cfg_(cfg),
        b_(std::move(b)),
        resolvent_(spectrum, tab_, h),
        y_weights_(scale_weights(spectrum.zero_state(), Real(0))) {
    if (h < Real(0)) throw std::invalid_argument("step size must be non-negative");
    cfg_.validate();
  }

  Real h() const { return h_; }
  const ButcherTableau<Real>& tableau() const { return tab_; }
  const StageResolvent<Real>& resolvent() const { return resolvent_; }

  /// Pi(W) = (id - h a A)^{-1} (1 U + h a B(W)).
  StageVector<Real> fixed_point_map(const StateVector<Real>& u, const StageVector<Real>& w) const {
    return resolvent_.apply(stage_rhs(u, evaluate_b(w)));
  }

  StageSolution<Real> solve_stages(const StateVector<Real>& u) const {
    StageSolution<Real> sol;
    sol.stages = resolvent_.apply_replicated(u);
    const Real tol = Real(cfg_.rel_tol) * (Real(1) + weighted_norm(u.coeffs(), y_weights_));
    for (int iter = 1; iter <= cfg_.max_iter; ++iter) {
      StageVector<Real> next = fixed_point_map(u, sol.stages);
      Real update = 0;
      for (int i = 0; i < next.size(); ++i) update = std::max(update, weighted_norm<Real>(next.stages[i].coeffs() - sol.stages.stages[i].coeffs(), y_weights_));
      sol.stages = std::move(next);
      sol.iterations = iter;
      sol.last_update = update;
      if (update <= tol) return sol;
    }
    throw StageSolveError("stage iteration did not converge in " + std::to_string(cfg_.max_iter) +
                              " iterations (last update " + std::to_string(static_cast<double>(sol.last_update)) +
                              "); reduce h",
                          sol.iterations, static_cast<double>(sol.last_update));
  }

  StateVector<Real> step(const StateVector<Real>& u, int* iterations = nullptr) const {
    const StageSolution<Real> sol = solve_stages(u);
    if (iterations) *iterations = sol.iterations;
    StageVector<Real> slopes = evaluate_b(sol.stages);
    const StateVector<Real> au = apply_A(*spectrum_, u);
    for (auto& s : slopes.stages) s += au;
    const StageVector<Real> solved = resolvent_.apply(slopes);
    StateVector<Real> out = u;
    for (int i = 0; i < solved.size(); ++i) out.coeffs() += (h_ * tab_.b[i]) * solved.stages[i].coeffs();
    return out;
  }

  /// States at t_n = n h for n = 0 .. steps, keeping every stride-th (and the last).
  Trajectory<Real> integrate(const StateVector<Real>& u0, int steps, int stride = 1) const {
    if (steps < 0) throw std::invalid_argument("number of steps must be non-negative");
    if (stride < 1) throw std::invalid_argument("stride must be at least 1");
    Trajectory<Real> traj;
    traj.times.push_back(Real(0));
    traj.states.push_back(u0);
    traj.iterations.push_back(0);
    StateVector<Real> u = u0;
    for (int n = 1; n <= steps; ++n) {
      int iters = 0;
      try {
        u = step(u, &iters);
      } catch (const StageSolveError& e) {
        throw StageSolveError(std::string("step ") + std::to_string(n) + ": " + e.what(), e.iterations(),
                              e.last_update());
      }
      if (n % stride == 0 || n == steps) {
        traj.times.push_back(Real(n) * h_);
        traj.states.push_back(u);
        traj.iterations.push_back(iters);
      }
    }
    return traj;
  }

 private:
  StageVector<Real> evaluate_b(const StageVector<Real>& w) const {
    StageVector<Real> out;
    out.stages.reserve(w.stages.size());
    for (const auto& s : w.stages) out.stages.push_back(b_(s));
    return out;
  }

  StageVector<Real> stage_rhs(const StateVector<Real>& u, const StageVector<Real>& bw) const {
    StageVector<Real> rhs{std::vector<StateVector<Real>>(bw.stages.size(), u)};
    for (int i = 0; i < tab_.stages(); ++i)
      for (int j = 0; j < tab_.stages(); ++j)
        if (tab_.a(i, j) != Real(0)) rhs.stages[i].coeffs() += (h_ * tab_.a(i, j)) * bw.stages[j].coeffs();
    return rhs;
  }

  const OperatorSpectrum<Real>* spectrum_;
  ButcherTableau<Real> tab_;
  Real h_;
  StageSolveConfig cfg_;
  Nonlinearity b_;
  StageResolvent<Real> resolvent_;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> y_weights_;
};

template <typename Real>
StageSolution<Real> solve_stages(const Problem<Real>& problem, const StateVector<Real>& u, Real h,
                                 const ButcherTableau<Real>& tab, const StageSolveConfig& cfg = {}) {
  return RungeKuttaStepper<Real>(problem, tab, h, cfg).solve_stages(u);
}

template <typename Real>
StateVector<Real> step(const Problem<Real>& problem, const StateVector<Real>& u, Real h, const ButcherTableau<Real>& tab,
                       const StageSolveConfig& cfg = {}) {
  return RungeKuttaStepper<Real>(problem, tab, h, cfg).step(u);
}

template <typename Real>
Trajectory<Real> integrate(const Problem<Real>& problem, const StateVector<Real>& u0, Real h, int steps,
                           const ButcherTableau<Real>& tab, const StageSolveConfig& cfg = {}, int stride = 1) {
  return RungeKuttaStepper<Real>(problem, tab, h, cfg).integrate(u0, steps, stride);
}

/// Per-mode blocks of the rational map S(hA_k), evaluated on the eigenvalues.
template <typename Real>
std::vector<ComplexMatrix<Real>> stability_blocks(const OperatorSpectrum<Real>& spectrum, const ButcherTableau<Real>& tab,
                                                  Real h) {
  std::vector<ComplexMatrix<Real>> out;
  out.reserve(spectrum.blocks.size());
  for (Eigen::Index j = 0; j < spectrum.modes(); ++j)
    out.push_back(normal_block_function(spectrum, j, [&](std::complex<Real> z) { return stability_function(tab, h * z); }));
  return out;
}

}  // namespace scalerk
