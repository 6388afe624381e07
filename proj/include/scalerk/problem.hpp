#pragma once

// Semilinear evolution problems dU/dt = A U + B(U) on a 1-D domain.

#include "scalerk/spectrum.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace scalerk {

enum class ProblemKind { Wave, WaveInhomogeneous, Nls };
enum class BoundaryCondition { Periodic, Dirichlet, Neumann };

inline std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Wave: return "wave";
    case ProblemKind::WaveInhomogeneous: return "wave_inhomogeneous";
    case ProblemKind::Nls: return "nls";
  }
  return "unknown";
}

inline std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Periodic: return "periodic";
    case BoundaryCondition::Dirichlet: return "dirichlet";
    case BoundaryCondition::Neumann: return "neumann";
  }
  return "unknown";
}

inline Basis basis_for(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Periodic: return Basis::Exponential;
    case BoundaryCondition::Dirichlet: return Basis::Sine;
    case BoundaryCondition::Neumann: return Basis::Cosine;
  }
  return Basis::Exponential;
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Wave;
  BoundaryCondition bc = BoundaryCondition::Periodic;
  // Wave: coefficients of V'(u) = sum_j c_j u^j.
  // NLS:  coefficients of P in dV/d(conj u) = P(|u|^2) u.
  std::vector<double> potential{0.0, 1.0, -4.0};
  // wave_inhomogeneous: a(x) = sum_j a_j cos(jx), likewise b(x).
  std::vector<double> a{1.0};
  std::vector<double> b{0.0};
  double alpha = 0.75;
  int K = 500;
  int max_degree = 10;
  bool dealias = false;
  bool strict_bc = false;
};

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Real = double>
class Problem {
 public:
  explicit Problem(ProblemSpec spec) : spec_(std::move(spec)) {
    validate();
    assemble();
  }

  const ProblemSpec& spec() const { return spec_; }
  const OperatorSpectrum<Real>& spectrum() const { return spectrum_; }
  int dim() const { return 2; }
  Basis basis() const { return spectrum_.basis; }
  int K() const { return spec_.K; }
  const std::vector<ScaleOffset>& offsets() const { return spectrum_.offsets; }
  StateVector<Real> zero_state() const { return spectrum_.zero_state(); }

  /// Coefficient fields sampled on the extended grid (wave_inhomogeneous only).
  const RealVector<Real>& a_grid() const { return a_grid_; }
  const RealVector<Real>& b_grid() const { return b_grid_; }

 private:
  void validate() const {
    if (spec_.K < 2) throw ProblemError("K must be at least 2");
    if (spec_.potential.size() > static_cast<std::size_t>(spec_.max_degree) + 1)
      throw ProblemError("potential degree " + std::to_string(spec_.potential.size() - 1) + " exceeds maximum " +
                         std::to_string(spec_.max_degree));
    if (spec_.kind == ProblemKind::Nls && !(spec_.alpha > 0.5))
      throw ProblemError("nls requires alpha > 1/2, got " + std::to_string(spec_.alpha));
    if (spec_.kind == ProblemKind::WaveInhomogeneous && spec_.bc != BoundaryCondition::Periodic)
      throw ProblemError("wave_inhomogeneous supports periodic boundary conditions only");
  }

  static RealVector<Real> cosine_series_on_grid(const std::vector<double>& coeffs, int K) {
    const int N = 2 * K;
    RealVector<Real> values = RealVector<Real>::Zero(N);
    for (int i = 0; i < N; ++i) {
      const Real x = Real(2) * std::numbers::pi_v<Real> * Real(i) / Real(N);
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        using std::cos;
        values[i] += Real(coeffs[j]) * cos(Real(j) * x);
      }
    }
    return values;
  }

  void assemble() {
    auto& s = spectrum_;
    s.basis = basis_for(spec_.bc);
    s.K = spec_.K;
    const bool nls = spec_.kind == ProblemKind::Nls;
    if (nls)
      s.offsets = {ScaleOffset{2.0, spec_.alpha}, ScaleOffset{2.0, spec_.alpha}};
    else
      s.offsets = {ScaleOffset{1.0, 1.0}, ScaleOffset{1.0, 0.0}};

    const Eigen::Index n = mode_count(s.basis, s.K);
    s.blocks.assign(static_cast<std::size_t>(n), ComplexMatrix<Real>::Zero(2, 2));
    s.moduli.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Real k = Real(s.mode(j));
      auto& blk = s.blocks[static_cast<std::size_t>(j)];
      if (nls) {
        blk(0, 1) = -k * k;
        blk(1, 0) = k * k;
        s.moduli[j] = k * k;
      } else {
        // zero mode of the wave operator is a Jordan block, folded into B
        if (k != Real(0)) {
          blk(0, 1) = 1;
          blk(1, 0) = -k * k;
        }
        using std::abs;
        s.moduli[j] = abs(k);
      }
    }
    s.omega = growth_bound(s);

    if (spec_.kind == ProblemKind::WaveInhomogeneous) {
      a_grid_ = cosine_series_on_grid(spec_.a, spec_.K);
      b_grid_ = cosine_series_on_grid(spec_.b, spec_.K);
      if (a_grid_.minCoeff() <= Real(0)) throw ProblemError("coefficient a(x) must be positive on the grid");
      if (b_grid_.maxCoeff() > Real(0)) throw ProblemError("coefficient b(x) must be non-positive on the grid");
    }
  }

  static Real growth_bound(const OperatorSpectrum<Real>& s) {
    bool skew = true;
    Real omega = -std::numeric_limits<Real>::infinity();
    for (Eigen::Index j = 0; j < s.modes(); ++j) {
      const ComplexMatrix<Real> b = s.weighted_block(j);
      if ((b + b.adjoint()).norm() != Real(0)) skew = false;
      Eigen::ComplexEigenSolver<ComplexMatrix<Real>> eig(b, false);
      omega = std::max(omega, eig.eigenvalues().real().maxCoeff());
    }
    return skew ? Real(0) : omega;
  }

  ProblemSpec spec_;
  OperatorSpectrum<Real> spectrum_;
  RealVector<Real> a_grid_;
  RealVector<Real> b_grid_;
};

template <typename Real = double>
Problem<Real> build_problem(const ProblemSpec& spec) {
  return Problem<Real>(spec);
}

namespace detail {

template <typename Real>
Real horner(const std::vector<double>& coeffs, Real x) {
  Real acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + Real(*it);
  return acc;
}

/// Real point values of a component on the extended grid.
template <typename Real>
RealVector<Real> real_grid(const StateVector<Real>& state, int c) {
  return grid_values(state.component(c)).real();
}

/// Relative size of the opposite-parity part discarded when projecting
/// extended coefficients onto a sine or cosine basis.
template <typename Real>
Real parity_leakage(Basis basis, int K, const ComplexVector<Real>& ext) {
  if (basis == Basis::Exponential) return 0;
  const auto kept = extended_coefficients(from_extended_coefficients(basis, K, ext));
  const Real total = ext.norm();
  return total == Real(0) ? Real(0) : (ext - kept).norm() / total;
}

template <typename Real>
SpectralField<Real> field_from_grid(const Problem<Real>& problem, const RealVector<Real>& values) {
  const ComplexVector<Real> ext = grid_to_extended(ComplexVector<Real>(values.template cast<std::complex<Real>>()));
  if (problem.spec().strict_bc) {
    const Real leak = parity_leakage(problem.basis(), problem.K(), ext);
    if (leak > Real(1e-10))
      throw ProblemError("nonlinearity leaks " + std::to_string(static_cast<double>(leak)) +
                         " of its norm out of the " + to_string(problem.basis()) + " basis");
  }
  auto field = from_extended_coefficients(problem.basis(), problem.K(), ext);
  if (problem.spec().dealias) apply_two_thirds_rule(field);
  return field;
}

template <typename Real>
SpectralField<Real> derivative(const SpectralField<Real>& f) {
  SpectralField<Real> out(f.basis(), f.K());
  const std::complex<Real> I(0, 1);
  for (Eigen::Index j = 0; j < f.size(); ++j) out.coeffs()[j] = I * Real(f.mode(j)) * f.coeffs()[j];
  return out;
}

}  // namespace detail

/// B(U). Wave: (P_0 A~ U, -V'(u)); NLS: (P(|u|^2) u_2, -P(|u|^2) u_1).
template <typename Real>
StateVector<Real> nonlinearity(const Problem<Real>& problem, const StateVector<Real>& state) {
  require_matching(problem.spectrum(), state);
  const auto& spec = problem.spec();
  StateVector<Real> out = state.zeros_like();

  if (spec.kind == ProblemKind::Nls) {
    const RealVector<Real> u1 = detail::real_grid(state, 0);
    const RealVector<Real> u2 = detail::real_grid(state, 1);
    RealVector<Real> p(u1.size());
    for (Eigen::Index i = 0; i < u1.size(); ++i) p[i] = detail::horner(spec.potential, u1[i] * u1[i] + u2[i] * u2[i]);
    out.set_component(0, detail::field_from_grid(problem, RealVector<Real>(p.cwiseProduct(u2))));
    out.set_component(1, detail::field_from_grid(problem, RealVector<Real>(-p.cwiseProduct(u1))));
    return out;
  }

  const RealVector<Real> u = detail::real_grid(state, 0);
  RealVector<Real> force(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) force[i] = -detail::horner(spec.potential, u[i]);

  if (spec.kind == ProblemKind::WaveInhomogeneous) {
    const SpectralField<Real> u_field = state.component(0);
    const RealVector<Real> ux = grid_values(detail::derivative(u_field)).real();
    const RealVector<Real> flux = problem.a_grid().cwiseProduct(ux);
    const auto flux_field = from_grid_values(problem.basis(), problem.K(),
                                             ComplexVector<Real>(flux.template cast<std::complex<Real>>()));
    const RealVector<Real> div = grid_values(detail::derivative(flux_field)).real();
    const RealVector<Real> uxx = grid_values(detail::derivative(detail::derivative(u_field))).real();
    force += div + problem.b_grid().cwiseProduct(u) - uxx;
  }
  out.set_component(1, detail::field_from_grid(problem, force));

  const auto zero = index_of(state.basis(), state.K(), 0);
  if (zero >= 0) out.coeffs()(zero, 0) = state.coeffs()(zero, 1);
  return out;
}

/// Per-mode blocks of e^{tA}.
template <typename Real>
std::vector<ComplexMatrix<Real>> semigroup_blocks(const OperatorSpectrum<Real>& spectrum, Real t) {
  std::vector<ComplexMatrix<Real>> out;
  out.reserve(spectrum.blocks.size());
  if (t == Real(0)) {
    for (const auto& b : spectrum.blocks) out.push_back(ComplexMatrix<Real>::Identity(b.rows(), b.cols()));
    return out;
  }
  for (Eigen::Index j = 0; j < spectrum.modes(); ++j)
    out.push_back(normal_block_function(spectrum, j, [t](std::complex<Real> z) { return std::exp(t * z); }));
  return out;
}

template <typename Real>
StateVector<Real> exact_semigroup(const Problem<Real>& problem, const StateVector<Real>& state, Real t) {
  if (t < Real(0)) throw std::invalid_argument("semigroup time must be non-negative");
  require_matching(problem.spectrum(), state);
  if (t == Real(0)) return state;
  return apply_blocks(semigroup_blocks(problem.spectrum(), t), state);
}

/// Rough initial data in Y_ell: component c carries
/// sum_{k=1}^{K-1} k^{-(offset_c(ell) + 1/2 + eps)} (cos kx + sin kx),
/// with the term of the wrong parity dropped on [0,pi]; the state is scaled
/// so that its Y_ell norm is one.
template <typename Real>
StateVector<Real> initial_data(const Problem<Real>& problem, Real ell, Real epsilon = Real(1e-8)) {
  if (ell < Real(0)) throw std::invalid_argument("initial data regularity must be non-negative");
  if (!(epsilon > Real(0))) throw std::invalid_argument("initial data regularizer must be positive");
  using Scalar = std::complex<Real>;
  using std::pow;
  using std::sqrt;
  const Real pi = std::numbers::pi_v<Real>;
  const int K = problem.K();
  StateVector<Real> state = problem.zero_state();
  for (int c = 0; c < state.dim(); ++c) {
    const Real decay = Real(state.offsets()[c].at(static_cast<double>(ell))) + Real(0.5) + epsilon;
    SpectralField<Real> field(state.basis(), K);
    for (int k = 1; k < K; ++k) {
      const Real amp = pow(Real(k), -decay);
      switch (state.basis()) {
        case Basis::Exponential:
          field.set_coeff(k, amp * sqrt(Real(2) * pi) * Scalar(0.5, -0.5));
          field.set_coeff(-k, amp * sqrt(Real(2) * pi) * Scalar(0.5, 0.5));
          break;
        case Basis::Sine:
        case Basis::Cosine:
          field.set_coeff(k, amp * sqrt(pi / Real(2)));
          break;
      }
    }
    state.set_component(c, field);
  }
  state *= Real(1) / scale_norm(state, ell);
  return state;
}

}  // namespace scalerk
