#pragma once

// Per-mode block representation of a normal linear operator A on Y.
//
// A acts on storage mode j through a d x d complex block A_j. The blocks are
// stored in coefficient coordinates; they are normal with respect to the Y
// inner product, i.e. D_j A_j D_j^{-1} is normal for D_j = diag(|k|^{offset_c(0)}).

#include "scalerk/state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

namespace scalerk {

enum class Part { P, Q };

template <typename Real = double>
struct OperatorSpectrum {
  Basis basis = Basis::Exponential;
  int K = 0;
  std::vector<ScaleOffset> offsets;
  std::vector<ComplexMatrix<Real>> blocks;  // one per storage mode
  RealVector<Real> moduli;                  // |lambda| per storage mode
  Real omega = 0;                           // growth bound, max Re spec A

  Eigen::Index modes() const { return static_cast<Eigen::Index>(blocks.size()); }
  int dim() const { return static_cast<int>(offsets.size()); }
  int mode(Eigen::Index j) const { return mode_at(basis, K, j); }

  StateVector<Real> zero_state() const { return StateVector<Real>(basis, K, offsets); }

  /// Diagonal of D_j, mapping coefficients to Y-orthonormal coordinates.
  RealVector<Real> y_scaling(Eigen::Index j) const {
    RealVector<Real> d(dim());
    for (int c = 0; c < dim(); ++c) {
      using std::sqrt;
      d[c] = sqrt(sobolev_weight(mode(j), static_cast<Real>(offsets[c].at(0.0))));
    }
    return d;
  }

  /// D_j A_j D_j^{-1}.
  ComplexMatrix<Real> weighted_block(Eigen::Index j) const {
    const RealVector<Real> d = y_scaling(j);
    return d.asDiagonal() * blocks[j] * d.cwiseInverse().asDiagonal();
  }
};

/// Maximum deviation from normality over all weighted blocks.
template <typename Real>
Real normality_defect(const OperatorSpectrum<Real>& spectrum) {
  Real worst = 0;
  for (Eigen::Index j = 0; j < spectrum.modes(); ++j) {
    const ComplexMatrix<Real> b = spectrum.weighted_block(j);
    const Real scale = std::max(Real(1), b.norm() * b.norm());
    worst = std::max(worst, (b * b.adjoint() - b.adjoint() * b).norm() / scale);
  }
  return worst;
}

/// f(A_j) for a normal block, via its (diagonal) Schur form in weighted
/// coordinates; returned in coefficient coordinates.
template <typename Real, typename Fn>
ComplexMatrix<Real> normal_block_function(const OperatorSpectrum<Real>& spectrum, Eigen::Index j, Fn&& f) {
  using Scalar = std::complex<Real>;
  const int d = spectrum.dim();
  const RealVector<Real> scale = spectrum.y_scaling(j);
  const ComplexMatrix<Real> b = spectrum.weighted_block(j);
  Eigen::ComplexSchur<ComplexMatrix<Real>> schur(b);
  const ComplexMatrix<Real>& U = schur.matrixU();
  const ComplexMatrix<Real>& T = schur.matrixT();
  ComplexMatrix<Real> diag = ComplexMatrix<Real>::Zero(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = Scalar(f(T(i, i)));
  const ComplexMatrix<Real> weighted = U * diag * U.adjoint();
  return scale.cwiseInverse().asDiagonal() * weighted * scale.asDiagonal();
}

template <typename Real>
void require_matching(const OperatorSpectrum<Real>& spectrum, const StateVector<Real>& state) {
  if (state.basis() != spectrum.basis || state.K() != spectrum.K || state.dim() != spectrum.dim())
    throw std::invalid_argument("state does not match operator spectrum");
}

/// Spectral projection: P keeps modes with |lambda| <= m, Q the rest.
template <typename Real>
StateVector<Real> project(const OperatorSpectrum<Real>& spectrum, const StateVector<Real>& state, Real m, Part part) {
  if (m < Real(0)) throw std::invalid_argument("projection level must be non-negative");
  require_matching(spectrum, state);
  StateVector<Real> out = state;
  for (Eigen::Index j = 0; j < state.modes(); ++j) {
    const bool in_p = spectrum.moduli[j] <= m;
    if (in_p != (part == Part::P)) out.coeffs().row(j).setZero();
  }
  return out;
}

template <typename Real>
StateVector<Real> apply_A(const OperatorSpectrum<Real>& spectrum, const StateVector<Real>& state) {
  require_matching(spectrum, state);
  StateVector<Real> out = state.zeros_like();
  for (Eigen::Index j = 0; j < state.modes(); ++j)
    out.coeffs().row(j) = (spectrum.blocks[j] * state.coeffs().row(j).transpose()).transpose();
  return out;
}

/// |A|^ell: modes with |lambda| > 1 scaled by |lambda|^ell, the P_1 part untouched.
template <typename Real>
StateVector<Real> apply_abs_A_power(const OperatorSpectrum<Real>& spectrum, const StateVector<Real>& state, Real ell) {
  require_matching(spectrum, state);
  StateVector<Real> out = state;
  using std::pow;
  for (Eigen::Index j = 0; j < state.modes(); ++j)
    if (spectrum.moduli[j] > Real(1)) out.coeffs().row(j) *= pow(spectrum.moduli[j], ell);
  return out;
}

/// Mode-wise application of precomputed d x d matrices.
template <typename Real>
StateVector<Real> apply_blocks(const std::vector<ComplexMatrix<Real>>& blocks, const StateVector<Real>& state) {
  StateVector<Real> out = state.zeros_like();
  for (Eigen::Index j = 0; j < state.modes(); ++j)
    out.coeffs().row(j) = (blocks[j] * state.coeffs().row(j).transpose()).transpose();
  return out;
}

/// Norm of a d x d block as an operator Y_eps -> Y at mode j.
template <typename Real>
Real block_operator_norm(const OperatorSpectrum<Real>& spectrum, Eigen::Index j, const ComplexMatrix<Real>& block, Real eps) {
  const RealVector<Real> d = spectrum.y_scaling(j);
  const ComplexMatrix<Real> weighted = d.asDiagonal() * block * d.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<ComplexMatrix<Real>> svd(weighted);
  using std::pow;
  return svd.singularValues()[0] / pow(std::max(spectrum.moduli[j], Real(1)), eps);
}

}  // namespace scalerk
