#pragma once

// d-component states on the scale Y_ell. Component c lives in the Sobolev
// space H_{offset_c(ell)}; the wave equation uses offsets (ell+1, ell), the
// Schrodinger equation (2 ell + alpha, 2 ell + alpha).

#include "scalerk/spectral.hpp"

#include <vector>

namespace scalerk {

/// Affine Sobolev offset: slope * ell + shift.
struct ScaleOffset {
  double slope = 1.0;
  double shift = 0.0;
  double at(double ell) const { return slope * ell + shift; }
  bool operator==(const ScaleOffset&) const = default;
};

template <typename Real = double>
class StateVector {
 public:
  using Scalar = std::complex<Real>;
  /// Rows are storage modes, columns are components.
  using Coeffs = ComplexMatrix<Real>;

  StateVector(Basis basis, int K, std::vector<ScaleOffset> offsets)
      : basis_(basis), K_(K), offsets_(std::move(offsets)) {
    detail::require_valid_truncation(K);
    if (offsets_.empty()) throw std::invalid_argument("state needs at least one component");
    coeffs_ = Coeffs::Zero(mode_count(basis, K), static_cast<Eigen::Index>(offsets_.size()));
  }

  StateVector(const std::vector<SpectralField<Real>>& components, std::vector<ScaleOffset> offsets)
      : StateVector(components.at(0).basis(), components.at(0).K(), std::move(offsets)) {
    if (components.size() != offsets_.size()) throw std::invalid_argument("one scale offset per component required");
    for (std::size_t c = 0; c < components.size(); ++c) set_component(static_cast<int>(c), components[c]);
  }

  Basis basis() const { return basis_; }
  int K() const { return K_; }
  int dim() const { return static_cast<int>(offsets_.size()); }
  Eigen::Index modes() const { return coeffs_.rows(); }
  int mode(Eigen::Index j) const { return mode_at(basis_, K_, j); }
  const std::vector<ScaleOffset>& offsets() const { return offsets_; }

  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  SpectralField<Real> component(int c) const { return SpectralField<Real>(basis_, K_, coeffs_.col(c)); }

  void set_component(int c, const SpectralField<Real>& field) {
    if (field.basis() != basis_ || field.K() != K_)
      throw std::invalid_argument("component basis/truncation differs from state");
    coeffs_.col(c) = field.coeffs();
  }

  StateVector zeros_like() const {
    StateVector out = *this;
    out.coeffs_.setZero();
    return out;
  }

  bool compatible(const StateVector& other) const {
    return basis_ == other.basis_ && K_ == other.K_ && offsets_ == other.offsets_;
  }

  StateVector& operator+=(const StateVector& rhs) {
    require_compatible(rhs);
    coeffs_ += rhs.coeffs_;
    return *this;
  }
  StateVector& operator-=(const StateVector& rhs) {
    require_compatible(rhs);
    coeffs_ -= rhs.coeffs_;
    return *this;
  }
  StateVector& operator*=(Real s) {
    coeffs_ *= s;
    return *this;
  }

  friend StateVector operator+(StateVector lhs, const StateVector& rhs) { return lhs += rhs; }
  friend StateVector operator-(StateVector lhs, const StateVector& rhs) { return lhs -= rhs; }
  friend StateVector operator*(Real s, StateVector rhs) { return rhs *= s; }

 private:
  void require_compatible(const StateVector& other) const {
    if (!compatible(other)) throw std::invalid_argument("incompatible state vectors");
  }

  Basis basis_;
  int K_;
  std::vector<ScaleOffset> offsets_;
  Coeffs coeffs_;
};

/// Squared-norm weights |k|^{2 offset_c(ell)} laid out like the coefficients.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> scale_weights(const StateVector<Real>& state, Real ell) {
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> w(state.modes(), state.dim());
  for (int c = 0; c < state.dim(); ++c) {
    const Real offset = static_cast<Real>(state.offsets()[c].at(static_cast<double>(ell)));
    for (Eigen::Index j = 0; j < state.modes(); ++j) w(j, c) = sobolev_weight(state.mode(j), offset);
  }
  return w;
}

/// Y_ell norm: sqrt(sum over components of H_{offset_c(ell)} norms squared).
template <typename Real>
Real scale_norm(const StateVector<Real>& state, Real ell) {
  if (ell < Real(0)) throw std::invalid_argument("scale index must be non-negative");
  using std::sqrt;
  return sqrt((scale_weights(state, ell).array() * state.coeffs().cwiseAbs2().array()).sum());
}

template <typename Real>
Real y_norm(const StateVector<Real>& state) {
  return scale_norm(state, Real(0));
}

/// Norm of precomputed weights; used in hot loops where the weights are cached.
template <typename Real>
Real weighted_norm(const ComplexMatrix<Real>& coeffs, const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& weights) {
  using std::sqrt;
  return sqrt((weights.array() * coeffs.cwiseAbs2().array()).sum());
}

}  // namespace scalerk
