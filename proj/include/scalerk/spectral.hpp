#pragma once

// Scalar fields on a 1-D domain represented by spectral coefficients.
//
// Three bases share a single transform kernel:
//   Exponential  e^{ikx}/sqrt(2pi) on [0,2pi], modes -K+1 .. K-1
//   Sine         sqrt(2/pi) sin(kx) on [0,pi], modes 1 .. K-1
//   Cosine       1/sqrt(pi), sqrt(2/pi) cos(kx) on [0,pi], modes 0 .. K-1
// Sine and cosine fields are transformed through their odd / even extension
// to [0,2pi], sampled on the N = 2K point grid x_j = 2 pi j / N. The Nyquist
// mode k = K is never stored.

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scalerk {

enum class Basis { Exponential, Sine, Cosine };

inline std::string to_string(Basis basis) {
  switch (basis) {
    case Basis::Exponential: return "exponential";
    case Basis::Sine: return "sine";
    case Basis::Cosine: return "cosine";
  }
  return "unknown";
}

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Number of stored coefficients for a basis truncated at K.
inline Eigen::Index mode_count(Basis basis, int K) {
  switch (basis) {
    case Basis::Exponential: return 2 * K - 1;
    case Basis::Sine: return K - 1;
    case Basis::Cosine: return K;
  }
  return 0;
}

/// Wavenumber held at storage index j.
inline int mode_at(Basis basis, int K, Eigen::Index j) {
  switch (basis) {
    case Basis::Exponential: return static_cast<int>(j) - (K - 1);
    case Basis::Sine: return static_cast<int>(j) + 1;
    case Basis::Cosine: return static_cast<int>(j);
  }
  return 0;
}

/// Storage index of wavenumber k, or -1 when k is not representable.
inline Eigen::Index index_of(Basis basis, int K, int k) {
  switch (basis) {
    case Basis::Exponential: return (k > -K && k < K) ? k + (K - 1) : -1;
    case Basis::Sine: return (k >= 1 && k < K) ? k - 1 : -1;
    case Basis::Cosine: return (k >= 0 && k < K) ? k : -1;
  }
  return -1;
}

/// Sobolev weight |k|^{2 ell}, with the zero mode unweighted.
template <typename Real>
Real sobolev_weight(int k, Real ell) {
  using std::pow;
  if (k == 0) return Real(1);
  return pow(Real(std::abs(k)), Real(2) * ell);
}

namespace detail {

template <typename Real>
Eigen::FFT<Real>& fft_engine() {
  thread_local Eigen::FFT<Real> engine;
  return engine;
}

inline void require_valid_truncation(int K) {
  if (K < 2) throw std::invalid_argument("spectral truncation K must be at least 2, got " + std::to_string(K));
}

}  // namespace detail

template <typename Real = double>
class SpectralField {
 public:
  using Scalar = std::complex<Real>;
  using Coeffs = ComplexVector<Real>;

  SpectralField(Basis basis, int K) : basis_(basis), K_(K) {
    detail::require_valid_truncation(K);
    coeffs_ = Coeffs::Zero(mode_count(basis, K));
  }

  SpectralField(Basis basis, int K, Coeffs coeffs) : basis_(basis), K_(K), coeffs_(std::move(coeffs)) {
    detail::require_valid_truncation(K);
    if (coeffs_.size() != mode_count(basis, K))
      throw std::invalid_argument("coefficient array does not match basis size");
  }

  Basis basis() const { return basis_; }
  int K() const { return K_; }
  int grid_size() const { return 2 * K_; }
  Eigen::Index size() const { return coeffs_.size(); }
  int mode(Eigen::Index j) const { return mode_at(basis_, K_, j); }

  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  /// Coefficient of wavenumber k (zero when not representable).
  Scalar coeff(int k) const {
    const auto j = index_of(basis_, K_, k);
    return j < 0 ? Scalar(0) : coeffs_[j];
  }
  void set_coeff(int k, Scalar value) {
    const auto j = index_of(basis_, K_, k);
    if (j < 0) throw std::out_of_range("mode " + std::to_string(k) + " not representable in " + to_string(basis_) + " basis");
    coeffs_[j] = value;
  }

 private:
  Basis basis_;
  int K_;
  Coeffs coeffs_;
};

// -- transforms -------------------------------------------------------------

/// Normalized exponential coefficients c_k of the (extended) field on
/// [0,2pi], u(x) = (2pi)^{-1/2} sum c_k e^{ikx}, in FFT order of length 2K.
template <typename Real>
ComplexVector<Real> extended_coefficients(const SpectralField<Real>& field) {
  using Scalar = std::complex<Real>;
  const int K = field.K();
  const int N = 2 * K;
  ComplexVector<Real> ext = ComplexVector<Real>::Zero(N);
  const auto& c = field.coeffs();
  const Scalar I(0, 1);
  switch (field.basis()) {
    case Basis::Exponential:
      for (int k = -K + 1; k < K; ++k) ext[(k + N) % N] = c[k + K - 1];
      break;
    case Basis::Sine:
      for (int k = 1; k < K; ++k) {
        ext[k] = -I * c[k - 1];
        ext[N - k] = I * c[k - 1];
      }
      break;
    case Basis::Cosine:
      ext[0] = std::sqrt(Real(2)) * c[0];
      for (int k = 1; k < K; ++k) {
        ext[k] = c[k];
        ext[N - k] = c[k];
      }
      break;
  }
  return ext;
}

/// Orthogonal projection of extended exponential coefficients onto a basis.
/// For sine / cosine the opposite-parity part is discarded.
template <typename Real>
SpectralField<Real> from_extended_coefficients(Basis basis, int K, const ComplexVector<Real>& ext) {
  using Scalar = std::complex<Real>;
  const int N = 2 * K;
  if (ext.size() != N) throw std::invalid_argument("extended coefficient array must have length 2K");
  SpectralField<Real> field(basis, K);
  auto& c = field.coeffs();
  const Scalar I(0, 1);
  switch (basis) {
    case Basis::Exponential:
      for (int k = -K + 1; k < K; ++k) c[k + K - 1] = ext[(k + N) % N];
      break;
    case Basis::Sine:
      for (int k = 1; k < K; ++k) c[k - 1] = (I * ext[k] - I * ext[N - k]) / Real(2);
      break;
    case Basis::Cosine:
      c[0] = ext[0] / std::sqrt(Real(2));
      for (int k = 1; k < K; ++k) c[k] = (ext[k] + ext[N - k]) / Real(2);
      break;
  }
  return field;
}

/// Extended-grid samples u(x_j), x_j = 2 pi j / N, j = 0 .. N-1.
template <typename Real>
ComplexVector<Real> grid_values(const SpectralField<Real>& field) {
  const int N = field.grid_size();
  ComplexVector<Real> ext = extended_coefficients(field);
  ComplexVector<Real> values(N);
  detail::fft_engine<Real>().inv(values, ext);
  values *= Real(N) / std::sqrt(Real(2) * std::numbers::pi_v<Real>);
  return values;
}

template <typename Real>
ComplexVector<Real> grid_to_extended(const ComplexVector<Real>& values) {
  const auto N = values.size();
  ComplexVector<Real> ext(N);
  detail::fft_engine<Real>().fwd(ext, values);
  ext *= std::sqrt(Real(2) * std::numbers::pi_v<Real>) / Real(N);
  return ext;
}

/// Inverse of grid_values: transform extended-grid samples into a basis.
template <typename Real>
SpectralField<Real> from_grid_values(Basis basis, int K, const ComplexVector<Real>& values) {
  if (values.size() != 2 * K) throw std::invalid_argument("grid sample array must have length 2K");
  return from_extended_coefficients(basis, K, grid_to_extended(values));
}

/// Points of the physical domain at which a field is sampled:
/// 2K points on [0,2pi) for Exponential, K+1 points on [0,pi] otherwise.
template <typename Real = double>
RealVector<Real> domain_points(Basis basis, int K) {
  const Real pi = std::numbers::pi_v<Real>;
  const int count = basis == Basis::Exponential ? 2 * K : K + 1;
  RealVector<Real> x(count);
  for (int j = 0; j < count; ++j) x[j] = pi * Real(j) / Real(K);
  return x;
}

/// Field from samples on domain_points(basis, K).
template <typename Real>
SpectralField<Real> from_samples(Basis basis, int K, const ComplexVector<Real>& samples) {
  const int N = 2 * K;
  if (basis == Basis::Exponential) return from_grid_values(basis, K, samples);
  if (samples.size() != K + 1) throw std::invalid_argument("sine/cosine samples must cover K+1 points on [0,pi]");
  ComplexVector<Real> values(N);
  const Real sign = basis == Basis::Sine ? Real(-1) : Real(1);
  for (int j = 0; j <= K; ++j) values[j] = samples[j];
  for (int j = 1; j < K; ++j) values[N - j] = sign * samples[j];
  if (basis == Basis::Sine) {
    values[0] = 0;
    values[K] = 0;
  }
  return from_grid_values(basis, K, values);
}

template <typename Real, typename Fn>
SpectralField<Real> sample_function(Basis basis, int K, Fn&& f) {
  const auto x = domain_points<Real>(basis, K);
  ComplexVector<Real> samples(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) samples[j] = f(x[j]);
  return from_samples(basis, K, samples);
}

/// Samples on domain_points(basis, K).
template <typename Real>
ComplexVector<Real> physical_samples(const SpectralField<Real>& field) {
  ComplexVector<Real> values = grid_values(field);
  if (field.basis() == Basis::Exponential) return values;
  return values.head(field.K() + 1);
}

// -- norms and products -----------------------------------------------------

/// H_ell norm: sqrt(|c_0|^2 + sum_{k != 0} |k|^{2 ell} |c_k|^2).
template <typename Real>
Real sobolev_norm(const SpectralField<Real>& field, Real ell) {
  if (ell < Real(0)) throw std::invalid_argument("Sobolev index must be non-negative");
  Real sum = 0;
  for (Eigen::Index j = 0; j < field.size(); ++j) sum += sobolev_weight(field.mode(j), ell) * std::norm(field.coeffs()[j]);
  using std::sqrt;
  return sqrt(sum);
}

/// Basis of a pointwise product, following the parity of the factors.
inline Basis product_basis(Basis lhs, Basis rhs) {
  if (lhs == Basis::Exponential || rhs == Basis::Exponential) {
    if (lhs != rhs) throw std::invalid_argument("cannot multiply exponential-basis field with sine/cosine field");
    return Basis::Exponential;
  }
  return lhs == rhs ? Basis::Cosine : Basis::Sine;
}

/// Zero every mode with |k| above two thirds of the truncation.
template <typename Real>
void apply_two_thirds_rule(SpectralField<Real>& field) {
  const int cutoff = (2 * field.K()) / 3;
  for (Eigen::Index j = 0; j < field.size(); ++j)
    if (std::abs(field.mode(j)) > cutoff) field.coeffs()[j] = 0;
}

/// Collocation product: both factors evaluated on the 2K-point grid,
/// multiplied, transformed back. No dealiasing unless requested.
template <typename Real>
SpectralField<Real> pointwise_multiply(const SpectralField<Real>& u, const SpectralField<Real>& v, bool dealias = false) {
  if (u.K() != v.K()) throw std::invalid_argument("pointwise_multiply requires equal truncation");
  const Basis basis = product_basis(u.basis(), v.basis());
  if (!dealias) {
    ComplexVector<Real> values = grid_values(u).cwiseProduct(grid_values(v));
    return from_grid_values(basis, u.K(), values);
  }
  SpectralField<Real> uf = u, vf = v;
  apply_two_thirds_rule(uf);
  apply_two_thirds_rule(vf);
  ComplexVector<Real> values = grid_values(uf).cwiseProduct(grid_values(vf));
  auto out = from_grid_values(basis, u.K(), values);
  apply_two_thirds_rule(out);
  return out;
}

}  // namespace scalerk
