#pragma once

#include "scalerk/problem.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace testing {

using scalerk::Basis;
using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Real-valued trigonometric polynomial with random coefficients for |k| <= band.
inline scalerk::SpectralField<double> random_real_field(std::mt19937& rng, Basis basis, int K, int band,
                                                        double decay = 0.0) {
  std::normal_distribution<double> g;
  scalerk::SpectralField<double> f(basis, K);
  if (basis == Basis::Exponential) {
    f.set_coeff(0, g(rng));
    for (int k = 1; k <= band; ++k) {
      const cd c = cd(g(rng), g(rng)) * std::pow(double(k), -decay);
      f.set_coeff(k, c);
      f.set_coeff(-k, std::conj(c));
    }
  } else {
    for (int k = basis == Basis::Sine ? 1 : 0; k <= band; ++k) f.set_coeff(k, g(rng) * std::pow(std::max(1.0, double(k)), -decay));
  }
  return f;
}

inline scalerk::StateVector<double> random_state(std::mt19937& rng, const scalerk::Problem<double>& problem, int band,
                                                 double decay = 0.0) {
  auto s = problem.zero_state();
  for (int c = 0; c < s.dim(); ++c) s.set_component(c, random_real_field(rng, problem.basis(), problem.K(), band, decay));
  return s;
}

/// Direct evaluation of (2 pi)^{-1/2} sum_k c_k e^{ikx} for an exponential-basis field.
inline cd evaluate_exponential(const scalerk::SpectralField<double>& f, double x) {
  cd sum = 0;
  for (Eigen::Index j = 0; j < f.size(); ++j) sum += f.coeffs()[j] * std::exp(cd(0, f.mode(j) * x));
  return sum / std::sqrt(2 * pi);
}

inline scalerk::ProblemSpec wave_spec(int K, std::vector<double> potential = {0.0, 1.0, -4.0},
                                      scalerk::BoundaryCondition bc = scalerk::BoundaryCondition::Periodic) {
  scalerk::ProblemSpec s;
  s.K = K;
  s.potential = std::move(potential);
  s.bc = bc;
  return s;
}

inline scalerk::ProblemSpec nls_spec(int K, std::vector<double> potential = {0.0, 1.0},
                                     scalerk::BoundaryCondition bc = scalerk::BoundaryCondition::Periodic) {
  scalerk::ProblemSpec s = wave_spec(K, std::move(potential), bc);
  s.kind = scalerk::ProblemKind::Nls;
  return s;
}

inline double max_abs_diff(const scalerk::StateVector<double>& a, const scalerk::StateVector<double>& b) {
  return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

}  // namespace testing
