#include "support.hpp"

#include <doctest.h>

using namespace scalerk;
using namespace testing;

namespace {

StateVector<double> shifted(const StateVector<double>& u, double theta) {
  StateVector<double> out = u;
  for (Eigen::Index j = 0; j < u.modes(); ++j) out.coeffs().row(j) *= std::exp(cd(0, u.mode(j) * theta));
  return out;
}

SpectralField<double> sampled(Basis b, int K, double (*f)(double)) { return sample_function<double>(b, K, f); }

}  // namespace

TEST_CASE("wave periodic spectrum") {
  const auto problem = build_problem<double>(wave_spec(8));
  const auto& s = problem.spectrum();
  CHECK(s.basis == Basis::Exponential);
  CHECK(s.omega == 0.0);
  CHECK(normality_defect(s) <= 1e-12);
  for (Eigen::Index j = 0; j < s.modes(); ++j) {
    const int k = s.mode(j);
    CHECK(s.moduli[j] == std::abs(k));
    Eigen::ComplexEigenSolver<ComplexMatrix<double>> eig(s.blocks[j]);
    auto ev = eig.eigenvalues();
    std::vector<double> im{ev[0].imag(), ev[1].imag()};
    std::sort(im.begin(), im.end());
    CHECK(std::abs(ev[0].real()) <= 1e-12);
    CHECK(std::abs(ev[1].real()) <= 1e-12);
    CHECK(im[0] == doctest::Approx(-std::abs(k)).epsilon(1e-12));
    CHECK(im[1] == doctest::Approx(std::abs(k)).epsilon(1e-12));
    if (k == 0) CHECK(s.blocks[j].cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("nls periodic spectrum") {
  const auto problem = build_problem<double>(nls_spec(8));
  const auto& s = problem.spectrum();
  CHECK(s.omega == 0.0);
  CHECK(normality_defect(s) <= 1e-12);
  for (Eigen::Index j = 0; j < s.modes(); ++j) {
    const int k = s.mode(j);
    CHECK(s.moduli[j] == k * k);
    // [[0,-k^2],[k^2,0]] has eigenvalues -+ i k^2
    Eigen::ComplexEigenSolver<ComplexMatrix<double>> eig(s.blocks[j]);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(eig.eigenvalues()[i].real()) <= 1e-12);
      CHECK(std::abs(std::abs(eig.eigenvalues()[i].imag()) - k * k) <= 1e-12 * (1 + k * k));
    }
  }
  CHECK(problem.offsets()[0] == ScaleOffset{2.0, 0.75});
}

TEST_CASE("dirichlet and neumann bases") {
  const auto d = build_problem<double>(wave_spec(8, {0, 1, 0, 1}, BoundaryCondition::Dirichlet));
  CHECK(d.basis() == Basis::Sine);
  CHECK(index_of(d.basis(), 8, 0) < 0);
  CHECK(d.spectrum().omega == 0.0);
  const auto n = build_problem<double>(wave_spec(8, {0, 1}, BoundaryCondition::Neumann));
  CHECK(n.basis() == Basis::Cosine);
  CHECK(n.spectrum().moduli[0] == 0.0);
}

TEST_CASE("build_problem rejects invalid specs") {
  auto nls = nls_spec(8);
  nls.alpha = 0.5;
  CHECK_THROWS_AS(build_problem<double>(nls), ProblemError);
  auto big = wave_spec(8, std::vector<double>(12, 1.0));
  CHECK_THROWS_AS(build_problem<double>(big), ProblemError);
  big.max_degree = 11;
  CHECK_NOTHROW(build_problem<double>(big));
  auto inh = wave_spec(8);
  inh.kind = ProblemKind::WaveInhomogeneous;
  inh.a = {0.5, 0.6};
  CHECK_THROWS_AS(build_problem<double>(inh), ProblemError);
  inh.a = {1.0};
  inh.b = {0.1};
  CHECK_THROWS_AS(build_problem<double>(inh), ProblemError);
}

TEST_CASE("wave nonlinearity examples") {
  const int K = 16;
  {
    const auto problem = build_problem<double>(wave_spec(K, {0.0, 1.0}));
    auto u = problem.zero_state();
    const auto sinx = sampled(Basis::Exponential, K, [](double x) { return std::sin(x); });
    u.set_component(0, sinx);
    const auto b = nonlinearity(problem, u);
    CHECK(b.component(0).coeffs().cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((b.component(1).coeffs() + sinx.coeffs()).cwiseAbs().maxCoeff() <= 1e-14);
  }
  {
    const auto problem = build_problem<double>(wave_spec(K, {}));
    auto u = problem.zero_state();
    u.set_component(1, sampled(Basis::Exponential, K, [](double) { return 1.0; }));
    const auto b = nonlinearity(problem, u);
    auto expected = problem.zero_state();
    expected.set_component(0, sampled(Basis::Exponential, K, [](double) { return 1.0; }));
    CHECK(max_abs_diff(b, expected) <= 1e-14);
  }
  {
    const auto problem = build_problem<double>(wave_spec(K, {0, 1, 0, -2}, BoundaryCondition::Dirichlet));
    CHECK(nonlinearity(problem, problem.zero_state()).coeffs().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("wave nonlinearity matches direct pointwise evaluation") {
  const int K = 32;
  const auto problem = build_problem<double>(wave_spec(K));
  std::mt19937 rng(21);
  const auto u = random_state(rng, problem, 6, 1.0);
  const auto b = nonlinearity(problem, u);
  const auto u0 = u.component(0);
  const auto expected = sample_function<double>(Basis::Exponential, K, [&](double x) {
    const double v = evaluate_exponential(u0, x).real();
    return -(v - 4 * v * v);
  });
  CHECK((b.component(1).coeffs() - expected.coeffs()).norm() <= 1e-12 * expected.coeffs().norm());
  CHECK(std::abs(b.component(0).coeff(0) - u.component(1).coeff(0)) == 0.0);
}

TEST_CASE("nls nonlinearity") {
  const int K = 16;
  const auto problem = build_problem<double>(nls_spec(K, {0.0, 1.0}));
  std::mt19937 rng(22);
  const auto u = random_state(rng, problem, 4);
  const auto b = nonlinearity(problem, u);
  const auto c1 = u.component(0), c2 = u.component(1);
  const auto e1 = sample_function<double>(Basis::Exponential, K, [&](double x) {
    const double a = evaluate_exponential(c1, x).real(), q = evaluate_exponential(c2, x).real();
    return (a * a + q * q) * q;
  });
  const auto e2 = sample_function<double>(Basis::Exponential, K, [&](double x) {
    const double a = evaluate_exponential(c1, x).real(), q = evaluate_exponential(c2, x).real();
    return -(a * a + q * q) * a;
  });
  CHECK((b.component(0).coeffs() - e1.coeffs()).norm() <= 1e-12 * e1.coeffs().norm());
  CHECK((b.component(1).coeffs() - e2.coeffs()).norm() <= 1e-12 * e2.coeffs().norm());
  CHECK(nonlinearity(problem, problem.zero_state()).coeffs().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("inhomogeneous wave folds the coefficient deviation into B") {
  const int K = 16;
  auto spec = wave_spec(K, {});
  spec.kind = ProblemKind::WaveInhomogeneous;
  spec.a = {1.0, 0.5};
  spec.b = {-0.25};
  const auto problem = build_problem<double>(spec);
  auto u = problem.zero_state();
  u.set_component(0, sampled(Basis::Exponential, K, [](double x) { return std::sin(x); }));
  // d/dx((1 + cos x/2) cos x) - u'' - u/4 = -sin(2x)/2 - sin(x)/4
  const auto expected = sampled(Basis::Exponential, K, [](double x) { return -std::sin(2 * x) / 2 - std::sin(x) / 4; });
  const auto b = nonlinearity(problem, u);
  CHECK((b.component(1).coeffs() - expected.coeffs()).norm() <= 1e-13);

  spec.a = {1.0};
  spec.b = {0.0};
  spec.potential = {0.0, 1.0, -4.0};
  const auto flat = build_problem<double>(spec);
  const auto plain = build_problem<double>(wave_spec(K));
  std::mt19937 rng(23);
  const auto w = random_state(rng, plain, 5);
  CHECK(max_abs_diff(nonlinearity(flat, w), nonlinearity(plain, w)) <= 1e-12);
}

TEST_CASE("B(0) = 0 for shipped problems") {
  for (auto bc : {BoundaryCondition::Periodic, BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
    const auto w = build_problem<double>(wave_spec(12, {0, 1, 0, -4}, bc));
    CHECK(nonlinearity(w, w.zero_state()).coeffs().cwiseAbs().maxCoeff() == 0.0);
    const auto n = build_problem<double>(nls_spec(12, {0, 1, 2}, bc));
    CHECK(nonlinearity(n, n.zero_state()).coeffs().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("nonlinearity commutes with spatial shift") {
  const int K = 32;
  std::mt19937 rng(24);
  std::uniform_real_distribution<double> angle(0, 2 * pi);
  for (const auto& spec : {wave_spec(K), nls_spec(K, {0.0, 1.0})}) {
    const auto problem = build_problem<double>(spec);
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = random_state(rng, problem, K / 4 - 1);
      const double theta = angle(rng);
      const auto lhs = nonlinearity(problem, shifted(u, theta));
      const auto rhs = shifted(nonlinearity(problem, u), theta);
      CHECK(max_abs_diff(lhs, rhs) <= 1e-10);
    }
  }
}

TEST_CASE("sine-basis closure for odd V'") {
  const int K = 32;
  std::mt19937 rng(25);
  auto spec = wave_spec(K, {0, 1, 0, -4}, BoundaryCondition::Dirichlet);
  spec.strict_bc = true;
  const auto problem = build_problem<double>(spec);
  const auto u = random_state(rng, problem, K - 1, 1.0);
  CHECK_NOTHROW(nonlinearity(problem, u));
  // the odd extension of u makes -V'(u) odd on the extended grid
  const RealVector<double> v = grid_values(u.component(0)).real();
  const int N = 2 * K;
  double asym = 0, scale = 0;
  for (int j = 1; j < N; ++j) {
    const double f = -(v[j] - 4 * v[j] * v[j] * v[j]);
    const double g = -(v[N - j] - 4 * v[N - j] * v[N - j] * v[N - j]);
    asym = std::max(asym, std::abs(f + g));
    scale = std::max(scale, std::abs(f));
  }
  CHECK(asym <= 1e-12 * scale);

  auto even = spec;
  even.potential = {0, 0, 1};
  const auto leaky = build_problem<double>(even);
  CHECK_THROWS_AS(nonlinearity(leaky, u), ProblemError);
}

TEST_CASE("exact semigroup") {
  const int K = 16;
  const auto problem = build_problem<double>(wave_spec(K));
  auto u = problem.zero_state();
  const auto sinx = sampled(Basis::Exponential, K, [](double x) { return std::sin(x); });
  u.set_component(0, sinx);
  const auto v = exact_semigroup(problem, u, pi / 2);
  CHECK(v.component(0).coeffs().cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((v.component(1).coeffs() + sinx.coeffs()).cwiseAbs().maxCoeff() <= 1e-14);

  std::mt19937 rng(26);
  const auto w = random_state(rng, problem, K - 1);
  CHECK(exact_semigroup(problem, w, 0.0).coeffs() == w.coeffs());
  CHECK_THROWS(exact_semigroup(problem, w, -1.0));

  // rotation block [[cos kt, sin(kt)/k], [-k sin kt, cos kt]]
  const double t = 0.37;
  const auto blocks = semigroup_blocks(problem.spectrum(), t);
  for (Eigen::Index j = 0; j < problem.spectrum().modes(); ++j) {
    const int k = problem.spectrum().mode(j);
    ComplexMatrix<double> expected = ComplexMatrix<double>::Identity(2, 2);
    if (k != 0) {
      const double kk = std::abs(k);
      expected << std::cos(kk * t), std::sin(kk * t) / kk, -kk * std::sin(kk * t), std::cos(kk * t);
    }
    CHECK((blocks[j] - expected).cwiseAbs().maxCoeff() <= 1e-13 * (1 + std::abs(k)));
  }

  for (const auto& spec : {wave_spec(K), nls_spec(K), wave_spec(K, {}, BoundaryCondition::Neumann)}) {
    const auto p = build_problem<double>(spec);
    const auto x = random_state(rng, p, K - 1);
    for (double s : {0.1, 0.7, 2.3}) {
      const auto lhs = exact_semigroup(p, exact_semigroup(p, x, s), 0.45);
      const auto rhs = exact_semigroup(p, x, s + 0.45);
      CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * (1 + x.coeffs().cwiseAbs().maxCoeff()));
      CHECK(std::abs(y_norm(exact_semigroup(p, x, s)) - y_norm(x)) <= 1e-12 * y_norm(x));
    }
  }
}

TEST_CASE("initial data") {
  for (const auto& spec : {wave_spec(64), nls_spec(64), wave_spec(64, {0, 1}, BoundaryCondition::Dirichlet),
                           wave_spec(64, {0, 1}, BoundaryCondition::Neumann)}) {
    const auto problem = build_problem<double>(spec);
    for (double ell : {0.0, 0.5, 1.0, 2.0, 3.0, 4.0})
      CHECK(std::abs(scale_norm(initial_data(problem, ell), ell) - 1.0) <= 1e-12);
  }
  CHECK_THROWS(initial_data(build_problem<double>(wave_spec(8)), -1.0));
  CHECK_THROWS(initial_data(build_problem<double>(wave_spec(8)), 1.0, 0.0));
}

TEST_CASE("initial data decay exponents") {
  const auto problem = build_problem<double>(wave_spec(128));
  const auto u0 = initial_data(problem, 0.0);
  const auto u3 = initial_data(problem, 3.0);
  for (int c = 0; c < 2; ++c) {
    // log|c_k| slope between k = 10 and k = 100
    auto slope = [c](const StateVector<double>& u) {
      const auto f = u.component(c);
      return (std::log(std::abs(f.coeff(100))) - std::log(std::abs(f.coeff(10)))) / std::log(10.0);
    };
    CHECK(slope(u0) - slope(u3) == doctest::Approx(3.0).epsilon(1e-10));
  }
  // wave: u decays one power faster than v
  const auto f0 = u0.component(0), f1 = u0.component(1);
  CHECK(std::abs(f1.coeff(50) / f0.coeff(50)) == doctest::Approx(50.0).epsilon(1e-10));
}

TEST_CASE("initial data is not smoother than requested") {
  // partial-sum oracle: with c_k ~ k^{-(offset+1/2+eps)}, the Y_{ell+1} norm
  // of the normalized data is sqrt(sum k^{1-2eps} / sum k^{-1-2eps}) up to a
  // K-independent factor
  const double eps = 1e-8;
  const double ell = 1.0;
  auto oracle = [eps](int K) {
    double num = 0, den = 0;
    for (int k = 1; k < K; ++k) {
      num += std::pow(k, 1 - 2 * eps);
      den += std::pow(k, -1 - 2 * eps);
    }
    return std::sqrt(num / den);
  };
  const auto small = build_problem<double>(wave_spec(64));
  const auto large = build_problem<double>(wave_spec(512));
  const double growth = scale_norm(initial_data(large, ell, eps), ell + 1) / scale_norm(initial_data(small, ell, eps), ell + 1);
  CHECK(growth == doctest::Approx(oracle(512) / oracle(64)).epsilon(1e-10));
  CHECK(growth > 6.0);
}
