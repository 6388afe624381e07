#pragma once

// Butcher tableaux, order conditions and the A-stability audit.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalerk {

template <typename Real = double>
struct ButcherTableau {
  std::string name;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> a;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> b;
  int order = 1;

  int stages() const { return static_cast<int>(b.size()); }
  Eigen::Matrix<Real, Eigen::Dynamic, 1> c() const { return a.rowwise().sum(); }
};

class TableauError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct RootedTree {
  int order;
  std::vector<std::size_t> children;  // indices into the tree list, non-increasing
};

/// All rooted trees up to max_order, generated as multisets of smaller trees.
inline std::vector<RootedTree> rooted_trees(int max_order) {
  std::vector<RootedTree> trees;
  if (max_order < 1) return trees;
  trees.push_back({1, {}});
  for (int n = 2; n <= max_order; ++n) {
    const std::size_t available = trees.size();
    std::vector<std::size_t> current;
    std::vector<RootedTree> fresh;
    auto recurse = [&](auto&& self, int remaining, std::size_t max_index) -> void {
      for (std::size_t idx = max_index + 1; idx-- > 0;) {
        const int sub = trees[idx].order;
        if (sub > remaining) continue;
        current.push_back(idx);
        if (sub == remaining)
          fresh.push_back({n, current});
        else
          self(self, remaining - sub, idx);
        current.pop_back();
      }
    };
    recurse(recurse, n - 1, available - 1);
    trees.insert(trees.end(), fresh.begin(), fresh.end());
  }
  return trees;
}

}  // namespace detail

/// Number of rooted trees of each order 1..max_order.
inline std::vector<int> rooted_tree_counts(int max_order) {
  std::vector<int> counts(static_cast<std::size_t>(std::max(max_order, 0)), 0);
  for (const auto& t : detail::rooted_trees(max_order)) ++counts[static_cast<std::size_t>(t.order - 1)];
  return counts;
}

/// max over rooted trees t with |t| <= p of |b^T Phi(t) - 1/gamma(t)|.
template <typename Real>
Real order_condition_residual(const ButcherTableau<Real>& tab, int p) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const auto trees = detail::rooted_trees(p);
  std::vector<Vec> phi(trees.size());
  std::vector<Real> gamma(trees.size());
  Real worst = 0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    Vec w = Vec::Ones(tab.stages());
    Real g = Real(trees[t].order);
    for (auto child : trees[t].children) {
      w = w.cwiseProduct(tab.a * phi[child]);
      g *= gamma[child];
    }
    phi[t] = w;
    gamma[t] = g;
    using std::abs;
    worst = std::max(worst, abs(tab.b.dot(w) - Real(1) / g));
  }
  return worst;
}

/// Throws TableauError unless shapes are consistent and the claimed order holds.
template <typename Real>
void validate_tableau(const ButcherTableau<Real>& tab, Real tol = Real(1e-12)) {
  const int s = tab.stages();
  if (s < 1) throw TableauError("tableau '" + tab.name + "' has no stages");
  if (tab.a.rows() != s || tab.a.cols() != s) throw TableauError("tableau '" + tab.name + "': a must be s x s");
  if (tab.order < 1) throw TableauError("tableau '" + tab.name + "': order must be at least 1");
  const Real residual = order_condition_residual(tab, tab.order);
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "tableau '" << tab.name << "' violates order conditions up to p=" << tab.order << " (residual " << residual << ")";
    throw TableauError(os.str());
  }
}

template <typename Real = double>
ButcherTableau<Real> builtin_tableau(const std::string& name) {
  using std::sqrt;
  ButcherTableau<Real> tab;
  tab.name = name;
  if (name == "midpoint") {
    tab.a.resize(1, 1);
    tab.a << Real(1) / 2;
    tab.b.resize(1);
    tab.b << 1;
    tab.order = 2;
  } else if (name == "gauss2") {
    const Real r3 = sqrt(Real(3));
    tab.a.resize(2, 2);
    tab.a << Real(1) / 4, Real(1) / 4 - r3 / 6,
             Real(1) / 4 + r3 / 6, Real(1) / 4;
    tab.b.resize(2);
    tab.b << Real(1) / 2, Real(1) / 2;
    tab.order = 4;
  } else if (name == "gauss3") {
    const Real r15 = sqrt(Real(15));
    tab.a.resize(3, 3);
    tab.a << Real(5) / 36, Real(2) / 9 - r15 / 15, Real(5) / 36 - r15 / 30,
             Real(5) / 36 + r15 / 24, Real(2) / 9, Real(5) / 36 - r15 / 24,
             Real(5) / 36 + r15 / 30, Real(2) / 9 + r15 / 15, Real(5) / 36;
    tab.b.resize(3);
    tab.b << Real(5) / 18, Real(4) / 9, Real(5) / 18;
    tab.order = 6;
  } else {
    throw TableauError("unknown tableau '" + name + "' (expected midpoint, gauss2 or gauss3)");
  }
  return tab;
}

/// S(z) = 1 + z b^T (I - z a)^{-1} 1.
template <typename Real>
std::complex<Real> stability_function(const ButcherTableau<Real>& tab, std::complex<Real> z) {
  using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  using CVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
  const int s = tab.stages();
  const CMat m = CMat::Identity(s, s) - z * tab.a.template cast<std::complex<Real>>();
  Eigen::FullPivLU<CMat> lu(m);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "I - z a is singular at z = " << z;
    throw std::domain_error(os.str());
  }
  const CVec x = lu.solve(CVec::Ones(s));
  return std::complex<Real>(1) + z * tab.b.template cast<std::complex<Real>>().dot(x);
}

/// S(infinity) = 1 - b^T a^{-1} 1; NaN when a is singular.
template <typename Real>
Real stability_at_infinity_modulus(const ButcherTableau<Real>& tab) {
  Eigen::FullPivLU<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> lu(tab.a);
  if (!lu.isInvertible()) return std::numeric_limits<Real>::quiet_NaN();
  using std::abs;
  return abs(Real(1) - tab.b.dot(lu.solve(Eigen::Matrix<Real, Eigen::Dynamic, 1>::Ones(tab.stages()))));
}

struct SamplingPlan {
  double imag_min = 1e-6;
  double imag_max = 1e6;
  int imag_count = 241;  // log-spaced |y|, both signs, plus y = 0
  double real_min = 1e-6;
  double real_max = 1e6;
  int real_count = 61;   // log-spaced -x for the left half-plane grid
  int grid_imag_count = 61;

  std::vector<std::complex<double>> points() const {
    auto logspace = [](double lo, double hi, int n) {
      std::vector<double> v;
      for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo * std::pow(hi / lo, double(i) / double(n - 1)));
      return v;
    };
    std::vector<std::complex<double>> z{{0.0, 0.0}};
    for (double y : logspace(imag_min, imag_max, imag_count)) {
      z.emplace_back(0.0, y);
      z.emplace_back(0.0, -y);
    }
    const auto ys = logspace(imag_min, imag_max, grid_imag_count);
    for (double x : logspace(real_min, real_max, real_count)) {
      z.emplace_back(-x, 0.0);
      for (double y : ys) {
        z.emplace_back(-x, y);
        z.emplace_back(-x, -y);
      }
    }
    return z;
  }
};

struct AStabilityReport {
  std::string name;
  int stages = 0;
  int order = 0;
  bool rk1 = false;
  bool rk2 = false;
  double max_abs_s = 0;
  std::complex<double> max_abs_s_at;
  double abs_s_infinity = 0;
  double alpha_condition = 0;
  double min_sigma = 0;
  std::complex<double> min_sigma_at;
  std::size_t samples = 0;
  std::vector<std::string> reasons;
  SamplingPlan plan;

  bool pass() const { return rk1 && rk2; }
};

/// Numerical audit of (RK1) |S(z)| <= 1 on Re z <= 0 and (RK2) a invertible
/// with I - z a invertible on Re z <= 0.
template <typename Real>
AStabilityReport check_a_stability(const ButcherTableau<Real>& tab, const SamplingPlan& plan = {}) {
  using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  constexpr double kModulusSlack = 1e-12;
  constexpr double kMaxCondition = 1e12;
  constexpr double kMinSigma = 1e-8;

  AStabilityReport rep;
  rep.name = tab.name;
  rep.stages = tab.stages();
  rep.order = tab.order;
  rep.plan = plan;
  const int s = tab.stages();

  Eigen::JacobiSVD<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> svd_a(tab.a);
  const auto sv = svd_a.singularValues();
  const double smin_a = static_cast<double>(sv[s - 1]);
  rep.alpha_condition = smin_a == 0.0 ? std::numeric_limits<double>::infinity() : static_cast<double>(sv[0]) / smin_a;
  rep.abs_s_infinity = static_cast<double>(stability_at_infinity_modulus(tab));

  rep.min_sigma = std::numeric_limits<double>::infinity();
  bool singular_sample = false;
  for (const auto& zd : plan.points()) {
    const std::complex<Real> z(static_cast<Real>(zd.real()), static_cast<Real>(zd.imag()));
    ++rep.samples;
    const CMat m = CMat::Identity(s, s) - z * tab.a.template cast<std::complex<Real>>();
    Eigen::JacobiSVD<CMat> svd(m);
    const double sigma = static_cast<double>(svd.singularValues()[s - 1]);
    if (sigma < rep.min_sigma) {
      rep.min_sigma = sigma;
      rep.min_sigma_at = zd;
    }
    if (sigma == 0.0) {
      singular_sample = true;
      continue;
    }
    const double mod = static_cast<double>(std::abs(stability_function(tab, z)));
    if (mod > rep.max_abs_s) {
      rep.max_abs_s = mod;
      rep.max_abs_s_at = zd;
    }
  }

  rep.rk1 = true;
  if (rep.max_abs_s > 1.0 + kModulusSlack) {
    rep.rk1 = false;
    std::ostringstream os;
    os << "|S(z)| = " << rep.max_abs_s << " > 1 at z = " << rep.max_abs_s_at;
    rep.reasons.push_back(os.str());
  }
  if (std::isnan(rep.abs_s_infinity)) {
    rep.rk1 = false;
    rep.reasons.push_back("S(infinity) undefined (alpha singular)");
  } else if (rep.abs_s_infinity > 1.0 + kModulusSlack) {
    rep.rk1 = false;
    std::ostringstream os;
    os << "|S(infinity)| = " << rep.abs_s_infinity << " > 1";
    rep.reasons.push_back(os.str());
  }
  if (singular_sample) {
    rep.rk1 = false;
    rep.reasons.push_back("I - z alpha singular at a sampled point");
  }

  rep.rk2 = true;
  if (!(rep.alpha_condition < kMaxCondition)) {
    rep.rk2 = false;
    rep.reasons.push_back("alpha singular");
  }
  if (!(rep.min_sigma > kMinSigma)) {
    rep.rk2 = false;
    std::ostringstream os;
    os << "I - z alpha nearly singular (sigma_min = " << rep.min_sigma << " at z = " << rep.min_sigma_at << ")";
    rep.reasons.push_back(os.str());
  }
  return rep;
}

}  // namespace scalerk
