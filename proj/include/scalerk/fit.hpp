#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scalerk {

struct PowerLawFit {
  double slope = 0;
  double intercept = 0;     // log c
  double max_residual = 0;  // max |log y - fit| over the points
};

/// Least-squares fit of log y = intercept + slope * log x.
inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) throw std::invalid_argument("power-law fit needs at least two points");
  const double n = static_cast<double>(xy.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : xy) {
    if (!(x > 0) || !(y > 0)) throw std::domain_error("power-law fit needs positive data");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0) throw std::invalid_argument("power-law fit needs distinct abscissae");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [x, y] : xy)
    fit.max_residual = std::max(fit.max_residual, std::abs(std::log(y) - fit.intercept - fit.slope * std::log(x)));
  return fit;
}

}  // namespace scalerk
