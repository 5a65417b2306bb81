#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace restrict4 {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order on [-1, 1].
const QuadratureRule& gauss_legendre(int order);

/// Composite Gauss-Legendre rule: `panels` equal panels on [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 8);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope * x + intercept. Needs two or more points.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace restrict4
