#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "restrict4/error.hpp"
#include "restrict4/quadrature.hpp"

using namespace restrict4;

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int n : {1, 2, 5, 8, 16}) {
    const QuadratureRule& r = gauss_legendre(n);
    ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussLegendre, NodesAscendAndAreSymmetric) {
  const QuadratureRule& r = gauss_legendre(8);
  for (std::size_t i = 1; i < r.nodes.size(); ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    EXPECT_NEAR(r.nodes[i], -r.nodes[r.nodes.size() - 1 - i], 1e-15);
    EXPECT_NEAR(r.weights[i], r.weights[r.nodes.size() - 1 - i], 1e-15);
  }
}

TEST(GaussLegendre, RejectsBadArguments) {
  EXPECT_THROW(gauss_legendre(0), DomainError);
  EXPECT_THROW(composite_gauss_legendre(0.0, 1.0, 0), DomainError);
}

TEST(CompositeGaussLegendre, OscillatoryIntegral) {
  const QuadratureRule r = composite_gauss_legendre(0.0, 1.0, 40);
  EXPECT_EQ(r.nodes.size(), 320u);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::cos(100.0 * r.nodes[i]);
  EXPECT_NEAR(s, std::sin(100.0) / 100.0, 1e-13);
}

TEST(LeastSquares, RecoversALine) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double v : x) y.push_back(-1.5 * v + 2.0);
  const LineFit f = least_squares(x, y);
  EXPECT_NEAR(f.slope, -1.5, 1e-14);
  EXPECT_NEAR(f.intercept, 2.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
  EXPECT_EQ(f.points, 5u);
}

TEST(LeastSquares, StandardErrorOfNoisyData) {
  // By hand: slope -0.4, intercept 0.6, SSE 3.2, Sxx 5.
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, -1.0, 1.0, -1.0};
  const LineFit f = least_squares(x, y);
  EXPECT_NEAR(f.slope, -0.4, 1e-14);
  EXPECT_NEAR(f.intercept, 0.6, 1e-14);
  EXPECT_NEAR(f.slope_stderr, std::sqrt(3.2 / 2.0 / 5.0), 1e-14);
}

TEST(LeastSquares, RejectsBadInput) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(least_squares(one, one), DomainError);
  EXPECT_THROW(least_squares(two, one), DomainError);
}
