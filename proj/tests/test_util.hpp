#pragma once

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "restrict4/newton.hpp"
#include "restrict4/polynomial.hpp"

namespace restrict4::test {

/// Random sparse polynomial in 3 variables without constant term. Integer
/// coefficients keep sums exact when a test needs bitwise equality.
inline Polynomial random_polynomial(std::mt19937_64& rng, int max_degree, int max_terms,
                                    bool integer = false) {
  std::uniform_int_distribution<int> n_terms(1, max_terms);
  std::uniform_int_distribution<int> deg(1, max_degree);
  std::uniform_int_distribution<int> icoef(-9, 9);
  std::uniform_real_distribution<double> rcoef(-3.0, 3.0);
  Polynomial p(3);
  const int n = n_terms(rng);
  for (int t = 0; t < n; ++t) {
    const int d = deg(rng);
    std::uniform_int_distribution<int> split(0, d);
    int a = split(rng);
    int b = split(rng);
    if (a > b) std::swap(a, b);
    const Exponent k{a, b - a, d - b};
    const double c = integer ? icoef(rng) : rcoef(rng);
    p.add_term(k, c);
  }
  if (p.is_zero()) p.add_term({1, 0, 0}, 1.0);
  return p;
}

inline LinearChange random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return LinearChange(Eigen::MatrixXd(q.toRotationMatrix()));
}

/// Same keys up to terms below tol * scale, same coefficients within tol * scale.
inline bool near(const Polynomial& a, const Polynomial& b, double tol) {
  const double scale = std::max({1.0, a.max_abs_coefficient(), b.max_abs_coefficient()});
  for (const auto& [k, c] : a.terms()) {
    if (std::abs(c - b.coefficient(k)) > tol * scale) return false;
  }
  for (const auto& [k, c] : b.terms()) {
    if (std::abs(c - a.coefficient(k)) > tol * scale) return false;
  }
  return true;
}

/// Random support: 1..max_points points of N_0^3 \ {0} with entries <= max_exp.
inline SupportSet random_support(std::mt19937_64& rng, int max_exp, int max_points) {
  std::uniform_int_distribution<int> count(1, max_points);
  std::uniform_int_distribution<int> e(0, max_exp);
  std::vector<Exponent> pts;
  const int n = count(rng);
  while (static_cast<int>(pts.size()) < n) {
    Exponent k{e(rng), e(rng), e(rng)};
    if (k[0] + k[1] + k[2] > 0) pts.push_back(k);
  }
  return SupportSet::from_points(3, pts);
}

}  // namespace restrict4::test
