#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "restrict4/newton.hpp"
#include "restrict4/polynomial.hpp"
#include "restrict4/rational.hpp"

namespace restrict4 {

struct HeightSearchOptions {
  int starts = 64;
  int iters = 40;
  std::uint64_t seed = 0;
  /// Relative coefficient cutoff applied after every rotation.
  double prune_rel = 1e-10;
  double initial_step = 0.5;
  double final_step = 5e-5;
  unsigned threads = 0;
};

/// Local optimum reached from one start.
struct TracePoint {
  int start = 0;
  /// Axis-angle vector of the rotation (radians).
  std::array<double, 3> rotation_vector{};
  Rational d;
  std::size_t pruned_terms = 0;
};

struct HeightResult {
  /// Best Newton distance found: a lower bound for the height, equal to it
  /// when the search reaches adapted coordinates.
  Rational h;
  LinearChange maximizer = LinearChange::identity(3);
  Rational d_original;
  bool certified = false;
  std::vector<TracePoint> trace;
  /// Phi expressed in the maximizing coordinates, i.e. Phi(maximizer * x).
  Polynomial adapted;
  DistanceResult adapted_distance;
};

/// Maximizes d(Phi o R) over R in SO(3) by seeded multistart sampling and
/// coordinate-wise angular refinement with a geometrically shrinking step.
/// Every candidate is also tried after aligning the coordinates with the
/// eigenvectors of the Hessian at the origin.
HeightResult height_search(const Polynomial& p, const HeightSearchOptions& options = {});

/// Rotation whose columns are Hessian eigenvectors of (p o r) at 0, composed
/// with r; returns r unchanged when the quadratic part vanishes.
LinearChange align_quadratic_part(const Polynomial& p, const LinearChange& r, double prune_rel);

struct ExponentReport {
  Rational h;
  Rational d;
  Rational beta;
  Rational p_star;
  Rational q_star;
  Rational q_lower;
  int m = 1;
};

/// 2(m + beta) / (2m + beta).
Rational greenleaf_p(const Rational& beta, int m);

/// All exponents for height h; d defaults to h (adapted coordinates).
ExponentReport critical_p(const Rational& h);
ExponentReport critical_p(const Rational& h, const Rational& d);

/// q with 1/p + 1/q = 1.
Rational dual_exponent(const Rational& p);

}  // namespace restrict4
