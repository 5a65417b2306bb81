#pragma once

#include <cstddef>
#include <vector>

#include "restrict4/error.hpp"
#include "restrict4/polynomial.hpp"
#include "restrict4/rational.hpp"

namespace restrict4 {

/// Taylor support: the exponents with nonzero coefficient, origin excluded.
/// Points are kept sorted (graded lex) and unique.
struct SupportSet {
  std::size_t nvars = 3;
  std::vector<Exponent> points;

  static SupportSet from_points(std::size_t nvars, std::vector<Exponent> points);
  bool empty() const noexcept { return points.empty(); }
  friend bool operator==(const SupportSet&, const SupportSet&) = default;
};

/// Half-space <normal, x> >= offset. Normals are primitive non-negative
/// integer vectors, so offsets are integers too.
struct Facet {
  std::vector<Rational> normal;
  Rational offset;

  friend bool operator==(const Facet&, const Facet&) = default;
  friend auto operator<=>(const Facet& a, const Facet& b) {
    if (auto c = a.normal <=> b.normal; c != 0) return c;
    return a.offset <=> b.offset;
  }
};

/// conv( union_k (k + R_+^n) ) as an irredundant facet list plus its vertices.
struct NewtonPolyhedron {
  std::size_t nvars = 3;
  std::vector<Exponent> vertices;
  std::vector<Facet> facets;
  SupportSet source;

  /// True when every facet inequality holds at x.
  bool contains(const std::vector<Rational>& x) const;
};

struct DistanceResult {
  Rational d;
  int principal_face_dim = 0;
  std::vector<Exponent> principal_face_vertices;
  /// Indices into NewtonPolyhedron::facets that are tight at (d, ..., d).
  std::vector<std::size_t> active_facets;
  /// Sum of the active facet normals, made primitive; supports the principal
  /// face and is tight there with attaining_offset.
  std::vector<Rational> attaining_normal;
  Rational attaining_offset;
  Warnings warnings;
};

/// Throws DegenerateInput("empty Taylor support") for zero or constant input.
/// A nonzero constant term is dropped with a warning.
SupportSet support(const Polynomial& p, Warnings* warnings = nullptr);

/// Support points not dominated coordinate-wise by another support point.
std::vector<Exponent> minimal_points(const SupportSet& s);

NewtonPolyhedron build_polyhedron(const SupportSet& s);

DistanceResult distance(const NewtonPolyhedron& np);

/// Shorthand for distance(build_polyhedron(s)).d.
Rational newton_distance(const SupportSet& s);

/// Independent brute-force value of the Newton distance: solves
///   min t  s.t.  t*1 >= sum_j lambda_j k_j,  lambda in the simplex,
/// by enumerating every basic solution over point subsets, in exact
/// arithmetic. Shares no code with the facet enumeration.
Rational distance_oracle(const SupportSet& s);

}  // namespace restrict4
