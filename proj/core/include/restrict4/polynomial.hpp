#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace restrict4 {

/// Multi-index k in N_0^n.
using Exponent = std::vector<int>;

int total_degree(const Exponent& k);

/// Graded lexicographic order: total degree first, then lexicographic with
/// x1 most significant. Drives the canonical term order of Polynomial.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

struct Monomial {
  Exponent exponents;
  double coefficient = 0.0;
};

/// Sparse real polynomial in x1..xn. Terms with a zero coefficient are never
/// stored, so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, double, GradedLex>;

  explicit Polynomial(std::size_t nvars = 3);

  static Polynomial constant(double c, std::size_t nvars = 3);
  /// The coordinate function x_{index+1} (index is zero-based).
  static Polynomial variable(std::size_t index, std::size_t nvars = 3);
  static Polynomial from_terms(std::size_t nvars, std::span<const Monomial> terms);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const;

  double coefficient(const Exponent& k) const;
  double max_abs_coefficient() const;

  /// Adds c*x^k, merging with an existing term and erasing exact zeros.
  void add_term(const Exponent& k, double c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial pow(unsigned e) const;

  /// Drops every term with |c| < rel * max|c|. Returns the number dropped.
  std::size_t prune(double rel);

  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void check_same_nvars(const Polynomial& o) const;

  std::size_t nvars_;
  TermMap terms_;
};

/// Invertible real n x n matrix acting by x -> A x.
class LinearChange {
 public:
  explicit LinearChange(Eigen::MatrixXd matrix);

  static LinearChange identity(std::size_t n = 3);
  /// Exchanges coordinates i and j (zero-based).
  static LinearChange swap(std::size_t i, std::size_t j, std::size_t n = 3);
  /// Rotation by angle (radians) in the (i, j) coordinate plane.
  static LinearChange plane_rotation(std::size_t i, std::size_t j, double angle,
                                     std::size_t n = 3);
  /// Validates orthogonality and det = +1 to within 1e-12.
  static LinearChange rotation(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  bool is_rotation(double tol = 1e-12) const;

  friend LinearChange operator*(const LinearChange& a, const LinearChange& b);

 private:
  Eigen::MatrixXd matrix_;
};

/// Parses the polynomial grammar (see README). Throws ParseError with the
/// byte offset of the offending character.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars = 3);

/// Canonical text form; parse_polynomial(to_string(p)) == p exactly.
std::string to_string(const Polynomial& p);

double evaluate(const Polynomial& p, std::span<const double> x);

std::vector<Polynomial> gradient(const Polynomial& p);

/// Second partial derivatives, hessian[i][j] = d^2 p / dx_i dx_j.
std::vector<std::vector<Polynomial>> hessian(const Polynomial& p);

/// Returns q(x) = p(A x) in canonical form. Coefficients below
/// prune_rel * max|c| are dropped; the count is written to *pruned.
Polynomial compose_linear(const Polynomial& p, const LinearChange& a, double prune_rel = 1e-12,
                          std::size_t* pruned = nullptr);

struct ConvexityCheck {
  bool convex = true;
  double min_eigenvalue = 0.0;
  std::optional<std::vector<double>> witness;
  std::size_t samples = 0;
};

/// Samples the Hessian on a grid over the ball of the given radius. A sampling
/// test only: false is conclusive, true is advisory.
ConvexityCheck check_convex(const Polynomial& p, double radius, int grid);

struct LineTypeCheck {
  bool finite = true;
  /// Largest over sampled directions of the first order N with a nonzero
  /// N-th directional derivative at 0. Meaningless when finite is false.
  int worst_order = 0;
  std::vector<double> worst_direction;
};

/// Restricts p to lines t -> t*xi through the origin for the coordinate axes
/// plus seeded random unit directions (directions in total).
LineTypeCheck check_finite_line_type(const Polynomial& p, int directions);

}  // namespace restrict4
