#include "restrict4/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "restrict4/error.hpp"

namespace restrict4 {

int total_degree(const Exponent& k) { return std::accumulate(k.begin(), k.end(), 0); }

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  // Higher power of x1 first within a degree: x1^2 < x1*x2 < x2^2.
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::size_t nvars) : nvars_(nvars) {
  if (nvars == 0) throw DomainError("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(double c, std::size_t nvars) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t index, std::size_t nvars) {
  if (index >= nvars) throw DomainError("variable index out of range");
  Polynomial p(nvars);
  Exponent k(nvars, 0);
  k[index] = 1;
  p.add_term(k, 1.0);
  return p;
}

Polynomial Polynomial::from_terms(std::size_t nvars, std::span<const Monomial> terms) {
  Polynomial p(nvars);
  for (const auto& t : terms) p.add_term(t.exponents, t.coefficient);
  return p;
}

int Polynomial::degree() const {
  return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

double Polynomial::coefficient(const Exponent& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::add_term(const Exponent& k, double c) {
  if (k.size() != nvars_) throw DomainError("exponent length does not match nvars");
  if (std::any_of(k.begin(), k.end(), [](int e) { return e < 0; })) {
    throw DomainError("negative exponent");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Polynomial::check_same_nvars(const Polynomial& o) const {
  if (o.nvars_ != nvars_) throw DomainError("polynomials over different variable counts");
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_nvars(o);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_nvars(o);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_nvars(b);
  Polynomial out(a.nvars_);
  Exponent k(a.nvars_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out.add_term(k, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(1.0, nvars_);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

std::size_t Polynomial::prune(double rel) {
  const double cutoff = rel * max_abs_coefficient();
  return std::erase_if(terms_, [&](const auto& t) { return std::abs(t.second) < cutoff; });
}

LinearChange::LinearChange(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw DomainError("linear change must be a non-empty square matrix");
  }
  if (std::abs(matrix_.determinant()) <= 1e-12) throw DegenerateInput("singular linear change");
}

LinearChange LinearChange::identity(std::size_t n) {
  return LinearChange(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n)));
}

LinearChange LinearChange::swap(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= n || j >= n) throw DomainError("swap index out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  m.row(static_cast<Eigen::Index>(i)).swap(m.row(static_cast<Eigen::Index>(j)));
  return LinearChange(std::move(m));
}

LinearChange LinearChange::plane_rotation(std::size_t i, std::size_t j, double angle,
                                          std::size_t n) {
  if (i >= n || j >= n || i == j) throw DomainError("rotation plane indices invalid");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  m(a, a) = std::cos(angle);
  m(a, b) = -std::sin(angle);
  m(b, a) = std::sin(angle);
  m(b, b) = std::cos(angle);
  return LinearChange(std::move(m));
}

LinearChange LinearChange::rotation(Eigen::MatrixXd matrix) {
  LinearChange out(std::move(matrix));
  if (!out.is_rotation()) throw DomainError("matrix is not a proper rotation");
  return out;
}

bool LinearChange::is_rotation(double tol) const {
  const auto n = matrix_.rows();
  const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
  if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(matrix_.determinant() - 1.0) <= tol;
}

LinearChange operator*(const LinearChange& a, const LinearChange& b) {
  if (a.dim() != b.dim()) throw DomainError("linear change dimension mismatch");
  return LinearChange(a.matrix_ * b.matrix_);
}

double evaluate(const Polynomial& p, std::span<const double> x) {
  if (x.size() != p.nvars()) throw DomainError("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [k, c] : p.terms()) {
    double term = c;
    for (std::size_t i = 0; i < k.size(); ++i) {
      for (int e = 0; e < k[i]; ++e) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> grad(p.nvars(), Polynomial(p.nvars()));
  for (const auto& [k, c] : p.terms()) {
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      Exponent d = k;
      --d[i];
      grad[i].add_term(d, c * k[i]);
    }
  }
  return grad;
}

std::vector<std::vector<Polynomial>> hessian(const Polynomial& p) {
  std::vector<std::vector<Polynomial>> h;
  for (const auto& g : gradient(p)) h.push_back(gradient(g));
  return h;
}

Polynomial compose_linear(const Polynomial& p, const LinearChange& a, double prune_rel,
                          std::size_t* pruned) {
  const std::size_t n = p.nvars();
  if (a.dim() != n) throw DomainError("linear change dimension does not match polynomial");

  // powers[i][e] = (sum_j A_ij x_j)^e
  std::vector<std::vector<Polynomial>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    int max_e = 0;
    for (const auto& [k, c] : p.terms()) max_e = std::max(max_e, k[i]);
    Polynomial form(n);
    for (std::size_t j = 0; j < n; ++j) {
      Exponent k(n, 0);
      k[j] = 1;
      form.add_term(k, a.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    powers[i].push_back(Polynomial::constant(1.0, n));
    for (int e = 1; e <= max_e; ++e) powers[i].push_back(powers[i].back() * form);
  }

  Polynomial out(n);
  for (const auto& [k, c] : p.terms()) {
    Polynomial term = Polynomial::constant(c, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (k[i] > 0) term = term * powers[i][static_cast<std::size_t>(k[i])];
    }
    out += term;
  }
  const std::size_t dropped = out.prune(prune_rel);
  if (pruned != nullptr) *pruned = dropped;
  return out;
}

ConvexityCheck check_convex(const Polynomial& p, double radius, int grid) {
  if (!(radius > 0.0)) throw DomainError("convexity radius must be positive");
  if (grid < 3) throw DomainError("convexity grid must be at least 3");
  const std::size_t n = p.nvars();
  const auto h = hessian(p);

  ConvexityCheck out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double step = 2.0 * radius / (grid - 1);
  while (true) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = -radius + step * idx[i];
      norm2 += x[i] * x[i];
    }
    if (norm2 <= radius * radius * (1.0 + 1e-12)) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(h[i][j], x);
        }
      }
      const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
      ++out.samples;
      if (lo < out.min_eigenvalue) {
        out.min_eigenvalue = lo;
        if (lo < -1e-9) {
          out.convex = false;
          out.witness = x;
        }
      }
    }
    std::size_t axis = 0;
    while (axis < n && ++idx[axis] == grid) idx[axis++] = 0;
    if (axis == n) break;
  }
  return out;
}

LineTypeCheck check_finite_line_type(const Polynomial& p, int directions) {
  if (directions < 10) throw DomainError("need at least 10 directions");
  const std::size_t n = p.nvars();

  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < n && dirs.size() < static_cast<std::size_t>(directions); ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  while (dirs.size() < static_cast<std::size_t>(directions)) {
    std::vector<double> v(n);
    double norm = 0.0;
    for (auto& c : v) {
      c = normal(rng);
      norm += c * c;
    }
    if (norm < 1e-12) continue;
    for (auto& c : v) c /= std::sqrt(norm);
    dirs.push_back(std::move(v));
  }

  double scale = 0.0;
  for (const auto& [k, c] : p.terms()) scale += std::abs(c);
  const double tol = 1e-12 * std::max(scale, 1e-300);
  const int max_degree = p.degree();

  LineTypeCheck out;
  for (const auto& xi : dirs) {
    // Coefficients of the univariate restriction t -> p(t xi).
    std::vector<double> coeff(static_cast<std::size_t>(max_degree) + 1, 0.0);
    for (const auto& [k, c] : p.terms()) {
      double v = c;
      for (std::size_t i = 0; i < n; ++i) v *= std::pow(xi[i], k[i]);
      coeff[static_cast<std::size_t>(total_degree(k))] += v;
    }
    int order = -1;
    for (std::size_t d = 1; d < coeff.size(); ++d) {
      if (std::abs(coeff[d]) > tol) {
        order = static_cast<int>(d);
        break;
      }
    }
    if (order < 0) {
      out.finite = false;
      out.worst_order = -1;
      out.worst_direction = xi;
      return out;
    }
    if (order > out.worst_order) {
      out.worst_order = order;
      out.worst_direction = xi;
    }
  }
  return out;
}

}  // namespace restrict4
