#include "restrict4/oscint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "restrict4/parallel.hpp"
#include "restrict4/quadrature.hpp"

namespace restrict4 {
namespace {

constexpr int kOrder = 8;
constexpr int kSegments = 16;
constexpr int kMinSegmentPanels = 1;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval operator*(const Interval& a, const Interval& b) {
  const double c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Interval power(const Interval& a, int e) {
  if (e == 0) return {1.0, 1.0};
  const double l = std::pow(a.lo, e);
  const double h = std::pow(a.hi, e);
  if (e % 2 == 1) return {l, h};
  if (a.lo <= 0.0 && a.hi >= 0.0) return {0.0, std::max(l, h)};
  return {std::min(l, h), std::max(l, h)};
}

/// Enclosure of p over a box, monomial by monomial.
Interval range(const Polynomial& p, const std::array<Interval, 3>& box) {
  Interval total;
  for (const auto& [k, c] : p.terms()) {
    Interval m{c, c};
    for (std::size_t j = 0; j < 3; ++j) m = m * power(box[j], k[j]);
    total.lo += m.lo;
    total.hi += m.hi;
  }
  return total;
}

QuadratureRule axis_rule(const std::vector<int>& segments, double r) {
  QuadratureRule out;
  const double w = 2.0 * r / static_cast<double>(segments.size());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const double a = -r + static_cast<double>(s) * w;
    const double b = s + 1 == segments.size() ? r : a + w;
    const QuadratureRule part = composite_gauss_legendre(a, b, segments[s], kOrder);
    out.nodes.insert(out.nodes.end(), part.nodes.begin(), part.nodes.end());
    out.weights.insert(out.weights.end(), part.weights.begin(), part.weights.end());
  }
  return out;
}

/// A polynomial in x1, x2, x3 regrouped as sum_j a_j(x1, x2) x3^j so the
/// innermost quadrature loop is a Horner evaluation.
class SlicedPolynomial {
 public:
  explicit SlicedPolynomial(const Polynomial& p) {
    for (const auto& [k, c] : p.terms()) {
      terms_.push_back({k[0], k[1], k[2], c});
      degree3_ = std::max(degree3_, k[2]);
    }
  }

  int degree3() const { return degree3_; }

  /// coeffs[j] = a_j(x1, x2); coeffs must hold degree3() + 1 entries.
  void coefficients(double x1, double x2, double* coeffs) const {
    std::fill(coeffs, coeffs + degree3_ + 1, 0.0);
    for (const auto& t : terms_) {
      double v = t.c;
      for (int e = 0; e < t.k1; ++e) v *= x1;
      for (int e = 0; e < t.k2; ++e) v *= x2;
      coeffs[t.k3] += v;
    }
  }

 private:
  struct Term {
    int k1, k2, k3;
    double c;
  };
  std::vector<Term> terms_;
  int degree3_ = 0;
};

inline double horner(const double* coeffs, int degree, double x) {
  double v = coeffs[degree];
  for (int j = degree - 1; j >= 0; --j) v = v * x + coeffs[j];
  return v;
}

double bump_profile(const SurfacePatch& sp, double s2) {
  if (s2 >= 1.0) return 0.0;
  if (sp.bump_kind == BumpKind::smooth_exp) return std::exp(1.0 - 1.0 / (1.0 - s2));
  return std::pow(1.0 - s2, sp.poly_power);
}

/// Number of tensor nodes inside the open ball of radius r.
std::uint64_t nodes_in_ball(const QuadratureRule& a, const QuadratureRule& b,
                            const QuadratureRule& c, double r) {
  std::vector<double> zs;
  for (double z : c.nodes) zs.push_back(z * z);
  std::sort(zs.begin(), zs.end());
  std::uint64_t count = 0;
  for (double x : a.nodes) {
    for (double y : b.nodes) {
      const double rest = r * r - x * x - y * y;
      if (rest <= 0.0) continue;
      count += static_cast<std::uint64_t>(std::lower_bound(zs.begin(), zs.end(), rest) - zs.begin());
    }
  }
  return count;
}

std::string describe(const std::array<int, 3>& p) {
  return std::to_string(p[0]) + "x" + std::to_string(p[1]) + "x" + std::to_string(p[2]);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void validate(const SurfacePatch& sp) {
  if (sp.phi.nvars() != 3) throw DomainError("surface patch needs a polynomial in x1, x2, x3");
  if (!(sp.bump_radius > 0.0) || !std::isfinite(sp.bump_radius)) {
    throw DomainError("bump radius must be positive");
  }
  if (sp.bump_kind == BumpKind::poly_power && sp.poly_power < 1) {
    throw DomainError("polynomial bump power must be at least 1");
  }
}

double bump(const SurfacePatch& sp, double x1, double x2, double x3) {
  const double r2 = sp.bump_radius * sp.bump_radius;
  const double s2 = (x1 * x1 + x2 * x2 + x3 * x3) / r2;
  if (s2 >= 1.0) return 0.0;
  if (sp.custom_weight) return sp.custom_weight(x1, x2, x3);
  return bump_profile(sp, s2);
}

double density(const SurfacePatch& sp, double x1, double x2, double x3) {
  const double psi = bump(sp, x1, x2, x3);
  if (psi == 0.0 || !sp.include_area_factor) return psi;
  const std::array<double, 3> x{x1, x2, x3};
  double g2 = 0.0;
  for (const auto& g : gradient(sp.phi)) {
    const double v = evaluate(g, x);
    g2 += v * v;
  }
  return psi * std::sqrt(1.0 + g2);
}

double FrequencyPoint::norm() const {
  double s = 0.0;
  for (double v : xi) s += v * v;
  return std::sqrt(s);
}

PanelLayout PanelLayout::uniform(const std::array<int, 3>& panels) {
  PanelLayout l;
  for (std::size_t i = 0; i < 3; ++i) {
    if (panels[i] < 1) throw DomainError("panel counts must be positive");
    l.segments[i] = {panels[i]};
  }
  return l;
}

std::array<int, 3> PanelLayout::totals() const {
  std::array<int, 3> t{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (int n : segments[i]) t[i] += n;
  }
  return t;
}

PanelLayout PanelLayout::doubled() const {
  PanelLayout l = *this;
  for (auto& axis : l.segments) {
    for (int& n : axis) n *= 2;
  }
  return l;
}

PanelLayout base_panels(const SurfacePatch& sp, const FrequencyPoint& xi,
                        double nodes_per_wavelength) {
  if (nodes_per_wavelength < 4.0) throw DomainError("nodes_per_wavelength must be at least 4");
  const double r = sp.bump_radius;
  const double w = 2.0 * r / kSegments;
  const auto grad = gradient(sp.phi);
  PanelLayout layout;
  for (std::size_t i = 0; i < 3; ++i) {
    for (int s = 0; s < kSegments; ++s) {
      std::array<Interval, 3> box{Interval{-r, r}, Interval{-r, r}, Interval{-r, r}};
      box[i] = Interval{-r + s * w, -r + (s + 1) * w};
      const Interval slope = range(grad[i], box);
      const double f = std::max(std::abs(xi.xi[i] + xi.xi[3] * slope.lo),
                                std::abs(xi.xi[i] + xi.xi[3] * slope.hi));
      const double osc = f * w / (2.0 * std::numbers::pi);
      layout.segments[i].push_back(std::max(
          kMinSegmentPanels, static_cast<int>(std::ceil(nodes_per_wavelength * osc / kOrder))));
    }
  }
  return layout;
}

SurfaceTransform integrate_at(const SurfacePatch& sp, const FrequencyPoint& xi,
                              const PanelLayout& layout, unsigned threads) {
  validate(sp);
  const double r = sp.bump_radius;
  const QuadratureRule ax = axis_rule(layout.segments[0], r);
  const QuadratureRule ay = axis_rule(layout.segments[1], r);
  const QuadratureRule az = axis_rule(layout.segments[2], r);

  const SlicedPolynomial phi(sp.phi);
  std::vector<SlicedPolynomial> grad;
  if (sp.include_area_factor) {
    for (const auto& g : gradient(sp.phi)) grad.emplace_back(g);
  }
  const double r2 = r * r;
  const auto [k1, k2, k3, k4] = xi.xi;

  struct Partial {
    std::complex<double> sum;
    double mass = 0.0;
    std::uint64_t evals = 0;
  };
  std::vector<Partial> partial(ax.nodes.size());

  parallel_for(ax.nodes.size(), threads, [&](std::size_t i) {
    const double x1 = ax.nodes[i];
    std::vector<double> cphi(static_cast<std::size_t>(phi.degree3()) + 1);
    std::vector<std::vector<double>> cgrad;
    for (const auto& g : grad) cgrad.emplace_back(static_cast<std::size_t>(g.degree3()) + 1);
    double re = 0.0;
    double im = 0.0;
    double mass = 0.0;
    std::uint64_t evals = 0;
    for (std::size_t j = 0; j < ay.nodes.size(); ++j) {
      const double x2 = ay.nodes[j];
      const double rest = r2 - x1 * x1 - x2 * x2;
      if (rest <= 0.0) continue;
      phi.coefficients(x1, x2, cphi.data());
      for (std::size_t g = 0; g < grad.size(); ++g) grad[g].coefficients(x1, x2, cgrad[g].data());
      const double w12 = ax.weights[i] * ay.weights[j];
      const double lin12 = k1 * x1 + k2 * x2;
      for (std::size_t l = 0; l < az.nodes.size(); ++l) {
        const double x3 = az.nodes[l];
        if (x3 * x3 >= rest) continue;
        ++evals;
        double psi;
        if (sp.custom_weight) {
          psi = sp.custom_weight(x1, x2, x3);
        } else {
          psi = bump_profile(sp, (x1 * x1 + x2 * x2 + x3 * x3) / r2);
        }
        if (psi == 0.0) continue;
        double dens = psi;
        if (!grad.empty()) {
          double g2 = 1.0;
          for (std::size_t g = 0; g < grad.size(); ++g) {
            const double v = horner(cgrad[g].data(), grad[g].degree3(), x3);
            g2 += v * v;
          }
          dens *= std::sqrt(g2);
        }
        const double w = w12 * az.weights[l] * dens;
        const double phase = lin12 + k3 * x3 + k4 * horner(cphi.data(), phi.degree3(), x3);
        re += w * std::cos(phase);
        im += w * std::sin(phase);
        mass += std::abs(w);
      }
    }
    partial[i] = Partial{{re, im}, mass, evals};
  });

  SurfaceTransform out;
  out.panels = layout.totals();
  for (const auto& p : partial) {
    out.value += p.sum;
    out.mass += p.mass;
    out.evaluations += p.evals;
  }
  out.coarse_value = out.value;
  return out;
}

SurfaceTransform fourier_surface_measure(const SurfacePatch& sp, const FrequencyPoint& xi,
                                         const QuadratureOptions& options) {
  validate(sp);
  const double r = sp.bump_radius;
  std::uint64_t used = 0;
  auto cost = [&](const PanelLayout& l) {
    return nodes_in_ball(axis_rule(l.segments[0], r), axis_rule(l.segments[1], r),
                         axis_rule(l.segments[2], r), r);
  };

  PanelLayout panels = base_panels(sp, xi, options.nodes_per_wavelength);
  SurfaceTransform coarse;
  coarse.panels = panels.totals();
  if (cost(panels) + cost(panels.doubled()) > options.max_evaluations) {
    throw BudgetExceeded(
        "quadrature budget exceeded at panels " + describe(panels.doubled().totals()), coarse);
  }
  coarse = integrate_at(sp, xi, panels, options.threads);
  used += coarse.evaluations;

  for (int round = 0; round <= options.max_refinements; ++round) {
    panels = panels.doubled();
    const std::uint64_t next = cost(panels);
    if (used + next > options.max_evaluations) {
      coarse.evaluations = used;
      throw BudgetExceeded("quadrature budget exceeded at panels " + describe(panels.totals()),
                           coarse);
    }
    SurfaceTransform fine = integrate_at(sp, xi, panels, options.threads);
    used += fine.evaluations;
    fine.coarse_value = coarse.value;
    fine.evaluations = used;
    const double diff = std::abs(fine.value - coarse.value);
    if (diff <= options.rel_tol * std::abs(fine.value) + options.abs_tol * fine.mass) {
      fine.converged = true;
      return fine;
    }
    if (round == options.max_refinements) {
      throw ConvergenceFailure("quadrature did not converge at panels " + describe(panels.totals()),
                               fine);
    }
    coarse = fine;
  }
  throw std::logic_error("unreachable");
}

std::vector<std::array<double, 4>> decay_directions(int n_dirs, std::uint64_t seed,
                                                    double max_tilt_deg) {
  if (n_dirs < 1) throw DomainError("need at least one direction");
  std::vector<std::array<double, 4>> dirs{{0.0, 0.0, 0.0, 1.0}};
  std::mt19937_64 rng(seed ^ 0xD1CEC0FFEEull);
  const double cos_max = std::cos(max_tilt_deg * std::numbers::pi / 180.0);
  while (dirs.size() < static_cast<std::size_t>(n_dirs)) {
    const double cos_t = cos_max + (1.0 - cos_max) * uniform01(rng);
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    dirs.push_back({sin_t * rho * std::cos(phi), sin_t * rho * std::sin(phi), sin_t * z, cos_t});
  }
  return dirs;
}

DecayFit decay_fit(const SurfacePatch& sp, const DecayFitOptions& o) {
  validate(sp);
  if (o.n_mags < 8) throw DomainError("decay fit needs at least 8 magnitudes");
  if (!(o.mag_min > 0.0) || o.mag_max < 32.0 * o.mag_min) {
    throw DomainError("magnitude range must span at least 5 octaves");
  }

  DecayFit fit;
  fit.directions = decay_directions(o.n_dirs, o.seed, o.max_tilt_deg);
  for (int i = 0; i < o.n_mags; ++i) {
    fit.magnitudes.push_back(o.mag_min *
                             std::pow(o.mag_max / o.mag_min, static_cast<double>(i) / (o.n_mags - 1)));
  }

  for (std::size_t d = 0; d < fit.directions.size(); ++d) {
    for (double lambda : fit.magnitudes) {
      DecaySample s;
      s.dir_index = d;
      for (std::size_t c = 0; c < 4; ++c) s.xi[c] = lambda * fit.directions[d][c];
      s.abs_xi = lambda;
      const FrequencyPoint fp{s.xi};
      try {
        const SurfaceTransform t = fourier_surface_measure(sp, fp, o.quadrature);
        s.j = t.value;
        s.panels = t.panels;
        s.converged = true;
        s.underflow = std::abs(t.value) < o.underflow * t.mass;
      } catch (const BudgetExceeded& e) {
        s.budget_exceeded = true;
        s.panels = e.partial().panels;
        s.j = e.partial().value;
        fit.partial = true;
        fit.warnings.push_back("direction " + std::to_string(d) + ", |xi| = " +
                               std::to_string(lambda) + ": " + e.what());
      } catch (const ConvergenceFailure& e) {
        s.panels = e.last().panels;
        s.j = e.last().value;
        fit.warnings.push_back("direction " + std::to_string(d) + ", |xi| = " +
                               std::to_string(lambda) + ": " + e.what());
      }
      if (s.underflow) {
        fit.warnings.push_back("direction " + std::to_string(d) + ", |xi| = " +
                               std::to_string(lambda) + ": |J| underflow, sample dropped");
      }
      fit.samples.push_back(s);
    }
  }

  bool have = false;
  for (std::size_t d = 0; d < fit.directions.size(); ++d) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& s : fit.samples) {
      if (s.dir_index != d || !s.converged || s.underflow) continue;
      lx.push_back(std::log(s.abs_xi));
      ly.push_back(std::log(std::abs(s.j)));
    }
    DirectionFit df;
    df.points = lx.size();
    if (lx.size() >= 3) {
      const LineFit lf = least_squares(lx, ly);
      df.slope = lf.slope;
      df.slope_stderr = lf.slope_stderr;
      df.valid = true;
      if (!have || df.slope > fit.per_direction[fit.worst_direction].slope) {
        fit.worst_direction = d;
        have = true;
      }
    } else {
      fit.warnings.push_back("direction " + std::to_string(d) +
                             ": fewer than 3 usable samples, no slope");
    }
    fit.per_direction.push_back(df);
    if (df.valid && have && fit.worst_direction == d) {
      fit.fitted_exponent = -df.slope;
      fit.fit_stderr = df.slope_stderr;
    }
  }
  if (!have) throw DegenerateInput("no direction produced a usable decay fit");
  return fit;
}

double inverse_gamma_modulus(double y) {
  const double a = std::numbers::pi * std::abs(y);
  if (a < 1e-8) return 1.0;
  return std::sqrt(std::sinh(a) / a);
}

GammaCheck gamma_bound_check(double y_max, int n) {
  if (!(y_max > 0.0)) throw DomainError("y_max must be positive");
  if (n < 100) throw DomainError("gamma check needs at least 100 grid points");
  if (n % 2 == 0) ++n;
  GammaCheck out;
  out.points = static_cast<std::size_t>(n);
  out.max_ratio = -1.0;
  const int half = n / 2;
  for (int i = -half; i <= half; ++i) {
    const double y = y_max * static_cast<double>(i) / half;
    const double a = std::numbers::pi * std::abs(y);
    // sinh(a) e^{-2a} / a = (1 - e^{-2a}) / (2a), stable for large a.
    const double ratio = a < 1e-8 ? 1.0 : std::sqrt(-std::expm1(-2.0 * a) / (2.0 * a));
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.argmax = y;
    }
  }
  return out;
}

}  // namespace restrict4
