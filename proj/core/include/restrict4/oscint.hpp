#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "restrict4/error.hpp"
#include "restrict4/polynomial.hpp"

namespace restrict4 {

enum class BumpKind { smooth_exp, poly_power };

/// Graph x4 = phi(x1, x2, x3) carrying the measure psi dS near the origin.
struct SurfacePatch {
  Polynomial phi;
  double bump_radius = 0.5;
  BumpKind bump_kind = BumpKind::smooth_exp;
  /// Exponent m of psi = (1 - |x/r|^2)^m for BumpKind::poly_power.
  int poly_power = 4;
  /// Multiply by sqrt(1 + |grad phi|^2), i.e. integrate against dS.
  bool include_area_factor = true;
  /// Overrides psi when set. Must vanish for |x| >= bump_radius; used by
  /// fixtures that need psi(0) = 0.
  std::function<double(double, double, double)> custom_weight;

  explicit SurfacePatch(Polynomial phi_, double radius = 0.5) : phi(std::move(phi_)), bump_radius(radius) {}
};

/// Throws DomainError if the patch is unusable (wrong arity, bad radius).
void validate(const SurfacePatch& sp);

/// psi(x); zero outside the ball of radius bump_radius.
double bump(const SurfacePatch& sp, double x1, double x2, double x3);

/// psi(x) * W(x) with W the optional area factor.
double density(const SurfacePatch& sp, double x1, double x2, double x3);

struct FrequencyPoint {
  std::array<double, 4> xi{};
  double norm() const;
};

struct QuadratureOptions {
  double nodes_per_wavelength = 8.0;
  std::uint64_t max_evaluations = 4'000'000'000;
  double rel_tol = 1e-6;
  /// Absolute floor of the convergence test, relative to the integral of |psi W|.
  double abs_tol = 1e-12;
  /// Doublings attempted after the first comparison before giving up.
  int max_refinements = 2;
  unsigned threads = 0;
};

struct SurfaceTransform {
  std::complex<double> value;
  /// Value at the previous (half) resolution the guard compared against.
  std::complex<double> coarse_value;
  std::array<int, 3> panels{};
  bool converged = false;
  std::uint64_t evaluations = 0;
  /// Integral of |psi W| at the accepted resolution; scale for underflow tests.
  double mass = 0.0;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, SurfaceTransform partial)
      : Error(what), partial_(std::move(partial)) {}
  const SurfaceTransform& partial() const noexcept { return partial_; }

 private:
  SurfaceTransform partial_;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, SurfaceTransform last)
      : Error(what), last_(std::move(last)) {}
  /// last().value and last().coarse_value are the two disagreeing estimates.
  const SurfaceTransform& last() const noexcept { return last_; }

 private:
  SurfaceTransform last_;
};

/// Composite Gauss-Legendre layout of [-r, r] per axis: the interval is cut
/// into equal segments and each segment carries its own panel count.
struct PanelLayout {
  std::array<std::vector<int>, 3> segments;

  /// One segment per axis with the given panel counts.
  static PanelLayout uniform(const std::array<int, 3>& panels);
  std::array<int, 3> totals() const;
  PanelLayout doubled() const;
};

/// Panel layout before refinement. Each axis is cut into 16 segments; a
/// segment of width w gets max(1, ceil(npw * w * F / (2 pi * 8))) panels of
/// order 8, where F bounds |xi_i + xi_4 d_i phi| over the slab of the
/// support box lying above that segment (interval arithmetic).
PanelLayout base_panels(const SurfacePatch& sp, const FrequencyPoint& xi,
                        double nodes_per_wavelength);

/// Tensor-product Gauss-Legendre value of the integral on a fixed layout.
/// No convergence check; exposed for tests and benchmarks.
SurfaceTransform integrate_at(const SurfacePatch& sp, const FrequencyPoint& xi,
                              const PanelLayout& layout, unsigned threads = 0);

/// J(xi) = integral of exp(i(xi' . x + xi4 phi(x))) psi(x) W(x) dx, accepted
/// once doubling the panel counts changes it by less than rel_tol relative.
SurfaceTransform fourier_surface_measure(const SurfacePatch& sp, const FrequencyPoint& xi,
                                         const QuadratureOptions& options = {});

struct DecayFitOptions {
  double mag_min = 8.0;
  double mag_max = 512.0;
  int n_mags = 8;
  int n_dirs = 9;
  std::uint64_t seed = 0;
  /// Random directions are drawn uniformly from the cap of this half-angle
  /// (degrees) around (0, 0, 0, 1).
  double max_tilt_deg = 30.0;
  /// |J| below this fraction of the integral of |psi W| counts as underflow.
  double underflow = 1e-9;
  QuadratureOptions quadrature;
};

struct DecaySample {
  std::size_t dir_index = 0;
  std::array<double, 4> xi{};
  double abs_xi = 0.0;
  std::complex<double> j;
  std::array<int, 3> panels{};
  bool converged = false;
  bool budget_exceeded = false;
  bool underflow = false;
};

struct DirectionFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
  bool valid = false;
};

struct DecayFit {
  std::vector<std::array<double, 4>> directions;
  std::vector<double> magnitudes;
  std::vector<DecaySample> samples;
  std::vector<DirectionFit> per_direction;
  /// Minus the slope of the slowest-decaying direction.
  double fitted_exponent = 0.0;
  double fit_stderr = 0.0;
  std::size_t worst_direction = 0;
  /// Some samples hit the evaluation budget; the fit uses the rest.
  bool partial = false;
  Warnings warnings;
};

/// Unit directions used by decay_fit: index 0 is the normal (0, 0, 0, 1).
std::vector<std::array<double, 4>> decay_directions(int n_dirs, std::uint64_t seed,
                                                    double max_tilt_deg);

DecayFit decay_fit(const SurfacePatch& sp, const DecayFitOptions& options = {});

struct GammaCheck {
  double max_ratio = 0.0;
  double argmax = 0.0;
  std::size_t points = 0;
};

/// |1 / Gamma(1 + iy)| from the reflection identity
/// |1/Gamma(1+iy)|^2 = sinh(pi y) / (pi y).
double inverse_gamma_modulus(double y);

/// |1/Gamma(1+iy)| e^{-pi|y|} on a symmetric grid of [-y_max, y_max] that
/// always contains 0 (n is rounded up to odd).
GammaCheck gamma_bound_check(double y_max, int n);

}  // namespace restrict4
