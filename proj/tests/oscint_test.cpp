#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "restrict4/oscint.hpp"

using namespace restrict4;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double smooth_bump(double s) { return std::abs(s) >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s * s)); }

double adaptive(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

/// Integral of psi W over the ball when both are radial.
double radial_mass(double r, const std::function<double(double)>& w) {
  return 4.0 * kPi * adaptive([&](double rho) { return smooth_bump(rho / r) * w(rho) * rho * rho; }, 0.0, r);
}

/// integral over [-s, s] of exp(i(a t + lam f(t))) g(t/s).
cd oscillatory_1d(double a, double lam, const std::function<double(double)>& f, double s) {
  const auto part = [&](bool imag) {
    return adaptive(
        [&](double t) {
          const double ph = a * t + lam * f(t);
          return smooth_bump(t / s) * (imag ? std::sin(ph) : std::cos(ph));
        },
        -s, s);
  };
  return {part(false), part(true)};
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

SurfacePatch flat_patch(const char* phi) {
  SurfacePatch sp(parse_polynomial(phi));
  sp.include_area_factor = false;
  return sp;
}

}  // namespace

TEST(SurfacePatch, BumpShape) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  EXPECT_DOUBLE_EQ(bump(sp, 0, 0, 0), 1.0);
  EXPECT_EQ(bump(sp, 0.5, 0, 0), 0.0);
  EXPECT_EQ(bump(sp, 0.3, 0.3, 0.3), 0.0);
  EXPECT_NEAR(bump(sp, 0.25, 0, 0), std::exp(1.0 - 1.0 / 0.75), 1e-15);
  EXPECT_NEAR(density(sp, 0.25, 0, 0), std::exp(1.0 - 1.0 / 0.75) * std::sqrt(1.25), 1e-15);
  sp.bump_kind = BumpKind::poly_power;
  sp.poly_power = 3;
  EXPECT_NEAR(bump(sp, 0.25, 0, 0), 0.75 * 0.75 * 0.75, 1e-15);
}

TEST(SurfacePatch, Validation) {
  EXPECT_THROW(validate(SurfacePatch(parse_polynomial("x1^2"), 0.0)), DomainError);
  EXPECT_THROW(validate(SurfacePatch(parse_polynomial("x1^2"), -1.0)), DomainError);
  EXPECT_THROW(validate(SurfacePatch(parse_polynomial("x1^2", 2))), DomainError);
  SurfacePatch sp(parse_polynomial("x1^2"));
  sp.bump_kind = BumpKind::poly_power;
  sp.poly_power = 0;
  EXPECT_THROW(validate(sp), DomainError);
}

TEST(PanelLayout, UniformTotalsAndDoubling) {
  const PanelLayout l = PanelLayout::uniform({3, 4, 5});
  EXPECT_EQ(l.totals(), (std::array<int, 3>{3, 4, 5}));
  EXPECT_EQ(l.doubled().totals(), (std::array<int, 3>{6, 8, 10}));
  EXPECT_THROW(PanelLayout::uniform({0, 1, 1}), DomainError);
}

TEST(PanelLayout, GrowsWithFrequency) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^4"));
  const auto lo = base_panels(sp, {{0, 0, 0, 16}}, 8.0).totals();
  const auto hi = base_panels(sp, {{0, 0, 0, 256}}, 8.0).totals();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(hi[i], lo[i]);
  EXPECT_GT(hi[0], lo[0]);
  // The x3 direction only sees the quartic, whose slope is small near 0.
  EXPECT_LT(hi[2], hi[0]);
  EXPECT_THROW(base_panels(sp, {{0, 0, 0, 16}}, 3.9), DomainError);
}

TEST(FourierSurfaceMeasure, ZeroFrequencyIsTheMass) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const SurfaceTransform t = fourier_surface_measure(sp, {});
  const double oracle = radial_mass(0.5, [](double rho) { return std::sqrt(1.0 + 4.0 * rho * rho); });
  EXPECT_TRUE(t.converged);
  EXPECT_NEAR(t.value.real(), oracle, 1e-8 * oracle);
  EXPECT_EQ(t.value.imag(), 0.0);
  EXPECT_NEAR(t.mass, oracle, 1e-8 * oracle);

  SurfacePatch flat = flat_patch("x1^2+x2^2+x3^4");
  flat.bump_radius = 0.75;
  const double flat_oracle = radial_mass(0.75, [](double) { return 1.0; });
  EXPECT_NEAR(fourier_surface_measure(flat, {}).value.real(), flat_oracle, 1e-8 * flat_oracle);
}

TEST(FourierSurfaceMeasure, ConjugateSymmetry) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  SurfacePatch sp(parse_polynomial("x1^2 + 2*x2^2 + x3^2 + x1*x3^3"));
  for (int i = 0; i < 4; ++i) {
    const FrequencyPoint xi{{u(rng), u(rng), u(rng), u(rng)}};
    const FrequencyPoint minus{{-xi.xi[0], -xi.xi[1], -xi.xi[2], -xi.xi[3]}};
    const cd a = fourier_surface_measure(sp, xi).value;
    const cd b = fourier_surface_measure(sp, minus).value;
    EXPECT_LE(std::abs(a - std::conj(b)), 1e-10 * std::abs(a));
  }
}

TEST(FourierSurfaceMeasure, PermutationEquivariance) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const cd a = fourier_surface_measure(sp, {{3.0, -7.0, 11.0, 25.0}}).value;
  const cd b = fourier_surface_measure(sp, {{11.0, 3.0, -7.0, 25.0}}).value;
  const cd c = fourier_surface_measure(sp, {{-7.0, 11.0, 3.0, 25.0}}).value;
  EXPECT_LE(rel(b, a), 1e-6);
  EXPECT_LE(rel(c, a), 1e-6);
}

TEST(FourierSurfaceMeasure, SeparableWeightMatchesProductOfLineIntegrals) {
  SurfacePatch sp = flat_patch("x1^2+x2^2+x3^4");
  const double s = 0.5 / std::sqrt(3.0);
  sp.custom_weight = [s](double x1, double x2, double x3) {
    return smooth_bump(x1 / s) * smooth_bump(x2 / s) * smooth_bump(x3 / s);
  };
  const auto sq = [](double t) { return t * t; };
  const auto quart = [](double t) { return t * t * t * t; };
  for (const FrequencyPoint& xi : {FrequencyPoint{{0, 0, 0, 60}}, FrequencyPoint{{5, -9, 14, 40}}}) {
    const double lam = xi.xi[3];
    const cd oracle = oscillatory_1d(xi.xi[0], lam, sq, s) * oscillatory_1d(xi.xi[1], lam, sq, s) *
                      oscillatory_1d(xi.xi[2], lam, quart, s);
    const SurfaceTransform t = fourier_surface_measure(sp, xi);
    EXPECT_LE(rel(t.value, oracle), 1e-7) << t.value << " vs " << oracle;
  }
}

TEST(FourierSurfaceMeasure, ApproachesStationaryPhaseConstant) {
  // Three Fresnel factors sqrt(pi / lam) e^{i pi / 4}: the limit is pi^{3/2}.
  const SurfacePatch sp = flat_patch("x1^2+x2^2+x3^2");
  for (double lam : {128.0, 256.0}) {
    const cd j = fourier_surface_measure(sp, {{0, 0, 0, lam}}).value;
    EXPECT_NEAR(std::abs(j) * std::pow(lam / kPi, 1.5), 1.0, 0.01) << lam;
  }
}

TEST(FourierSurfaceMeasure, GuardAgreesWithCoarseValue) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^4"));
  const SurfaceTransform t = fourier_surface_measure(sp, {{4, 0, -3, 50}});
  EXPECT_TRUE(t.converged);
  EXPECT_LE(std::abs(t.value - t.coarse_value), 1e-6 * std::abs(t.value) + 1e-12 * t.mass);
  EXPECT_GT(t.evaluations, 0u);
}

TEST(FourierSurfaceMeasure, IntegrateAtIsThreadCountInvariant) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^4"));
  const FrequencyPoint xi{{4, 1, -3, 30}};
  const PanelLayout l = base_panels(sp, xi, 8.0);
  const cd a = integrate_at(sp, xi, l, 1).value;
  const cd b = integrate_at(sp, xi, l, 3).value;
  EXPECT_EQ(a, b);
}

TEST(FourierSurfaceMeasure, Errors) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  QuadratureOptions o;
  o.nodes_per_wavelength = 3.0;
  EXPECT_THROW(fourier_surface_measure(sp, {{0, 0, 0, 10}}, o), DomainError);
  o.nodes_per_wavelength = 8.0;
  o.max_evaluations = 1000;
  try {
    fourier_surface_measure(sp, {{0, 0, 0, 10}}, o);
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("budget"), std::string::npos);
  }
}

TEST(DecayFit, Preconditions) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  DecayFitOptions o;
  o.n_mags = 7;
  EXPECT_THROW(decay_fit(sp, o), DomainError);
  o.n_mags = 8;
  o.mag_max = 31.0 * o.mag_min;
  EXPECT_THROW(decay_fit(sp, o), DomainError);
  o.mag_max = 512.0;
  o.n_dirs = 0;
  EXPECT_THROW(decay_fit(sp, o), DomainError);
}

TEST(DecayFit, DirectionsAreUnitAndInTheCap) {
  const auto dirs = decay_directions(9, 5, 30.0);
  ASSERT_EQ(dirs.size(), 9u);
  EXPECT_EQ(dirs[0], (std::array<double, 4>{0, 0, 0, 1}));
  for (const auto& d : dirs) {
    EXPECT_NEAR(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3], 1.0, 1e-14);
    EXPECT_GE(d[3], std::cos(kPi / 6.0) - 1e-14);
  }
  EXPECT_EQ(decay_directions(9, 5, 30.0), dirs);
  EXPECT_NE(decay_directions(9, 6, 30.0), dirs);
}

TEST(DecayFit, ParaboloidNormalDirection) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  DecayFitOptions o;
  o.n_dirs = 1;
  o.mag_min = 8.0;
  o.mag_max = 256.0;
  const DecayFit f = decay_fit(sp, o);
  EXPECT_EQ(f.samples.size(), 8u);
  EXPECT_FALSE(f.partial);
  EXPECT_NEAR(f.fitted_exponent, 1.5, 0.1);
  EXPECT_EQ(f.worst_direction, 0u);
}

TEST(DecayFit, BudgetHitMarksThePartialFit) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  DecayFitOptions o;
  o.n_dirs = 1;
  o.mag_max = 256.0;
  o.quadrature.max_evaluations = 30'000'000;
  const DecayFit f = decay_fit(sp, o);
  EXPECT_TRUE(f.partial);
  EXPECT_FALSE(f.warnings.empty());
  EXPECT_TRUE(f.samples.back().budget_exceeded);
}

TEST(Gamma, ReflectionAgreesWithTheIntegral) {
  // Gamma(1 + iy) = integral over t > 0 of t^{iy} e^{-t}.
  boost::math::quadrature::exp_sinh<double> es;
  for (double y : {0.0, 0.3, 1.0, 2.5, -1.7}) {
    const double re = es.integrate([y](double t) { return std::cos(y * std::log(t)) * std::exp(-t); });
    const double im = es.integrate([y](double t) { return std::sin(y * std::log(t)) * std::exp(-t); });
    EXPECT_NEAR(inverse_gamma_modulus(y), 1.0 / std::hypot(re, im), 1e-8) << y;
  }
}

TEST(Gamma, BoundCheck) {
  const GammaCheck g = gamma_bound_check(50.0, 10001);
  EXPECT_EQ(g.points, 10001u);
  EXPECT_DOUBLE_EQ(g.max_ratio, 1.0);
  EXPECT_EQ(g.argmax, 0.0);
  EXPECT_EQ(gamma_bound_check(1.0, 100).points, 101u);
  EXPECT_THROW(gamma_bound_check(0.0, 200), DomainError);
  EXPECT_THROW(gamma_bound_check(1.0, 99), DomainError);
}

TEST(Gamma, EvenAndAtMostOne) {
  EXPECT_EQ(inverse_gamma_modulus(0.0), 1.0);
  for (double y = 0.05; y < 50.0; y *= 1.3) {
    EXPECT_DOUBLE_EQ(inverse_gamma_modulus(y), inverse_gamma_modulus(-y));
    EXPECT_LE(inverse_gamma_modulus(y) * std::exp(-kPi * y), 1.0);
  }
}
