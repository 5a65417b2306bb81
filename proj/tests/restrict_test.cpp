#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "restrict4/adapt.hpp"
#include "restrict4/restrict.hpp"

using namespace restrict4;

namespace {

std::vector<Rational> R(std::initializer_list<Rational> v) { return v; }

KnappFamily family_for(const char* text, std::vector<double> scales = default_knapp_scales()) {
  const Polynomial p = parse_polynomial(text);
  return knapp_family(p, distance(build_polyhedron(support(p))), std::move(scales));
}

const KnappReport& at(const std::vector<KnappReport>& rs, const Rational& p) {
  for (const auto& r : rs) {
    if (r.p == p) return r;
  }
  throw std::runtime_error("p not scanned");
}

}  // namespace

TEST(KnappFamily, Weights) {
  const KnappFamily para = family_for("x1^2+x2^2+x3^2");
  EXPECT_EQ(para.weights, R({Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(para.d, Rational(2, 3));
  EXPECT_TRUE(para.warnings.empty());

  const KnappFamily quartic = family_for("x1^2+x2^2+x3^4");
  EXPECT_EQ(quartic.weights, R({Rational(1, 2), Rational(1, 2), Rational(1, 4)}));

  const KnappFamily saddle = family_for("x1*x2 + x3^2");
  EXPECT_EQ(saddle.weights, R({Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
}

TEST(KnappFamily, WeightsSumToInverseDistanceAndPhiFitsTheBox) {
  for (const char* text : {"x1^2+x2^2+x3^2", "x1^2+x2^2+x3^4", "x1*x2 + x3^2", "x1^2 + x2^4 + x3^6 + x1*x2*x3"}) {
    const KnappFamily f = family_for(text);
    Rational sum;
    for (const auto& a : f.weights) {
      EXPECT_GT(a.sign(), 0);
      sum += a;
    }
    EXPECT_EQ(sum, f.d.reciprocal()) << text;
    EXPECT_GT(f.c_phi, 0.0);
    EXPECT_LE(f.c_phi, 8.0) << text;
  }
}

TEST(KnappFamily, ZeroWeightIsReplacedLoudly) {
  // Support {(2,0,0),(0,2,0)}: the attaining normal has no x3 component.
  const KnappFamily f = family_for("x1^2+x2^2");
  ASSERT_EQ(f.weights.size(), 3u);
  EXPECT_EQ(f.weights[2], Rational(2));
  EXPECT_FALSE(f.warnings.empty());
}

TEST(KnappFamily, WidthsAndScales) {
  const KnappFamily f = family_for("x1^2+x2^2+x3^4");
  const auto w = f.widths(1.0 / 16.0);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[2], 0.5);
  EXPECT_DOUBLE_EQ(w[3], 0.125 / 16.0);
  const auto s = default_knapp_scales();
  ASSERT_EQ(s.size(), 8u);
  EXPECT_DOUBLE_EQ(s.front(), 0.25);
  EXPECT_DOUBLE_EQ(s.back(), 1.0 / 512.0);
  EXPECT_EQ(geometric_scales(0.25, 1.0 / 512.0, 8), s);
  EXPECT_THROW(geometric_scales(0.25, 0.5, 8), DomainError);
  EXPECT_THROW(geometric_scales(0.25, 0.1, 1), DomainError);
}

TEST(KnappFamily, Errors) {
  const Polynomial p = parse_polynomial("x1^2+x2^2+x3^2");
  const DistanceResult d = distance(build_polyhedron(support(p)));
  EXPECT_THROW(knapp_family(p, d, {}), DomainError);
  EXPECT_THROW(knapp_family(p, d, {0.5, 1.5}), DomainError);
  EXPECT_THROW(knapp_family(p, d, {0.5}, 0.0), DomainError);
}

TEST(PredictedExponent, Examples) {
  EXPECT_NEAR(predicted_exponent(Rational(2, 3), 10.0 / 7.0), 0.0, 1e-15);
  EXPECT_LT(predicted_exponent(Rational(2, 3), 1.6), 0.0);
  EXPECT_GT(predicted_exponent(Rational(2, 3), 1.25), 0.0);
  EXPECT_NEAR(predicted_exponent(Rational(4, 5), 18.0 / 13.0), 0.0, 1e-15);
  EXPECT_EQ(knapp_crossing_p(Rational(2, 3)), Rational(10, 7));
  EXPECT_EQ(knapp_crossing_p(Rational(4, 5)), Rational(18, 13));
  EXPECT_THROW(knapp_crossing_p(Rational(0)), DomainError);
}

TEST(PredictedExponent, CrossingIsTheCriticalExponent) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> den(2, 40);
  for (int i = 0; i < 20; ++i) {
    const int q = den(rng);
    std::uniform_int_distribution<int> num(q / 2 + 1, 3 * q - 1);
    const Rational d(num(rng), q);
    EXPECT_EQ(knapp_crossing_p(d), critical_p(d).p_star) << d;
    EXPECT_NEAR(predicted_exponent(d, knapp_crossing_p(d).to_double()), 0.0, 1e-12);
    // q >= 2d + 2 at the crossing.
    EXPECT_EQ(dual_exponent(knapp_crossing_p(d)), Rational(2) * d + Rational(2));
  }
}

TEST(RestrictionSample, Plancherel) {
  const KnappFamily f = family_for("x1^2+x2^2+x3^4");
  for (double delta : f.scales) {
    const double l2 = knapp_frequency_l2(f, delta);
    EXPECT_NEAR(knapp_rhs(f, delta, 2.0), l2, 1e-6 * l2) << delta;
  }
}

TEST(RestrictionSample, Fields) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const KnappFamily f = family_for("x1^2+x2^2+x3^2");
  const RestrictionSample s = restriction_sample(sp, f, 1.0 / 16.0, Rational(10, 7));
  EXPECT_GT(s.lhs, 0.0);
  EXPECT_GT(s.rhs, 0.0);
  EXPECT_DOUBLE_EQ(s.ratio, s.lhs / s.rhs);
  EXPECT_NEAR(s.predicted_exponent, 0.0, 1e-15);
  EXPECT_THROW(restriction_sample(sp, f, 0.3, Rational(10, 7)), DomainError);
  EXPECT_THROW(restriction_sample(sp, f, 1.0 / 16.0, Rational(1)), DomainError);
  EXPECT_THROW(restriction_sample(sp, f, 1.0 / 16.0, Rational(5, 2)), DomainError);
}

TEST(RestrictionSample, VanishingBumpAtTheOriginLosesTheCap) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const KnappFamily f = family_for("x1^2+x2^2+x3^2");
  const double delta = f.scales.back();
  const double normal = knapp_lhs(sp, f, delta);
  SurfacePatch hollow = sp;
  hollow.custom_weight = [&sp](double x1, double x2, double x3) {
    const double s2 = (x1 * x1 + x2 * x2 + x3 * x3) / (sp.bump_radius * sp.bump_radius);
    return s2 * bump(sp, x1, x2, x3);
  };
  EXPECT_GE(normal / knapp_lhs(hollow, f, delta), 10.0);
}

TEST(KnappScan, ParaboloidBracket) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const KnappFamily f = family_for("x1^2+x2^2+x3^2");
  const Rational ps = Rational(10, 7);
  const std::vector<Rational> grid{ps - Rational(1, 10), ps - Rational(1, 20), ps, ps + Rational(1, 20),
                                   ps + Rational(1, 10)};
  const auto rs = knapp_scan(sp, f, grid);
  ASSERT_EQ(rs.size(), grid.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(rs[i].p, grid[i]);
    EXPECT_EQ(rs[i].crossing_p, ps);
    EXPECT_LE(std::abs(rs[i].fitted_slope - rs[i].predicted_slope), 0.1);
    EXPECT_LE(rs[i].plancherel_rel_error, 1e-6);
    EXPECT_EQ(rs[i].samples.size(), f.scales.size());
    if (i > 0) {
      EXPECT_LE(rs[i].fitted_slope, rs[i - 1].fitted_slope);
    }
  }
  EXPECT_EQ(at(rs, grid[0]).verdict, Verdict::bounded);
  EXPECT_EQ(at(rs, ps).verdict, Verdict::critical);
  EXPECT_LT(std::abs(at(rs, ps).fitted_slope), 0.05);
  EXPECT_EQ(at(rs, grid[4]).verdict, Verdict::divergent);

  const KnappReport single = knapp_scan(sp, f, ps);
  EXPECT_EQ(single.fitted_slope, at(rs, ps).fitted_slope);
}

TEST(KnappScan, ParaboloidBelowAndAbove) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const KnappFamily f = family_for("x1^2+x2^2+x3^2");
  const auto rs = knapp_scan(sp, f, {Rational(5, 4), Rational(8, 5)});
  EXPECT_EQ(rs[0].verdict, Verdict::bounded);
  EXPECT_EQ(rs[1].verdict, Verdict::divergent);
}

TEST(KnappScan, SaddleSlopesFollowThePrediction) {
  SurfacePatch sp(parse_polynomial("x1*x2 + x3^2"));
  const KnappFamily f = family_for("x1*x2 + x3^2");
  const Rational ps = critical_p(f.d).p_star;
  for (const auto& r : knapp_scan(sp, f, {ps - Rational(1, 10), ps, ps + Rational(1, 10)})) {
    EXPECT_LE(std::abs(r.fitted_slope - r.predicted_slope), 0.1) << r.p;
  }
}

TEST(KnappScan, Preconditions) {
  SurfacePatch sp(parse_polynomial("x1^2+x2^2+x3^2"));
  const KnappFamily few = family_for("x1^2+x2^2+x3^2", geometric_scales(0.25, 1.0 / 128.0, 5));
  EXPECT_THROW(knapp_scan(sp, few, Rational(10, 7)), DomainError);
  const KnappFamily narrow = family_for("x1^2+x2^2+x3^2", geometric_scales(0.25, 1.0 / 32.0, 6));
  EXPECT_THROW(knapp_scan(sp, narrow, Rational(10, 7)), DomainError);
  const KnappFamily f = family_for("x1^2+x2^2+x3^2");
  EXPECT_THROW(knapp_scan(sp, f, std::vector<Rational>{}), DomainError);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::bounded), "bounded");
  EXPECT_EQ(to_string(Verdict::critical), "critical");
  EXPECT_EQ(to_string(Verdict::divergent), "divergent");
}
