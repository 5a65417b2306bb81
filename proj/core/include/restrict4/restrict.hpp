#pragma once

#include <string_view>
#include <vector>

#include "restrict4/error.hpp"
#include "restrict4/newton.hpp"
#include "restrict4/oscint.hpp"
#include "restrict4/rational.hpp"

namespace restrict4 {

/// Anisotropic boxes |xi_i| <= delta^{a_i} (i = 1, 2, 3), |xi_4| <= c delta
/// adapted to the principal face of the Newton polyhedron.
struct KnappFamily {
  /// a = attaining normal / attaining offset, so min over the support of
  /// <a, k> is 1 and a1 + a2 + a3 = 1/d.
  std::vector<Rational> weights;
  std::vector<double> scales;
  double cap_constant = 0.125;
  /// max |Phi| / delta seen on the sampled boxes.
  double c_phi = 0.0;
  Rational d;
  Warnings warnings;

  /// Half-widths of the frequency box at scale delta, in the order
  /// (xi_1, xi_2, xi_3, xi_4).
  std::array<double, 4> widths(double delta) const;
};

/// delta_max, delta_max * ratio, ... down to delta_min (count points, geometric).
std::vector<double> geometric_scales(double delta_max, double delta_min, int count);

/// 2^-2, 2^-3, ..., 2^-9.
std::vector<double> default_knapp_scales();

KnappFamily knapp_family(const Polynomial& phi, const DistanceResult& dist,
                         std::vector<double> scales, double cap_constant = 0.125);

struct KnappOptions {
  /// Panels per axis for the first pass of the cap integral (order 8 each).
  int panels = 8;
  double rel_tol = 1e-6;
  int max_refinements = 4;
  /// Slopes within +-threshold of zero are reported as critical.
  double verdict_threshold = 0.02;
  unsigned threads = 0;
};

struct RestrictionSample {
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double predicted_exponent = 0.0;
};

/// 1/(2d) - (1 + 1/d)(1 - 1/p).
double predicted_exponent(const Rational& d, double p);

/// The p at which predicted_exponent(d, p) vanishes, solved exactly.
Rational knapp_crossing_p(const Rational& d);

/// (integral over the cap of |fhat(x', Phi(x'))|^2 psi W dx')^{1/2}.
double knapp_lhs(const SurfacePatch& sp, const KnappFamily& fam, double delta,
                 const KnappOptions& options = {});

/// ||f||_{L_p(R^4)} as the product of four one-dimensional norms, each taken
/// by quadrature on the space side.
double knapp_rhs(const KnappFamily& fam, double delta, double p);

/// ||fhat||_{L_2(R^4)} computed on the frequency side; equals knapp_rhs(., 2).
double knapp_frequency_l2(const KnappFamily& fam, double delta);

RestrictionSample restriction_sample(const SurfacePatch& sp, const KnappFamily& fam, double delta,
                                     const Rational& p, const KnappOptions& options = {});

enum class Verdict { bounded, critical, divergent };

std::string_view to_string(Verdict v);

struct KnappReport {
  Rational p;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  double predicted_slope = 0.0;
  Verdict verdict = Verdict::critical;
  std::vector<RestrictionSample> samples;
  Rational crossing_p;
  /// Largest relative gap between knapp_rhs(., 2) and knapp_frequency_l2 over
  /// the scales of the scan.
  double plancherel_rel_error = 0.0;
  Warnings warnings;
};

/// Fits log(ratio) against log(delta). The cap integrals do not depend on p,
/// so the multi-p form computes them once per scale.
KnappReport knapp_scan(const SurfacePatch& sp, const KnappFamily& fam, const Rational& p,
                       const KnappOptions& options = {});
std::vector<KnappReport> knapp_scan(const SurfacePatch& sp, const KnappFamily& fam,
                                    const std::vector<Rational>& ps,
                                    const KnappOptions& options = {});

}  // namespace restrict4
