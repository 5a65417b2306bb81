#include "restrict4/restrict.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "restrict4/parallel.hpp"
#include "restrict4/quadrature.hpp"

namespace restrict4 {
namespace {

constexpr int kOrder = 8;

/// One-dimensional profile g(s) = exp(1 - 1/(1 - s^2)) on (-1, 1).
double profile(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

/// G(u) = integral of g(s) e^{isu} ds, tabulated on Gauss nodes of [0, U].
/// G is even and decays faster than any power; |G| < 1e-13 beyond U = 800.
struct SpaceProfile {
  QuadratureRule u;
  std::vector<double> g;

  SpaceProfile() {
    const QuadratureRule s = composite_gauss_legendre(0.0, 1.0, 512, kOrder);
    u = composite_gauss_legendre(0.0, 800.0, 400, kOrder);
    g.resize(u.nodes.size());
    for (std::size_t k = 0; k < u.nodes.size(); ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < s.nodes.size(); ++j) {
        acc += s.weights[j] * profile(s.nodes[j]) * std::cos(s.nodes[j] * u.nodes[k]);
      }
      g[k] = 2.0 * acc;
    }
  }
};

const SpaceProfile& space_profile() {
  static const SpaceProfile p;
  return p;
}

/// ||f_w||_p for f_w(y) = (2 pi)^{-1/2} integral of g(xi/w) e^{i xi y} d xi
///                      = (2 pi)^{-1/2} w G(w y).
double one_dim_norm(double w, double p) {
  const SpaceProfile& sp = space_profile();
  const double scale = w / std::sqrt(2.0 * std::numbers::pi);
  double acc = 0.0;
  for (std::size_t k = 0; k < sp.g.size(); ++k) {
    // Node y = u / w, weight du / w; symmetric halves.
    acc += 2.0 * (sp.u.weights[k] / w) * std::pow(scale * std::abs(sp.g[k]), p);
  }
  return std::pow(acc, 1.0 / p);
}

struct Term {
  int k1, k2, k3;
  double c;
};

std::vector<Term> flatten(const Polynomial& p) {
  std::vector<Term> out;
  for (const auto& [k, c] : p.terms()) out.push_back({k[0], k[1], k[2], c});
  return out;
}

double ipow(double x, int e) {
  double v = 1.0;
  for (int i = 0; i < e; ++i) v *= x;
  return v;
}

double eval(const std::vector<Term>& terms, double x1, double x2, double x3) {
  double s = 0.0;
  for (const auto& t : terms) s += t.c * ipow(x1, t.k1) * ipow(x2, t.k2) * ipow(x3, t.k3);
  return s;
}

struct CapIntegrand {
  const SurfacePatch& sp;
  std::vector<Term> phi;
  std::array<std::vector<Term>, 3> grad;
  std::array<double, 4> w{};

  CapIntegrand(const SurfacePatch& patch, const std::array<double, 4>& widths)
      : sp(patch), phi(flatten(patch.phi)), w(widths) {
    const auto g = gradient(patch.phi);
    for (std::size_t i = 0; i < 3; ++i) grad[i] = flatten(g[i]);
  }

  /// Everything except the tangential factors g(x_i/w_i)^2.
  double normal_part(double x1, double x2, double x3) const {
    const double v = profile(eval(phi, x1, x2, x3) / w[3]);
    if (v == 0.0) return 0.0;
    const double psi = bump(sp, x1, x2, x3);
    if (psi == 0.0) return 0.0;
    double dens = psi;
    if (sp.include_area_factor) {
      double g2 = 1.0;
      for (const auto& g : grad) {
        const double d = eval(g, x1, x2, x3);
        g2 += d * d;
      }
      dens *= std::sqrt(g2);
    }
    return v * v * dens;
  }
};

double cap_integral(const CapIntegrand& f, int panels, unsigned threads) {
  std::array<QuadratureRule, 3> rules;
  std::array<std::vector<double>, 3> tangential;
  for (std::size_t i = 0; i < 3; ++i) {
    rules[i] = composite_gauss_legendre(-f.w[i], f.w[i], panels, kOrder);
    for (double x : rules[i].nodes) {
      const double v = profile(x / f.w[i]);
      tangential[i].push_back(v * v);
    }
  }
  std::vector<double> partial(rules[0].nodes.size(), 0.0);
  parallel_for(partial.size(), threads, [&](std::size_t a) {
    const double x1 = rules[0].nodes[a];
    const double t1 = rules[0].weights[a] * tangential[0][a];
    if (t1 == 0.0) return;
    double acc = 0.0;
    for (std::size_t b = 0; b < rules[1].nodes.size(); ++b) {
      const double t12 = t1 * rules[1].weights[b] * tangential[1][b];
      if (t12 == 0.0) continue;
      for (std::size_t c = 0; c < rules[2].nodes.size(); ++c) {
        const double t = t12 * rules[2].weights[c] * tangential[2][c];
        if (t == 0.0) continue;
        acc += t * f.normal_part(x1, rules[1].nodes[b], rules[2].nodes[c]);
      }
    }
    partial[a] = acc;
  });
  double sum = 0.0;
  for (double v : partial) sum += v;
  return sum;
}

void check_p(double p) {
  if (!(p > 1.0 && p <= 2.0)) throw DomainError("restriction samples need 1 < p <= 2");
}

bool has_scale(const KnappFamily& fam, double delta) {
  return std::any_of(fam.scales.begin(), fam.scales.end(),
                     [&](double s) { return std::abs(s - delta) <= 1e-12 * s; });
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::array<double, 4> KnappFamily::widths(double delta) const {
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < 3; ++i) w[i] = std::pow(delta, weights[i].to_double());
  w[3] = cap_constant * delta;
  return w;
}

std::vector<double> geometric_scales(double delta_max, double delta_min, int count) {
  if (count < 2) throw DomainError("need at least two scales");
  if (!(delta_min > 0.0) || !(delta_max <= 1.0) || !(delta_min < delta_max)) {
    throw DomainError("scales must satisfy 0 < delta_min < delta_max <= 1");
  }
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(delta_max * std::pow(delta_min / delta_max, static_cast<double>(i) / (count - 1)));
  }
  return out;
}

std::vector<double> default_knapp_scales() { return geometric_scales(0.25, 1.0 / 512.0, 8); }

KnappFamily knapp_family(const Polynomial& phi, const DistanceResult& dist,
                         std::vector<double> scales, double cap_constant) {
  if (phi.nvars() != 3) throw DomainError("Knapp family needs a polynomial in x1, x2, x3");
  if (dist.attaining_normal.size() != 3) throw DomainError("distance result has wrong dimension");
  if (dist.attaining_offset.sign() <= 0) throw DegenerateInput("principal face offset is not positive");
  if (!(cap_constant > 0.0)) throw DomainError("cap constant must be positive");
  if (scales.empty()) throw DomainError("need at least one scale");
  for (double s : scales) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("scales must lie in (0, 1]");
  }
  std::sort(scales.begin(), scales.end(), std::greater<>());

  KnappFamily fam;
  fam.d = dist.d;
  fam.cap_constant = cap_constant;
  fam.scales = std::move(scales);
  Rational largest;
  for (const auto& a : dist.attaining_normal) {
    fam.weights.push_back(a / dist.attaining_offset);
    largest = std::max(largest, fam.weights.back());
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (fam.weights[i].sign() > 0) continue;
    fam.weights[i] = Rational(4) * largest;
    fam.warnings.push_back("principal face normal has a zero component in x" + std::to_string(i + 1) +
                           "; weight replaced by 4*max = " + fam.weights[i].str());
  }

  constexpr int kGrid = 21;
  const auto terms = flatten(phi);
  for (double delta : fam.scales) {
    const auto w = fam.widths(delta);
    double worst = 0.0;
    for (int a = 0; a < kGrid; ++a) {
      const double x1 = w[0] * (2.0 * a / (kGrid - 1) - 1.0);
      for (int b = 0; b < kGrid; ++b) {
        const double x2 = w[1] * (2.0 * b / (kGrid - 1) - 1.0);
        for (int c = 0; c < kGrid; ++c) {
          const double x3 = w[2] * (2.0 * c / (kGrid - 1) - 1.0);
          worst = std::max(worst, std::abs(eval(terms, x1, x2, x3)));
        }
      }
    }
    fam.c_phi = std::max(fam.c_phi, worst / delta);
  }
  return fam;
}

double predicted_exponent(const Rational& d, double p) {
  check_p(p);
  const double dd = d.to_double();
  return 1.0 / (2.0 * dd) - (1.0 + 1.0 / dd) * (1.0 - 1.0 / p);
}

Rational knapp_crossing_p(const Rational& d) {
  if (d.sign() <= 0) throw DomainError("distance must be positive");
  // A - B (1 - 1/p) = 0 with A = 1/(2d), B = 1 + 1/d.
  const Rational a = (Rational(2) * d).reciprocal();
  const Rational b = Rational(1) + d.reciprocal();
  return (Rational(1) - a / b).reciprocal();
}

double knapp_lhs(const SurfacePatch& sp, const KnappFamily& fam, double delta,
                 const KnappOptions& options) {
  validate(sp);
  if (options.panels < 1) throw DomainError("panel count must be positive");
  const CapIntegrand f(sp, fam.widths(delta));
  int panels = options.panels;
  double coarse = cap_integral(f, panels, options.threads);
  for (int round = 0; round < options.max_refinements; ++round) {
    panels *= 2;
    const double fine = cap_integral(f, panels, options.threads);
    if (std::abs(fine - coarse) <= options.rel_tol * std::abs(fine)) return std::sqrt(fine);
    coarse = fine;
  }
  SurfaceTransform last;
  last.value = coarse;
  throw ConvergenceFailure("cap integral did not converge at delta = " + fmt(delta), last);
}

double knapp_rhs(const KnappFamily& fam, double delta, double p) {
  check_p(p);
  double out = 1.0;
  for (double w : fam.widths(delta)) out *= one_dim_norm(w, p);
  return out;
}

double knapp_frequency_l2(const KnappFamily& fam, double delta) {
  double out = 1.0;
  for (double w : fam.widths(delta)) {
    const QuadratureRule r = composite_gauss_legendre(-w, w, 64, kOrder);
    double acc = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      const double v = profile(r.nodes[k] / w);
      acc += r.weights[k] * v * v;
    }
    out *= std::sqrt(acc);
  }
  return out;
}

RestrictionSample restriction_sample(const SurfacePatch& sp, const KnappFamily& fam, double delta,
                                     const Rational& p, const KnappOptions& options) {
  if (!has_scale(fam, delta)) throw DomainError("delta is not one of the family's scales");
  const double pd = p.to_double();
  check_p(pd);
  RestrictionSample s;
  s.delta = delta;
  s.lhs = knapp_lhs(sp, fam, delta, options);
  s.rhs = knapp_rhs(fam, delta, pd);
  s.ratio = s.lhs / s.rhs;
  s.predicted_exponent = predicted_exponent(fam.d, pd);
  return s;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded:
      return "bounded";
    case Verdict::critical:
      return "critical";
    case Verdict::divergent:
      return "divergent";
  }
  return "unknown";
}

KnappReport knapp_scan(const SurfacePatch& sp, const KnappFamily& fam, const Rational& p,
                       const KnappOptions& options) {
  return knapp_scan(sp, fam, std::vector<Rational>{p}, options).front();
}

std::vector<KnappReport> knapp_scan(const SurfacePatch& sp, const KnappFamily& fam,
                                    const std::vector<Rational>& ps,
                                    const KnappOptions& options) {
  if (ps.empty()) throw DomainError("need at least one exponent p");
  for (const auto& p : ps) check_p(p.to_double());
  if (fam.scales.size() < 6) throw DomainError("Knapp scan needs at least 6 scales");
  if (fam.scales.front() / fam.scales.back() < 16.0 * (1.0 - 1e-12)) {
    throw DomainError("Knapp scales must span at least 4 octaves");
  }

  Warnings warnings;
  std::vector<double> lhs(fam.scales.size(), 0.0);
  std::vector<bool> usable(fam.scales.size(), false);
  double plancherel = 0.0;
  for (std::size_t i = 0; i < fam.scales.size(); ++i) {
    const double delta = fam.scales[i];
    const double l2 = knapp_frequency_l2(fam, delta);
    plancherel = std::max(plancherel, std::abs(knapp_rhs(fam, delta, 2.0) - l2) / l2);
    try {
      lhs[i] = knapp_lhs(sp, fam, delta, options);
    } catch (const ConvergenceFailure& e) {
      warnings.push_back(std::string(e.what()) + "; sample dropped");
      continue;
    }
    if (!(lhs[i] > 1e-300) || !std::isfinite(lhs[i])) {
      warnings.push_back("cap integral underflow at delta = " + fmt(delta) + "; sample dropped");
      continue;
    }
    usable[i] = true;
  }

  std::vector<KnappReport> out;
  for (const auto& p : ps) {
    const double pd = p.to_double();
    KnappReport r;
    r.p = p;
    r.predicted_slope = predicted_exponent(fam.d, pd);
    r.crossing_p = knapp_crossing_p(fam.d);
    r.plancherel_rel_error = plancherel;
    r.warnings = warnings;
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < fam.scales.size(); ++i) {
      if (!usable[i]) continue;
      RestrictionSample s;
      s.delta = fam.scales[i];
      s.lhs = lhs[i];
      s.rhs = knapp_rhs(fam, s.delta, pd);
      s.ratio = s.lhs / s.rhs;
      s.predicted_exponent = r.predicted_slope;
      if (!(s.rhs > 0.0) || !std::isfinite(s.ratio)) {
        r.warnings.push_back("space-side norm underflow at delta = " + fmt(s.delta) +
                             "; sample dropped");
        continue;
      }
      r.samples.push_back(s);
      lx.push_back(std::log(s.delta));
      ly.push_back(std::log(s.ratio));
    }
    if (r.samples.size() < 4) throw DegenerateInput("fewer than 4 valid Knapp samples");
    const LineFit fit = least_squares(lx, ly);
    r.fitted_slope = fit.slope;
    r.slope_stderr = fit.slope_stderr;
    if (r.fitted_slope < -options.verdict_threshold) {
      r.verdict = Verdict::divergent;
    } else if (r.fitted_slope > options.verdict_threshold) {
      r.verdict = Verdict::bounded;
    } else {
      r.verdict = Verdict::critical;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace restrict4
