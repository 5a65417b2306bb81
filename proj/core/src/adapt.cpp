#include "restrict4/adapt.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "restrict4/error.hpp"
#include "restrict4/parallel.hpp"

namespace restrict4 {
namespace {

struct Evaluation {
  Rational d;
  std::size_t pruned = 0;
};

Evaluation evaluate_rotation(const Polynomial& p, const LinearChange& r, double prune_rel) {
  Evaluation e;
  const Polynomial q = compose_linear(p, r, prune_rel, &e.pruned);
  e.d = newton_distance(support(q));
  return e;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

LinearChange random_rotation(std::uint64_t seed, int start) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(start) + 1);
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double u3 = uniform01(rng);
  const double tau = 2.0 * std::numbers::pi;
  Eigen::Quaterniond q(std::sqrt(u1) * std::cos(tau * u3), std::sqrt(1.0 - u1) * std::sin(tau * u2),
                       std::sqrt(1.0 - u1) * std::cos(tau * u2), std::sqrt(u1) * std::sin(tau * u3));
  q.normalize();
  return LinearChange(Eigen::MatrixXd(q.toRotationMatrix()));
}

LinearChange axis_rotation(int axis, double angle) {
  Eigen::Matrix3d m = Eigen::AngleAxisd(angle, Eigen::Vector3d::Unit(axis)).toRotationMatrix();
  return LinearChange(Eigen::MatrixXd(m));
}

std::array<double, 3> rotation_vector(const LinearChange& r) {
  const Eigen::Matrix3d m = r.matrix();
  const Eigen::AngleAxisd aa(m);
  const Eigen::Vector3d v = aa.axis() * aa.angle();
  return {v.x(), v.y(), v.z()};
}

/// Keeps the rotation in SO(3) despite accumulated rounding.
LinearChange reorthonormalize(const LinearChange& r) {
  Eigen::Matrix3d m = r.matrix();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d q = svd.matrixU() * svd.matrixV().transpose();
  if (q.determinant() < 0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    q = u * svd.matrixV().transpose();
  }
  return LinearChange(Eigen::MatrixXd(q));
}

struct StartOutcome {
  LinearChange rotation = LinearChange::identity(3);
  Evaluation value;
};

StartOutcome run_start(const Polynomial& p, const HeightSearchOptions& o, int start) {
  StartOutcome best;
  auto consider = [&](const LinearChange& r) {
    const Evaluation e = evaluate_rotation(p, r, o.prune_rel);
    if (e.d > best.value.d) {
      best.rotation = r;
      best.value = e;
      return true;
    }
    return false;
  };

  const LinearChange initial = start == 0 ? LinearChange::identity(3) : random_rotation(o.seed, start);
  best.rotation = initial;
  best.value = evaluate_rotation(p, initial, o.prune_rel);
  consider(align_quadratic_part(p, initial, o.prune_rel));

  if (o.iters <= 0) return best;
  const double ratio =
      o.iters > 1 ? std::pow(o.final_step / o.initial_step, 1.0 / (o.iters - 1)) : 1.0;
  double step = o.iters > 1 ? o.initial_step : o.final_step;
  for (int it = 0; it < o.iters; ++it, step *= ratio) {
    for (int axis = 0; axis < 3; ++axis) {
      for (double sign : {1.0, -1.0}) {
        const LinearChange moved = reorthonormalize(best.rotation * axis_rotation(axis, sign * step));
        if (!consider(moved)) consider(align_quadratic_part(p, moved, o.prune_rel));
      }
    }
  }
  return best;
}

}  // namespace

LinearChange align_quadratic_part(const Polynomial& p, const LinearChange& r, double prune_rel) {
  const Polynomial q = compose_linear(p, r, prune_rel);
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (const auto& [k, c] : q.terms()) {
    if (total_degree(k) != 2) continue;
    int first = -1;
    int second = -1;
    for (int i = 0; i < 3; ++i) {
      for (int e = 0; e < k[static_cast<std::size_t>(i)]; ++e) (first < 0 ? first : second) = i;
    }
    if (first == second) {
      h(first, first) = 2.0 * c;
    } else {
      h(first, second) = c;
      h(second, first) = c;
    }
  }
  if (h.cwiseAbs().maxCoeff() == 0.0) return r;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(h);
  // Eigen sorts ascending; put the largest curvature first, kernel last.
  Eigen::Matrix3d v = eig.eigenvectors().rowwise().reverse();
  if (v.determinant() < 0) v.col(2) *= -1.0;
  return reorthonormalize(r * LinearChange(Eigen::MatrixXd(v)));
}

HeightResult height_search(const Polynomial& p, const HeightSearchOptions& options) {
  if (p.nvars() != 3) throw DomainError("height search is implemented for three variables");
  if (options.starts < 1) throw DomainError("height search needs at least one start");
  if (options.iters < 0) throw DomainError("iteration count must be non-negative");

  Warnings ignored;
  const SupportSet original = support(p, &ignored);

  HeightResult out;
  out.d_original = newton_distance(original);

  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(options.starts));
  parallel_for(outcomes.size(), options.threads, [&](std::size_t i) {
    outcomes[i] = run_start(p, options, static_cast<int>(i));
  });

  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    out.trace.push_back(TracePoint{static_cast<int>(i), rotation_vector(o.rotation), o.value.d,
                                   o.value.pruned});
    if (o.value.d > outcomes[best].value.d) best = i;
  }

  out.maximizer = outcomes[best].rotation;
  out.adapted = compose_linear(p, out.maximizer, options.prune_rel);
  out.adapted_distance = distance(build_polyhedron(support(out.adapted)));
  out.h = out.adapted_distance.d;
  if (out.h < out.d_original) {
    // Identity is start 0, so this only happens if pruning removed terms of p itself.
    out.h = out.d_original;
    out.maximizer = LinearChange::identity(3);
    out.adapted = p;
    out.adapted_distance = distance(build_polyhedron(original));
  }
  const auto& ad = out.adapted_distance;
  out.certified = ad.principal_face_dim == 2 &&
                  std::all_of(ad.attaining_normal.begin(), ad.attaining_normal.end(),
                              [](const Rational& a) { return a.sign() > 0; });
  return out;
}

Rational greenleaf_p(const Rational& beta, int m) {
  if (beta.sign() <= 0) throw DomainError("decay rate beta must be positive");
  if (m < 1) throw DomainError("codimension m must be at least 1");
  const Rational mm(m);
  return Rational(2) * (mm + beta) / (Rational(2) * mm + beta);
}

ExponentReport critical_p(const Rational& h) { return critical_p(h, h); }

ExponentReport critical_p(const Rational& h, const Rational& d) {
  if (h.sign() <= 0) throw DomainError("height must be positive");
  ExponentReport r;
  r.h = h;
  r.d = d;
  r.beta = h.reciprocal();
  r.p_star = Rational(2) * (Rational(1) + h) / (Rational(2) * h + Rational(1));
  r.q_star = Rational(2) * (Rational(1) + h);
  r.q_lower = Rational(2) * d + Rational(2);
  r.m = 1;
  if (greenleaf_p(r.beta, 1) != r.p_star) throw std::logic_error("Greenleaf identity violated");
  if (r.p_star.reciprocal() + r.q_star.reciprocal() != Rational(1)) {
    throw std::logic_error("p_star and q_star are not dual");
  }
  return r;
}

Rational dual_exponent(const Rational& p) {
  if (p <= Rational(1)) throw DomainError("dual exponent needs p > 1");
  return p / (p - Rational(1));
}

}  // namespace restrict4
