// Brute-force Newton distance by basic-solution enumeration. Kept apart from
// newton.cpp on purpose: it is the reference the facet enumeration is
// checked against.

#include <optional>

#include "restrict4/newton.hpp"

namespace restrict4 {
namespace {

/// Solves the square system a * x = b exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a,
                                           std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

void subsets(std::size_t n, std::size_t r, std::size_t from, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == r) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < n; ++i) {
    cur.push_back(i);
    subsets(n, r, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, r, 0, cur, out);
  return out;
}

}  // namespace

Rational distance_oracle(const SupportSet& s) {
  if (s.empty()) throw DegenerateInput("empty Taylor support");
  const std::size_t n = s.nvars;
  const auto& pts = s.points;

  // Variables (lambda_S, t). At a vertex of the feasible region, |S| of the
  // n coordinate rows are tight, so |S| <= n.
  std::optional<Rational> best;
  for (std::size_t size = 1; size <= std::min(n, pts.size()); ++size) {
    const auto coord_sets = subsets(n, size);
    for (const auto& pick : subsets(pts.size(), size)) {
      for (const auto& rows : coord_sets) {
        const std::size_t dim = size + 1;
        std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(dim));
        std::vector<Rational> b(dim);
        for (std::size_t r = 0; r < size; ++r) {
          for (std::size_t j = 0; j < size; ++j) a[r][j] = Rational(pts[pick[j]][rows[r]]);
          a[r][size] = Rational(-1);
        }
        for (std::size_t j = 0; j < size; ++j) a[size][j] = Rational(1);
        b[size] = Rational(1);

        const auto x = solve(std::move(a), std::move(b));
        if (!x) continue;
        const Rational t = (*x)[size];
        bool feasible = true;
        for (std::size_t j = 0; j < size && feasible; ++j) feasible = (*x)[j].sign() >= 0;
        for (std::size_t i = 0; i < n && feasible; ++i) {
          Rational v;
          for (std::size_t j = 0; j < size; ++j) v += (*x)[j] * Rational(pts[pick[j]][i]);
          feasible = v <= t;
        }
        if (feasible && (!best || t < *best)) best = t;
      }
    }
  }
  if (!best) throw DegenerateInput("oracle found no feasible basic solution");
  return *best;
}

}  // namespace restrict4
