#include "restrict4/newton.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>

namespace restrict4 {
namespace {

using Int = std::int64_t;

/// Determinant of a small integer matrix by fraction-free (Bareiss)
/// elimination; exact as long as intermediates fit in 128 bits.
Int integer_determinant(std::vector<std::vector<WideInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  WideInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  const WideInt det = sign * m[n - 1][n - 1];
  if (det > INT64_MAX || det < INT64_MIN) throw OverflowError("normal vector overflow");
  return static_cast<Int>(det);
}

/// Generalised cross product: a vector orthogonal to every row of the
/// (n-1) x n matrix `rows`; zero iff the rows are linearly dependent.
std::vector<Int> null_vector(const std::vector<std::vector<Int>>& rows, std::size_t n) {
  std::vector<Int> out(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<std::vector<WideInt>> minor;
    minor.reserve(rows.size());
    for (const auto& r : rows) {
      std::vector<WideInt> mr;
      mr.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) mr.push_back(r[c]);
      }
      minor.push_back(std::move(mr));
    }
    const Int det = integer_determinant(std::move(minor));
    out[col] = (col % 2 == 0) ? det : -det;
  }
  return out;
}

Int dot(const std::vector<Int>& a, const Exponent& k) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * k[i];
  return s;
}

/// Calls f(indices) for every size-r subset of {0..n-1} in lexicographic order.
void for_each_combination(std::size_t n, std::size_t r,
                          const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int rational_rank(std::vector<std::vector<Rational>> m) {
  int rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

Rational rational_dot(const std::vector<Rational>& a, const Exponent& k) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Rational(k[i]);
  return s;
}

}  // namespace

SupportSet SupportSet::from_points(std::size_t nvars, std::vector<Exponent> points) {
  for (const auto& k : points) {
    if (k.size() != nvars) throw DomainError("support point has wrong dimension");
    if (std::any_of(k.begin(), k.end(), [](int e) { return e < 0; })) {
      throw DomainError("support point has a negative coordinate");
    }
  }
  std::erase_if(points, [](const Exponent& k) { return total_degree(k) == 0; });
  std::sort(points.begin(), points.end(), GradedLex{});
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return SupportSet{nvars, std::move(points)};
}

bool NewtonPolyhedron::contains(const std::vector<Rational>& x) const {
  for (const auto& f : facets) {
    Rational s;
    for (std::size_t i = 0; i < x.size(); ++i) s += f.normal[i] * x[i];
    if (s < f.offset) return false;
  }
  return true;
}

SupportSet support(const Polynomial& p, Warnings* warnings) {
  std::vector<Exponent> pts;
  for (const auto& [k, c] : p.terms()) {
    if (total_degree(k) == 0) {
      if (warnings != nullptr) {
        warnings->push_back("nonzero constant term dropped from the Taylor support");
      }
      continue;
    }
    pts.push_back(k);
  }
  if (pts.empty()) throw DegenerateInput("empty Taylor support");
  return SupportSet::from_points(p.nvars(), std::move(pts));
}

std::vector<Exponent> minimal_points(const SupportSet& s) {
  std::vector<Exponent> out;
  for (const auto& k : s.points) {
    const bool dominated = std::any_of(s.points.begin(), s.points.end(), [&](const Exponent& o) {
      if (o == k) return false;
      for (std::size_t i = 0; i < k.size(); ++i) {
        if (o[i] > k[i]) return false;
      }
      return true;
    });
    if (!dominated) out.push_back(k);
  }
  return out;
}

NewtonPolyhedron build_polyhedron(const SupportSet& s) {
  if (s.empty()) throw DegenerateInput("empty Taylor support");
  const std::size_t n = s.nvars;
  const std::vector<Exponent> pts = minimal_points(s);
  const std::size_t m = pts.size();

  // Every facet hyperplane is spanned by j support points and n-j coordinate
  // directions lying in it (those directions have a zero normal component).
  std::set<std::pair<std::vector<Int>, Int>> found;
  std::vector<std::vector<Int>> rows;
  for (std::size_t j = 1; j <= std::min(n, m); ++j) {
    for_each_combination(m, j, [&](const std::vector<std::size_t>& pick) {
      for_each_combination(n, n - j, [&](const std::vector<std::size_t>& axes) {
        rows.clear();
        const Exponent& base = pts[pick[0]];
        for (std::size_t t = 1; t < pick.size(); ++t) {
          std::vector<Int> r(n);
          for (std::size_t i = 0; i < n; ++i) r[i] = pts[pick[t]][i] - base[i];
          rows.push_back(std::move(r));
        }
        for (std::size_t axis : axes) {
          std::vector<Int> r(n, 0);
          r[axis] = 1;
          rows.push_back(std::move(r));
        }
        std::vector<Int> a = null_vector(rows, n);
        const bool any_pos = std::any_of(a.begin(), a.end(), [](Int v) { return v > 0; });
        const bool any_neg = std::any_of(a.begin(), a.end(), [](Int v) { return v < 0; });
        if (!any_pos && !any_neg) return;  // degenerate configuration
        if (any_pos && any_neg) return;    // recession cone is R_+^n
        if (any_neg) {
          for (auto& v : a) v = -v;
        }
        Int g = 0;
        for (Int v : a) g = std::gcd(g, v);
        for (auto& v : a) v /= g;
        const Int c = dot(a, base);
        for (const auto& k : pts) {
          if (dot(a, k) < c) return;
        }
        found.emplace(std::move(a), c);
      });
    });
  }

  NewtonPolyhedron np;
  np.nvars = n;
  np.source = s;
  for (const auto& [a, c] : found) {
    Facet f;
    for (Int v : a) f.normal.emplace_back(v);
    f.offset = Rational(c);
    np.facets.push_back(std::move(f));
  }

  for (const auto& k : pts) {
    std::vector<std::vector<Rational>> tight;
    for (const auto& f : np.facets) {
      if (rational_dot(f.normal, k) == f.offset) tight.push_back(f.normal);
    }
    if (static_cast<std::size_t>(rational_rank(tight)) == n) np.vertices.push_back(k);
  }
  return np;
}

DistanceResult distance(const NewtonPolyhedron& np) {
  if (np.facets.empty()) throw DegenerateInput("Newton polyhedron has no facets");
  const std::size_t n = np.nvars;

  DistanceResult out;
  bool have = false;
  for (const auto& f : np.facets) {
    Rational sum;
    for (const auto& a : f.normal) sum += a;
    if (sum.sign() <= 0) continue;
    const Rational t = f.offset / sum;
    if (!have || t > out.d) {
      out.d = t;
      have = true;
    }
  }
  if (!have) throw DegenerateInput("no facet meets the diagonal");

  std::vector<std::vector<Rational>> active_normals;
  for (std::size_t i = 0; i < np.facets.size(); ++i) {
    const auto& f = np.facets[i];
    Rational sum;
    for (const auto& a : f.normal) sum += a;
    if (sum * out.d == f.offset) {
      out.active_facets.push_back(i);
      active_normals.push_back(f.normal);
    }
  }
  out.principal_face_dim = static_cast<int>(n) - rational_rank(active_normals);

  for (const auto& v : np.vertices) {
    const bool on_all = std::all_of(out.active_facets.begin(), out.active_facets.end(),
                                    [&](std::size_t i) {
                                      return rational_dot(np.facets[i].normal, v) ==
                                             np.facets[i].offset;
                                    });
    if (on_all) out.principal_face_vertices.push_back(v);
  }

  std::vector<Int> sum(n, 0);
  Int offset = 0;
  for (std::size_t i : out.active_facets) {
    for (std::size_t c = 0; c < n; ++c) sum[c] += np.facets[i].normal[c].num();
    offset += np.facets[i].offset.num();
  }
  Int g = 0;
  for (Int v : sum) g = std::gcd(g, v);
  for (Int v : sum) out.attaining_normal.emplace_back(v / g);
  out.attaining_offset = Rational(offset, g);

  if (out.principal_face_dim == 0) {
    out.warnings.push_back("principal face is a vertex; the diagonal meets the polyhedron at a "
                           "corner");
  }
  return out;
}

Rational newton_distance(const SupportSet& s) { return distance(build_polyhedron(s)).d; }

}  // namespace restrict4
