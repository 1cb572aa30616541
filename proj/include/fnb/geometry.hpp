#pragma once

// Low-dimensional exact convex geometry: orientation predicate, convex
// polygon / interval intersection, and minimisation of ‖L(p)‖² over a
// convex polytope for an affine L.

#include <algorithm>
#include <optional>
#include <vector>

#include "fnb/errors.hpp"
#include "fnb/rational.hpp"

namespace fnb {

/// Sign of det(b − a, c − a).
inline int orient2(const QVec& a, const QVec& b, const QVec& c) {
  const Rat det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return sgn(det);
}

/// Convex polytope of dimension 0, 1 or 2 living in ambient dimension 1 or 2.
/// dim 2: strictly convex, counterclockwise, no three collinear vertices.
/// dim 1 in ambient 1: vertices = {lo, hi} with lo < hi.
struct ConvexPoly {
  int dim = 0;
  int ambient_dim = 0;
  std::vector<QVec> vertices;

  std::size_t num_facets() const {
    if (dim == 2) return vertices.size();
    if (dim == 1) return 2;
    return 0;
  }

  /// Endpoints of facet i (an edge for dim 2, a single point for dim 1).
  std::vector<QVec> facet(std::size_t i) const {
    if (dim == 2) return {vertices[i], vertices[(i + 1) % vertices.size()]};
    return {vertices[i]};
  }

  QVec facet_midpoint(std::size_t i) const {
    if (dim == 2) return (vertices[i] + vertices[(i + 1) % vertices.size()]) * Rat(1, 2);
    return vertices[i];
  }

  friend bool operator==(const ConvexPoly& a, const ConvexPoly& b) {
    return a.dim == b.dim && a.ambient_dim == b.ambient_dim && a.vertices == b.vertices;
  }
};

namespace detail {

// Drops repeated and collinear vertices of a closed polygon chain.
inline std::vector<QVec> clean_ring(std::vector<QVec> ring) {
  bool changed = true;
  while (changed && ring.size() >= 2) {
    changed = false;
    std::vector<QVec> out;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const QVec& prev = ring[(i + ring.size() - 1) % ring.size()];
      const QVec& cur = ring[i];
      const QVec& next = ring[(i + 1) % ring.size()];
      if (cur == next || (ring.size() >= 3 && orient2(prev, cur, next) == 0)) {
        changed = true;
        continue;
      }
      out.push_back(cur);
    }
    ring.swap(out);
  }
  return ring;
}

// Rotates a ring so that its lexicographically smallest vertex comes first.
inline void canonical_start(std::vector<QVec>& ring) {
  auto it = std::min_element(ring.begin(), ring.end());
  std::rotate(ring.begin(), it, ring.end());
}

// Keeps the part of `poly` to the left of (or on) the directed line a→b.
inline std::vector<QVec> clip_left(const std::vector<QVec>& poly, const QVec& a, const QVec& b) {
  std::vector<QVec> out;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const QVec& p = poly[i];
    const QVec& q = poly[(i + 1) % k];
    const int sp = orient2(a, b, p);
    const int sq = orient2(a, b, q);
    if (sp >= 0) out.push_back(p);
    if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
      // p + t(q − p) on the line a→b.
      const Rat cp = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
      const Rat cq = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]);
      const Rat t = cp / (cp - cq);
      out.push_back(p + (q - p) * t);
    }
  }
  return out;
}

}  // namespace detail

/// Polygon from the vertices of a convex polygon in any rotational order.
/// Returns nullopt when the points span less than a 2-dimensional region.
inline std::optional<ConvexPoly> make_polygon(std::vector<QVec> pts) {
  if (pts.size() < 3) return std::nullopt;
  for (const auto& p : pts)
    if (p.dim() != 2) throw InputError("make_polygon needs planar points");
  Rat area2 = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const QVec& p = pts[i];
    const QVec& q = pts[(i + 1) % pts.size()];
    area2 += p[0] * q[1] - p[1] * q[0];
  }
  if (area2 == 0) return std::nullopt;
  if (area2 < 0) std::reverse(pts.begin(), pts.end());
  pts = detail::clean_ring(std::move(pts));
  if (pts.size() < 3) return std::nullopt;
  detail::canonical_start(pts);
  return ConvexPoly{2, 2, std::move(pts)};
}

/// Interval [min(a,b), max(a,b)] on the line; nullopt when a = b.
inline std::optional<ConvexPoly> make_interval(const Rat& a, const Rat& b) {
  if (a == b) return std::nullopt;
  const Rat lo = a < b ? a : b;
  const Rat hi = a < b ? b : a;
  return ConvexPoly{1, 1, {QVec{lo}, QVec{hi}}};
}

/// Full-dimensional image of a simplex: a segment for n = 1, a triangle for n = 2.
inline std::optional<ConvexPoly> simplex_image(const std::vector<QVec>& pts) {
  if (pts.size() == 2 && pts[0].dim() == 1) return make_interval(pts[0][0], pts[1][0]);
  if (pts.size() == 3 && pts[0].dim() == 2) return make_polygon(pts);
  throw InputError("simplex_image supports segments in R^1 and triangles in R^2");
}

/// Exact intersection of two full-dimensional convex polytopes in R^1 or R^2.
/// Intersections of lower dimension are reported as nullopt (Empty).
inline std::optional<ConvexPoly> poly_intersect(const ConvexPoly& P, const ConvexPoly& Q) {
  if (P.ambient_dim != Q.ambient_dim || P.dim != P.ambient_dim || Q.dim != Q.ambient_dim)
    throw InputError("poly_intersect: operands must be full-dimensional in the same ambient space");
  if (P.ambient_dim == 1) {
    const Rat& lo = std::max(P.vertices[0][0], Q.vertices[0][0]);
    const Rat& hi = std::min(P.vertices[1][0], Q.vertices[1][0]);
    if (!(lo < hi)) return std::nullopt;
    return ConvexPoly{1, 1, {QVec{lo}, QVec{hi}}};
  }
  if (P.ambient_dim != 2) throw InputError("poly_intersect supports ambient dimension 1 or 2");
  std::vector<QVec> ring = P.vertices;
  const std::size_t k = Q.vertices.size();
  for (std::size_t i = 0; i < k && !ring.empty(); ++i)
    ring = detail::clip_left(ring, Q.vertices[i], Q.vertices[(i + 1) % k]);
  ring = detail::clean_ring(std::move(ring));
  if (ring.size() < 3) return std::nullopt;
  detail::canonical_start(ring);
  return ConvexPoly{2, 2, std::move(ring)};
}

/// Closed containment.
inline bool contains(const ConvexPoly& P, const QVec& p) {
  if (P.dim == 0) return P.vertices[0] == p;
  if (P.ambient_dim == 1) return P.vertices[0][0] <= p[0] && p[0] <= P.vertices[1][0];
  if (P.dim == 1) {
    const QVec& a = P.vertices[0];
    const QVec& b = P.vertices[1];
    if (orient2(a, b, p) != 0) return false;
    return dot(p - a, b - a) >= 0 && dot(p - b, a - b) >= 0;
  }
  const std::size_t k = P.vertices.size();
  for (std::size_t i = 0; i < k; ++i)
    if (orient2(P.vertices[i], P.vertices[(i + 1) % k], p) < 0) return false;
  return true;
}

/// Interior containment for full-dimensional polytopes.
inline bool strictly_contains(const ConvexPoly& P, const QVec& p) {
  if (P.dim != P.ambient_dim) return false;
  if (P.ambient_dim == 1) return P.vertices[0][0] < p[0] && p[0] < P.vertices[1][0];
  const std::size_t k = P.vertices.size();
  for (std::size_t i = 0; i < k; ++i)
    if (orient2(P.vertices[i], P.vertices[(i + 1) % k], p) <= 0) return false;
  return true;
}

struct NormMin {
  QVec point;
  Rat value;  // ‖L(point)‖²
};

namespace detail {

// Solves the square system A x = b exactly; nullopt if A is singular.
inline std::optional<QVec> solve_square(std::vector<QVec> A, QVec b) {
  const std::size_t n = b.dim();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      const Rat m = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  QVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

inline void offer(std::optional<NormMin>& best, const AffineMap& L, const QVec& p) {
  Rat v = norm2(L(p));
  if (!best || v < best->value || (v == best->value && p < best->point)) best = NormMin{p, std::move(v)};
}

// Critical point of ‖L(a + s(b − a))‖² for s in the open interval (0, 1).
inline std::optional<QVec> segment_critical(const AffineMap& L, const QVec& a, const QVec& b) {
  const QVec u = L(a);
  const QVec w = L(b) - u;
  const Rat ww = norm2(w);
  if (ww == 0) return std::nullopt;
  const Rat s = -dot(u, w) / ww;
  if (s <= 0 || s >= 1) return std::nullopt;
  return a + (b - a) * s;
}

}  // namespace detail

/// Exact minimiser of ‖L(p)‖² over P. Candidates are the unconstrained
/// critical point (when it lies in P), the critical point of every facet, and
/// every vertex; among optimal candidates the lexicographically smallest wins.
inline NormMin min_affine_norm_on_poly(const AffineMap& L, const ConvexPoly& P) {
  if (P.vertices.empty()) throw InputError("min_affine_norm_on_poly: empty polytope");
  if (L.in_dim() != static_cast<std::size_t>(P.ambient_dim))
    throw InputError("min_affine_norm_on_poly: map input dimension differs from polytope ambient dimension");
  std::optional<NormMin> best;
  const std::size_t n = L.in_dim();

  if (P.dim == static_cast<int>(n)) {
    // Normal equations LᵀL p = −Lᵀc.
    std::vector<QVec> G(n, QVec(n));
    QVec rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < L.linear.size(); ++r) G[i][j] += L.linear[r][i] * L.linear[r][j];
      for (std::size_t r = 0; r < L.linear.size(); ++r) rhs[i] -= L.linear[r][i] * L.offset[r];
    }
    if (auto crit = detail::solve_square(G, rhs); crit && contains(P, *crit)) detail::offer(best, L, *crit);
  }
  if (P.dim == 2) {
    const std::size_t k = P.vertices.size();
    for (std::size_t i = 0; i < k; ++i)
      if (auto c = detail::segment_critical(L, P.vertices[i], P.vertices[(i + 1) % k])) detail::offer(best, L, *c);
  } else if (P.dim == 1 && P.ambient_dim != 1) {
    if (auto c = detail::segment_critical(L, P.vertices[0], P.vertices[1])) detail::offer(best, L, *c);
  }
  for (const auto& v : P.vertices) detail::offer(best, L, v);
  return *best;
}

}  // namespace fnb
