#pragma once

// Mountain climbing: two PL functions on [0,1] with f(0) = 0 and f(1) = 1 and
// PL reparametrisations g1, g2 keeping both travellers at the same height.
// The solver walks the solution set {(x, y) : f1(x) = f2(y)} in the unit
// square, rectangle by rectangle of the product grid.

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/plmap.hpp"
#include "fnb/rational.hpp"

namespace fnb {

struct MountainFunction {
  std::vector<Rat> x;  // 0 = x0 < ... < xk = 1
  std::vector<Rat> y;  // values, y0 = 0, yk = 1

  std::size_t segments() const { return x.size() - 1; }

  Rat operator()(const Rat& t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    if (i >= segments()) i = segments() - 1;
    return y[i] + (y[i + 1] - y[i]) * ((t - x[i]) / (x[i + 1] - x[i]));
  }

  friend bool operator==(const MountainFunction&, const MountainFunction&) = default;
};

inline void validate_mountain(const MountainFunction& f) {
  if (f.x.size() < 2 || f.x.size() != f.y.size()) throw InputError("mountain function needs at least two breakpoints");
  if (f.x.front() != 0 || f.x.back() != 1) throw InputError("mountain breakpoints must start at 0 and end at 1");
  if (f.y.front() != 0 || f.y.back() != 1) throw InputError("mountain function must satisfy f(0) = 0 and f(1) = 1");
  for (std::size_t i = 0; i + 1 < f.x.size(); ++i)
    if (!(f.x[i] < f.x[i + 1])) throw InputError("mountain breakpoints must be strictly increasing");
  for (const auto& v : f.y)
    if (v < 0 || v > 1) throw InputError("mountain values must lie in [0, 1]");
}

inline MountainFunction make_mountain(std::vector<std::pair<Rat, Rat>> bps) {
  MountainFunction f;
  for (auto& [a, b] : bps) {
    f.x.push_back(std::move(a));
    f.y.push_back(std::move(b));
  }
  validate_mountain(f);
  return f;
}

struct ClimbSchedule {
  std::vector<Rat> t, g1, g2;
  friend bool operator==(const ClimbSchedule&, const ClimbSchedule&) = default;
};

// ---------------------------------------------------------------------------
// Product complex

enum class PieceKind { Empty, Point, Segment, Rectangle };

/// Solution set of f1(x) = f2(y) on one closed grid rectangle.
struct Piece {
  PieceKind kind = PieceKind::Empty;
  std::vector<QVec> pts;  // Point: 1; Segment: 2 endpoints; Rectangle: 4 corners
};

namespace detail {

// Point of [a, b] where the affine function from va to vb takes value v.
inline Rat affine_preimage(const Rat& a, const Rat& b, const Rat& va, const Rat& vb, const Rat& v) {
  return a + (b - a) * ((v - va) / (vb - va));
}

inline Piece solve_rectangle(const MountainFunction& f1, const MountainFunction& f2, std::size_t i, std::size_t j) {
  const Rat &x0 = f1.x[i], &x1 = f1.x[i + 1], &a0 = f1.y[i], &a1 = f1.y[i + 1];
  const Rat &y0 = f2.x[j], &y1 = f2.x[j + 1], &b0 = f2.y[j], &b1 = f2.y[j + 1];
  Piece p;
  const bool flat1 = a0 == a1, flat2 = b0 == b1;
  if (flat1 && flat2) {
    if (a0 == b0) p = {PieceKind::Rectangle, {QVec{x0, y0}, QVec{x1, y0}, QVec{x1, y1}, QVec{x0, y1}}};
    return p;
  }
  if (flat1) {
    const Rat lo = std::min(b0, b1), hi = std::max(b0, b1);
    if (a0 < lo || a0 > hi) return p;
    const Rat y = affine_preimage(y0, y1, b0, b1, a0);
    return {PieceKind::Segment, {QVec{x0, y}, QVec{x1, y}}};
  }
  if (flat2) {
    const Rat lo = std::min(a0, a1), hi = std::max(a0, a1);
    if (b0 < lo || b0 > hi) return p;
    const Rat x = affine_preimage(x0, x1, a0, a1, b0);
    return {PieceKind::Segment, {QVec{x, y0}, QVec{x, y1}}};
  }
  // Both strictly monotone: the common value ranges over the overlap of the
  // two value intervals, and each value has one preimage on each side.
  const Rat lo = std::max(std::min(a0, a1), std::min(b0, b1));
  const Rat hi = std::min(std::max(a0, a1), std::max(b0, b1));
  if (lo > hi) return p;
  auto at = [&](const Rat& v) { return QVec{affine_preimage(x0, x1, a0, a1, v), affine_preimage(y0, y1, b0, b1, v)}; };
  if (lo == hi) return {PieceKind::Point, {at(lo)}};
  return {PieceKind::Segment, {at(lo), at(hi)}};
}

inline bool piece_contains(const Piece& P, const QVec& q) {
  switch (P.kind) {
    case PieceKind::Empty:
      return false;
    case PieceKind::Point:
      return P.pts[0] == q;
    case PieceKind::Segment: {
      const QVec& a = P.pts[0];
      const QVec& b = P.pts[1];
      if (orient2(a, b, q) != 0) return false;
      return dot(q - a, b - a) >= 0 && dot(q - b, a - b) >= 0;
    }
    case PieceKind::Rectangle:
      return P.pts[0][0] <= q[0] && q[0] <= P.pts[2][0] && P.pts[0][1] <= q[1] && q[1] <= P.pts[2][1];
  }
  return false;
}

}  // namespace detail

struct ProductComplex {
  std::size_t n1 = 0, n2 = 0;  // segment counts
  std::vector<Piece> pieces;   // index i * n2 + j
  std::vector<QVec> nodes;
  std::vector<std::set<int>> adj;
  std::map<QVec, int> node_index;

  const Piece& piece(std::size_t i, std::size_t j) const { return pieces[i * n2 + j]; }
  std::optional<int> find(const QVec& q) const {
    auto it = node_index.find(q);
    if (it == node_index.end()) return std::nullopt;
    return it->second;
  }
};

inline ProductComplex build_product_complex(const MountainFunction& f1, const MountainFunction& f2) {
  validate_mountain(f1);
  validate_mountain(f2);
  ProductComplex P;
  P.n1 = f1.segments();
  P.n2 = f2.segments();
  P.pieces.resize(P.n1 * P.n2);
  for (std::size_t i = 0; i < P.n1; ++i)
    for (std::size_t j = 0; j < P.n2; ++j) P.pieces[i * P.n2 + j] = detail::solve_rectangle(f1, f2, i, j);

  auto node = [&](const QVec& q) {
    auto [it, fresh] = P.node_index.emplace(q, static_cast<int>(P.nodes.size()));
    if (fresh) {
      P.nodes.push_back(q);
      P.adj.emplace_back();
    }
    return it->second;
  };
  auto link = [&](int a, int b) {
    if (a == b) return;
    P.adj[a].insert(b);
    P.adj[b].insert(a);
  };
  for (std::size_t i = 0; i < P.n1; ++i)
    for (std::size_t j = 0; j < P.n2; ++j) {
      const Piece& me = P.piece(i, j);
      if (me.kind == PieceKind::Empty) continue;
      // Key points of this and the eight surrounding pieces that lie in this one.
      std::set<QVec> keys;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(P.n1) || jj >= static_cast<long>(P.n2)) continue;
          for (const auto& q : P.piece(ii, jj).pts)
            if (detail::piece_contains(me, q)) keys.insert(q);
        }
      switch (me.kind) {
        case PieceKind::Point:
          node(me.pts[0]);
          break;
        case PieceKind::Segment: {
          // Keys along the segment, ordered by the parameter from pts[0].
          std::vector<QVec> along(keys.begin(), keys.end());
          const QVec a = me.pts[0], d = me.pts[1] - me.pts[0];
          std::sort(along.begin(), along.end(), [&](const QVec& p, const QVec& q) { return dot(p - a, d) < dot(q - a, d); });
          for (std::size_t k = 0; k + 1 < along.size(); ++k) link(node(along[k]), node(along[k + 1]));
          break;
        }
        case PieceKind::Rectangle: {
          const int c = node((me.pts[0] + me.pts[2]) * Rat(1, 2));
          for (const auto& q : keys) link(c, node(q));
          break;
        }
        case PieceKind::Empty:
          break;
      }
    }
  return P;
}

/// Shortest node path from (0,0) to (1,1), or nullopt when disconnected.
inline std::optional<std::vector<QVec>> climb_path(const ProductComplex& P) {
  const auto s = P.find(QVec{0, 0});
  const auto t = P.find(QVec{1, 1});
  if (!s || !t) return std::nullopt;
  std::vector<int> prev(P.nodes.size(), -2);
  std::deque<int> queue{*s};
  prev[*s] = -1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == *t) break;
    for (int v : P.adj[u])
      if (prev[v] == -2) {
        prev[v] = u;
        queue.push_back(v);
      }
  }
  if (prev[*t] == -2) return std::nullopt;
  std::vector<QVec> path;
  for (int u = *t; u != -1; u = prev[u]) path.push_back(P.nodes[u]);
  std::reverse(path.begin(), path.end());
  return path;
}

inline ClimbSchedule solve_mountain(const MountainFunction& f1, const MountainFunction& f2) {
  const ProductComplex P = build_product_complex(f1, f2);
  const auto path = climb_path(P);
  if (!path)
    throw TheoremViolation("(0,0) and (1,1) lie in different components of the solution set; valid inputs never do this, so this is a solver bug");
  ClimbSchedule S;
  const long T = static_cast<long>(path->size()) - 1;
  for (long k = 0; k <= T; ++k) {
    S.t.push_back(rat(k, T));
    S.g1.push_back((*path)[k][0]);
    S.g2.push_back((*path)[k][1]);
  }
  return S;
}

struct ScheduleReport {
  bool pass = true;
  int first_bad = -1;
  std::vector<std::string> messages;
};

inline ScheduleReport verify_schedule(const MountainFunction& f1, const MountainFunction& f2, const ClimbSchedule& S) {
  ScheduleReport rep;
  auto fail = [&](int i, std::string m) {
    if (rep.pass) rep.first_bad = i;
    rep.pass = false;
    rep.messages.push_back("index " + std::to_string(i) + ": " + std::move(m));
  };
  const std::size_t T = S.t.size();
  if (T < 2 || S.g1.size() != T || S.g2.size() != T) {
    fail(0, "schedule needs at least two grid points with values for both travellers");
    return rep;
  }
  if (S.t.front() != 0 || S.t.back() != 1) fail(0, "grid must run from 0 to 1");
  if (S.g1.front() != 0 || S.g2.front() != 0) fail(0, "g1(0) and g2(0) must be 0");
  if (S.g1.back() != 1 || S.g2.back() != 1) fail(static_cast<int>(T - 1), "g1(1) and g2(1) must be 1");
  for (std::size_t j = 0; j < T; ++j) {
    if (j + 1 < T && !(S.t[j] < S.t[j + 1])) fail(static_cast<int>(j + 1), "grid is not strictly increasing");
    if (S.g1[j] < 0 || S.g1[j] > 1 || S.g2[j] < 0 || S.g2[j] > 1) {
      fail(static_cast<int>(j), "value outside [0, 1]");
      continue;
    }
    if (f1(S.g1[j]) != f2(S.g2[j])) fail(static_cast<int>(j), "f1(g1) != f2(g2)");
  }
  // On each grid interval g is affine; the composite is affine iff no
  // breakpoint of f lies strictly between the endpoint values.
  auto refines = [](const MountainFunction& f, const Rat& u, const Rat& v) {
    const Rat& lo = u < v ? u : v;
    const Rat& hi = u < v ? v : u;
    auto it = std::upper_bound(f.x.begin(), f.x.end(), lo);
    return it == f.x.end() || !(*it < hi);
  };
  for (std::size_t j = 0; j + 1 < T; ++j)
    if (!refines(f1, S.g1[j], S.g1[j + 1]) || !refines(f2, S.g2[j], S.g2[j + 1]))
      fail(static_cast<int>(j + 1), "grid does not refine a composite breakpoint");
  return rep;
}

/// Independent feasibility oracle: flood fill over grid rectangles whose
/// solution sets meet along a shared side or corner. The trace of the
/// solution set on a side x = x_i is {y : f2(y) = f1(x_i)}, computed from one
/// function at a time.
inline bool flood_fill_feasible(const MountainFunction& f1, const MountainFunction& f2) {
  validate_mountain(f1);
  validate_mountain(f2);
  const std::size_t n1 = f1.segments(), n2 = f2.segments();
  // Does f(t) = v for some t in segment k of f?
  auto hits = [](const MountainFunction& f, std::size_t k, const Rat& v) {
    const Rat& a = f.y[k];
    const Rat& b = f.y[k + 1];
    return (a <= v && v <= b) || (b <= v && v <= a);
  };
  // Does segment k of f share a value with segment l of g?
  auto overlap = [](const MountainFunction& f, std::size_t k, const MountainFunction& g, std::size_t l) {
    const Rat lo = std::max(std::min(f.y[k], f.y[k + 1]), std::min(g.y[l], g.y[l + 1]));
    const Rat hi = std::min(std::max(f.y[k], f.y[k + 1]), std::max(g.y[l], g.y[l + 1]));
    return lo <= hi;
  };
  std::vector<int> parent(n1 * n2);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[root(static_cast<int>(a))] = root(static_cast<int>(b)); };
  auto id = [n2](std::size_t i, std::size_t j) { return i * n2 + j; };
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      if (!overlap(f1, i, f2, j)) continue;
      // Right neighbour shares the side x = x_{i+1}.
      if (i + 1 < n1 && overlap(f1, i + 1, f2, j) && hits(f2, j, f1.y[i + 1])) unite(id(i, j), id(i + 1, j));
      // Upper neighbour shares the side y = y_{j+1}.
      if (j + 1 < n2 && overlap(f1, i, f2, j + 1) && hits(f1, i, f2.y[j + 1])) unite(id(i, j), id(i, j + 1));
      // Diagonal neighbours share a corner.
      if (i + 1 < n1 && j + 1 < n2 && f1.y[i + 1] == f2.y[j + 1] && overlap(f1, i + 1, f2, j + 1)) unite(id(i, j), id(i + 1, j + 1));
      if (i + 1 < n1 && j > 0 && f1.y[i + 1] == f2.y[j] && overlap(f1, i + 1, f2, j - 1)) unite(id(i, j), id(i + 1, j - 1));
    }
  return overlap(f1, 0, f2, 0) && overlap(f1, n1 - 1, f2, n2 - 1) && root(static_cast<int>(id(0, 0))) == root(static_cast<int>(id(n1 - 1, n2 - 1)));
}

// ---------------------------------------------------------------------------
// Circle construction

/// F = f1 on [0,1], F(1+s) = f2(1−s), glued 0 ∼ 2, doubled by the reflection
/// across the s-axis: the circle is {(s, F(s))} ∪ {(s, −F(s))} with the
/// height as the map. Vertices sit at every breakpoint.
inline std::pair<Triangulation, PLMap> circle_reduction(const MountainFunction& f1, const MountainFunction& f2) {
  validate_mountain(f1);
  validate_mountain(f2);
  std::vector<std::pair<Rat, Rat>> upper;  // (s, F(s)), s from 0 to 2
  for (std::size_t i = 0; i < f1.x.size(); ++i) upper.emplace_back(f1.x[i], f1.y[i]);
  for (std::size_t j = f2.x.size() - 1; j-- > 0;) upper.emplace_back(2 - f2.x[j], f2.y[j]);
  Triangulation T;
  T.n = 1;
  T.ambient_dim = 2;
  std::vector<Rat> height;
  for (const auto& [s, h] : upper) {
    T.coords.push_back(QVec{s, h});
    height.push_back(h);
  }
  for (std::size_t k = upper.size() - 1; k-- > 1;) {
    T.coords.push_back(QVec{upper[k].first, -upper[k].second});
    height.push_back(-upper[k].second);
  }
  const int V = static_cast<int>(T.coords.size());
  for (int v = 0; v < V; ++v) {
    T.ids.push_back(v);
    const int w = (v + 1) % V;
    T.simplices.push_back({std::min(v, w), std::max(v, w)});
  }
  std::sort(T.simplices.begin(), T.simplices.end());
  PLMap f;
  f.target_dim = 1;
  for (const auto& h : height) f.values.push_back(QVec{h});
  f.pinned.assign(V, false);
  return {std::move(T), std::move(f)};
}

/// Local extrema of a cyclic sequence; a plateau counts once when both of its
/// sides move in the same direction.
inline std::size_t count_local_extrema(const std::vector<Rat>& cyc) {
  std::vector<Rat> v;
  for (const auto& x : cyc)
    if (v.empty() || v.back() != x) v.push_back(x);
  while (v.size() > 1 && v.front() == v.back()) v.pop_back();
  const std::size_t k = v.size();
  if (k < 3) return k == 2 ? 2 : 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const Rat& a = v[(i + k - 1) % k];
    const Rat& b = v[i];
    const Rat& c = v[(i + 1) % k];
    if ((b > a && b > c) || (b < a && b < c)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Files

inline MountainFunction parse_mountain(std::istream& in) {
  std::vector<std::pair<Rat, Rat>> bps;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] != "bp" || tok.size() != 3) throw InputError("line " + std::to_string(lineno) + ": expected 'bp <x> <y>'");
    bps.emplace_back(detail::parse_rat_at(tok[1], lineno), detail::parse_rat_at(tok[2], lineno));
  }
  return make_mountain(std::move(bps));
}

inline void write_mountain(std::ostream& out, const MountainFunction& f) {
  for (std::size_t i = 0; i < f.x.size(); ++i) out << "bp " << to_string(f.x[i]) << " " << to_string(f.y[i]) << "\n";
}

inline void write_schedule(std::ostream& out, const ClimbSchedule& S) {
  for (std::size_t j = 0; j < S.t.size(); ++j) out << "t " << to_string(S.t[j]) << " " << to_string(S.g1[j]) << " " << to_string(S.g2[j]) << "\n";
}

inline ClimbSchedule parse_schedule(std::istream& in) {
  ClimbSchedule S;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] != "t" || tok.size() != 4) throw InputError("line " + std::to_string(lineno) + ": expected 't <t> <g1> <g2>'");
    S.t.push_back(detail::parse_rat_at(tok[1], lineno));
    S.g1.push_back(detail::parse_rat_at(tok[2], lineno));
    S.g2.push_back(detail::parse_rat_at(tok[3], lineno));
  }
  return S;
}

}  // namespace fnb
