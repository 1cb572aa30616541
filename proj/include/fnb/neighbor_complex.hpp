#pragma once

// The complex of f-neighbors as a polytopal pseudomanifold. A cell is an
// ordered pair (A, B) of distinct maximal simplices whose images overlap in a
// full-dimensional region; its points are the pairs (lift_A(p), lift_B(p)).

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/geometry.hpp"
#include "fnb/plmap.hpp"

namespace fnb {

enum class Side { A, B };
enum class FacetKind { Plain, DiagonalGlue };

struct NeighborCell {
  int A = -1, B = -1;
  ConvexPoly image;  // f(A) ∩ f(B)
  AffineMap lift_A, lift_B;
  std::vector<int> facets;  // FacetRecord ids, parallel to image facets
};

struct FacetRecord {
  int cell = -1;
  int index = -1;  // facet index within the cell's image polytope
  Side side = Side::A;
  SimplexRef face;  // source face: `omit` names the local vertex of the source simplex not on it
  int neighbor = -1;
  int neighbor_facet = -1;  // FacetRecord id of the matching facet
  FacetKind kind = FacetKind::Plain;
};

struct NeighborComplex {
  std::vector<NeighborCell> cells;
  std::vector<FacetRecord> facets;
  std::vector<int> component_of;
  std::vector<std::vector<int>> components;
  std::map<std::pair<int, int>, int> cell_index;

  std::optional<int> find(int A, int B) const {
    auto it = cell_index.find({A, B});
    if (it == cell_index.end()) return std::nullopt;
    return it->second;
  }
  bool has_glue(int cell) const {
    for (int r : cells[cell].facets)
      if (facets[r].kind == FacetKind::DiagonalGlue) return true;
    return false;
  }
};

namespace detail {

struct Box {
  double lo[2], hi[2];
};

inline Box image_box(const PLMap& f, const Simplex& s) {
  Box b{{1e300, 1e300}, {-1e300, -1e300}};
  for (int v : s)
    for (int i = 0; i < f.target_dim; ++i) {
      const double x = f.values[v][i].get_d();
      b.lo[i] = std::min(b.lo[i], x);
      b.hi[i] = std::max(b.hi[i], x);
    }
  return b;
}

inline bool boxes_overlap(const Box& a, const Box& b, int n, double slack) {
  for (int i = 0; i < n; ++i)
    if (a.hi[i] + slack < b.lo[i] || b.hi[i] + slack < a.lo[i]) return false;
  return true;
}

// Does the facet (one point for n = 1, an edge for n = 2) lie on the image of
// the face of `s` that omits local vertex j?
inline bool facet_on_face(const PLMap& f, const Simplex& s, int j, const std::vector<QVec>& facet) {
  const Simplex F = face_of(s, j);
  if (f.target_dim == 1) return f.values[F[0]] == facet[0];
  const QVec& u = f.values[F[0]];
  const QVec& w = f.values[F[1]];
  return orient2(u, w, facet[0]) == 0 && orient2(u, w, facet[1]) == 0;
}

inline bool same_facet(const std::vector<QVec>& a, const std::vector<QVec>& b) {
  if (a.size() != b.size()) return false;
  if (a.size() == 1) return a[0] == b[0];
  return (a[0] == b[0] && a[1] == b[1]) || (a[0] == b[1] && a[1] == b[0]);
}

}  // namespace detail

/// Precondition: f in general position on a closed triangulation.
inline NeighborComplex build_neighbor_complex(const Triangulation& T, const PLMap& f) {
  if (T.n != 1 && T.n != 2) throw InputError("the neighbor complex supports n = 1, 2");
  if (f.target_dim != T.n) throw InputError("map target dimension must equal the intrinsic dimension");
  const int n = T.n;
  const int S = static_cast<int>(T.num_simplices());
  const Adjacency adj = build_adjacency(T);
  for (int s = 0; s < S; ++s)
    for (int j = 0; j <= n; ++j)
      if (adj.across[s][j] < 0) throw InputError("triangulation is not closed");

  std::vector<ConvexPoly> img(S);
  std::vector<detail::Box> box(S);
  double scale = 1;
  for (int s = 0; s < S; ++s) {
    auto P = simplex_image_poly(f, T.simplices[s]);
    if (!P) throw DegeneracyError("simplex " + std::to_string(s) + " has a degenerate image");
    img[s] = std::move(*P);
    box[s] = detail::image_box(f, T.simplices[s]);
    for (int i = 0; i < n; ++i) scale = std::max({scale, std::abs(box[s].lo[i]), std::abs(box[s].hi[i])});
  }
  const double slack = 1e-9 * scale;

  // Sweep along the first coordinate to avoid testing far-apart pairs.
  std::vector<int> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return box[a].lo[0] < box[b].lo[0]; });
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < S; ++i)
    for (int k = i + 1; k < S; ++k) {
      const int a = order[i], b = order[k];
      if (box[b].lo[0] > box[a].hi[0] + slack) break;
      if (detail::boxes_overlap(box[a], box[b], n, slack)) {
        pairs.emplace_back(a, b);
        pairs.emplace_back(b, a);
      }
    }
  std::sort(pairs.begin(), pairs.end());

  NeighborComplex NC;
  std::vector<AffineMap> inv(S);
  std::vector<bool> have_inv(S, false);
  auto inverse = [&](int s) -> const AffineMap& {
    if (!have_inv[s]) {
      inv[s] = inverse_on_simplex(T, f, s);
      have_inv[s] = true;
    }
    return inv[s];
  };
  for (const auto& [A, B] : pairs) {
    if (A > B) {
      // The swapped cell shares the image; reuse the computation.
      auto it = NC.cell_index.find({B, A});
      if (it == NC.cell_index.end()) continue;
      const NeighborCell& twin = NC.cells[it->second];
      NeighborCell c{A, B, twin.image, twin.lift_B, twin.lift_A, {}};
      NC.cell_index[{A, B}] = static_cast<int>(NC.cells.size());
      NC.cells.push_back(std::move(c));
      continue;
    }
    auto P = poly_intersect(img[A], img[B]);
    if (!P) continue;
    NeighborCell c{A, B, std::move(*P), inverse(A), inverse(B), {}};
    NC.cell_index[{A, B}] = static_cast<int>(NC.cells.size());
    NC.cells.push_back(std::move(c));
  }
  // Canonical order by (A, B).
  {
    std::vector<NeighborCell> sorted;
    sorted.reserve(NC.cells.size());
    for (auto& [key, id] : NC.cell_index) {
      sorted.push_back(std::move(NC.cells[id]));
      id = static_cast<int>(sorted.size()) - 1;
    }
    NC.cells.swap(sorted);
  }

  // Facet attribution.
  for (int c = 0; c < static_cast<int>(NC.cells.size()); ++c) {
    NeighborCell& cell = NC.cells[c];
    for (std::size_t i = 0; i < cell.image.num_facets(); ++i) {
      const auto facet = cell.image.facet(i);
      std::vector<std::pair<Side, int>> cand;
      std::vector<Simplex> cand_faces;
      for (Side side : {Side::A, Side::B}) {
        const int s = side == Side::A ? cell.A : cell.B;
        for (int j = 0; j <= n; ++j) {
          if (!detail::facet_on_face(f, T.simplices[s], j, facet)) continue;
          const Simplex F = face_of(T.simplices[s], j);
          if (std::find(cand_faces.begin(), cand_faces.end(), F) != cand_faces.end()) continue;
          cand.emplace_back(side, j);
          cand_faces.push_back(F);
        }
      }
      if (cand.size() != 1)
        throw DegeneracyError("ambiguous facet source in cell (" + std::to_string(cell.A) + ", " + std::to_string(cell.B) + ")");
      FacetRecord rec;
      rec.cell = c;
      rec.index = static_cast<int>(i);
      rec.side = cand[0].first;
      const int src = rec.side == Side::A ? cell.A : cell.B;
      rec.face = {src, cand[0].second};
      const int other = adj.across[src][cand[0].second];
      int nA = cell.A, nB = cell.B;
      if (rec.side == Side::A)
        nA = other;
      else
        nB = other;
      if (nA == nB) {
        rec.kind = FacetKind::DiagonalGlue;
        nA = cell.B;
        nB = cell.A;
      }
      auto nb = NC.find(nA, nB);
      if (!nb)
        throw TheoremViolation("facet of cell (" + std::to_string(cell.A) + ", " + std::to_string(cell.B) + ") has no neighboring cell");
      rec.neighbor = *nb;
      cell.facets.push_back(static_cast<int>(NC.facets.size()));
      NC.facets.push_back(rec);
    }
  }
  for (auto& rec : NC.facets) {
    const auto mine = NC.cells[rec.cell].image.facet(rec.index);
    const NeighborCell& other = NC.cells[rec.neighbor];
    for (int r : other.facets)
      if (detail::same_facet(mine, other.image.facet(NC.facets[r].index))) {
        rec.neighbor_facet = r;
        break;
      }
    if (rec.neighbor_facet < 0) throw TheoremViolation("facet of cell " + std::to_string(rec.cell) + " is not a facet of its neighbor");
  }

  // Components by union-find over facet adjacency.
  std::vector<int> parent(NC.cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& rec : NC.facets) {
    const int a = root(rec.cell), b = root(rec.neighbor);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  NC.component_of.assign(NC.cells.size(), -1);
  std::map<int, int> comp_id;
  for (int c = 0; c < static_cast<int>(NC.cells.size()); ++c) {
    const int r = root(c);
    auto [it, fresh] = comp_id.emplace(r, static_cast<int>(NC.components.size()));
    if (fresh) NC.components.emplace_back();
    NC.component_of[c] = it->second;
    NC.components[it->second].push_back(c);
  }
  return NC;
}

struct PseudomanifoldReport {
  bool pass = true;
  std::vector<std::string> messages;
};

/// Every facet of every cell has exactly one matching facet, the matching
/// is an involution, and matched facets coincide.
inline PseudomanifoldReport check_pseudomanifold(const NeighborComplex& NC) {
  PseudomanifoldReport rep;
  for (int c = 0; c < static_cast<int>(NC.cells.size()); ++c)
    if (NC.cells[c].facets.size() != NC.cells[c].image.num_facets()) {
      rep.pass = false;
      rep.messages.push_back("cell " + std::to_string(c) + " has unattributed facets");
    }
  for (int r = 0; r < static_cast<int>(NC.facets.size()); ++r) {
    const auto& rec = NC.facets[r];
    if (rec.neighbor_facet < 0 || NC.facets[rec.neighbor_facet].neighbor_facet != r || NC.facets[rec.neighbor_facet].cell != rec.neighbor ||
        rec.neighbor_facet == r) {
      rep.pass = false;
      rep.messages.push_back("facet record " + std::to_string(r) + " is not matched involutively");
      continue;
    }
    const auto& o = NC.facets[rec.neighbor_facet];
    if (!detail::same_facet(NC.cells[rec.cell].image.facet(rec.index), NC.cells[o.cell].image.facet(o.index))) {
      rep.pass = false;
      rep.messages.push_back("facet record " + std::to_string(r) + " does not coincide with its match");
    }
  }
  return rep;
}

/// Cells carrying a diagonal-glue facet (the folds).
inline std::vector<int> folds(const NeighborComplex& NC) {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(NC.cells.size()); ++c)
    if (NC.has_glue(c)) out.push_back(c);
  return out;
}

/// Parity of the number of cells (S, ·) in `component` whose image contains
/// f(x) in its interior, for x given by strictly positive barycentric weights
/// in S. Throws GenericityError when f(x) lies on the boundary of such a cell.
inline int mod2_degree(const NeighborComplex& NC, const Triangulation& T, const PLMap& f, int component, int S,
                       const std::vector<Rat>& bary) {
  for (const auto& w : bary)
    if (w <= 0) throw GenericityError("sample point is not interior to its simplex");
  const QVec y = eval(T, f, S, bary);
  int count = 0;
  for (auto it = NC.cell_index.lower_bound({S, -1}); it != NC.cell_index.end() && it->first.first == S; ++it) {
    const int c = it->second;
    if (NC.component_of[c] != component) continue;
    const ConvexPoly& P = NC.cells[c].image;
    if (strictly_contains(P, y))
      ++count;
    else if (contains(P, y))
      throw GenericityError("sample value lies on a cell boundary");
  }
  return count % 2;
}

/// Deterministic interior sample weights; the k-th candidate is
/// proportional to (1 + k, 2 + 3k, 5 + 7k, ...) perturbed by small primes.
inline std::vector<Rat> sample_weights(int n, int k) {
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  std::vector<Rat> w(n + 1);
  Rat sum = 0;
  for (int i = 0; i <= n; ++i) {
    w[i] = 97 + primes[(i + k) % 16] * (k + 1) + 13 * i;
    sum += w[i];
  }
  for (auto& x : w) x /= sum;
  return w;
}

/// mod2_degree at the first generic candidate sample, scanning simplices
/// and candidate weights in order.
inline int component_degree(const NeighborComplex& NC, const Triangulation& T, const PLMap& f, int component, int start_simplex = 0) {
  const int S = static_cast<int>(T.num_simplices());
  for (int off = 0; off < S; ++off) {
    const int s = (start_simplex + off) % S;
    for (int k = 0; k < 8; ++k) {
      try {
        return mod2_degree(NC, T, f, component, s, sample_weights(T.n, k));
      } catch (const GenericityError&) {
      }
    }
  }
  throw GenericityError("no generic sample point found");
}

/// Number of cells whose image contains p in its interior; throws
/// GenericityError when p lies on a cell boundary.
inline long cells_covering(const NeighborComplex& NC, const QVec& p) {
  long count = 0;
  for (const auto& c : NC.cells) {
    if (strictly_contains(c.image, p))
      ++count;
    else if (contains(c.image, p))
      throw GenericityError("probe lies on a cell boundary");
  }
  return count;
}

}  // namespace fnb
