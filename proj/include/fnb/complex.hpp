#pragma once

// Triangulations of closed manifolds: storage, validation, generators for
// spheres and the flat torus, edge-midpoint and barycentric subdivision, and
// the line-oriented text format.

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fnb/errors.hpp"
#include "fnb/rational.hpp"

namespace fnb {

/// Sorted tuple of vertex indices.
using Simplex = std::vector<int>;

/// A face of a maximal simplex, named by the local vertex it omits.
struct SimplexRef {
  int simplex = -1;
  int omit = -1;  // -1 for the maximal simplex itself
  friend bool operator==(const SimplexRef&, const SimplexRef&) = default;
};

struct Triangulation {
  int n = 0;            // intrinsic dimension
  int ambient_dim = 0;  // d
  std::vector<QVec> coords;
  std::vector<long> ids;  // external vertex ids, parallel to coords
  std::vector<Simplex> simplices;
  std::optional<std::vector<int>> involution;
  std::optional<std::vector<int>> labels;
  /// When set, every ambient coordinate is taken modulo this period (flat tori).
  std::optional<Rat> period;

  std::size_t num_vertices() const { return coords.size(); }
  std::size_t num_simplices() const { return simplices.size(); }

  int index_of_id(long id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw InputError("unknown vertex id " + std::to_string(id));
    return static_cast<int>(it - ids.begin());
  }

  friend bool operator==(const Triangulation&, const Triangulation&) = default;
};

// ---------------------------------------------------------------------------
// Periodic coordinate handling

inline Rat floor_rat(const Rat& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rat(q);
}

/// Reduces a point into the fundamental domain [0, period)^d.
inline QVec canonical_point(const Triangulation& T, QVec x) {
  if (!T.period) return x;
  for (auto& c : x) c -= floor_rat(c / *T.period) * *T.period;
  return x;
}

/// The translate of x nearest to `anchor`.
inline QVec unwrap_near(const Triangulation& T, QVec x, const QVec& anchor) {
  if (!T.period) return x;
  const Rat& p = *T.period;
  for (std::size_t i = 0; i < x.dim(); ++i) x[i] += floor_rat((anchor[i] - x[i]) / p + Rat(1, 2)) * p;
  return x;
}

/// Vertex coordinates of maximal simplex s in one consistent (unwrapped) frame.
inline std::vector<QVec> simplex_coords(const Triangulation& T, int s) {
  const Simplex& S = T.simplices[s];
  std::vector<QVec> out;
  out.reserve(S.size());
  const QVec& anchor = T.coords[S[0]];
  for (int v : S) out.push_back(unwrap_near(T, T.coords[v], anchor));
  return out;
}

inline Rat periodic_dist2(const Triangulation& T, const QVec& a, const QVec& b) {
  return norm2(unwrap_near(T, b, a) - a);
}

// ---------------------------------------------------------------------------
// Combinatorics

inline Simplex face_of(const Simplex& s, int omit) {
  Simplex f;
  for (int i = 0; i < static_cast<int>(s.size()); ++i)
    if (i != omit) f.push_back(s[i]);
  return f;
}

/// Facet adjacency of maximal simplices.
struct Adjacency {
  /// across[s][j] is the maximal simplex sharing the face of s that omits
  /// local vertex j, or -1 when that face does not have exactly two cofaces.
  std::vector<std::vector<int>> across;
  /// All codimension-1 faces with the maximal simplices containing them.
  std::map<Simplex, std::vector<SimplexRef>> cofaces;
};

inline Adjacency build_adjacency(const Triangulation& T) {
  Adjacency adj;
  adj.across.assign(T.simplices.size(), std::vector<int>(T.n + 1, -1));
  for (int s = 0; s < static_cast<int>(T.simplices.size()); ++s)
    for (int j = 0; j <= T.n; ++j) adj.cofaces[face_of(T.simplices[s], j)].push_back({s, j});
  for (const auto& [face, refs] : adj.cofaces) {
    if (refs.size() != 2) continue;
    adj.across[refs[0].simplex][refs[0].omit] = refs[1].simplex;
    adj.across[refs[1].simplex][refs[1].omit] = refs[0].simplex;
  }
  return adj;
}

/// Sorted list of all edges (1-faces).
inline std::vector<std::array<int, 2>> edges(const Triangulation& T) {
  std::set<std::array<int, 2>> es;
  for (const auto& s : T.simplices)
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) es.insert({s[i], s[j]});
  return {es.begin(), es.end()};
}

/// Every face of every dimension, keyed by sorted vertex tuple.
inline std::set<Simplex> all_faces(const Triangulation& T) {
  std::set<Simplex> faces;
  for (const auto& s : T.simplices) {
    const int k = static_cast<int>(s.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      Simplex f;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) f.push_back(s[i]);
      faces.insert(f);
    }
  }
  return faces;
}

inline long euler_characteristic(const Triangulation& T) {
  long chi = 0;
  for (const auto& f : all_faces(T)) chi += (f.size() % 2 == 1) ? 1 : -1;
  return chi;
}

namespace detail {

// Rank of a list of vectors, by exact elimination.
inline int rank(std::vector<QVec> rows) {
  int r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].dim();
  for (std::size_t c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Rat m = rows[i][c] / rows[r][c];
      rows[i] -= rows[r] * m;
    }
    ++r;
  }
  return r;
}

}  // namespace detail

/// Barycentric weights of `x` with respect to maximal simplex s, if x lies in
/// the affine hull of s. Weights may be negative when x is outside s.
inline std::optional<std::vector<Rat>> barycentric_in_simplex(const Triangulation& T, int s, const QVec& x) {
  const auto V = simplex_coords(T, s);
  const QVec xu = unwrap_near(T, x, V[0]);
  const std::size_t k = V.size() - 1;
  std::vector<QVec> cols;
  for (std::size_t i = 1; i <= k; ++i) cols.push_back(V[i] - V[0]);
  const QVec r = xu - V[0];
  // Normal equations GᵀG λ = Gᵀ r, then exact residual check.
  std::vector<QVec> G(k, QVec(k));
  QVec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) G[i][j] = dot(cols[i], cols[j]);
    rhs[i] = dot(cols[i], r);
  }
  // Gaussian elimination on the small Gram system.
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    while (piv < k && G[piv][c] == 0) ++piv;
    if (piv == k) return std::nullopt;
    std::swap(G[piv], G[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c || G[i][c] == 0) continue;
      const Rat m = G[i][c] / G[c][c];
      G[i] -= G[c] * m;
      rhs[i] -= rhs[c] * m;
    }
  }
  std::vector<Rat> lam(k + 1);
  Rat rest = 1;
  QVec recon = V[0];
  for (std::size_t i = 0; i < k; ++i) {
    lam[i + 1] = rhs[i] / G[i][i];
    rest -= lam[i + 1];
    recon += cols[i] * lam[i + 1];
  }
  lam[0] = rest;
  if (recon != xu) return std::nullopt;
  return lam;
}

// ---------------------------------------------------------------------------
// Validation

struct FaceCount {
  Simplex face;
  int cofaces = 0;
};

struct ValidationReport {
  bool pass = false;
  bool closed = false;
  bool connected = false;
  bool nondegenerate = false;
  bool involution_ok = true;  // vacuous when no involution is installed
  std::vector<FaceCount> faces;
  std::vector<int> degenerate_simplices;
  std::vector<std::string> messages;

  std::size_t bad_face_count() const {
    return static_cast<std::size_t>(std::count_if(faces.begin(), faces.end(), [](const FaceCount& f) { return f.cofaces != 2; }));
  }
};

inline ValidationReport validate_closed(const Triangulation& T) {
  ValidationReport rep;
  if (T.simplices.empty()) {
    rep.messages.push_back("no maximal simplices");
    return rep;
  }
  bool shape_ok = true;
  for (std::size_t s = 0; s < T.simplices.size(); ++s) {
    const auto& S = T.simplices[s];
    if (static_cast<int>(S.size()) != T.n + 1 || !std::is_sorted(S.begin(), S.end()) ||
        std::adjacent_find(S.begin(), S.end()) != S.end()) {
      rep.messages.push_back("simplex " + std::to_string(s) + " is not a sorted (n+1)-tuple of distinct vertices");
      shape_ok = false;
    }
  }
  if (!shape_ok) return rep;

  const Adjacency adj = build_adjacency(T);
  rep.closed = true;
  for (const auto& [face, refs] : adj.cofaces) {
    rep.faces.push_back({face, static_cast<int>(refs.size())});
    if (refs.size() != 2) rep.closed = false;
  }
  if (!rep.closed) rep.messages.push_back(std::to_string(rep.bad_face_count()) + " faces without exactly two cofaces");

  // Connectivity of the facet-adjacency graph.
  std::vector<int> seen(T.simplices.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int j = 0; j <= T.n; ++j)
      for (const auto& r : adj.cofaces.at(face_of(T.simplices[s], j)))
        if (!seen[r.simplex]) {
          seen[r.simplex] = 1;
          ++reached;
          stack.push_back(r.simplex);
        }
  }
  rep.connected = reached == T.simplices.size();
  if (!rep.connected) rep.messages.push_back("facet-adjacency graph is disconnected");

  rep.nondegenerate = true;
  for (int s = 0; s < static_cast<int>(T.simplices.size()); ++s) {
    const auto V = simplex_coords(T, s);
    std::vector<QVec> diffs;
    for (std::size_t i = 1; i < V.size(); ++i) diffs.push_back(V[i] - V[0]);
    if (detail::rank(diffs) != T.n) {
      rep.nondegenerate = false;
      rep.degenerate_simplices.push_back(s);
    }
  }
  if (!rep.nondegenerate)
    rep.messages.push_back(std::to_string(rep.degenerate_simplices.size()) + " geometrically degenerate simplices");

  if (T.involution) {
    const auto& inv = *T.involution;
    std::set<Simplex> simplex_set(T.simplices.begin(), T.simplices.end());
    for (std::size_t v = 0; v < inv.size(); ++v) {
      if (inv[v] < 0 || inv[v] >= static_cast<int>(inv.size()) || inv[inv[v]] != static_cast<int>(v)) {
        rep.involution_ok = false;
        rep.messages.push_back("involution is not an involution at vertex id " + std::to_string(T.ids[v]));
        break;
      }
      if (inv[v] == static_cast<int>(v)) {
        rep.involution_ok = false;
        rep.messages.push_back("involution fixes vertex id " + std::to_string(T.ids[v]));
        break;
      }
    }
    if (rep.involution_ok)
      for (const auto& s : T.simplices) {
        Simplex img;
        for (int v : s) img.push_back(inv[v]);
        std::sort(img.begin(), img.end());
        if (!simplex_set.count(img)) {
          rep.involution_ok = false;
          rep.messages.push_back("involution does not map simplices to simplices");
          break;
        }
      }
  }
  rep.pass = rep.closed && rep.connected && rep.nondegenerate && rep.involution_ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Subdivision

/// Each edge is split at its midpoint (n = 1: 2 edges per edge; n = 2: 4
/// triangles per triangle). The involution extends to midpoints; labels are
/// dropped.
inline Triangulation midpoint_subdivide(const Triangulation& T) {
  if (T.n != 1 && T.n != 2) throw InputError("midpoint subdivision supports n = 1, 2");
  Triangulation R;
  R.n = T.n;
  R.ambient_dim = T.ambient_dim;
  R.period = T.period;
  R.coords = T.coords;
  R.ids = T.ids;
  long next_id = T.ids.empty() ? 0 : *std::max_element(T.ids.begin(), T.ids.end()) + 1;
  std::map<std::array<int, 2>, int> mid;
  auto midpoint = [&](int u, int v) {
    std::array<int, 2> key{std::min(u, v), std::max(u, v)};
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const QVec a = T.coords[key[0]];
    const QVec b = unwrap_near(T, T.coords[key[1]], a);
    const int idx = static_cast<int>(R.coords.size());
    R.coords.push_back(canonical_point(T, (a + b) * Rat(1, 2)));
    R.ids.push_back(next_id++);
    mid.emplace(key, idx);
    return idx;
  };
  auto push = [&](Simplex s) {
    std::sort(s.begin(), s.end());
    R.simplices.push_back(std::move(s));
  };
  for (const auto& s : T.simplices) {
    if (T.n == 1) {
      const int m = midpoint(s[0], s[1]);
      push({s[0], m});
      push({m, s[1]});
    } else {
      const int mab = midpoint(s[0], s[1]);
      const int mbc = midpoint(s[1], s[2]);
      const int mac = midpoint(s[0], s[2]);
      push({s[0], mab, mac});
      push({s[1], mab, mbc});
      push({s[2], mac, mbc});
      push({mab, mbc, mac});
    }
  }
  if (T.involution) {
    const auto& inv = *T.involution;
    std::vector<int> rinv(R.coords.size());
    for (std::size_t v = 0; v < inv.size(); ++v) rinv[v] = inv[v];
    for (const auto& [key, idx] : mid) {
      std::array<int, 2> img{std::min(inv[key[0]], inv[key[1]]), std::max(inv[key[0]], inv[key[1]])};
      auto it = mid.find(img);
      if (it == mid.end()) throw InputError("involution does not map edges to edges");
      rinv[idx] = it->second;
    }
    R.involution = std::move(rinv);
  }
  return R;
}

/// Standard barycentric subdivision: one new vertex per face of positive
/// dimension, one maximal simplex per complete flag. The involution extends
/// to barycentres; labels are dropped.
inline Triangulation barycentric_subdivide(const Triangulation& T) {
  Triangulation R;
  R.n = T.n;
  R.ambient_dim = T.ambient_dim;
  R.period = T.period;
  R.coords = T.coords;
  R.ids = T.ids;
  long next_id = T.ids.empty() ? 0 : *std::max_element(T.ids.begin(), T.ids.end()) + 1;
  std::map<Simplex, int> bary;
  for (std::size_t v = 0; v < T.coords.size(); ++v) bary[{static_cast<int>(v)}] = static_cast<int>(v);
  auto barycenter = [&](const Simplex& f) {
    auto it = bary.find(f);
    if (it != bary.end()) return it->second;
    const QVec anchor = T.coords[f[0]];
    QVec sum(T.ambient_dim);
    for (int v : f) sum += unwrap_near(T, T.coords[v], anchor);
    const int idx = static_cast<int>(R.coords.size());
    R.coords.push_back(canonical_point(T, sum * Rat(1, static_cast<long>(f.size()))));
    R.ids.push_back(next_id++);
    bary.emplace(f, idx);
    return idx;
  };
  for (const auto& s : T.simplices) {
    std::vector<int> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Simplex chain, flag;
      for (int i : perm) {
        chain.push_back(s[i]);
        Simplex f = chain;
        std::sort(f.begin(), f.end());
        flag.push_back(barycenter(f));
      }
      std::sort(flag.begin(), flag.end());
      R.simplices.push_back(std::move(flag));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (T.involution) {
    const auto& inv = *T.involution;
    std::vector<int> rinv(R.coords.size());
    for (const auto& [f, idx] : bary) {
      Simplex img;
      for (int v : f) img.push_back(inv[v]);
      std::sort(img.begin(), img.end());
      auto it = bary.find(img);
      if (it == bary.end()) throw InputError("involution does not map faces to faces");
      rinv[idx] = it->second;
    }
    R.involution = std::move(rinv);
  }
  return R;
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

// Rational point of the unit circle from the stereographic parameter t.
inline QVec circle_point(const Rat& t) {
  const Rat d = 1 + t * t;
  return QVec{(1 - t * t) / d, 2 * t / d};
}

inline Triangulation octahedron() {
  Triangulation T;
  T.n = 2;
  T.ambient_dim = 3;
  const int one[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (int v = 0; v < 6; ++v) {
    T.coords.push_back(QVec{one[v][0], one[v][1], one[v][2]});
    T.ids.push_back(v);
  }
  for (int a : {0, 1})
    for (int b : {2, 3})
      for (int c : {4, 5}) T.simplices.push_back({a, b, c});
  T.involution = std::vector<int>{1, 0, 3, 2, 5, 4};
  return T;
}

}  // namespace detail

/// Centrally symmetric rational polyhedral sphere with x ↦ −x installed as the
/// involution. n = 1: 2^(level+2)-gon with vertices on the unit circle;
/// n = 2: octahedron boundary after `level` edge-midpoint subdivisions.
inline Triangulation generate_sphere(int n, int level) {
  if (level < 0) throw InputError("sphere level must be nonnegative");
  if (n == 2) {
    Triangulation T = detail::octahedron();
    for (int i = 0; i < level; ++i) T = midpoint_subdivide(T);
    return T;
  }
  if (n != 1) throw InputError("generate_sphere supports n = 1 and n = 2");
  const int N = 1 << (level + 2);
  const int quarter = N / 4;
  const long D = 4L * N;
  std::vector<QVec> first;
  for (int k = 0; k < quarter; ++k) {
    const double theta = 2.0 * M_PI * k / N;
    const long num = std::lround(std::tan(theta / 2) * static_cast<double>(D));
    first.push_back(detail::circle_point(rat(num, D)));
  }
  Triangulation T;
  T.n = 1;
  T.ambient_dim = 2;
  for (int q = 0; q < 4; ++q)
    for (const auto& p : first) {
      QVec r = p;
      for (int i = 0; i < q; ++i) r = QVec{-r[1], r[0]};  // quarter turn
      T.coords.push_back(r);
    }
  for (int v = 0; v < N; ++v) {
    T.ids.push_back(v);
    const int w = (v + 1) % N;
    T.simplices.push_back({std::min(v, w), std::max(v, w)});
  }
  std::vector<int> inv(N);
  for (int v = 0; v < N; ++v) inv[v] = (v + N / 2) % N;
  T.involution = std::move(inv);
  return T;
}

/// Flat torus: the (3·2^level)² grid on the unit square, each cell split along
/// its main diagonal, opposite sides identified. Coordinates have period 1.
inline Triangulation generate_torus(int level) {
  if (level < 0) throw InputError("torus level must be nonnegative");
  const int m = 3 << level;
  Triangulation T;
  T.n = 2;
  T.ambient_dim = 2;
  T.period = Rat(1);
  auto idx = [m](int i, int j) { return ((i % m + m) % m) * m + ((j % m + m) % m); };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      T.coords.push_back(QVec{rat(i, m), rat(j, m)});
      T.ids.push_back(idx(i, j));
    }
  auto push = [&](Simplex s) {
    std::sort(s.begin(), s.end());
    T.simplices.push_back(std::move(s));
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      push({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
      push({idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)});
    }
  return T;
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream is(body);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

inline long parse_long(const std::string& s, int lineno) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(lineno) + ": expected an integer, got '" + s + "'");
  }
}

inline Rat parse_rat_at(const std::string& s, int lineno) {
  try {
    return parse_rat(s);
  } catch (const InputError& e) {
    throw InputError("line " + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace detail

inline Triangulation parse_triangulation(std::istream& in) {
  Triangulation T;
  bool have_dim = false, have_ambient = false;
  std::map<long, int> index;
  std::vector<std::pair<long, long>> inv_pairs;
  std::vector<std::pair<long, long>> label_pairs;
  std::vector<std::pair<std::vector<long>, int>> raw_simplices;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto need = [&](std::size_t k) {
      if (tok.size() != k) throw InputError("line " + std::to_string(lineno) + ": '" + kw + "' expects " + std::to_string(k - 1) + " fields");
    };
    if (kw == "dim") {
      need(2);
      T.n = static_cast<int>(detail::parse_long(tok[1], lineno));
      if (T.n < 1) throw InputError("line " + std::to_string(lineno) + ": dim must be at least 1");
      have_dim = true;
    } else if (kw == "ambient") {
      need(2);
      T.ambient_dim = static_cast<int>(detail::parse_long(tok[1], lineno));
      if (T.ambient_dim < 1) throw InputError("line " + std::to_string(lineno) + ": ambient must be at least 1");
      have_ambient = true;
    } else if (kw == "period") {
      need(2);
      T.period = detail::parse_rat_at(tok[1], lineno);
      if (*T.period <= 0) throw InputError("line " + std::to_string(lineno) + ": period must be positive");
    } else if (kw == "vertex") {
      if (!have_ambient) throw InputError("line " + std::to_string(lineno) + ": 'vertex' before 'ambient'");
      need(2 + T.ambient_dim);
      const long id = detail::parse_long(tok[1], lineno);
      if (id < 0) throw InputError("line " + std::to_string(lineno) + ": vertex ids must be nonnegative");
      if (index.count(id)) throw InputError("line " + std::to_string(lineno) + ": duplicate vertex id " + tok[1]);
      QVec x(T.ambient_dim);
      for (int i = 0; i < T.ambient_dim; ++i) x[i] = detail::parse_rat_at(tok[2 + i], lineno);
      index[id] = static_cast<int>(T.coords.size());
      T.coords.push_back(std::move(x));
      T.ids.push_back(id);
    } else if (kw == "simplex") {
      if (!have_dim) throw InputError("line " + std::to_string(lineno) + ": 'simplex' before 'dim'");
      need(2 + T.n);
      std::vector<long> vs;
      for (int i = 0; i <= T.n; ++i) vs.push_back(detail::parse_long(tok[1 + i], lineno));
      raw_simplices.emplace_back(std::move(vs), lineno);
    } else if (kw == "involution") {
      need(3);
      inv_pairs.emplace_back(detail::parse_long(tok[1], lineno), detail::parse_long(tok[2], lineno));
    } else if (kw == "label") {
      need(3);
      const long k = detail::parse_long(tok[2], lineno);
      if (k == 0) throw InputError("line " + std::to_string(lineno) + ": labels must be nonzero");
      label_pairs.emplace_back(detail::parse_long(tok[1], lineno), k);
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown directive '" + kw + "'");
    }
  }
  if (!have_dim || !have_ambient) throw InputError("triangulation file needs 'dim' and 'ambient'");
  auto lookup = [&](long id, int ln) {
    auto it = index.find(id);
    if (it == index.end()) throw InputError("line " + std::to_string(ln) + ": unknown vertex id " + std::to_string(id));
    return it->second;
  };
  for (const auto& [vs, ln] : raw_simplices) {
    Simplex s;
    for (long id : vs) s.push_back(lookup(id, ln));
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw InputError("line " + std::to_string(ln) + ": simplex repeats a vertex");
    T.simplices.push_back(std::move(s));
  }
  if (!inv_pairs.empty()) {
    std::vector<int> inv(T.coords.size(), -1);
    for (const auto& [a, b] : inv_pairs) {
      const int ia = lookup(a, 0), ib = lookup(b, 0);
      if ((inv[ia] != -1 && inv[ia] != ib) || (inv[ib] != -1 && inv[ib] != ia))
        throw InputError("involution assigns two images to one vertex");
      inv[ia] = ib;
      inv[ib] = ia;
    }
    if (std::find(inv.begin(), inv.end(), -1) != inv.end()) throw InputError("involution does not cover every vertex");
    T.involution = std::move(inv);
  }
  if (!label_pairs.empty()) {
    std::vector<int> lab(T.coords.size(), 0);
    for (const auto& [id, k] : label_pairs) lab[lookup(id, 0)] = static_cast<int>(k);
    if (std::find(lab.begin(), lab.end(), 0) != lab.end()) throw InputError("labels do not cover every vertex");
    T.labels = std::move(lab);
  }
  return T;
}

inline void write_triangulation(std::ostream& out, const Triangulation& T) {
  out << "dim " << T.n << "\n";
  out << "ambient " << T.ambient_dim << "\n";
  if (T.period) out << "period " << to_string(*T.period) << "\n";
  for (std::size_t v = 0; v < T.coords.size(); ++v) out << "vertex " << T.ids[v] << " " << to_string(T.coords[v]) << "\n";
  for (const auto& s : T.simplices) {
    out << "simplex";
    for (int v : s) out << " " << T.ids[v];
    out << "\n";
  }
  if (T.involution)
    for (std::size_t v = 0; v < T.coords.size(); ++v)
      if (static_cast<int>(v) < (*T.involution)[v]) out << "involution " << T.ids[v] << " " << T.ids[(*T.involution)[v]] << "\n";
  if (T.labels)
    for (std::size_t v = 0; v < T.coords.size(); ++v) out << "label " << T.ids[v] << " " << (*T.labels)[v] << "\n";
}

inline std::string serialize(const Triangulation& T) {
  std::ostringstream os;
  write_triangulation(os, T);
  return os.str();
}

inline Triangulation parse_triangulation(const std::string& text) {
  std::istringstream is(text);
  return parse_triangulation(is);
}

}  // namespace fnb
