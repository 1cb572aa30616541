#pragma once

// Lusternik-Schnirelmann witnesses. A closed cover A_1..A_{n+1} of M by
// subcomplexes gives ψ = (d²(·, A_1), …, d²(·, A_{n+1})); its projection to
// (1,…,1)^⊥ goes through the neighbor-complex engine, and every sample of the
// resulting traveller path is certified ε-close to a common A_k.

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/geometry.hpp"
#include "fnb/neighbor_complex.hpp"
#include "fnb/pathfinder.hpp"
#include "fnb/plmap.hpp"

namespace fnb {

/// Sets of maximal-simplex indices; sets[k] is A_{k+1}.
struct ClosedCover {
  std::vector<std::vector<int>> sets;
  friend bool operator==(const ClosedCover&, const ClosedCover&) = default;
};

struct CoverReport {
  bool pass = true;
  std::vector<std::size_t> counts;
  std::vector<std::string> messages;
};

inline CoverReport validate_cover(const Triangulation& T, const ClosedCover& C) {
  CoverReport rep;
  auto fail = [&](std::string m) {
    rep.pass = false;
    rep.messages.push_back(std::move(m));
  };
  if (static_cast<int>(C.sets.size()) != T.n + 1)
    fail("cover has " + std::to_string(C.sets.size()) + " sets, expected n + 1 = " + std::to_string(T.n + 1));
  std::vector<bool> covered(T.num_simplices(), false);
  for (std::size_t k = 0; k < C.sets.size(); ++k) {
    rep.counts.push_back(C.sets[k].size());
    if (C.sets[k].empty()) fail("set " + std::to_string(k + 1) + " is empty");
    for (int s : C.sets[k]) {
      if (s < 0 || s >= static_cast<int>(T.num_simplices())) {
        fail("set " + std::to_string(k + 1) + " names simplex " + std::to_string(s) + " which does not exist");
        continue;
      }
      covered[s] = true;
    }
  }
  for (std::size_t s = 0; s < covered.size(); ++s)
    if (!covered[s]) fail("simplex " + std::to_string(s) + " is in no set");
  return rep;
}

// ---------------------------------------------------------------------------
// Exact squared distances

/// d²(x, conv(V)) for a simplex with at most three vertices, through the
/// barycentric parametrisation λ ↦ V0 + Σ λ_i (V_i − V0).
inline Rat sq_dist_to_simplex(const QVec& x, const std::vector<QVec>& V) {
  const std::size_t k = V.size() - 1;
  if (k == 0) return norm2(x - V[0]);
  if (k > 2) throw InputError("squared distance supports simplices of dimension at most 2");
  AffineMap L;
  L.offset = V[0] - x;
  L.linear.assign(x.dim(), QVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t r = 0; r < x.dim(); ++r) L.linear[r][i] = V[i + 1][r] - V[0][r];
  const auto dom = k == 1 ? make_interval(0, 1) : make_polygon({QVec{0, 0}, QVec{1, 0}, QVec{0, 1}});
  return min_affine_norm_on_poly(L, *dom).value;
}

/// The same distance by enumerating every face, projecting x onto its affine
/// hull and keeping feet with nonnegative barycentric weights.
inline Rat sq_dist_by_faces(const QVec& x, const std::vector<QVec>& V) {
  std::optional<Rat> best;
  const std::size_t m = V.size();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<QVec> F;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) F.push_back(V[i]);
    const std::size_t k = F.size() - 1;
    QVec foot = F[0];
    std::vector<Rat> w(k);
    if (k > 0) {
      // Gram system for the weights of F_i − F_0.
      std::vector<QVec> G(k, QVec(k));
      QVec rhs(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) G[i][j] = dot(F[i + 1] - F[0], F[j + 1] - F[0]);
        rhs[i] = dot(x - F[0], F[i + 1] - F[0]);
      }
      const auto sol = detail::solve_square(G, rhs);
      if (!sol) continue;
      Rat rest = 1;
      bool inside = true;
      for (std::size_t i = 0; i < k; ++i) {
        inside = inside && (*sol)[i] >= 0;
        rest -= (*sol)[i];
        foot += (F[i + 1] - F[0]) * (*sol)[i];
      }
      if (!inside || rest < 0) continue;
    }
    const Rat d = norm2(x - foot);
    if (!best || d < *best) best = d;
  }
  return *best;
}

inline Rat sq_dist_to_set(const Triangulation& T, const std::vector<int>& set, const QVec& x, bool by_faces = false) {
  std::optional<Rat> best;
  for (int s : set) {
    std::vector<QVec> V;
    for (int v : T.simplices[s]) V.push_back(T.coords[v]);
    const Rat d = by_faces ? sq_dist_by_faces(x, V) : sq_dist_to_simplex(x, V);
    if (!best || d < *best) best = d;
    if (*best == 0) break;
  }
  return *best;
}

struct DistanceMap {
  Triangulation T;  // refined domain
  PLMap psi;        // into ℝ^{n+1}
};

/// ψ on the `refine_level`-fold midpoint subdivision. Distances are to the
/// point sets of the original A_k, which subdivision does not move.
inline DistanceMap build_distance_map(const Triangulation& T0, const ClosedCover& C, int refine_level) {
  const auto rep = validate_cover(T0, C);
  if (!rep.pass) throw InputError("invalid cover: " + rep.messages.front());
  if (T0.period) throw InputError("distance maps need a non-periodic embedding");
  if (refine_level < 0) throw InputError("refine level must be nonnegative");
  DistanceMap D{T0, {}};
  for (int i = 0; i < refine_level; ++i) D.T = midpoint_subdivide(D.T);
  D.psi.target_dim = T0.n + 1;
  for (const auto& x : D.T.coords) {
    QVec y(T0.n + 1);
    for (std::size_t k = 0; k < C.sets.size(); ++k) y[k] = sq_dist_to_set(T0, C.sets[k], x);
    D.psi.values.push_back(std::move(y));
  }
  D.psi.pinned.assign(D.T.num_vertices(), false);
  return D;
}

/// Coordinates in the basis (1,−1,0,…), (1,1,−2,0,…), …, (1,…,1,−n) of
/// (1,…,1)^⊥.
inline QVec project_point(const QVec& y) {
  const std::size_t n = y.dim() - 1;
  QVec p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) p[i] += y[j];
    p[i] -= y[i + 1] * Rat(static_cast<long>(i + 1));
  }
  return p;
}

inline PLMap project_map(const PLMap& psi) {
  if (psi.target_dim < 2) throw InputError("project_map needs target dimension at least 2");
  PLMap g;
  g.target_dim = psi.target_dim - 1;
  for (const auto& y : psi.values) g.values.push_back(project_point(y));
  g.pinned = psi.pinned;
  return g;
}

// ---------------------------------------------------------------------------
// Witnesses

/// An ε-certificate was not found for some path sample.
class CertificationError : public Error {
 public:
  explicit CertificationError(const std::string& what) : Error(what, 1) {}
};

struct Certificate {
  int k = -1;  // 0-based set index
  Rat da, db;  // squared distances of the two travellers to A_k
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct CoverWitness {
  Triangulation T;  // refined domain
  PLMap psi;        // unperturbed distance map
  PLMap map;        // projected map after perturbation, fed to the engine
  DistantRelation rel;
  PairPath path;
  Rat epsilon;
  std::vector<Certificate> certs;
};

inline QVec eval_at(const Triangulation& T, const PLMap& f, int s, const QVec& x) {
  const auto w = barycentric_in_simplex(T, s, x);
  if (!w) throw TheoremViolation("path sample is not in its simplex");
  return eval(T, f, s, *w);
}

/// The perturbation magnitude is min(max_magnitude, ε²/64).
inline CoverWitness witness(const Triangulation& T0, const ClosedCover& C, const DistantRelation& rel, const Rat& epsilon, int refine_level,
                            std::uint64_t seed, const Rat& max_magnitude = Rat(1, 64)) {
  if (epsilon <= 0) throw InputError("epsilon must be positive");
  CoverWitness W;
  DistanceMap D = build_distance_map(T0, C, refine_level);
  W.T = std::move(D.T);
  W.psi = std::move(D.psi);
  W.rel = rel;
  W.epsilon = epsilon;
  const Rat eps2 = epsilon * epsilon;
  const Rat magnitude = std::min(max_magnitude, Rat(eps2 / 64));
  W.map = ensure_general_position(W.T, project_map(W.psi), seed, magnitude);
  const NeighborComplex NC = build_neighbor_complex(W.T, W.map);
  W.path = extract_path(W.T, NC, select_principal(NC, W.T, W.map), rel);
  for (std::size_t i = 0; i < W.path.samples.size(); ++i) {
    const auto& s = W.path.samples[i];
    std::optional<Certificate> best;
    for (int k = 0; k < static_cast<int>(C.sets.size()); ++k) {
      Certificate c{k, sq_dist_to_set(T0, C.sets[k], s.a), sq_dist_to_set(T0, C.sets[k], s.b)};
      if (!best || std::max(c.da, c.db) < std::max(best->da, best->db)) best = c;
      if (c.da < eps2 && c.db < eps2) {
        best = c;
        break;
      }
    }
    if (!(best->da < eps2 && best->db < eps2))
      throw CertificationError("sample " + std::to_string(i) + " is not certified at epsilon " + to_string(epsilon) + ": best set " +
                               std::to_string(best->k + 1) + " at squared distances " + to_string(best->da) + ", " + to_string(best->db) +
                               "; increase the refine level or epsilon");
    W.certs.push_back(*best);
  }
  return W;
}

struct WitnessReport {
  bool pass = true;
  int first_bad = -1;
  std::vector<std::string> messages;
};

/// Recomputes every certificate with the face-enumeration distance and
/// re-verifies the path against the engine map.
inline WitnessReport check_witness(const Triangulation& T0, const ClosedCover& C, const CoverWitness& W) {
  WitnessReport rep;
  auto fail = [&](int i, std::string m) {
    if (rep.pass) rep.first_bad = i;
    rep.pass = false;
    rep.messages.push_back("sample " + std::to_string(i) + ": " + std::move(m));
  };
  const auto pr = verify_path(W.T, W.map, W.path, W.rel);
  if (!pr.pass) fail(pr.first_bad, "path does not verify: " + pr.messages.front());
  if (W.certs.size() != W.path.samples.size()) {
    fail(0, "certificate count differs from sample count");
    return rep;
  }
  const Rat eps2 = W.epsilon * W.epsilon;
  for (std::size_t i = 0; i < W.certs.size(); ++i) {
    const auto& c = W.certs[i];
    const auto& s = W.path.samples[i];
    if (c.k < 0 || c.k >= static_cast<int>(C.sets.size())) {
      fail(static_cast<int>(i), "certificate names no set");
      continue;
    }
    const Rat da = sq_dist_to_set(T0, C.sets[c.k], s.a, true);
    const Rat db = sq_dist_to_set(T0, C.sets[c.k], s.b, true);
    if (da != c.da || db != c.db) fail(static_cast<int>(i), "recorded distances differ from the recomputed ones");
    if (!(da < eps2 && db < eps2)) fail(static_cast<int>(i), "travellers are not both within epsilon of the set");
  }
  return rep;
}

/// Largest |ψ(a) − ψ(b)| coordinate over the path samples, with ψ the
/// unperturbed distance map. Zero means ψ-equality holds exactly.
inline Rat psi_deviation(const CoverWitness& W) {
  Rat worst = 0;
  for (const auto& s : W.path.samples) {
    const QVec d = eval_at(W.T, W.psi, s.A, s.a) - eval_at(W.T, W.psi, s.B, s.b);
    for (const auto& c : d) worst = std::max(worst, Rat(abs(c)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Files

inline ClosedCover parse_cover(const Triangulation& T, std::istream& in) {
  ClosedCover C;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 4 || tok[0] != "set" || tok[2] != "simplex")
      throw InputError("line " + std::to_string(lineno) + ": expected 'set <k> simplex <index>'");
    const long k = detail::parse_long(tok[1], lineno);
    const long s = detail::parse_long(tok[3], lineno);
    if (k < 1 || k > T.n + 1) throw InputError("line " + std::to_string(lineno) + ": set index must lie in 1..n+1");
    if (s < 0 || s >= static_cast<long>(T.num_simplices())) throw InputError("line " + std::to_string(lineno) + ": no simplex " + std::to_string(s));
    if (static_cast<long>(C.sets.size()) < k) C.sets.resize(k);
    C.sets[k - 1].push_back(static_cast<int>(s));
  }
  for (auto& set : C.sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return C;
}

inline void write_cover(std::ostream& out, const ClosedCover& C) {
  for (std::size_t k = 0; k < C.sets.size(); ++k)
    for (int s : C.sets[k]) out << "set " << k + 1 << " simplex " << s << "\n";
}

inline void write_witness(std::ostream& out, const CoverWitness& W) {
  write_pairpath(out, W.path);
  out << "epsilon " << to_string(W.epsilon) << "\n";
  for (const auto& c : W.certs) out << "cert " << c.k + 1 << " " << to_string(c.da) << " " << to_string(c.db) << "\n";
}

struct WitnessFile {
  PairPath path;
  Rat epsilon;
  std::vector<Certificate> certs;
};

inline WitnessFile parse_witness(std::istream& in) {
  WitnessFile F;
  std::stringstream path_part;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (!tok.empty() && tok[0] == "cert") {
      if (tok.size() != 4) throw InputError("line " + std::to_string(lineno) + ": expected 'cert <k> <d2a> <d2b>'");
      F.certs.push_back({static_cast<int>(detail::parse_long(tok[1], lineno)) - 1, detail::parse_rat_at(tok[2], lineno), detail::parse_rat_at(tok[3], lineno)});
    } else if (!tok.empty() && tok[0] == "epsilon") {
      if (tok.size() != 2) throw InputError("line " + std::to_string(lineno) + ": expected 'epsilon <p/q>'");
      F.epsilon = detail::parse_rat_at(tok[1], lineno);
    } else {
      path_part << line << "\n";
    }
  }
  F.path = parse_pairpath(path_part);
  return F;
}

}  // namespace fnb
