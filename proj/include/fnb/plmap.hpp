#pragma once

// Piecewise-linear maps M → R^n given by their vertex values: evaluation,
// exact general-position predicates, and seeded rational perturbation.

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/geometry.hpp"
#include "fnb/rational.hpp"

namespace fnb {

struct PLMap {
  int target_dim = 0;
  std::vector<QVec> values;  // by vertex index
  std::vector<bool> pinned;  // by vertex index

  friend bool operator==(const PLMap&, const PLMap&) = default;
};

/// PL interpolation of `g` at the vertices of T.
template <class Fn>
PLMap interpolate(const Triangulation& T, int target_dim, Fn&& g) {
  PLMap f;
  f.target_dim = target_dim;
  f.pinned.assign(T.num_vertices(), false);
  for (const auto& x : T.coords) {
    QVec y = g(x);
    if (static_cast<int>(y.dim()) != target_dim) throw InputError("map oracle returned a value of the wrong dimension");
    f.values.push_back(std::move(y));
  }
  return f;
}

inline std::vector<QVec> simplex_values(const PLMap& f, const Simplex& s) {
  std::vector<QVec> out;
  for (int v : s) out.push_back(f.values[v]);
  return out;
}

inline QVec eval(const Triangulation& T, const PLMap& f, int s, const std::vector<Rat>& bary) {
  const Simplex& S = T.simplices.at(s);
  if (bary.size() != S.size()) throw InputError("barycentric weight count differs from simplex size");
  Rat sum = 0;
  for (const auto& w : bary) {
    if (w < 0) throw InputError("negative barycentric weight");
    sum += w;
  }
  if (sum != 1) throw InputError("barycentric weights do not sum to 1");
  QVec y(f.target_dim);
  for (std::size_t i = 0; i < S.size(); ++i) y += f.values[S[i]] * bary[i];
  return y;
}

inline std::optional<ConvexPoly> simplex_image_poly(const PLMap& f, const Simplex& s) {
  return simplex_image(simplex_values(f, s));
}

/// Inverse of f on maximal simplex s as an affine map R^n → R^d, expressed
/// in the unwrapped frame of the simplex. Requires a nondegenerate image.
inline AffineMap inverse_on_simplex(const Triangulation& T, const PLMap& f, int s) {
  const int n = f.target_dim;
  const auto V = simplex_coords(T, s);
  const auto Y = simplex_values(f, T.simplices[s]);
  // Solve for the n×n matrix J⁻¹ with J = [Y_i − Y_0].
  std::vector<QVec> J(n, QVec(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) J[r][c] = Y[c + 1][r] - Y[0][r];
  std::vector<QVec> Jinv(n, QVec(n));
  for (int c = 0; c < n; ++c) {
    QVec e(n);
    e[c] = 1;
    auto col = detail::solve_square(J, e);
    if (!col) throw DegeneracyError("simplex " + std::to_string(s) + " has a degenerate image");
    for (int r = 0; r < n; ++r) Jinv[r][c] = (*col)[r];
  }
  // x = V0 + Σ_i (V_{i+1} − V0) λ_i,  λ = J⁻¹ (p − Y0).
  const int d = T.ambient_dim;
  AffineMap L;
  L.linear.assign(d, QVec(n));
  L.offset = V[0];
  for (int i = 0; i < n; ++i) {
    const QVec e = V[i + 1] - V[0];
    for (int row = 0; row < d; ++row)
      for (int c = 0; c < n; ++c) L.linear[row][c] += e[row] * Jinv[i][c];
  }
  const QVec shift = L(Y[0]) - V[0];
  L.offset -= shift;
  return L;
}

// ---------------------------------------------------------------------------
// General position

struct GPViolation {
  std::string condition;       // "GP1", "GP2" or "GP3"
  std::vector<int> simplices;  // offending maximal simplices (GP1)
  std::vector<int> vertices;   // offending vertices (GP2, GP3)
};

struct GPReport {
  bool pass = true;
  std::vector<GPViolation> violations;
};

namespace detail {

// Line through distinct points p, q as (a, b, c) with a x + b y = c and the
// first nonzero of (a, b) equal to 1.
inline std::vector<Rat> canonical_line(const QVec& p, const QVec& q) {
  Rat a = q[1] - p[1];
  Rat b = p[0] - q[0];
  const Rat lead = a != 0 ? a : b;
  a /= lead;
  b /= lead;
  Rat c = a * p[0] + b * p[1];
  return {a, b, c};
}

}  // namespace detail

/// Violations beyond `limit` are not collected; `pass` is still exact.
inline GPReport check_general_position(const Triangulation& T, const PLMap& f, std::size_t limit = 64) {
  if (f.target_dim != T.n) throw InputError("map target dimension must equal the intrinsic dimension");
  if (f.values.size() != T.num_vertices()) throw InputError("map has no value for some vertex");
  if (T.n != 1 && T.n != 2) throw InputError("general position is defined for n = 1, 2");
  GPReport rep;
  auto add = [&](GPViolation v) {
    rep.pass = false;
    if (rep.violations.size() < limit) rep.violations.push_back(std::move(v));
  };

  for (int s = 0; s < static_cast<int>(T.simplices.size()); ++s)
    if (!simplex_image_poly(f, T.simplices[s])) add({"GP1", {s}, {}});

  if (T.n == 1) {
    std::map<Rat, int> seen;
    for (int v = 0; v < static_cast<int>(f.values.size()); ++v) {
      auto [it, fresh] = seen.emplace(f.values[v][0], v);
      if (!fresh) add({"GP2", {}, {it->second, v}});
    }
    return rep;
  }

  const auto E = edges(T);
  std::map<std::vector<Rat>, std::vector<std::size_t>> lines;
  for (std::size_t e = 0; e < E.size(); ++e) {
    const QVec& p = f.values[E[e][0]];
    const QVec& q = f.values[E[e][1]];
    if (p == q) continue;  // already a GP1 violation
    lines[detail::canonical_line(p, q)].push_back(e);
  }
  for (const auto& [line, es] : lines)
    for (std::size_t i = 1; i < es.size(); ++i) {
      const auto& a = E[es[0]];
      const auto& b = E[es[i]];
      add({"GP2", {}, {a[0], a[1], b[0], b[1]}});
    }

  // GP3 with a floating-point prefilter: only near-collinear triples are
  // decided exactly.
  std::vector<std::array<double, 2>> fd;
  double scale = 1;
  for (const auto& y : f.values) {
    fd.push_back({y[0].get_d(), y[1].get_d()});
    scale = std::max({scale, std::abs(fd.back()[0]), std::abs(fd.back()[1])});
  }
  const double tol = 1e-9 * scale * scale;
  for (const auto& e : E) {
    const auto& p = fd[e[0]];
    const auto& q = fd[e[1]];
    for (int v = 0; v < static_cast<int>(fd.size()); ++v) {
      if (v == e[0] || v == e[1]) continue;
      const auto& r = fd[v];
      const double det = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
      if (std::abs(det) > tol) continue;
      if (f.values[e[0]] == f.values[e[1]]) continue;
      if (orient2(f.values[e[0]], f.values[e[1]], f.values[v]) == 0) add({"GP3", {}, {v, e[0], e[1]}});
    }
  }
  return rep;
}

inline std::string describe(const Triangulation& T, const GPViolation& v) {
  std::string out = v.condition;
  if (!v.simplices.empty()) {
    out += " simplices";
    for (int s : v.simplices) out += " " + std::to_string(s);
  }
  if (!v.vertices.empty()) {
    out += " vertices";
    for (int x : v.vertices) out += " " + std::to_string(T.ids[x]);
  }
  return out;
}

/// Adds a seeded offset in [−magnitude, magnitude) with denominator 2^20 ·
/// den(magnitude) to every coordinate of every unpinned vertex; halves the
/// magnitude and redraws up to 32 times until the result is in general
/// position.
inline PLMap perturb_to_general_position(const Triangulation& T, const PLMap& f, std::uint64_t seed, const Rat& magnitude) {
  if (magnitude <= 0) throw InputError("perturbation magnitude must be positive");
  constexpr long kSteps = 1L << 20;
  std::mt19937_64 rng(seed);
  Rat mag = magnitude;
  for (int attempt = 0; attempt <= 32; ++attempt) {
    PLMap g = f;
    for (std::size_t v = 0; v < g.values.size(); ++v) {
      if (!g.pinned.empty() && g.pinned[v]) continue;
      for (auto& c : g.values[v]) {
        const long r = static_cast<long>(rng() >> 43) - kSteps;  // [−2^20, 2^20)
        c += mag * rat(r, kSteps);
      }
    }
    if (check_general_position(T, g, 1).pass) return g;
    mag /= 2;
  }
  throw PerturbationError("general position not reached after 32 retries; pinned values may force a degeneracy");
}

/// f itself when already in general position, otherwise a perturbation.
inline PLMap ensure_general_position(const Triangulation& T, const PLMap& f, std::uint64_t seed, const Rat& magnitude) {
  if (check_general_position(T, f, 1).pass) return f;
  return perturb_to_general_position(T, f, seed, magnitude);
}

// ---------------------------------------------------------------------------
// Map value file

inline PLMap parse_plmap(const Triangulation& T, std::istream& in) {
  PLMap f;
  f.target_dim = -1;
  std::vector<std::optional<QVec>> vals(T.num_vertices());
  f.pinned.assign(T.num_vertices(), false);
  std::map<long, int> index;
  for (std::size_t v = 0; v < T.ids.size(); ++v) index[T.ids[v]] = static_cast<int>(v);
  std::string line;
  int lineno = 0;
  auto lookup = [&](const std::string& tok) {
    const long id = detail::parse_long(tok, lineno);
    auto it = index.find(id);
    if (it == index.end()) throw InputError("line " + std::to_string(lineno) + ": unknown vertex id " + tok);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "value") {
      if (tok.size() < 3) throw InputError("line " + std::to_string(lineno) + ": 'value' needs an id and coordinates");
      const int dim = static_cast<int>(tok.size()) - 2;
      if (f.target_dim == -1) f.target_dim = dim;
      if (dim != f.target_dim) throw InputError("line " + std::to_string(lineno) + ": inconsistent value dimension");
      const int v = lookup(tok[1]);
      if (vals[v]) throw InputError("line " + std::to_string(lineno) + ": duplicate value for vertex " + tok[1]);
      QVec y(dim);
      for (int i = 0; i < dim; ++i) y[i] = detail::parse_rat_at(tok[2 + i], lineno);
      vals[v] = std::move(y);
    } else if (tok[0] == "pin") {
      if (tok.size() != 2) throw InputError("line " + std::to_string(lineno) + ": 'pin' expects 1 field");
      f.pinned[lookup(tok[1])] = true;
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown directive '" + tok[0] + "'");
    }
  }
  for (std::size_t v = 0; v < vals.size(); ++v) {
    if (!vals[v]) throw InputError("map has no value for vertex " + std::to_string(T.ids[v]));
    f.values.push_back(std::move(*vals[v]));
  }
  if (f.target_dim == -1) f.target_dim = 0;
  return f;
}

inline PLMap parse_plmap(const Triangulation& T, const std::string& text) {
  std::istringstream is(text);
  return parse_plmap(T, is);
}

inline void write_plmap(std::ostream& out, const Triangulation& T, const PLMap& f) {
  for (std::size_t v = 0; v < f.values.size(); ++v) out << "value " << T.ids[v] << " " << to_string(f.values[v]) << "\n";
  for (std::size_t v = 0; v < f.pinned.size(); ++v)
    if (f.pinned[v]) out << "pin " << T.ids[v] << "\n";
}

inline std::string serialize(const Triangulation& T, const PLMap& f) {
  std::ostringstream os;
  write_plmap(os, T, f);
  return os.str();
}

}  // namespace fnb
