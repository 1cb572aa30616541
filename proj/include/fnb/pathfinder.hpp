#pragma once

// Distant relations, principal component selection, exact path extraction
// from a distant pair to an identical pair, an independent path checker, and
// the refinement driver for continuous target maps.

#include <cstdint>
#include <deque>
#include <functional>
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
#include "fnb/plmap.hpp"

namespace fnb {

struct DistantRelation {
  enum class Kind { CentralAntipodal, MetricThreshold };
  Kind kind = Kind::CentralAntipodal;
  Rat delta0 = 0;  // MetricThreshold only

  static DistantRelation antipodal() { return {Kind::CentralAntipodal, 0}; }
  static DistantRelation threshold(Rat d) { return {Kind::MetricThreshold, std::move(d)}; }
};

/// "antipodal" or "threshold:<p/q>".
inline DistantRelation parse_relation(const std::string& text) {
  if (text == "antipodal") return DistantRelation::antipodal();
  const std::string prefix = "threshold:";
  if (text.rfind(prefix, 0) == 0) {
    Rat d = parse_rat(text.substr(prefix.size()));
    if (d < 0) throw InputError("threshold must be nonnegative");
    return DistantRelation::threshold(std::move(d));
  }
  throw InputError("unknown relation '" + text + "' (expected antipodal or threshold:<p/q>)");
}

inline std::string to_string(const DistantRelation& r) {
  return r.kind == DistantRelation::Kind::CentralAntipodal ? "antipodal" : "threshold:" + to_string(r.delta0);
}

/// ‖a+b‖² for central antipodality; max(0, δ₀² − dist²(a,b)) for the metric
/// threshold, with periodic distance when T has a period.
inline Rat measure(const Triangulation& T, const DistantRelation& rel, const QVec& a, const QVec& b) {
  if (rel.kind == DistantRelation::Kind::CentralAntipodal) return norm2(a + b);
  const Rat short_by = rel.delta0 * rel.delta0 - periodic_dist2(T, a, b);
  return short_by > 0 ? short_by : Rat(0);
}

struct MeasureMin {
  int cell = -1;
  QVec point;  // in the cell's image polytope
  Rat value;
};

namespace detail {

inline bool better(const MeasureMin& a, const MeasureMin& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.cell != b.cell) return a.cell < b.cell;
  return a.point < b.point;
}

// Candidate points for maximising the (piecewise convex) squared distance
// ‖D(p)‖² over P: vertices of P, and with a period also the vertices of the
// subdivision of P by the lines where a coordinate of D crosses a half period.
inline std::vector<QVec> distance_candidates(const AffineMap& D, const ConvexPoly& P, const std::optional<Rat>& period) {
  std::vector<QVec> cand = P.vertices;
  if (!period) return cand;
  const Rat half = *period / 2;
  struct Split {
    std::size_t coord;
    Rat level;
  };
  std::vector<Split> splits;
  for (std::size_t i = 0; i < D.out_dim(); ++i) {
    Rat lo = D(P.vertices[0])[i], hi = lo;
    for (const auto& v : P.vertices) {
      const Rat x = D(v)[i];
      if (x < lo) lo = x;
      if (x > hi) hi = x;
    }
    // Levels half + k·period strictly inside (lo, hi).
    Rat h = floor_rat((lo - half) / *period) * *period + half;
    for (; h < hi; h += *period)
      if (h > lo) splits.push_back({i, h});
  }
  auto coord = [&](const Split& s, const QVec& p) -> Rat { return D(p)[s.coord] - s.level; };
  const std::size_t k = P.vertices.size();
  for (const auto& s : splits) {
    if (P.dim == 1) {
      const Rat c0 = coord(s, P.vertices[0]), c1 = coord(s, P.vertices[1]);
      cand.push_back(P.vertices[0] + (P.vertices[1] - P.vertices[0]) * (c0 / (c0 - c1)));
      continue;
    }
    for (std::size_t e = 0; e < k; ++e) {
      const QVec& a = P.vertices[e];
      const QVec& b = P.vertices[(e + 1) % k];
      const Rat ca = coord(s, a), cb = coord(s, b);
      if ((ca > 0 && cb < 0) || (ca < 0 && cb > 0)) cand.push_back(a + (b - a) * (ca / (ca - cb)));
    }
  }
  if (P.dim == 2)
    for (std::size_t i = 0; i < splits.size(); ++i)
      for (std::size_t j = i + 1; j < splits.size(); ++j) {
        if (splits[i].coord == splits[j].coord) continue;
        std::vector<QVec> A{D.linear[splits[i].coord], D.linear[splits[j].coord]};
        QVec rhs{splits[i].level - D.offset[splits[i].coord], splits[j].level - D.offset[splits[j].coord]};
        if (auto x = solve_square(A, rhs); x && contains(P, *x)) cand.push_back(*x);
      }
  return cand;
}

}  // namespace detail

/// Exact minimum of the relation's measure over one cell.
inline MeasureMin min_cell_measure(const Triangulation& T, const NeighborComplex& NC, int c, const DistantRelation& rel) {
  const NeighborCell& C = NC.cells[c];
  if (rel.kind == DistantRelation::Kind::CentralAntipodal) {
    if (T.period) throw InputError("central antipodality needs a centrally symmetric embedding, not a periodic one");
    const auto r = min_affine_norm_on_poly(C.lift_A + C.lift_B, C.image);
    return {c, r.point, r.value};
  }
  // The shortfall is minimised where the distance is maximised; the squared
  // distance is convex on each piece, so piece vertices suffice.
  const AffineMap D = C.lift_A - C.lift_B;
  std::optional<MeasureMin> best;
  for (auto& p : detail::distance_candidates(D, C.image, T.period)) {
    MeasureMin m{c, p, measure(T, rel, C.lift_A(p), C.lift_B(p))};
    if (!best || detail::better(m, *best)) best = std::move(m);
  }
  return *best;
}

inline MeasureMin min_distant_measure(const Triangulation& T, const NeighborComplex& NC, int component, const DistantRelation& rel) {
  std::optional<MeasureMin> best;
  for (int c : NC.components.at(component)) {
    MeasureMin m = min_cell_measure(T, NC, c, rel);
    if (!best || detail::better(m, *best)) best = std::move(m);
  }
  if (!best) throw InputError("empty component");
  return *best;
}

/// First component (in canonical order) that contains a fold and has mod-2
/// degree 1.
inline int select_principal(const NeighborComplex& NC, const Triangulation& T, const PLMap& f) {
  for (int comp = 0; comp < static_cast<int>(NC.components.size()); ++comp) {
    bool has_fold = false;
    for (int c : NC.components[comp]) has_fold = has_fold || NC.has_glue(c);
    if (!has_fold) continue;
    if (component_degree(NC, T, f, comp) == 1) return comp;
  }
  throw TheoremViolation("no component of degree 1 containing a fold");
}

// ---------------------------------------------------------------------------
// Paths

struct PairSample {
  int A = -1, B = -1;  // maximal simplices
  QVec a, b;           // points of M (periodic coordinates reduced)
  friend bool operator==(const PairSample&, const PairSample&) = default;
};

struct PairPath {
  int n = 0;
  Rat measure;  // reported measure of the first sample
  std::vector<PairSample> samples;
  // Engine-side provenance, not serialised.
  std::vector<int> cells;
  std::vector<QVec> image_points;
};

inline PairPath extract_path(const Triangulation& T, const NeighborComplex& NC, int component, const DistantRelation& rel) {
  const MeasureMin start = min_distant_measure(T, NC, component, rel);
  // BFS over the dual graph; `via[c]` is the facet record used to enter c.
  std::vector<int> via(NC.cells.size(), -2);
  std::deque<int> queue{start.cell};
  via[start.cell] = -1;
  int target = -1;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    if (NC.has_glue(c)) {
      target = c;
      break;
    }
    for (int r : NC.cells[c].facets) {
      const int nb = NC.facets[r].neighbor;
      if (via[nb] != -2) continue;
      via[nb] = r;
      queue.push_back(nb);
    }
  }
  if (target < 0) throw TheoremViolation("component has no diagonal-glue facet");

  std::vector<int> entry;  // facet records along the chain, start to target
  for (int c = target; via[c] != -1; c = NC.facets[via[c]].cell) entry.push_back(via[c]);
  std::reverse(entry.begin(), entry.end());

  PairPath path;
  path.n = T.n;
  path.measure = start.value;
  auto push = [&](int c, const QVec& p) {
    if (!path.cells.empty() && path.cells.back() == c && path.image_points.back() == p) return;
    path.cells.push_back(c);
    path.image_points.push_back(p);
  };
  push(start.cell, start.point);
  for (int r : entry) {
    const FacetRecord& rec = NC.facets[r];
    const QVec m = NC.cells[rec.cell].image.facet_midpoint(rec.index);
    push(rec.cell, m);
    push(rec.neighbor, m);
  }
  for (int r : NC.cells[target].facets)
    if (NC.facets[r].kind == FacetKind::DiagonalGlue) {
      push(target, NC.cells[target].image.facet_midpoint(NC.facets[r].index));
      break;
    }
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    const NeighborCell& C = NC.cells[path.cells[i]];
    const QVec& p = path.image_points[i];
    path.samples.push_back({C.A, C.B, canonical_point(T, C.lift_A(p)), canonical_point(T, C.lift_B(p))});
  }
  return path;
}

struct PathReport {
  bool pass = true;
  int first_bad = -1;
  std::vector<std::string> messages;
};

/// Independent certificate check. Each point is located in its simplex from
/// scratch and evaluated with `eval`; nothing from the engine's cell data is
/// consulted.
inline PathReport verify_path(const Triangulation& T, const PLMap& f, const PairPath& path, const DistantRelation& rel) {
  PathReport rep;
  auto fail = [&](int i, std::string msg) {
    if (rep.pass) rep.first_bad = i;
    rep.pass = false;
    rep.messages.push_back("sample " + std::to_string(i) + ": " + std::move(msg));
  };
  if (path.samples.empty()) {
    fail(0, "empty path");
    return rep;
  }
  const int S = static_cast<int>(T.num_simplices());
  auto shares_facet = [&](int s, int t) {
    int common = 0;
    for (int v : T.simplices[s])
      if (std::find(T.simplices[t].begin(), T.simplices[t].end(), v) != T.simplices[t].end()) ++common;
    return s != t && common == T.n;
  };
  for (int i = 0; i < static_cast<int>(path.samples.size()); ++i) {
    const PairSample& x = path.samples[i];
    if (x.A < 0 || x.A >= S || x.B < 0 || x.B >= S) {
      fail(i, "simplex index out of range");
      continue;
    }
    const auto wa = barycentric_in_simplex(T, x.A, x.a);
    const auto wb = barycentric_in_simplex(T, x.B, x.b);
    auto inside = [](const std::optional<std::vector<Rat>>& w) {
      return w && std::all_of(w->begin(), w->end(), [](const Rat& t) { return t >= 0; });
    };
    if (!inside(wa) || !inside(wb)) {
      fail(i, "exact-equality violation: a point is not in its simplex");
      continue;
    }
    if (eval(T, f, x.A, *wa) != eval(T, f, x.B, *wb)) fail(i, "exact-equality violation: f(a) != f(b)");
  }
  for (int i = 0; i + 1 < static_cast<int>(path.samples.size()); ++i) {
    const PairSample& x = path.samples[i];
    const PairSample& y = path.samples[i + 1];
    bool ok = false;
    if (x.A == y.A && x.B == y.B) {
      ok = true;
    } else if (canonical_point(T, x.a) == canonical_point(T, y.a) && canonical_point(T, x.b) == canonical_point(T, y.b)) {
      if (x.B == y.B && shares_facet(x.A, y.A)) ok = true;
      if (x.A == y.A && shares_facet(x.B, y.B)) ok = true;
      if (x.A == y.B && x.B == y.A && x.a == x.b) ok = true;
    }
    if (!ok) fail(i + 1, "adjacency violation between consecutive samples");
  }
  const PairSample& first = path.samples.front();
  if (measure(T, rel, first.a, first.b) != path.measure) fail(0, "first sample does not attain the reported measure");
  const PairSample& last = path.samples.back();
  if (canonical_point(T, last.a) != canonical_point(T, last.b))
    fail(static_cast<int>(path.samples.size()) - 1, "last sample is not an identical pair");
  return rep;
}

inline void write_pairpath(std::ostream& out, const PairPath& path) {
  out << "pairpath " << path.n << " " << path.samples.size() << "\n";
  out << "measure " << to_string(path.measure) << "\n";
  for (const auto& s : path.samples) out << "pair " << s.A << " " << s.B << " | " << to_string(s.a) << " | " << to_string(s.b) << "\n";
}

inline PairPath parse_pairpath(std::istream& in) {
  PairPath path;
  std::string line;
  int lineno = 0;
  long expected = -1;
  auto err = [&](const std::string& m) { return InputError("line " + std::to_string(lineno) + ": " + m); };
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "pairpath") {
      if (tok.size() != 3) throw err("'pairpath' expects 2 fields");
      path.n = static_cast<int>(detail::parse_long(tok[1], lineno));
      expected = detail::parse_long(tok[2], lineno);
    } else if (tok[0] == "measure") {
      if (tok.size() != 2) throw err("'measure' expects 1 field");
      path.measure = detail::parse_rat_at(tok[1], lineno);
    } else if (tok[0] == "pair") {
      PairSample s;
      if (tok.size() < 4) throw err("malformed pair line");
      s.A = static_cast<int>(detail::parse_long(tok[1], lineno));
      s.B = static_cast<int>(detail::parse_long(tok[2], lineno));
      if (tok[3] != "|") throw err("expected '|'");
      std::size_t i = 4;
      std::vector<Rat> a, b;
      for (; i < tok.size() && tok[i] != "|"; ++i) a.push_back(detail::parse_rat_at(tok[i], lineno));
      if (i == tok.size()) throw err("expected a second '|'");
      for (++i; i < tok.size(); ++i) b.push_back(detail::parse_rat_at(tok[i], lineno));
      if (a.empty() || a.size() != b.size()) throw err("pair points differ in dimension");
      s.a = QVec(std::move(a));
      s.b = QVec(std::move(b));
      path.samples.push_back(std::move(s));
    } else {
      throw err("unknown directive '" + tok[0] + "'");
    }
  }
  if (expected < 0) throw InputError("missing 'pairpath' header");
  if (expected != static_cast<long>(path.samples.size())) throw InputError("sample count differs from header");
  return path;
}

// ---------------------------------------------------------------------------
// Refinement driver

struct ConvergenceRow {
  int level = 0;
  std::size_t simplices = 0;
  std::size_t cells = 0;
  Rat measure_min;
  std::size_t path_samples = 0;
  PairSample endpoint;  // the identical pair closing the path
  bool verified = false;
};

using MapOracle = std::function<QVec(const QVec&)>;
/// The level-m map on the level-m triangulation.
using LevelMap = std::function<PLMap(const Triangulation&, int)>;

/// m-fold refinement (edge-midpoint when an involution is installed,
/// barycentric otherwise), the level map, perturbation when needed with
/// magnitude 2^−(m+6), and the full engine at every level. The final level's
/// triangulation, map and path are handed back through the optional outputs.
inline std::vector<ConvergenceRow> track_levels(const Triangulation& T0, const LevelMap& map_at, int levels, const DistantRelation& rel,
                                                std::uint64_t seed, Triangulation* last_T = nullptr, PLMap* last_f = nullptr,
                                                PairPath* last_path = nullptr) {
  if (levels < 0) throw InputError("levels must be nonnegative");
  std::vector<ConvergenceRow> table;
  Triangulation T = T0;
  for (int m = 0; m <= levels; ++m) {
    if (m > 0) T = T.involution ? midpoint_subdivide(T) : barycentric_subdivide(T);
    try {
      const PLMap f0 = map_at(T, m);
      const PLMap f = ensure_general_position(T, f0, seed + static_cast<std::uint64_t>(m), Rat(1, 1L << (m + 6)));
      const NeighborComplex NC = build_neighbor_complex(T, f);
      const int comp = select_principal(NC, T, f);
      PairPath path = extract_path(T, NC, comp, rel);
      ConvergenceRow row;
      row.level = m;
      row.simplices = T.num_simplices();
      row.cells = NC.cells.size();
      row.measure_min = path.measure;
      row.path_samples = path.samples.size();
      row.endpoint = path.samples.back();
      row.verified = verify_path(T, f, path, rel).pass;
      table.push_back(std::move(row));
      if (m == levels) {
        if (last_T) *last_T = T;
        if (last_f) *last_f = f;
        if (last_path) *last_path = std::move(path);
      }
    } catch (const Error& e) {
      // Same error type, annotated with the level.
      const std::string msg = "level " + std::to_string(m) + ": " + e.what();
      switch (e.exit_code()) {
        case 1:
          throw InputError(msg);
        case 3:
          throw TheoremViolation(msg);
        default:
          throw DegeneracyError(msg);
      }
    }
  }
  return table;
}

inline std::vector<ConvergenceRow> refine_and_track(const Triangulation& T0, const MapOracle& g, int levels, const DistantRelation& rel,
                                                    std::uint64_t seed) {
  return track_levels(
      T0, [&](const Triangulation& T, int) { return interpolate(T, T.n, g); }, levels, rel, seed);
}

inline void write_convergence_table(std::ostream& out, const std::vector<ConvergenceRow>& table) {
  out << "level\tsimplices\tcells\tmeasure_min\tmeasure_min_decimal\tpath_samples\tendpoint\tverified\n";
  for (const auto& r : table)
    out << r.level << "\t" << r.simplices << "\t" << r.cells << "\t" << to_string(r.measure_min) << "\t" << to_decimal_string(QVec{r.measure_min})
        << "\t" << r.path_samples << "\t" << to_string(r.endpoint.a) << "\t" << (r.verified ? "yes" : "no") << "\n";
}

}  // namespace fnb
