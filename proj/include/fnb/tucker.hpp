#pragma once

// Tucker triangulations: validation, the cross-polytope label map, and a
// breadth-first search for a Tucker-pair path from an antipodal vertex pair to
// the endpoints of a complementary edge.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/plmap.hpp"

namespace fnb {

using Edge = std::array<int, 2>;  // vertex indices, sorted

struct TuckerReport {
  bool pass = true;
  bool free = true, simplicial = true, labels_in_range = true, antisymmetric = true;
  std::vector<Edge> complementary_edges;
  std::vector<Edge> bad_orbits;  // (v, T(v)) with L(T(v)) != −L(v)
  std::vector<std::string> messages;
};

inline TuckerReport validate_tucker(const Triangulation& T) {
  TuckerReport rep;
  auto fail = [&](bool& flag, std::string m) {
    flag = false;
    rep.pass = false;
    rep.messages.push_back(std::move(m));
  };
  const int V = static_cast<int>(T.num_vertices());
  if (!T.involution || !T.labels) {
    rep.pass = rep.free = rep.antisymmetric = false;
    rep.messages.push_back("a Tucker triangulation needs an involution and labels");
    return rep;
  }
  const auto& inv = *T.involution;
  const auto& L = *T.labels;
  for (int v = 0; v < V; ++v) {
    if (inv[v] == v) fail(rep.free, "involution fixes vertex " + std::to_string(T.ids[v]));
    if (L[v] == 0 || std::abs(L[v]) > T.n)
      fail(rep.labels_in_range, "label " + std::to_string(L[v]) + " of vertex " + std::to_string(T.ids[v]) + " is outside ±1..±" + std::to_string(T.n));
    if (v < inv[v] && L[inv[v]] != -L[v]) {
      rep.bad_orbits.push_back({v, inv[v]});
      fail(rep.antisymmetric, "labels are not antisymmetric on the orbit {" + std::to_string(T.ids[v]) + ", " + std::to_string(T.ids[inv[v]]) + "}");
    }
  }
  const std::set<Simplex> maximal(T.simplices.begin(), T.simplices.end());
  for (const auto& s : T.simplices) {
    Simplex img;
    for (int v : s) img.push_back(inv[v]);
    std::sort(img.begin(), img.end());
    if (!maximal.count(img)) {
      fail(rep.simplicial, "involution does not map a simplex onto a simplex");
      break;
    }
  }
  for (const auto& e : edges(T))
    if (L[e[0]] + L[e[1]] == 0) rep.complementary_edges.push_back(e);
  return rep;
}

/// v ↦ sgn(L(v)) e_{|L(v)|} in ℝⁿ.
inline PLMap label_map(const Triangulation& T) {
  if (!T.labels) throw InputError("label_map needs labels");
  PLMap f;
  f.target_dim = T.n;
  for (int L : *T.labels) {
    QVec y(T.n);
    y[std::abs(L) - 1] = L > 0 ? 1 : -1;
    f.values.push_back(std::move(y));
  }
  f.pinned.assign(T.num_vertices(), false);
  return f;
}

/// Either an ordered vertex pair (v, w) or an ordered pair of complementary
/// edges, the travellers then sitting at the two midpoints.
struct PairNode {
  enum class Kind { Vertex, Midpoint } kind = Kind::Vertex;
  int v = -1, w = -1;
  Edge e{-1, -1}, f{-1, -1};

  static PairNode vertices(int v, int w) { return {Kind::Vertex, v, w, {-1, -1}, {-1, -1}}; }
  static PairNode midpoints(Edge e, Edge f) { return {Kind::Midpoint, -1, -1, e, f}; }
  friend auto operator<=>(const PairNode&, const PairNode&) = default;
};

struct TuckerPath {
  std::vector<PairNode> nodes;

  std::size_t steps() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  bool uses_midpoints() const {
    return std::any_of(nodes.begin(), nodes.end(), [](const PairNode& p) { return p.kind == PairNode::Kind::Midpoint; });
  }
};

namespace detail {

struct TuckerGraph {
  const Triangulation& T;
  std::vector<std::vector<int>> nbr;  // sorted vertex neighbours
  std::set<Edge> all_edges;
  std::vector<Edge> comp;  // complementary edges, sorted
  std::vector<std::vector<int>> comp_at;  // complementary edges at each vertex

  explicit TuckerGraph(const Triangulation& T_) : T(T_), nbr(T_.num_vertices()), comp_at(T_.num_vertices()) {
    const auto& L = *T.labels;
    for (const auto& e : edges(T)) {
      all_edges.insert(e);
      nbr[e[0]].push_back(e[1]);
      nbr[e[1]].push_back(e[0]);
      if (L[e[0]] + L[e[1]] == 0) {
        comp_at[e[0]].push_back(static_cast<int>(comp.size()));
        comp_at[e[1]].push_back(static_cast<int>(comp.size()));
        comp.push_back(e);
      }
    }
    for (auto& n : nbr) std::sort(n.begin(), n.end());
  }

  int label(int v) const { return (*T.labels)[v]; }
  bool is_edge(int a, int b) const { return all_edges.count({std::min(a, b), std::max(a, b)}) > 0; }
  bool is_comp(const Edge& e) const { return e[0] != e[1] && is_edge(e[0], e[1]) && label(e[0]) + label(e[1]) == 0; }
  bool is_target(const PairNode& p) const { return p.kind == PairNode::Kind::Vertex && is_comp({std::min(p.v, p.w), std::max(p.v, p.w)}); }

  std::size_t V() const { return T.num_vertices(); }
  std::size_t encode(const PairNode& p) const {
    if (p.kind == PairNode::Kind::Vertex) return static_cast<std::size_t>(p.v) * V() + p.w;
    const auto ie = std::lower_bound(comp.begin(), comp.end(), p.e) - comp.begin();
    const auto jf = std::lower_bound(comp.begin(), comp.end(), p.f) - comp.begin();
    return V() * V() + static_cast<std::size_t>(ie) * comp.size() + jf;
  }
  std::size_t size() const { return V() * V() + comp.size() * comp.size(); }

  std::vector<PairNode> successors(const PairNode& p) const {
    std::vector<PairNode> out;
    if (p.kind == PairNode::Kind::Vertex) {
      for (int a : nbr[p.v])
        if (label(a) + label(p.w) == 0) out.push_back(PairNode::vertices(a, p.w));
      for (int b : nbr[p.w])
        if (label(p.v) + label(b) == 0) out.push_back(PairNode::vertices(p.v, b));
      for (int i : comp_at[p.v])
        for (int j : comp_at[p.w]) out.push_back(PairNode::midpoints(comp[i], comp[j]));
    } else {
      for (int a : p.e)
        for (int b : p.f)
          if (label(a) + label(b) == 0) out.push_back(PairNode::vertices(a, b));
    }
    return out;
  }
};

}  // namespace detail

inline TuckerPath solve_tucker(const Triangulation& T) {
  const auto rep = validate_tucker(T);
  if (!rep.pass) throw InputError("invalid Tucker triangulation: " + rep.messages.front());
  if (rep.complementary_edges.empty())
    throw InputError("no complementary edge: this labelling is a counterexample to Tucker's lemma, so the input is not a valid antipodally symmetric sphere");
  const detail::TuckerGraph G(T);
  if (G.size() > (std::size_t{1} << 28)) throw InputError("pair graph is too large");
  std::vector<long> prev(G.size(), -2);
  std::vector<PairNode> node_of(G.size());
  std::deque<PairNode> queue;
  auto path_to = [&](const PairNode& p) {
    TuckerPath path;
    for (long i = static_cast<long>(G.encode(p)); i != -1; i = prev[i]) path.nodes.push_back(node_of[i]);
    std::reverse(path.nodes.begin(), path.nodes.end());
    return path;
  };
  for (int v = 0; v < static_cast<int>(T.num_vertices()); ++v) {
    const PairNode s = PairNode::vertices(v, (*T.involution)[v]);
    const std::size_t k = G.encode(s);
    prev[k] = -1;
    node_of[k] = s;
    if (G.is_target(s)) return path_to(s);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const PairNode p = queue.front();
    queue.pop_front();
    const long kp = static_cast<long>(G.encode(p));
    for (const auto& q : G.successors(p)) {
      const std::size_t kq = G.encode(q);
      if (prev[kq] != -2) continue;
      prev[kq] = kp;
      node_of[kq] = q;
      if (G.is_target(q)) return path_to(q);
      queue.push_back(q);
    }
  }
  throw TheoremViolation("no Tucker-pair path reaches a complementary edge");
}

struct TuckerPathReport {
  bool pass = true;
  int first_bad = -1;
  std::vector<std::string> messages;
};

inline TuckerPathReport verify_tucker_path(const Triangulation& T, const TuckerPath& path) {
  TuckerPathReport rep;
  auto fail = [&](int i, std::string m) {
    if (rep.pass) rep.first_bad = i;
    rep.pass = false;
    rep.messages.push_back("node " + std::to_string(i) + ": " + std::move(m));
  };
  if (!T.labels || !T.involution) {
    fail(0, "triangulation has no labels or involution");
    return rep;
  }
  if (path.nodes.empty()) {
    fail(0, "empty path");
    return rep;
  }
  const detail::TuckerGraph G(T);
  const int V = static_cast<int>(T.num_vertices());
  auto in_range = [V](int v) { return v >= 0 && v < V; };
  for (int i = 0; i < static_cast<int>(path.nodes.size()); ++i) {
    const auto& p = path.nodes[i];
    if (p.kind == PairNode::Kind::Vertex) {
      if (!in_range(p.v) || !in_range(p.w)) {
        fail(i, "vertex out of range");
        return rep;
      }
      if (G.label(p.v) + G.label(p.w) != 0) fail(i, "not a Tucker pair: labels do not sum to zero");
    } else if (!G.is_comp(p.e) || !G.is_comp(p.f)) {
      fail(i, "not a Tucker pair: midpoint of a non-complementary edge");
    }
  }
  if (!rep.pass) return rep;
  const auto& s = path.nodes.front();
  if (s.kind != PairNode::Kind::Vertex || (*T.involution)[s.v] != s.w) fail(0, "path does not start at an antipodal vertex pair");
  if (!G.is_target(path.nodes.back())) fail(static_cast<int>(path.nodes.size() - 1), "path does not end on a complementary edge");
  auto in_edge = [](int v, const Edge& e) { return v == e[0] || v == e[1]; };
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    const auto& p = path.nodes[i];
    const auto& q = path.nodes[i + 1];
    if (p == q) continue;
    bool ok = false;
    using K = PairNode::Kind;
    if (p.kind == K::Vertex && q.kind == K::Vertex)
      ok = (p.v == q.v && G.is_edge(p.w, q.w)) || (p.w == q.w && G.is_edge(p.v, q.v));
    else if (p.kind == K::Vertex && q.kind == K::Midpoint)
      ok = in_edge(p.v, q.e) && in_edge(p.w, q.f);
    else if (p.kind == K::Midpoint && q.kind == K::Vertex)
      ok = in_edge(q.v, p.e) && in_edge(q.w, p.f);
    if (!ok) fail(static_cast<int>(i + 1), "move-legality: illegal step from the previous node");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Generators and files

/// Centrally symmetric 2m-gon with v_{k+m} = −v_k and involution k ↦ k + m.
inline Triangulation symmetric_polygon(int m) {
  if (m < 2) throw InputError("symmetric polygon needs m >= 2");
  Triangulation T;
  T.n = 1;
  T.ambient_dim = 2;
  const int N = 2 * m;
  std::vector<QVec> half;
  for (int k = 0; k < m; ++k) {
    const double theta = M_PI * k / m;
    const long D = 64L * N;
    half.push_back(detail::circle_point(rat(std::lround(std::tan(theta / 2) * static_cast<double>(D)), D)));
  }
  for (const auto& p : half) T.coords.push_back(p);
  for (const auto& p : half) T.coords.push_back(p * Rat(-1));
  std::vector<int> inv(N);
  for (int v = 0; v < N; ++v) {
    T.ids.push_back(v);
    const int w = (v + 1) % N;
    T.simplices.push_back({std::min(v, w), std::max(v, w)});
    inv[v] = (v + m) % N;
  }
  std::sort(T.simplices.begin(), T.simplices.end());
  T.involution = std::move(inv);
  return T;
}

inline void write_tucker_path(std::ostream& out, const Triangulation& T, const TuckerPath& path) {
  auto id = [&](int v) { return std::to_string(T.ids[v]); };
  for (const auto& p : path.nodes) {
    if (p.kind == PairNode::Kind::Vertex)
      out << "pair v " << id(p.v) << " " << id(p.w) << "\n";
    else
      out << "pair m " << id(p.e[0]) << "," << id(p.e[1]) << " " << id(p.f[0]) << "," << id(p.f[1]) << "\n";
  }
}

inline TuckerPath parse_tucker_path(const Triangulation& T, std::istream& in) {
  TuckerPath path;
  std::string line;
  int lineno = 0;
  auto vertex = [&](const std::string& s) { return T.index_of_id(detail::parse_long(s, lineno)); };
  auto edge = [&](const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": expected an edge 'v,w'");
    const int a = vertex(s.substr(0, comma)), b = vertex(s.substr(comma + 1));
    return Edge{std::min(a, b), std::max(a, b)};
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 4 || tok[0] != "pair" || (tok[1] != "v" && tok[1] != "m"))
      throw InputError("line " + std::to_string(lineno) + ": expected 'pair v <id> <id>' or 'pair m <v,w> <v,w>'");
    if (tok[1] == "v")
      path.nodes.push_back(PairNode::vertices(vertex(tok[2]), vertex(tok[3])));
    else
      path.nodes.push_back(PairNode::midpoints(edge(tok[2]), edge(tok[3])));
  }
  return path;
}

}  // namespace fnb
