#include <catch_amalgamated.hpp>

#include <sstream>

#include "fnb/neighbor_complex.hpp"
#include "fnb/tucker.hpp"

using namespace fnb;

namespace {

Triangulation hexagon() {
  Triangulation T = symmetric_polygon(3);
  T.labels = std::vector<int>{1, 1, -1, -1, -1, 1};
  return T;
}

// Shortest source-to-target distance by relaxation over an explicitly
// enumerated node list, with its own step rule.
std::size_t oracle_distance(const Triangulation& T) {
  const auto& L = *T.labels;
  const int V = static_cast<int>(T.num_vertices());
  std::set<Edge> E;
  for (const auto& e : edges(T)) E.insert(e);
  auto adjacent = [&](int a, int b) { return E.count({std::min(a, b), std::max(a, b)}) > 0; };
  std::vector<Edge> comp;
  for (const auto& e : E)
    if (L[e[0]] + L[e[1]] == 0) comp.push_back(e);
  struct Node {
    bool mid;
    int a, b;  // vertices, or indices into comp
  };
  std::vector<Node> nodes;
  for (int v = 0; v < V; ++v)
    for (int w = 0; w < V; ++w)
      if (L[v] + L[w] == 0) nodes.push_back({false, v, w});
  for (int i = 0; i < static_cast<int>(comp.size()); ++i)
    for (int j = 0; j < static_cast<int>(comp.size()); ++j) nodes.push_back({true, i, j});
  auto has = [](const Edge& e, int v) { return e[0] == v || e[1] == v; };
  auto step = [&](const Node& p, const Node& q) {
    if (!p.mid && !q.mid) return (p.a == q.a && adjacent(p.b, q.b)) || (p.b == q.b && adjacent(p.a, q.a));
    if (!p.mid && q.mid) return has(comp[q.a], p.a) && has(comp[q.b], p.b);
    if (p.mid && !q.mid) return has(comp[p.a], q.a) && has(comp[p.b], q.b);
    return false;
  };
  const std::size_t inf = 1u << 30;
  std::vector<std::size_t> d(nodes.size(), inf);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].mid && (*T.involution)[nodes[i].a] == nodes[i].b) d[i] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = 0; j < nodes.size(); ++j)
        if (d[i] + 1 < d[j] && step(nodes[i], nodes[j])) {
          d[j] = d[i] + 1;
          changed = true;
        }
  }
  std::size_t best = inf;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].mid && adjacent(nodes[i].a, nodes[i].b)) best = std::min(best, d[i]);
  return best;
}

void check_instance(const Triangulation& T) {
  const auto rep = validate_tucker(T);
  REQUIRE(rep.pass);
  const auto path = solve_tucker(T);
  const auto v = verify_tucker_path(T, path);
  INFO((v.messages.empty() ? std::string() : v.messages.front()));
  CHECK(v.pass);
  CHECK(path.steps() == oracle_distance(T));
}

}  // namespace

TEST_CASE("hexagon fixture") {
  const auto T = hexagon();
  const auto rep = validate_tucker(T);
  CHECK(rep.pass);
  CHECK(rep.complementary_edges == std::vector<Edge>{{1, 2}, {4, 5}});

  const auto path = solve_tucker(T);
  CHECK(path.nodes == std::vector<PairNode>{PairNode::vertices(0, 3), PairNode::vertices(1, 3), PairNode::vertices(1, 2)});
  CHECK(verify_tucker_path(T, path).pass);
  CHECK_FALSE(path.uses_midpoints());
  CHECK(oracle_distance(T) == 2);

  std::stringstream ss;
  write_tucker_path(ss, T, path);
  CHECK(ss.str() == "pair v 0 3\npair v 1 3\npair v 1 2\n");
  CHECK(parse_tucker_path(T, ss).nodes == path.nodes);
}

TEST_CASE("validation failures") {
  auto T = hexagon();
  (*T.labels)[3] = 1;
  const auto rep = validate_tucker(T);
  CHECK_FALSE(rep.antisymmetric);
  CHECK(rep.bad_orbits == std::vector<Edge>{{0, 3}});
  CHECK_THROWS_AS(solve_tucker(T), InputError);

  auto U = hexagon();
  (*U.labels)[0] = 2;
  (*U.labels)[3] = -2;
  CHECK_FALSE(validate_tucker(U).labels_in_range);

  auto F = hexagon();
  (*F.involution) = {0, 4, 5, 3, 1, 2};
  CHECK_FALSE(validate_tucker(F).free);
}

TEST_CASE("verify rejects illegal paths") {
  const auto T = hexagon();
  TuckerPath both{{PairNode::vertices(0, 3), PairNode::vertices(1, 2)}};
  const auto r = verify_tucker_path(T, both);
  CHECK_FALSE(r.pass);
  CHECK(r.messages[0].find("move-legality") != std::string::npos);

  TuckerPath nonzero{{PairNode::vertices(1, 4), PairNode::vertices(2, 4), PairNode::vertices(2, 1)}};
  CHECK_FALSE(verify_tucker_path(T, nonzero).pass);
  CHECK(verify_tucker_path(T, nonzero).first_bad == 1);

  // A stay step is legal.
  TuckerPath stay{{PairNode::vertices(0, 3), PairNode::vertices(0, 3), PairNode::vertices(1, 3), PairNode::vertices(1, 2)}};
  CHECK(verify_tucker_path(T, stay).pass);

  // A detour through the midpoints of the two complementary edges.
  TuckerPath mid{{PairNode::vertices(1, 4), PairNode::midpoints({1, 2}, {4, 5}), PairNode::vertices(1, 5), PairNode::vertices(1, 0),
                  PairNode::vertices(1, 3), PairNode::vertices(1, 2)}};
  const auto rm = verify_tucker_path(T, mid);
  INFO((rm.messages.empty() ? std::string() : rm.messages.front()));
  CHECK(rm.pass == false);  // (1,0) has labels +1, +1
  mid.nodes = {PairNode::vertices(1, 4), PairNode::midpoints({1, 2}, {4, 5}), PairNode::vertices(2, 5), PairNode::vertices(2, 0), PairNode::vertices(2, 1)};
  CHECK(verify_tucker_path(T, mid).pass);
}

TEST_CASE("source already on a complementary edge") {
  // Hexagon with the reflection k ↦ 1 − k: free and simplicial, and the
  // antipodes v0, v1 span an edge.
  auto T = symmetric_polygon(3);
  T.involution = std::vector<int>{1, 0, 5, 4, 3, 2};
  T.labels = std::vector<int>{1, -1, 1, -1, 1, -1};
  const auto path = solve_tucker(T);
  CHECK(path.steps() == 0);
  CHECK(path.nodes.front() == PairNode::vertices(0, 1));
  CHECK(verify_tucker_path(T, path).pass);

  auto O = generate_sphere(2, 0);
  O.labels = std::vector<int>{1, -1, 2, -2, 1, -1};
  const auto p = solve_tucker(O);
  CHECK(verify_tucker_path(O, p).pass);
  CHECK(p.steps() == oracle_distance(O));
}

TEST_CASE("exhaustive polygon labelings") {
  for (int m = 2; m <= 6; ++m) {
    const auto base = symmetric_polygon(m);
    CHECK(validate_closed(base).pass);
    for (int mask = 0; mask < (1 << m); ++mask) {
      auto T = base;
      std::vector<int> L(2 * m);
      for (int k = 0; k < m; ++k) {
        L[k] = (mask >> k) & 1 ? 1 : -1;
        L[k + m] = -L[k];
      }
      T.labels = L;
      INFO("m = " << m << ", mask = " << mask);
      check_instance(T);
    }
  }
}

TEST_CASE("octahedron labelings with labels ±1, ±2") {
  const auto base = generate_sphere(2, 0);
  const int choice[4] = {1, -1, 2, -2};
  int solved = 0;
  for (int code = 0; code < 64; ++code) {
    auto T = base;
    std::vector<int> L(6);
    int c = code;
    for (int pair = 0; pair < 3; ++pair) {
      L[2 * pair] = choice[c % 4];
      L[2 * pair + 1] = -choice[c % 4];
      c /= 4;
    }
    T.labels = L;
    INFO("code " << code);
    check_instance(T);
    ++solved;
  }
  CHECK(solved == 64);

  auto T = base;
  T.labels = std::vector<int>{1, -1, 2, -2, 2, -2};
  check_instance(T);
  auto S = midpoint_subdivide(T);
  // Extend the labelling to the new vertices antisymmetrically.
  std::vector<int> L = *T.labels;
  L.resize(S.num_vertices(), 0);
  for (int v = 6; v < static_cast<int>(S.num_vertices()); ++v)
    if (L[v] == 0) {
      L[v] = v % 2 ? 1 : 2;
      L[(*S.involution)[v]] = -L[v];
    }
  S.labels = L;
  const auto path = solve_tucker(S);
  CHECK(verify_tucker_path(S, path).pass);
}

TEST_CASE("label map") {
  auto T = generate_sphere(2, 0);
  T.labels = std::vector<int>{1, -1, 2, -2, 2, -2};
  const PLMap f = label_map(T);
  CHECK(f.values[2] == QVec{0, 1});
  CHECK(f.values[1] == QVec{-1, 0});
  for (int v = 0; v < 6; ++v) CHECK(f.values[(*T.involution)[v]] == f.values[v] * Rat(-1));
  // Diagnostic route: perturbed label map through the neighbor-complex engine.
  const PLMap g = ensure_general_position(T, f, 3, rat(1, 64));
  const auto NC = build_neighbor_complex(T, g);
  CHECK(check_pseudomanifold(NC).pass);
}

TEST_CASE("no complementary edge is a counterexample") {
  // Two triangles swapped by the involution, one labelled +1 and one −1.
  Triangulation T;
  T.n = 1;
  T.ambient_dim = 2;
  T.coords = {QVec{0, 0}, QVec{1, 0}, QVec{0, 1}, QVec{3, 0}, QVec{4, 0}, QVec{3, 1}};
  T.ids = {0, 1, 2, 3, 4, 5};
  T.simplices = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
  T.involution = std::vector<int>{3, 4, 5, 0, 1, 2};
  T.labels = std::vector<int>{1, 1, 1, -1, -1, -1};
  const auto rep = validate_tucker(T);
  CHECK(rep.pass);
  CHECK(rep.complementary_edges.empty());
  CHECK_THROWS_AS(solve_tucker(T), InputError);
}
