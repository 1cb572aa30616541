#include <catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"
#include "fnb/neighbor_complex.hpp"

using namespace fnb;

namespace {

// Edge names of the quadrilateral circle, by simplex index.
const char* kEdge[] = {"a", "b", "c", "d"};

std::string cell_name(const NeighborComplex& NC, int c) {
  return std::string("(") + kEdge[NC.cells[c].A] + "," + kEdge[NC.cells[c].B] + ")";
}

// Random rational point of a polytope, as a convex combination of vertices.
QVec random_point(const ConvexPoly& P, std::mt19937_64& rng) {
  std::vector<Rat> w;
  Rat sum = 0;
  for (std::size_t i = 0; i < P.vertices.size(); ++i) {
    w.push_back(rat(1 + static_cast<long>(rng() % 1000), 1));
    sum += w.back();
  }
  QVec p(P.ambient_dim);
  for (std::size_t i = 0; i < w.size(); ++i) p += P.vertices[i] * (w[i] / sum);
  return p;
}

QVec lift_value(const Triangulation& T, const PLMap& f, int s, const QVec& x) {
  const auto b = barycentric_in_simplex(T, s, x);
  REQUIRE(b);
  return eval(T, f, s, *b);
}

}  // namespace

TEST_CASE("quadrilateral circle: cells, cycle, folds and degree") {
  const auto T = fixtures::quad_circle();
  const auto f = fixtures::x_map(T);
  const auto NC = build_neighbor_complex(T, f);
  std::set<std::string> names;
  for (int c = 0; c < static_cast<int>(NC.cells.size()); ++c) names.insert(cell_name(NC, c));
  CHECK(names == std::set<std::string>{"(a,c)", "(c,a)", "(a,d)", "(d,a)", "(b,c)", "(c,b)"});
  CHECK(NC.components.size() == 1);
  CHECK(check_pseudomanifold(NC).pass);

  // Walk the cycle starting at (a,d) through its plain facet.
  const int start = *NC.find(0, 3);
  std::vector<std::string> walk{cell_name(NC, start)};
  int prev = -1, cur = start;
  for (int step = 0; step < 6; ++step) {
    int next = -1;
    for (int r : NC.cells[cur].facets)
      if (NC.facets[r].neighbor != prev || prev == -1) {
        // Prefer the plain facet first from the start cell.
        if (prev == -1 && NC.facets[r].kind != FacetKind::Plain) continue;
        next = NC.facets[r].neighbor;
        break;
      }
    prev = cur;
    cur = next;
    walk.push_back(cell_name(NC, cur));
  }
  // Every cell has exactly two neighbors, and the walk closes after 6 steps.
  CHECK(walk == std::vector<std::string>{"(a,d)", "(a,c)", "(b,c)", "(c,b)", "(c,a)", "(d,a)", "(a,d)"});

  std::set<std::string> fold_names;
  for (int c : folds(NC)) fold_names.insert(cell_name(NC, c));
  CHECK(fold_names == std::set<std::string>{"(a,d)", "(d,a)", "(b,c)", "(c,b)"});
  for (int c : folds(NC))
    for (int r : NC.cells[c].facets)
      if (NC.facets[r].kind == FacetKind::DiagonalGlue) {
        const Rat v = NC.cells[c].image.facet(NC.facets[r].index)[0][0];
        CHECK((v == 1 || v == -1));
        const bool ad = NC.cells[c].A == 0 || NC.cells[c].A == 3;
        CHECK(v == (ad ? 1 : -1));
      }

  // x on edge a with f(x) = 1/2 and x on edge b with f(x) = −1/2.
  CHECK(mod2_degree(NC, T, f, 0, 0, {rat(1, 2), rat(1, 2)}) == 1);
  CHECK(mod2_degree(NC, T, f, 0, 1, {rat(1, 2), rat(1, 2)}) == 1);
  // f(x) = 1/8 is a cell boundary value in (a,c) and (a,d).
  CHECK_THROWS_AS(mod2_degree(NC, T, f, 0, 0, {rat(1, 8), rat(7, 8)}), GenericityError);
}

TEST_CASE("duplicate vertex value is rejected") {
  const auto sq = generate_sphere(1, 0);
  CHECK_THROWS_AS(build_neighbor_complex(sq, fixtures::x_map(sq)), DegeneracyError);
}

TEST_CASE("neighbor complex invariants on random GP maps") {
  std::mt19937_64 rng(99);
  const std::vector<Triangulation> spaces = {generate_sphere(1, 2), generate_sphere(2, 1), generate_torus(0), generate_sphere(2, 2)};
  for (const auto& T : spaces) {
    for (int trial = 0; trial < 3; ++trial) {
      const PLMap f = fixtures::random_gp_map(T, rng);
      const auto NC = build_neighbor_complex(T, f);
      INFO("n = " << T.n << ", simplices = " << T.num_simplices() << ", cells = " << NC.cells.size());
      CHECK(check_pseudomanifold(NC).pass);
      CHECK_FALSE(folds(NC).empty());

      // Swap symmetry.
      for (int c = 0; c < static_cast<int>(NC.cells.size()); ++c) {
        const auto& C = NC.cells[c];
        const auto tw = NC.find(C.B, C.A);
        REQUIRE(tw);
        CHECK(NC.cells[*tw].image == C.image);
        CHECK(NC.cells[*tw].lift_A.linear == C.lift_B.linear);
        CHECK(NC.cells[*tw].lift_A.offset == C.lift_B.offset);
      }

      // Exact neighbor property at random rational points of every cell.
      for (int c = 0; c < static_cast<int>(NC.cells.size()); c += 3) {
        const auto& C = NC.cells[c];
        const QVec p = random_point(C.image, rng);
        CHECK(lift_value(T, f, C.A, C.lift_A(p)) == p);
        CHECK(lift_value(T, f, C.B, C.lift_B(p)) == p);
      }

      // Covering count k(k − 1) at generic probes.
      for (int probe = 0; probe < 10; ++probe) {
        const int s = static_cast<int>(rng() % T.num_simplices());
        const QVec p = random_point(*simplex_image_poly(f, T.simplices[s]), rng);
        long k = 0;
        bool generic = true;
        for (const auto& S : T.simplices) {
          const auto P = *simplex_image_poly(f, S);
          if (strictly_contains(P, p))
            ++k;
          else if (contains(P, p))
            generic = false;
        }
        if (!generic) continue;
        try {
          CHECK(cells_covering(NC, p) == k * (k - 1));
        } catch (const GenericityError&) {
        }
      }

      // Degree of each component agrees across 20 generic samples.
      for (int comp = 0; comp < static_cast<int>(NC.components.size()); ++comp) {
        std::set<int> seen;
        int samples = 0;
        for (int attempt = 0; samples < 20 && attempt < 200; ++attempt) {
          const int s = static_cast<int>(rng() % T.num_simplices());
          std::vector<Rat> w(T.n + 1);
          Rat sum = 0;
          for (auto& x : w) {
            x = rat(1 + static_cast<long>(rng() % 997), 1);
            sum += x;
          }
          for (auto& x : w) x /= sum;
          try {
            seen.insert(mod2_degree(NC, T, f, comp, s, w));
            ++samples;
          } catch (const GenericityError&) {
          }
        }
        CHECK(samples == 20);
        CHECK(seen.size() == 1);
      }
    }
  }
}
