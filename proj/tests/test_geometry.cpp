#include <catch_amalgamated.hpp>

#include <random>

#include "fnb/geometry.hpp"

using namespace fnb;

namespace {

ConvexPoly poly(std::vector<QVec> pts) { return *make_polygon(std::move(pts)); }

ConvexPoly seg(long a, long b) { return *make_interval(a, b); }

AffineMap affine(std::vector<QVec> rows, QVec offset) { return AffineMap{std::move(rows), std::move(offset)}; }

// Random convex polygon: hull of random lattice points.
ConvexPoly random_polygon(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-20, 20);
  for (;;) {
    std::vector<QVec> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(QVec{rat(d(rng), 4), rat(d(rng), 4)});
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) continue;
    // Monotone chain.
    std::vector<QVec> hull;
    for (int pass = 0; pass < 2; ++pass) {
      const std::size_t base = hull.size();
      for (const auto& p : pts) {
        while (hull.size() >= base + 2 && orient2(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
        hull.push_back(p);
      }
      hull.pop_back();
      std::reverse(pts.begin(), pts.end());
    }
    if (auto P = make_polygon(hull)) return *P;
  }
}

}  // namespace

TEST_CASE("rationals are canonical and round-trip exactly") {
  CHECK(to_string(rat(6, -8)) == "-3/4");
  CHECK(to_string(parse_rat("+10/4")) == "5/2");
  CHECK(to_string(parse_rat("7")) == "7");
  CHECK_THROWS_AS(parse_rat("1/0"), InputError);
  CHECK_THROWS_AS(parse_rat("1.5"), InputError);
  CHECK_THROWS_AS(parse_rat(""), InputError);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-1000000, 1000000);
  for (int i = 0; i < 500; ++i) {
    const Rat a = rat(d(rng), 1 + static_cast<long>(rng() % 9999));
    const Rat b = rat(d(rng), 1 + static_cast<long>(rng() % 9999));
    CHECK((a + b) - b == a);
    if (b != 0) CHECK((a * b) / b == a);
  }
}

TEST_CASE("orient2") {
  CHECK(orient2(QVec{0, 0}, QVec{1, 0}, QVec{0, 1}) == 1);
  CHECK(orient2(QVec{0, 0}, QVec{1, 0}, QVec{2, 0}) == 0);
  CHECK(orient2(QVec{0, 0}, QVec{0, 1}, QVec{1, 0}) == -1);
}

TEST_CASE("poly_intersect examples") {
  const ConvexPoly P = poly({QVec{0, 0}, QVec{1, 0}, QVec{0, 1}});
  REQUIRE(poly_intersect(P, P));
  CHECK(*poly_intersect(P, P) == P);
  CHECK_FALSE(poly_intersect(seg(0, 1), seg(2, 3)));
  const auto I = poly_intersect(seg(0, 1), *make_interval(rat(1, 8), 2));
  REQUIRE(I);
  CHECK(I->vertices[0][0] == rat(1, 8));
  CHECK(I->vertices[1][0] == 1);
  CHECK_FALSE(poly_intersect(seg(0, 1), seg(1, 2)));  // point contact is Empty
  const ConvexPoly Q = poly({QVec{1, 0}, QVec{2, 0}, QVec{1, 1}});
  CHECK_FALSE(poly_intersect(P, Q));  // vertex contact
  CHECK_THROWS_AS(poly_intersect(P, seg(0, 1)), InputError);
}

TEST_CASE("poly_intersect is commutative, idempotent and contained in both operands") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const ConvexPoly P = random_polygon(rng);
    const ConvexPoly Q = random_polygon(rng);
    const auto PQ = poly_intersect(P, Q);
    const auto QP = poly_intersect(Q, P);
    REQUIRE(PQ.has_value() == QP.has_value());
    CHECK(*poly_intersect(P, P) == P);
    if (!PQ) continue;
    CHECK(*PQ == *QP);
    for (const auto& v : PQ->vertices) {
      CHECK(contains(P, v));
      CHECK(contains(Q, v));
    }
    const auto& V = PQ->vertices;
    for (std::size_t i = 0; i < V.size(); ++i) CHECK(orient2(V[i], V[(i + 1) % V.size()], V[(i + 2) % V.size()]) > 0);
  }
}

TEST_CASE("min_affine_norm_on_poly examples") {
  auto r1 = min_affine_norm_on_poly(affine({QVec{1}}, QVec{0}), seg(-1, 1));
  CHECK(r1.point == QVec{0});
  CHECK(r1.value == 0);
  auto r2 = min_affine_norm_on_poly(affine({QVec{1}}, QVec{-2}), seg(0, 1));
  CHECK(r2.point == QVec{1});
  CHECK(r2.value == 1);
  // (p1 + p2 − 3, p1 − p2) on the triangle (0,0),(2,0),(0,2): the zero set
  // (3/2, 3/2) lies outside; the constrained minimum is (1,1) with value 1.
  const AffineMap L = affine({QVec{1, 1}, QVec{1, -1}}, QVec{-3, 0});
  const ConvexPoly T = poly({QVec{0, 0}, QVec{2, 0}, QVec{0, 2}});
  auto r3 = min_affine_norm_on_poly(L, T);
  CHECK(r3.point == (QVec{1, 1}));
  CHECK(r3.value == 1);
  // Grid oracle at denominator 64 never beats the exact minimum and attains it.
  Rat best = -1;
  for (long i = 0; i <= 128; ++i)
    for (long j = 0; i + j <= 128; ++j) {
      const Rat v = norm2(L(QVec{rat(i, 64), rat(j, 64)}));
      if (best < 0 || v < best) best = v;
    }
  CHECK(best == r3.value);
}

TEST_CASE("min_affine_norm_on_poly agrees with brute-force candidate enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const ConvexPoly P = random_polygon(rng);
    const AffineMap L = affine({QVec{d(rng), d(rng)}, QVec{d(rng), d(rng)}, QVec{d(rng), d(rng)}}, QVec{d(rng), d(rng), d(rng)});
    const auto got = min_affine_norm_on_poly(L, P);
    CHECK(contains(P, got.point));
    CHECK(norm2(L(got.point)) == got.value);
    // Oracle: vertices plus a fine parametrised sweep of every edge, plus a
    // rational grid over the bounding box.
    Rat best = norm2(L(P.vertices[0]));
    const auto& V = P.vertices;
    for (std::size_t i = 0; i < V.size(); ++i)
      for (long t = 0; t <= 64; ++t) {
        const Rat v = norm2(L(V[i] + (V[(i + 1) % V.size()] - V[i]) * rat(t, 64)));
        if (v < best) best = v;
      }
    for (long i = -40; i <= 40; ++i)
      for (long j = -40; j <= 40; ++j) {
        const QVec p{rat(i, 8), rat(j, 8)};
        if (!contains(P, p)) continue;
        const Rat v = norm2(L(p));
        if (v < best) best = v;
      }
    CHECK(got.value <= best);
  }
}
