#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "fnb/mountain.hpp"
#include "fnb/neighbor_complex.hpp"

using namespace fnb;

namespace {

MountainFunction identity() { return make_mountain({{0, 0}, {1, 1}}); }

MountainFunction zigzag() { return make_mountain({{0, 0}, {rat(1, 3), rat(1, 2)}, {rat(2, 3), rat(1, 4)}, {1, 1}}); }

// Random mountain. Coarse denominators make flats and repeated levels common.
MountainFunction random_mountain(std::mt19937_64& rng, long den, bool flats_ok) {
  const int k = 1 + static_cast<int>(rng() % 39);
  std::set<Rat> xs{0, 1};
  while (static_cast<int>(xs.size()) < k + 1) xs.insert(rat(1 + static_cast<long>(rng() % 999), 1000));
  MountainFunction f;
  f.x.assign(xs.begin(), xs.end());
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    if (i == 0 || i + 1 == f.x.size()) {
      f.y.push_back(i == 0 ? 0 : 1);
      continue;
    }
    Rat v;
    do v = rat(static_cast<long>(rng() % (den + 1)), den);
    while (!flats_ok && (v == f.y.back() || v == 0 || v == 1));
    f.y.push_back(v);
  }
  if (!flats_ok && f.y.size() > 2 && f.y[f.y.size() - 2] == 1) f.y[f.y.size() - 2] = rat(1, 2);
  validate_mountain(f);
  return f;
}

bool generic_pair(const MountainFunction& f1, const MountainFunction& f2) {
  std::set<Rat> levels;
  for (std::size_t i = 1; i + 1 < f1.y.size(); ++i)
    if (!levels.insert(f1.y[i]).second) return false;
  for (std::size_t j = 1; j + 1 < f2.y.size(); ++j)
    if (!levels.insert(f2.y[j]).second) return false;
  for (const auto* f : {&f1, &f2})
    for (std::size_t i = 0; i + 1 < f->y.size(); ++i)
      if (f->y[i] == f->y[i + 1]) return false;
  return true;
}

ClimbSchedule swapped(ClimbSchedule S) {
  std::swap(S.g1, S.g2);
  return S;
}

std::size_t engine_extrema(const MountainFunction& f1, const MountainFunction& f2) {
  const auto [T, h] = circle_reduction(f1, f2);
  const PLMap g = ensure_general_position(T, h, 0, rat(1, 1 << 16));
  return folds(build_neighbor_complex(T, g)).size() / 2;
}

std::vector<Rat> heights(const PLMap& h) {
  std::vector<Rat> v;
  for (const auto& y : h.values) v.push_back(y[0]);
  return v;
}

}  // namespace

TEST_CASE("mountain function validation and evaluation") {
  CHECK_THROWS_AS(make_mountain({{0, 0}, {rat(1, 2), rat(3, 2)}, {1, 1}}), InputError);
  CHECK_THROWS_AS(make_mountain({{0, rat(1, 8)}, {1, 1}}), InputError);
  CHECK_THROWS_AS(make_mountain({{0, 0}, {rat(1, 2), 0}, {rat(1, 2), 1}, {1, 1}}), InputError);
  const auto z = zigzag();
  CHECK(z(rat(1, 6)) == rat(1, 4));
  CHECK(z(rat(2, 3)) == rat(1, 4));
  CHECK(z(1) == 1);
}

TEST_CASE("product complex examples") {
  const auto id = identity();
  const auto P = build_product_complex(id, id);
  REQUIRE(P.piece(0, 0).kind == PieceKind::Segment);
  CHECK(P.piece(0, 0).pts == std::vector<QVec>{QVec{0, 0}, QVec{1, 1}});

  const auto Pz = build_product_complex(id, zigzag());
  for (std::size_t j = 0; j < 3; ++j) CHECK(Pz.piece(0, j).kind == PieceKind::Segment);
  CHECK(climb_path(Pz).has_value());

  const auto flat = make_mountain({{0, 0}, {rat(1, 4), rat(1, 2)}, {rat(1, 2), rat(1, 2)}, {1, 1}});
  const auto Pf = build_product_complex(flat, id);
  REQUIRE(Pf.piece(1, 0).kind == PieceKind::Segment);
  CHECK(Pf.piece(1, 0).pts == std::vector<QVec>{QVec{rat(1, 4), rat(1, 2)}, QVec{rat(1, 2), rat(1, 2)}});

  const auto Pr = build_product_complex(flat, flat);
  CHECK(Pr.piece(1, 1).kind == PieceKind::Rectangle);
  CHECK(Pr.piece(0, 1).kind == PieceKind::Segment);
  CHECK(Pr.piece(0, 2).kind == PieceKind::Point);
  // The rectangle center is joined to every corner.
  const auto c = Pr.find(QVec{rat(3, 8), rat(3, 8)});
  REQUIRE(c);
  for (const auto& q : Pr.piece(1, 1).pts) CHECK(Pr.adj[*c].count(*Pr.find(q)) == 1);
}

TEST_CASE("solve examples") {
  const auto id = identity();
  const auto S = solve_mountain(id, id);
  CHECK(S.g1 == S.g2);
  CHECK(verify_schedule(id, id, S).pass);

  const auto Z = solve_mountain(id, zigzag());
  CHECK(Z.g1 == std::vector<Rat>{0, rat(1, 2), rat(1, 4), 1});
  CHECK(Z.g2 == std::vector<Rat>{0, rat(1, 3), rat(2, 3), 1});
  CHECK(Z.t == std::vector<Rat>{0, rat(1, 3), rat(2, 3), 1});
  CHECK(verify_schedule(id, zigzag(), Z).pass);

  const auto D = solve_mountain(zigzag(), zigzag());
  CHECK(D.g1 == D.g2);
  CHECK(verify_schedule(zigzag(), zigzag(), D).pass);

  const auto flat = make_mountain({{0, 0}, {rat(1, 4), rat(1, 2)}, {rat(1, 2), rat(1, 2)}, {1, 1}});
  const auto R = solve_mountain(flat, flat);
  CHECK(verify_schedule(flat, flat, R).pass);
}

TEST_CASE("verify detects tampering") {
  const auto id = identity();
  const auto z = zigzag();
  const auto S = solve_mountain(id, z);
  ClimbSchedule nudged = S;
  nudged.g2[1] += rat(1, 997);
  const auto r = verify_schedule(id, z, nudged);
  CHECK_FALSE(r.pass);
  CHECK(r.first_bad == 1);

  ClimbSchedule missing = S;
  missing.t.erase(missing.t.begin() + 1);
  missing.g1.erase(missing.g1.begin() + 1);
  missing.g2.erase(missing.g2.begin() + 1);
  const auto m = verify_schedule(id, z, missing);
  CHECK_FALSE(m.pass);
  CHECK(m.messages[0].find("refine") != std::string::npos);

  ClimbSchedule short_end = S;
  short_end.g1.back() = rat(1, 2);
  CHECK_FALSE(verify_schedule(id, z, short_end).pass);
}

TEST_CASE("schedule and function files round-trip") {
  std::stringstream fs;
  write_mountain(fs, zigzag());
  CHECK(parse_mountain(fs) == zigzag());
  const auto S = solve_mountain(identity(), zigzag());
  std::stringstream ss;
  write_schedule(ss, S);
  CHECK(parse_schedule(ss) == S);
  std::istringstream bad("bp 0 0\nbp 1/2\nbp 1 1\n");
  CHECK_THROWS_AS(parse_mountain(bad), InputError);
}

TEST_CASE("fuzz: verify, oracle agreement and symmetry") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 240; ++trial) {
    const long den = trial % 3 == 0 ? 4 : trial % 3 == 1 ? 16 : 1000;
    const auto f1 = random_mountain(rng, den, true);
    const auto f2 = random_mountain(rng, den, true);
    INFO("trial " << trial);
    const auto S = solve_mountain(f1, f2);
    const auto rep = verify_schedule(f1, f2, S);
    INFO((rep.messages.empty() ? std::string() : rep.messages.front()));
    CHECK(rep.pass);
    CHECK(flood_fill_feasible(f1, f2));
    CHECK(verify_schedule(f2, f1, swapped(S)).pass);
    CHECK(verify_schedule(f2, f1, solve_mountain(f2, f1)).pass);
  }
}

TEST_CASE("generic parity of the product complex") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto f1 = random_mountain(rng, 1 << 20, false);
    const auto f2 = random_mountain(rng, 1 << 20, false);
    if (!generic_pair(f1, f2)) continue;
    ++checked;
    const auto P = build_product_complex(f1, f2);
    for (std::size_t v = 0; v < P.nodes.size(); ++v) {
      const bool end = P.nodes[v] == QVec{0, 0} || P.nodes[v] == QVec{1, 1};
      if (end)
        CHECK(P.adj[v].size() == 1);
      else
        CHECK(P.adj[v].size() % 2 == 0);
    }
  }
  CHECK(checked >= 50);
}

TEST_CASE("circle reduction") {
  const auto [T, h] = circle_reduction(identity(), identity());
  CHECK(T.num_vertices() == 4);
  CHECK(validate_closed(T).pass);
  CHECK(heights(h) == std::vector<Rat>{0, 1, 0, -1});
  CHECK(count_local_extrema(heights(h)) == 2);
  CHECK(engine_extrema(identity(), identity()) == 2);

  const auto [Tz, hz] = circle_reduction(identity(), zigzag());
  CHECK(validate_closed(Tz).pass);
  CHECK(count_local_extrema(heights(hz)) == 6);
  CHECK(engine_extrema(identity(), zigzag()) == 6);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f1 = random_mountain(rng, 1 << 20, trial % 2 == 0);
    const auto f2 = random_mountain(rng, 1 << 20, trial % 2 == 0);
    const auto [Tr, hr] = circle_reduction(f1, f2);
    CHECK(validate_closed(Tr).pass);
    if (generic_pair(f1, f2)) CHECK(engine_extrema(f1, f2) == count_local_extrema(heights(hr)));
  }
}
