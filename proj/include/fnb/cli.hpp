#pragma once

// Command-line front end. `run` parses flags, validates them, dispatches to
// one subcommand and maps library errors to exit codes (0 ok, 1 input, 2
// degeneracy or perturbation, 3 theorem violation or internal inconsistency).
// Every subcommand writes its artifact to --out and plot data to
// <out>.plot.tsv.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fnb/complex.hpp"
#include "fnb/errors.hpp"
#include "fnb/lscover.hpp"
#include "fnb/mountain.hpp"
#include "fnb/neighbor_complex.hpp"
#include "fnb/pathfinder.hpp"
#include "fnb/plmap.hpp"
#include "fnb/tucker.hpp"

namespace fnb::cli {

inline constexpr const char* kFormats = R"(File formats (rationals are p/q or p in lowest terms, '#' starts a comment):
  triangulation   dim <n> | ambient <d> | period <q> | vertex <id> <x1..xd>
                  simplex <id0..idn> | involution <id> <id'> | label <id> <k>
  map             value <id> <y1..yn> | pin <id>
  path            pairpath <n> <count> | measure <m> | pair <A> <B> | <a..> | <b..>
                  (A, B are 0-based simplex positions in the triangulation file)
  table           tab-separated: level simplices cells measure_min measure_min_decimal
                  path_samples endpoint verified
  mountain f      bp <x> <y>        schedule   t <t> <g1> <g2>
  tucker path     pair v <id> <id> | pair m <id>,<id> <id>,<id>
  cover           set <k> simplex <index>      (k = 1..n+1, index 0-based)
  witness         path file, then epsilon <e> and one cert <k> <d2a> <d2b> per sample
  plot data       <out>.plot.tsv: polyline, index, exact coordinates, then decimal
                  columns marked decimal: (non-normative approximations)
Exit codes: 0 success, 1 input error, 2 degeneracy or perturbation failure,
3 theorem violation or internal inconsistency.)";

// ---------------------------------------------------------------------------
// Plot data and file helpers

struct Polyline {
  std::string name;
  std::vector<QVec> points;
};

inline void write_plot(std::ostream& out, const std::vector<Polyline>& lines) {
  std::size_t d = 0;
  for (const auto& l : lines)
    for (const auto& p : l.points) d = std::max(d, p.dim());
  out << "# decimal: columns are non-normative approximations; the exact p/q columns are authoritative\n";
  out << "polyline\tindex";
  for (std::size_t i = 1; i <= d; ++i) out << "\tx" << i;
  for (std::size_t i = 1; i <= d; ++i) out << "\tdecimal:x" << i;
  out << "\n";
  for (const auto& l : lines)
    for (std::size_t i = 0; i < l.points.size(); ++i)
      out << l.name << "\t" << i << "\t" << to_string(l.points[i], "\t") << "\t" << to_decimal_string(l.points[i], "\t") << "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("failed writing " + path);
}

inline void emit(const std::string& out, const std::string& artifact, const std::vector<Polyline>& plot) {
  write_file(out, artifact);
  std::ostringstream p;
  write_plot(p, plot);
  write_file(out + ".plot.tsv", p.str());
}

inline Rat parse_flag_rat(const std::string& flag, const std::string& text) {
  try {
    return parse_rat(text);
  } catch (const Error&) {
    throw InputError("--" + flag + ": not a rational: " + text);
  }
}

inline Triangulation load_triangulation(const std::string& path) { return parse_triangulation(read_file(path)); }

inline std::vector<Polyline> traveller_lines(const PairPath& path) {
  Polyline a{"traveller_a", {}}, b{"traveller_b", {}};
  for (const auto& s : path.samples) {
    a.points.push_back(s.a);
    b.points.push_back(s.b);
  }
  return {a, b};
}

inline std::string path_text(const PairPath& p) {
  std::ostringstream ss;
  write_pairpath(ss, p);
  return ss.str();
}

/// A PL map on T0 as an oracle on points of its (refined) polyhedron.
inline MapOracle pl_oracle(const Triangulation& T0, const PLMap& f) {
  return [T0, f](const QVec& x) {
    for (int s = 0; s < static_cast<int>(T0.num_simplices()); ++s)
      if (auto w = barycentric_in_simplex(T0, s, x)) return eval(T0, f, s, *w);
    throw InputError("point outside the triangulation");
  };
}

/// Built-in oracles for sphere-climb.
inline MapOracle builtin_oracle(const std::string& name, int n) {
  auto need = [&](int dim) {
    if (n != dim) throw InputError("oracle " + name + " needs --dim " + std::to_string(dim));
  };
  if (name == "proj-x") return need(1), MapOracle([](const QVec& x) { return QVec{x[0]}; });
  if (name == "proj-y") return need(1), MapOracle([](const QVec& x) { return QVec{x[1]}; });
  if (name == "proj-xy") return need(2), MapOracle([](const QVec& x) { return QVec{x[0], x[1]}; });
  if (name == "proj-xz") return need(2), MapOracle([](const QVec& x) { return QVec{x[0], x[2]}; });
  if (name == "proj-yz") return need(2), MapOracle([](const QVec& x) { return QVec{x[1], x[2]}; });
  if (name == "poly") {
    if (n == 1) return MapOracle([](const QVec& x) { return QVec{x[0] + x[1] * x[1] / 2}; });
    return MapOracle([](const QVec& x) { return QVec{x[0] + x[1] * x[2], x[1] + x[0] * x[0] / 2}; });
  }
  throw InputError("unknown oracle " + name + " (proj-x, proj-y, proj-xy, proj-xz, proj-yz, poly)");
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_generate(int sphere, bool torus, int level, const std::string& out) {
  if (torus == (sphere != 0)) throw InputError("give exactly one of --sphere N or --torus");
  const Triangulation T = torus ? generate_torus(level) : generate_sphere(sphere, level);
  std::vector<Polyline> plot;
  for (int s = 0; s < static_cast<int>(T.num_simplices()); ++s) {
    auto ring = simplex_coords(T, s);
    if (ring.size() > 2) ring.push_back(ring.front());
    plot.push_back({"simplex_" + std::to_string(s), ring});
  }
  emit(out, serialize(T), plot);
  std::cout << "vertices " << T.num_vertices() << " simplices " << T.num_simplices() << "\n";
  return 0;
}

inline int cmd_neighbors(const std::string& tri, const std::string& map, std::uint64_t seed, const Rat& magnitude, const std::string& out) {
  const Triangulation T = load_triangulation(tri);
  const PLMap f = ensure_general_position(T, parse_plmap(T, read_file(map)), seed, magnitude);
  const NeighborComplex NC = build_neighbor_complex(T, f);
  const auto pm = check_pseudomanifold(NC);
  const auto fl = folds(NC);
  std::ostringstream ss;
  ss << "cells " << NC.cells.size() << "\n";
  ss << "components " << NC.components.size() << "\n";
  for (std::size_t c = 0; c < NC.components.size(); ++c)
    ss << "component " << c << " size " << NC.components[c].size() << " degree " << component_degree(NC, T, f, static_cast<int>(c)) << "\n";
  ss << "folds " << fl.size() << "\n";
  ss << "pseudomanifold " << (pm.pass ? "pass" : "fail") << "\n";
  std::vector<Polyline> plot;
  for (int c : fl) {
    auto ring = simplex_coords(T, NC.cells[c].A);
    if (ring.size() > 2) ring.push_back(ring.front());
    plot.push_back({"fold_" + std::to_string(NC.cells[c].A) + "_" + std::to_string(NC.cells[c].B), ring});
  }
  emit(out, ss.str(), plot);
  std::cout << ss.str();
  if (!pm.pass) throw TheoremViolation("neighbor complex is not a pseudomanifold");
  return 0;
}

inline int cmd_hopf_path(const std::string& tri, const std::string& map, const DistantRelation& rel, std::uint64_t seed, const Rat& magnitude,
                         const std::string& out) {
  const Triangulation T = load_triangulation(tri);
  const PLMap f = ensure_general_position(T, parse_plmap(T, read_file(map)), seed, magnitude);
  const NeighborComplex NC = build_neighbor_complex(T, f);
  const PairPath path = extract_path(T, NC, select_principal(NC, T, f), rel);
  const auto rep = verify_path(T, f, path, rel);
  if (!rep.pass) throw TheoremViolation("extracted path fails verification: " + rep.messages.front());
  emit(out, path_text(path), traveller_lines(path));
  std::cout << "samples " << path.samples.size() << " measure " << to_string(path.measure) << "\n";
  return 0;
}

inline int write_tracking(const std::vector<ConvergenceRow>& table, const PairPath& last, const std::string& out) {
  std::ostringstream ss;
  write_convergence_table(ss, table);
  std::vector<Polyline> plot = traveller_lines(last);
  Polyline ends{"level_endpoints", {}};
  for (const auto& r : table) ends.points.push_back(r.endpoint.a);
  plot.push_back(ends);
  emit(out, ss.str(), plot);
  write_file(out + ".path", path_text(last));
  for (const auto& r : table)
    if (!r.verified) throw TheoremViolation("path at level " + std::to_string(r.level) + " fails verification");
  std::cout << ss.str();
  return 0;
}

inline int cmd_refine(const std::string& tri, const std::string& map, int levels, const DistantRelation& rel, std::uint64_t seed,
                      const std::string& out) {
  const Triangulation T0 = load_triangulation(tri);
  const PLMap f0 = parse_plmap(T0, read_file(map));
  const MapOracle g = pl_oracle(T0, f0);
  PairPath last;
  const auto table = track_levels(
      T0, [&](const Triangulation& T, int m) { return m == 0 ? f0 : interpolate(T, T.n, g); }, levels, rel, seed, nullptr, nullptr, &last);
  return write_tracking(table, last, out);
}

inline int cmd_sphere_climb(int n, int levels, const std::string& oracle, const std::vector<std::string>& map_files, std::uint64_t seed,
                            const std::string& out) {
  if (n != 1 && n != 2) throw InputError("--dim must be 1 or 2");
  if (!map_files.empty() && static_cast<int>(map_files.size()) != levels + 1)
    throw InputError("--map-files needs one file per level 0.." + std::to_string(levels));
  const Triangulation T0 = generate_sphere(n, 0);
  LevelMap map_at;
  std::vector<std::string> texts;
  for (const auto& p : map_files) texts.push_back(read_file(p));
  if (!texts.empty()) {
    map_at = [&](const Triangulation& T, int m) { return parse_plmap(T, texts[m]); };
  } else {
    const MapOracle g = builtin_oracle(oracle.empty() ? (n == 1 ? "proj-x" : "proj-xy") : oracle, n);
    map_at = [g](const Triangulation& T, int) { return interpolate(T, T.n, g); };
  }
  PairPath last;
  const auto table = track_levels(T0, map_at, levels, DistantRelation::antipodal(), seed, nullptr, nullptr, &last);
  return write_tracking(table, last, out);
}

inline int cmd_mountain(const std::string& f1p, const std::string& f2p, const std::string& out) {
  std::istringstream a(read_file(f1p)), b(read_file(f2p));
  const MountainFunction f1 = parse_mountain(a);
  const MountainFunction f2 = parse_mountain(b);
  const ClimbSchedule S = solve_mountain(f1, f2);
  const auto rep = verify_schedule(f1, f2, S);
  if (!rep.pass) throw TheoremViolation("schedule fails verification: " + rep.messages.front());
  std::ostringstream ss;
  write_schedule(ss, S);
  Polyline sched{"schedule", {}}, g1{"f1", {}}, g2{"f2", {}};
  for (std::size_t j = 0; j < S.t.size(); ++j) sched.points.push_back(QVec{S.g1[j], S.g2[j]});
  for (std::size_t i = 0; i < f1.x.size(); ++i) g1.points.push_back(QVec{f1.x[i], f1.y[i]});
  for (std::size_t i = 0; i < f2.x.size(); ++i) g2.points.push_back(QVec{f2.x[i], f2.y[i]});
  emit(out, ss.str(), {sched, g1, g2});
  std::cout << "grid points " << S.t.size() << "\n";
  return 0;
}

inline int cmd_tucker(const std::string& tri, const std::string& out) {
  const Triangulation T = load_triangulation(tri);
  const TuckerPath path = solve_tucker(T);
  const auto rep = verify_tucker_path(T, path);
  if (!rep.pass) throw TheoremViolation("Tucker path fails verification: " + rep.messages.front());
  std::ostringstream ss;
  write_tucker_path(ss, T, path);
  auto mid = [&](const Edge& e) { return (T.coords[e[0]] + unwrap_near(T, T.coords[e[1]], T.coords[e[0]])) * Rat(1, 2); };
  Polyline a{"traveller_a", {}}, b{"traveller_b", {}};
  for (const auto& p : path.nodes) {
    a.points.push_back(p.kind == PairNode::Kind::Vertex ? T.coords[p.v] : mid(p.e));
    b.points.push_back(p.kind == PairNode::Kind::Vertex ? T.coords[p.w] : mid(p.f));
  }
  emit(out, ss.str(), {a, b});
  std::cout << "steps " << path.steps() << " midpoints " << (path.uses_midpoints() ? "yes" : "no") << "\n";
  return 0;
}

inline int cmd_ls_cover(const std::string& tri, const std::string& cover, const Rat& epsilon, int refine, const DistantRelation& rel,
                        std::uint64_t seed, const Rat& magnitude, const std::string& out) {
  const Triangulation T = load_triangulation(tri);
  std::istringstream cs(read_file(cover));
  const ClosedCover C = parse_cover(T, cs);
  const CoverWitness W = witness(T, C, rel, epsilon, refine, seed, magnitude);
  const auto rep = check_witness(T, C, W);
  if (!rep.pass) throw TheoremViolation("witness fails the independent check: " + rep.messages.front());
  std::ostringstream ss;
  write_witness(ss, W);
  emit(out, ss.str(), traveller_lines(W.path));
  std::cout << "samples " << W.path.samples.size() << " psi_deviation " << to_string(psi_deviation(W)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

inline int run(int argc, char** argv) {
  CLI::App app{"Exact f-neighbor computations: neighbor complexes, traveller paths, mountain climbing, Tucker paths and LS witnesses"};
  app.footer(kFormats);
  app.require_subcommand(1);

  std::string tri, map, out, relation = "antipodal", perturb = "1/64", epsilon, f1, f2, cover, oracle;
  std::uint64_t seed = 0;
  int levels = 3, level = 0, sphere = 0, dim = 2, refine = 0;
  bool torus = false;
  std::vector<std::string> map_files;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", out, "output file")->required(); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "perturbation seed (default 0)"); };
  auto add_perturb = [&](CLI::App* c) { c->add_option("--perturb", perturb, "perturbation magnitude p/q (default 1/64)"); };
  auto add_relation = [&](CLI::App* c) { c->add_option("--relation", relation, "antipodal | threshold:<p/q> (default antipodal)"); };
  auto add_tri = [&](CLI::App* c) { c->add_option("--triangulation", tri, "triangulation file")->required(); };

  auto* gen = app.add_subcommand("generate", "write a generated sphere or torus triangulation");
  gen->add_option("--sphere", sphere, "sphere dimension 1 or 2");
  gen->add_flag("--torus", torus, "flat torus");
  gen->add_option("--level", level, "refinement level (default 0)");
  add_out(gen);

  auto* nb = app.add_subcommand("neighbors", "neighbor complex statistics");
  add_tri(nb);
  nb->add_option("--map", map, "map file")->required();
  add_seed(nb);
  add_perturb(nb);
  add_out(nb);

  auto* hp = app.add_subcommand("hopf-path", "traveller path from a distant pair to an identical pair");
  add_tri(hp);
  hp->add_option("--map", map, "map file")->required();
  add_relation(hp);
  add_seed(hp);
  add_perturb(hp);
  add_out(hp);

  auto* rf = app.add_subcommand("refine", "convergence table under refinement of a PL map; final path in <out>.path");
  add_tri(rf);
  rf->add_option("--map", map, "map file on the level-0 triangulation")->required();
  rf->add_option("--levels", levels, "number of refinements (default 3)");
  add_relation(rf);
  add_seed(rf);
  add_out(rf);

  auto* sc = app.add_subcommand("sphere-climb", "antipodal pairs with identical values on refined symmetric spheres");
  sc->add_option("--dim", dim, "sphere dimension 1 or 2 (default 2)");
  sc->add_option("--levels", levels, "number of refinements (default 3)");
  sc->add_option("--oracle", oracle, "proj-x, proj-y (dim 1); proj-xy, proj-xz, proj-yz (dim 2); poly");
  sc->add_option("--map-files", map_files, "one map file per level instead of an oracle")->delimiter(',');
  add_seed(sc);
  add_out(sc);

  auto* mt = app.add_subcommand("mountain", "mountain-climbing schedule");
  mt->add_option("--f1", f1, "first mountain function")->required();
  mt->add_option("--f2", f2, "second mountain function")->required();
  add_out(mt);

  auto* tk = app.add_subcommand("tucker", "Tucker-pair path to a complementary edge");
  add_tri(tk);
  add_out(tk);

  auto* ls = app.add_subcommand("ls-cover", "LS witness for a closed cover by n + 1 subcomplexes");
  add_tri(ls);
  ls->add_option("--cover", cover, "cover file")->required();
  ls->add_option("--epsilon", epsilon, "neighbourhood radius p/q")->required();
  ls->add_option("--refine", refine, "refinement level (default 0)");
  add_relation(ls);
  add_seed(ls);
  add_perturb(ls);
  add_out(ls);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    // Flags first, before any computation.
    const Rat magnitude = parse_flag_rat("perturb", perturb);
    if (magnitude <= 0) throw InputError("--perturb must be positive");
    const DistantRelation rel = parse_relation(relation);
    if (levels < 0 || level < 0 || refine < 0) throw InputError("levels must be nonnegative");

    if (*gen) return cmd_generate(sphere, torus, level, out);
    if (*nb) return cmd_neighbors(tri, map, seed, magnitude, out);
    if (*hp) return cmd_hopf_path(tri, map, rel, seed, magnitude, out);
    if (*rf) return cmd_refine(tri, map, levels, rel, seed, out);
    if (*sc) return cmd_sphere_climb(dim, levels, oracle, map_files, seed, out);
    if (*mt) return cmd_mountain(f1, f2, out);
    if (*tk) return cmd_tucker(tri, out);
    if (*ls) return cmd_ls_cover(tri, cover, parse_flag_rat("epsilon", epsilon), refine, rel, seed, magnitude, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace fnb::cli
