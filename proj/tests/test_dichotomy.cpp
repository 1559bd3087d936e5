#include "forge/dichotomy.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace forge;
using namespace forge::action;
using namespace forge::dichotomy;
using namespace forge::polygon;

namespace {

GroupClosure trivial_group(const IncidenceGeometry& g) {
  return close_group(g, {identity_automorphism(g)});
}

GroupClosure full_plane_group(const IncidenceGeometry& g) {
  std::vector<Automorphism> gens;
  for (const auto& m : gl3_f2_generators()) gens.push_back(matrix_automorphism(g, 2, m));
  return close_group(g, gens);
}

GroupClosure full_quadrangle_group(const IncidenceGeometry& g) {
  std::vector<Automorphism> gens;
  for (const auto& m : sp4_f2_generators()) gens.push_back(matrix_automorphism(g, 2, m));
  return close_group(g, gens);
}

}  // namespace

TEST_CASE("nearest panel: panels, midpoints, and the pi/8 bound") {
  auto w = build_symplectic_quadrangle(2);
  Flag f = w.all_flags().front();

  auto at_point = RealizedPoint::at_panel(w, point_panel(f.point));
  CHECK(nearest_panel(w, at_point) == point_panel(f.point));
  CHECK(cat1_distance(w, nearest_panel(w, at_point), at_point) == Angle::zero());

  auto mid = RealizedPoint::arc_midpoint(w, f);
  PanelId nearest = nearest_panel(w, mid);
  CHECK(nearest == point_panel(f.point));  // tie breaks toward the point-vertex
  CHECK(cat1_distance(w, nearest, mid) == Angle::pi_over(8));

  auto close_to_point = RealizedPoint::on_arc(w, f, Angle(Rational(1, 16)));
  CHECK(nearest_panel(w, close_to_point) == point_panel(f.point));
  CHECK(cat1_distance(w, point_panel(f.point), close_to_point) == Angle(Rational(1, 16)));

  // the minimum distance never exceeds pi/8
  for (const Flag& fl : w.all_flags()) {
    auto x = RealizedPoint::arc_midpoint(w, fl);
    CHECK(cat1_distance(w, nearest_panel(w, x), x) <= Angle::pi_over(8));
  }
}

TEST_CASE("decide_c2: trivial group certifies a fixed panel at the nearest arc end") {
  auto w = build_symplectic_quadrangle(2);
  auto G = trivial_group(w);
  auto x = RealizedPoint::arc_midpoint(w, w.all_flags().front());
  auto cert = decide_c2(G, x);
  CHECK(cert.branch == Branch::FixedPanel);
  CHECK(cert.measured_angle == Angle::pi_over(8));
  CHECK(cert.measured_angle < Angle::pi_over(2));
  replay(G, cert);
}

TEST_CASE("decide_c2: a point-transitive group yields branch 1 with the 7/8 pi bound") {
  auto w = build_symplectic_quadrangle(2);
  auto G = full_quadrangle_group(w);
  for (const Flag& f : {w.all_flags()[0], w.all_flags()[10], w.all_flags()[44]}) {
    auto x = RealizedPoint::arc_midpoint(w, f);
    auto cert = decide_c2(G, x);
    CHECK(cert.branch == Branch::OppositeFound);
    CHECK(cert.measured_angle >= Angle::pi_times(7, 8));
    replay(G, cert);
    // the witness word really is a shortest one: nothing shorter works
    auto e = G.evaluate(cert.word);
    CHECK(is_opposite(w, cert.base_panel, e.apply(cert.base_panel)));
  }
}

TEST_CASE("decide_c2: flag stabilizer certifies a fixed panel") {
  auto w = build_symplectic_quadrangle(2);
  auto G = full_quadrangle_group(w);
  Flag f = w.all_flags().front();
  std::vector<Automorphism> stab;
  for (const auto& e : G.elements)
    if (e.apply_point(f.point) == f.point && e.apply_line(f.line) == f.line) stab.push_back(e);
  auto S = close_group(w, stab);
  auto x = RealizedPoint::arc_midpoint(w, f);
  auto cert = decide_c2(S, x);
  CHECK(cert.branch == Branch::FixedPanel);
  CHECK(cert.measured_angle < Angle::pi_over(2));
  replay(S, cert);
}

TEST_CASE("decide_c2: the intersection-panel construction is exercised and replays") {
  auto w = build_symplectic_quadrangle(2);
  auto G = full_quadrangle_group(w);
  // search for a cyclic subgroup and midpoint where the nearest panel moves
  // but branch 1 fails; the lemma then promises the common-neighbor witness
  bool exercised = false;
  for (size_t i = 1; i < G.size() && !exercised; ++i) {
    auto sub = close_group(w, {G.elements[i]});
    for (const Flag& f : w.all_flags()) {
      auto x = RealizedPoint::arc_midpoint(w, f);
      PanelId p = nearest_panel(w, x);
      if (sub.elements[0].apply(p) == p) {
        bool moves = false;
        for (const auto& e : sub.elements) moves |= (e.apply(p) != p);
        if (!moves) continue;
      }
      auto cert = decide_c2(sub, x);
      if (cert.branch == Branch::FixedPanel && cert.witness_panel != p) {
        replay(sub, cert);
        exercised = true;
        break;
      }
    }
  }
  CHECK(exercised);
}

TEST_CASE("decide_a2: trivial group fixes the co-panel") {
  auto g = build_projective_plane(2);
  auto G = trivial_group(g);
  Flag c = g.all_flags().front();
  auto x = RealizedPoint::arc_midpoint(g, c);
  auto cert = decide_a2(G, x, c);
  CHECK(cert.branch == Branch::FixedPanel);
  CHECK(cert.witness_panel == line_panel(c.line));
  CHECK(cert.measured_angle == Angle::pi_over(6));
  CHECK(cert.measured_angle < Angle::pi_over(2));
  replay(G, cert);
}

TEST_CASE("decide_a2: the full group yields branch 1 with the 2/3 pi bound") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  for (const Flag& c : g.all_flags()) {
    auto x = RealizedPoint::on_arc(g, c, Angle(Rational(1, 9)));
    auto cert = decide_a2(G, x, c);
    CHECK(cert.branch == Branch::OppositeFound);
    CHECK(cert.measured_angle >= Angle::pi_times(2, 3));
    replay(G, cert);
  }
}

TEST_CASE("decide_a2: line stabilizer certifies the fixed line") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  Flag c = g.all_flags().front();
  std::vector<Automorphism> stab;
  for (const auto& e : G.elements)
    if (e.apply_line(c.line) == c.line) stab.push_back(e);
  auto S = close_group(g, stab);
  CHECK(S.size() == 24);  // line stabilizer in a group of order 168
  auto x = RealizedPoint::arc_midpoint(g, c);
  auto cert = decide_a2(S, x, c);
  CHECK(cert.branch == Branch::FixedPanel);
  CHECK(cert.witness_panel == line_panel(c.line));
  replay(S, cert);
}

TEST_CASE("decide_a2 supports the dual panel choice") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  Flag c = g.all_flags().front();
  auto x = RealizedPoint::arc_midpoint(g, c);
  auto cert = decide_a2(G, x, c, PanelKind::Line);
  CHECK(cert.base_panel == line_panel(c.line));
  CHECK(cert.branch == Branch::OppositeFound);
  CHECK(cert.measured_angle >= Angle::pi_times(2, 3));
  replay(G, cert);
}

TEST_CASE("deciders are deterministic") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  Flag c = g.all_flags()[7];
  auto x = RealizedPoint::arc_midpoint(g, c);
  auto c1 = decide_a2(G, x, c);
  auto c2 = decide_a2(G, x, c);
  CHECK(c1.word == c2.word);
  CHECK(c1.measured_angle == c2.measured_angle);
}

TEST_CASE("certificate JSON roundtrip") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  Flag c = g.all_flags().front();
  auto cert = decide_a2(G, RealizedPoint::arc_midpoint(g, c), c);
  auto j = to_json(g, cert);
  CHECK(j["branch"] == "opposite");
  auto back = certificate_from_json(g, j);
  CHECK(back.word == cert.word);
  CHECK(back.measured_angle == cert.measured_angle);
  CHECK(back.base_panel == cert.base_panel);
  replay(G, back);
}

TEST_CASE("sweep: plane cyclic subgroups and random subgroups, zero violations") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  SweepConfig cfg;
  cfg.random_subgroups = 25;
  cfg.generators_per_subgroup = 2;
  cfg.seed = 20260809;
  auto report = sweep_verify(G, cfg);
  CHECK(report.violations == 0);
  CHECK(report.trials > 0);
  CHECK(report.distinct_cyclic_subgroups > 1);
  CHECK(report.opposite + report.fixed == report.trials);
}

TEST_CASE("sweep: quadrangle cyclic subgroups, zero violations") {
  auto w = build_symplectic_quadrangle(2);
  auto G = full_quadrangle_group(w);
  SweepConfig cfg;
  cfg.random_subgroups = 10;
  cfg.seed = 7;
  auto report = sweep_verify(G, cfg);
  CHECK(report.violations == 0);
  CHECK(report.trials > 0);
}

TEST_CASE("sweep with nothing to do returns an empty report") {
  auto g = build_projective_plane(2);
  auto G = full_plane_group(g);
  SweepConfig cfg;
  cfg.cyclic_exhaustive = false;
  cfg.random_subgroups = 0;
  auto report = sweep_verify(G, cfg);
  CHECK(report.trials == 0);
  CHECK(report.violations == 0);
}

TEST_CASE("hexagon automorphism group has order 12096") {
  auto hex = build_split_cayley_hexagon();
  auto G = hexagon_automorphism_group(hex);
  CHECK(G.size() == 12096);
  // point-transitive
  CHECK(orbit(G, point_panel(0)).size() == 63);
}

TEST_CASE("g2_search: trivial subgroup produces no finding") {
  auto hex = build_split_cayley_hexagon();
  G2Finding probe;
  probe.generators = {identity_automorphism(hex)};
  probe.flag = hex.all_flags().front();
  probe.nearest = point_panel(probe.flag.point);
  // branch 2 holds with p itself, so the recheck must reject the "finding"
  CHECK_FALSE(recheck_finding(hex, probe));
}

TEST_CASE("g2_search: point-transitive subgroups satisfy branch 1 everywhere") {
  auto hex = build_split_cayley_hexagon();
  auto G = hexagon_automorphism_group(hex);
  auto rep = forge::dichotomy::detail::panel_orbits(hex, G.generators);
  for (const Flag& f : hex.all_flags()) {
    int pu = hex.uid(point_panel(f.point));
    bool b1 = false;
    for (int u = 0; u < hex.num_panels() && !b1; ++u)
      b1 = rep[u] == rep[pu] && hex.distance_uid(pu, u) == hex.n();
    CHECK(b1);
  }
}

TEST_CASE("g2_search runs seeded trials and rechecks its findings") {
  auto hex = build_split_cayley_hexagon();
  auto report = g2_search(hex, 2, 8, 99);
  CHECK(report.trials == 8 * int(hex.all_flags().size()));
  CHECK(report.skipped_cap == 0);
  // findings, if any, have already passed the independent recheck (the
  // search throws otherwise); spot-check serialization
  for (const auto& f : report.findings) {
    auto j = to_json(hex, f);
    CHECK(j.contains("generators"));
  }
  // determinism
  auto report2 = g2_search(hex, 2, 8, 99);
  CHECK(report2.trials == report.trials);
  CHECK(report2.findings.size() == report.findings.size());
  CHECK(report2.branch1_holds == report.branch1_holds);
}
