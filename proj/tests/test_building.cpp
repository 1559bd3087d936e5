#include "forge/building.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "forge/isomorphism.hpp"

using namespace forge;
using namespace forge::lattice;

namespace {

MatrixIsometry conjugate(const Context& ctx, const MatrixIsometry& h, const MatrixIsometry& s) {
  // h s h^{-1}
  return compose(compose(isometry_inverse(ctx, h), s), h);
}

}  // namespace

TEST_CASE("canonicalize: base vertex, homothety, permutation invariance") {
  Context ctx(2, 8);
  auto v0 = base_vertex(ctx);
  CHECK(v0.type() == 0);

  // diag(t,t,t) is the same homothety class
  SMat tid(ctx.F, 3, 3);
  for (int i = 0; i < 3; ++i) tid.at(i, i) = Series::monomial(ctx.F, 1, 1);
  CHECK(canonicalize(ctx, tid) == v0);

  // diag(1,1,t) and its column permutations give one canonical form
  SMat d(ctx.F, 3, 3);
  d.at(0, 0) = Series::one(ctx.F);
  d.at(1, 1) = Series::one(ctx.F);
  d.at(2, 2) = Series::monomial(ctx.F, 1, 1);
  auto v = canonicalize(ctx, d);
  SMat p = d;
  p.swap_cols(0, 2);
  CHECK(canonicalize(ctx, p) == v);
  p.swap_cols(1, 2);
  CHECK(canonicalize(ctx, p) == v);
  CHECK(v != v0);
  CHECK(v.type() == 1);

  // idempotence
  CHECK(canonicalize(ctx, v.basis()) == v);
}

TEST_CASE("snf valuations: frozen desk examples") {
  Context ctx(2, 8);
  auto v0 = base_vertex(ctx);
  CHECK(snf_valuations(ctx, v0, v0) == std::array<int, 3>{0, 0, 0});

  SMat d(ctx.F, 3, 3);
  d.at(0, 0) = Series::one(ctx.F);
  d.at(1, 1) = Series::one(ctx.F);
  d.at(2, 2) = Series::monomial(ctx.F, 1, 1);
  auto v1 = canonicalize(ctx, d);
  CHECK(snf_valuations(ctx, v0, v1) == std::array<int, 3>{1, 0, 0});
  CHECK(cat0_distance(ctx, v0, v1) == Surd(Rational(1)));

  auto h = diag_isometry(ctx, 1, 0, -1);
  auto hv = act(ctx, h, v0);
  CHECK(snf_valuations(ctx, v0, hv) == std::array<int, 3>{2, 1, 0});
  CHECK(cat0_distance(ctx, v0, hv) == Surd::sqrt_of(Rational(3)));
}

TEST_CASE("snf symmetry: opposite order flips the middle invariant") {
  auto ball = build_ball(2, 2);
  Context ctx(2, 8);
  std::mt19937 rng(17);
  std::uniform_int_distribution<size_t> pick(0, ball.vertices.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& a = ball.vertices[pick(rng)];
    const auto& b = ball.vertices[pick(rng)];
    auto ab = snf_valuations(ctx, a, b);
    auto ba = snf_valuations(ctx, b, a);
    CHECK(ba == std::array<int, 3>{ab[0], ab[0] - ab[1], 0});
    CHECK(cat0_distance_from_position(ab) == cat0_distance_from_position(ba));
  }
}

TEST_CASE("ball shape: q=2 radii 0,1,2") {
  auto b0 = build_ball(2, 0);
  CHECK(b0.vertices.size() == 1);
  CHECK(b0.edges.empty());

  auto b1 = build_ball(2, 1);
  CHECK(b1.vertices.size() == 15);  // 7 + 7 neighbors
  CHECK(b1.edges.size() == 14);

  auto b2 = build_ball(2, 2);
  CHECK(b2.vertices.size() == 113);
  // interior edges lie in exactly q+1 = 3 triangles
  std::map<std::pair<int, int>, int> tri_count;
  for (const auto& t : b2.triangles) {
    tri_count[{t[0], t[1]}]++;
    tri_count[{t[0], t[2]}]++;
    tri_count[{t[1], t[2]}]++;
  }
  for (auto [i, j] : b2.edges)
    if (b2.interior(i) && b2.interior(j)) CHECK(tri_count[{i, j}] == 3);
  // vertex types: adjacent vertices differ (also audited at construction)
  for (auto [i, j] : b2.edges) CHECK(b2.vertices[i].type() != b2.vertices[j].type());

  CHECK_THROWS_AS(build_ball(2, 4), UnsupportedOrder);
  CHECK_THROWS_AS(build_ball(5, 1), UnsupportedOrder);
}

TEST_CASE("cat0 metric axioms on ball vertices") {
  auto ball = build_ball(2, 2);
  Context ctx(2, 8);
  std::mt19937 rng(23);
  std::uniform_int_distribution<size_t> pick(0, ball.vertices.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& a = ball.vertices[pick(rng)];
    const auto& b = ball.vertices[pick(rng)];
    const auto& c = ball.vertices[pick(rng)];
    Surd dab = cat0_distance(ctx, a, b);
    CHECK(dab == cat0_distance(ctx, b, a));
    CHECK((dab.sign() == 0) == (a == b));
    CHECK(surd_triangle_le(cat0_distance(ctx, a, c), dab, cat0_distance(ctx, b, c)));
  }
}

TEST_CASE("links of interior vertices are projective planes of order q") {
  auto ball = build_ball(2, 2);
  Context ctx(2, 8);
  auto pg22 = polygon::build_projective_plane(2);

  auto link0 = link_of(ctx, ball.vertices[0], ball);
  CHECK(link0.geometry.num_points() == 7);
  CHECK(link0.geometry.num_lines() == 7);
  auto report = polygon::verify_axioms(link0.geometry);
  CHECK(report.ok());
  CHECK(report.girth == 6);
  CHECK(report.diameter == 3);
  auto cert = iso::find_isomorphism(link0.geometry, pg22);
  REQUIRE(cert.has_value());
  CHECK(iso::check_isomorphism(link0.geometry, pg22, *cert));

  // another interior vertex has an isomorphic link
  auto link1 = link_of(ctx, ball.vertices[3], ball);
  auto cert1 = iso::find_isomorphism(link1.geometry, pg22);
  REQUIRE(cert1.has_value());

  // boundary vertices are rejected
  int boundary = -1;
  for (int i = 0; i < int(ball.vertices.size()); ++i)
    if (!ball.interior(i)) { boundary = i; break; }
  REQUIRE(boundary >= 0);
  CHECK_THROWS_AS(link_of(ctx, ball.vertices[boundary], ball), BoundaryVertex);
}

TEST_CASE("act: stabilizer of the base vertex, isometry, adjacency") {
  Context ctx(2, 8);
  auto v0 = base_vertex(ctx);
  CHECK(act(ctx, singer_isometry(ctx), v0) == v0);

  // a transvection in SL3(O) with a t-coefficient also fixes v0
  SMat u = SMat::identity(ctx.F, 3);
  u.at(0, 1) = Series::from_terms(ctx.F, {{0, 1}, {1, 1}});
  CHECK(act(ctx, make_isometry(ctx, u), v0) == v0);

  auto ball = build_ball(2, 2);
  auto h = diag_isometry(ctx, 1, 0, -1);
  std::mt19937 rng(9);
  std::uniform_int_distribution<size_t> pick(0, ball.vertices.size() - 1);
  for (int trial = 0; trial < 60; ++trial) {
    const auto& a = ball.vertices[pick(rng)];
    const auto& b = ball.vertices[pick(rng)];
    CHECK(cat0_distance(ctx, a, b) == cat0_distance(ctx, act(ctx, h, a), act(ctx, h, b)));
  }
  for (auto [i, j] : ball.edges)
    CHECK(adjacent(ctx, act(ctx, h, ball.vertices[i]), act(ctx, h, ball.vertices[j])));
}

TEST_CASE("classification: Singer elliptic with fixed set exactly the base vertex") {
  Context ctx(2, 8);
  auto ball = build_ball(2, 2);
  auto s = singer_isometry(ctx);
  auto verdict = classify_isometry(ctx, s, ball);
  CHECK(verdict.kind == IsometryKind::Elliptic);
  CHECK(verdict.fixed_vertex == 0);
  CHECK(verdict.translation_length == Surd(Rational(0)));

  auto fixed = fixed_set(ctx, {s}, ball);
  CHECK(fixed.vertices == std::vector<int>{0});
  CHECK(fixed.edges.empty());
  CHECK(fixed.triangles.empty());

  // the induced link action moves every panel
  auto link = link_model(ctx, base_vertex(ctx));
  for (const auto& n : link.points) CHECK(act(ctx, s, n) != n);
  for (const auto& n : link.lines) CHECK(act(ctx, s, n) != n);
}

TEST_CASE("classification: diag(t,1,t^-1) hyperbolic with length sqrt(3)") {
  Context ctx(2, 12);
  auto ball = build_ball(2, 2);
  auto h = diag_isometry(ctx, 1, 0, -1);
  auto verdict = classify_isometry(ctx, h, ball, 4);
  CHECK(verdict.kind == IsometryKind::Hyperbolic);
  CHECK(verdict.translation_length == Surd::sqrt_of(Rational(3)));
  REQUIRE(verdict.displacements.size() == 4);
  for (int k = 1; k <= 4; ++k)
    CHECK(verdict.displacements[k - 1] == Rational(k) * Surd::sqrt_of(Rational(3)));
}

TEST_CASE("classification: identity elliptic, type-rotners rejected") {
  Context ctx(2, 8);
  auto ball = build_ball(2, 1);
  auto id = make_isometry(ctx, SMat::identity(ctx.F, 3));
  auto verdict = classify_isometry(ctx, id, ball);
  CHECK(verdict.kind == IsometryKind::Elliptic);

  auto rot = diag_isometry(ctx, 1, 0, 0);
  CHECK(rot.det_valuation == 1);
  CHECK_FALSE(rot.type_preserving());
  CHECK_THROWS_AS(classify_isometry(ctx, rot, ball), TypePreservationViolation);
}

TEST_CASE("newton length agrees with displacement growth for diagonal isometries") {
  Context ctx(2, 16);
  auto v0 = base_vertex(ctx);
  for (auto [a, b, c] : {std::array<int, 3>{1, 0, -1}, {2, -1, -1}, {3, 0, -3}}) {
    auto g = diag_isometry(ctx, a, b, c);
    auto nu = laurent::newton_root_valuations(laurent::char_poly3(g.matrix));
    Surd len = translation_length_from_valuations(nu);
    // exact displacement growth along the axis through v0
    MatrixIsometry power = g;
    for (int k = 1; k <= 3; ++k) {
      CHECK(cat0_distance(ctx, v0, act(ctx, power, v0)) == Rational(k) * len);
      power = compose(power, g);
    }
  }
}

TEST_CASE("fixed sets: trivial group and conjugated Singer") {
  Context ctx(2, 12);
  auto ball = build_ball(2, 2);
  auto id = make_isometry(ctx, SMat::identity(ctx.F, 3));
  auto all = fixed_set(ctx, {id}, ball);
  CHECK(all.vertices.size() == ball.vertices.size());
  CHECK(all.edges.size() == ball.edges.size());
  CHECK(all.triangles.size() == ball.triangles.size());

  auto s = singer_isometry(ctx);
  auto h = diag_isometry(ctx, 1, 0, -1);
  auto conj = conjugate(ctx, h, s);
  CHECK(conj.type_preserving());
  auto fixed = fixed_set(ctx, {conj}, ball);
  auto hv0 = act(ctx, h, base_vertex(ctx));
  REQUIRE(fixed.vertices.size() == 1);
  CHECK(ball.vertices[fixed.vertices[0]] == hv0);

  // a hyperbolic generator is rejected
  CHECK_THROWS_AS(fixed_set(ctx, {h}, ball), NotElliptic);
}

TEST_CASE("precision tripwire fires instead of wrapping") {
  // a window too small for the requested configuration
  CHECK_THROWS_AS(Context(2, 2), EmptyInput);
  Context ctx(2, 4);
  // canonicalizing needs coefficients beyond a tiny explicit truncation
  SMat m = SMat::identity(ctx.F, 3);
  m.at(0, 0) = Series::one(ctx.F).truncated(0);
  CHECK_THROWS_AS(canonicalize(ctx, m), PrecisionExhausted);
}

TEST_CASE("ball JSON export") {
  auto ball = build_ball(2, 1);
  auto j = ball_to_json(ball);
  CHECK(j["q"] == 2);
  CHECK(j["vertices"].size() == 15);
  CHECK(j["edges"].size() == 14);
  Context ctx(2, 8);
  // vertices round-trip through matrix JSON
  auto m = laurent::mat_from_json(ctx.F, j["vertices"][3]["basis"]);
  CHECK(canonicalize(ctx, m) == ball.vertices[3]);
}

TEST_CASE("isometry JSON with negative exponents") {
  Context ctx(2, 8);
  nlohmann::json j = {{{"1", 1}, {"0", 0}}, {{"0", 1}}, {{"-1", 1}}};
  nlohmann::json rows = nlohmann::json::array();
  rows.push_back({nlohmann::json{{"1", 1}}, nlohmann::json::object(), nlohmann::json::object()});
  rows.push_back({nlohmann::json::object(), nlohmann::json{{"0", 1}}, nlohmann::json::object()});
  rows.push_back({nlohmann::json::object(), nlohmann::json::object(), nlohmann::json{{"-1", 1}}});
  auto g = isometry_from_json(ctx, rows);
  CHECK(g.det_valuation == 0);
  CHECK(act(ctx, g, base_vertex(ctx)) ==
        act(ctx, diag_isometry(ctx, 1, 0, -1), base_vertex(ctx)));
}
