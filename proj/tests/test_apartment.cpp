#include "forge/apartment.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace forge;
using namespace forge::apartment;

namespace {
Vec2 rv(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 4);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}
}  // namespace

TEST_CASE("gram matrices make adjacent special vertices unit distance") {
  WeylData a2(WeylKind::A2affine);
  CHECK(a2.norm2({Rational(1), Rational(0)}) == Rational(1));
  CHECK(a2.norm2({Rational(0), Rational(1)}) == Rational(1));
  CHECK(a2.norm2({Rational(1), Rational(-1)}) == Rational(1));
  CHECK(a2.inner({Rational(1), Rational(0)}, {Rational(0), Rational(1)}) == Rational(1, 2));

  WeylData c2(WeylKind::C2affine);
  CHECK(c2.norm2({Rational(1), Rational(0)}) == Rational(1));
  CHECK(c2.norm2({Rational(1), Rational(1)}) == Rational(2));
}

TEST_CASE("busemann closed form") {
  WeylData w(WeylKind::A2affine);
  Ray r{{Rational(2), Rational(3)}, {Rational(1), Rational(0)}};

  CHECK(busemann(w, r, r.base) == Surd(Rational(0)));
  // a point at parameter s along the (unit) ray has value -s
  for (int s : {1, 2, 5}) {
    ApartmentPoint x = r.base + Rational(s) * r.direction;
    CHECK(busemann(w, r, x) == Surd(Rational(-s)));
  }
  // perpendicular offsets evaluate to zero: (1,-2) is Gram-orthogonal to e1
  ApartmentPoint perp = r.base + Vec2{Rational(1), Rational(-2)};
  CHECK(w.inner({Rational(1), Rational(-2)}, r.direction) == Rational(0));
  CHECK(busemann(w, r, perp) == Surd(Rational(0)));
  // scaling the direction vector does not change the function
  Ray r_scaled{r.base, {Rational(7, 3), Rational(0)}};
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto x = rv(rng);
    CHECK(busemann(w, r, x) == busemann(w, r_scaled, x));
  }
}

TEST_CASE("horoball membership") {
  WeylData w(WeylKind::C2affine);
  Ray r{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}};
  CHECK(horoball_contains(w, r, Rational(0), r.base));
  CHECK(horoball_contains(w, r, Rational(0), {Rational(1), Rational(0)}));
  CHECK_FALSE(horoball_contains(w, r, Rational(0), {Rational(-1), Rational(0)}));
  // the sublevel set is a half-plane orthogonal to the ray
  CHECK(horoball_contains(w, r, Rational(0), {Rational(0), Rational(5)}));
  CHECK(horoball_contains(w, r, Rational(-2), {Rational(3), Rational(-7)}));
  CHECK_FALSE(horoball_contains(w, r, Rational(-2), {Rational(1), Rational(0)}));
}

TEST_CASE("busemann functions of parallel rays differ by a constant") {
  for (WeylKind kind : {WeylKind::A2affine, WeylKind::C2affine}) {
    WeylData w(kind);
    Ray r1{{Rational(0), Rational(0)}, {Rational(2), Rational(1)}};
    Ray r2{{Rational(5, 2), Rational(-3)}, {Rational(4), Rational(2)}};  // parallel
    std::mt19937 rng(11);
    ApartmentPoint probe = rv(rng);
    Surd expected = busemann(w, r1, probe) - busemann(w, r2, probe);
    for (int i = 0; i < 100; ++i) {
      auto x = rv(rng);
      CHECK(busemann(w, r1, x) - busemann(w, r2, x) == expected);
    }
  }
}

TEST_CASE("busemann is 1-Lipschitz on sampled pairs") {
  WeylData w(WeylKind::A2affine);
  Ray r{{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}};
  std::mt19937 rng(23);
  for (int i = 0; i < 100; ++i) {
    auto x = rv(rng);
    auto y = rv(rng);
    Surd diff = (busemann(w, r, x) - busemann(w, r, y)).abs();
    Surd dist = w.norm(x - y);
    CHECK(diff <= dist);
  }
}

TEST_CASE("vertex angles as exact cosines") {
  WeylData w(WeylKind::A2affine);
  ApartmentPoint o{Rational(0), Rational(0)};
  ApartmentPoint e1{Rational(1), Rational(0)};
  ApartmentPoint e2{Rational(0), Rational(1)};

  CHECK(vertex_angle(w, o, e1, e1).as_rational_pi().value() == Angle::zero());
  CHECK(vertex_angle(w, o, e1, -e1).as_rational_pi().value() == Angle::pi());
  // 60 degrees between the two lattice basis vectors
  CHECK(vertex_angle(w, o, e1, e2).as_rational_pi().value() == Angle::pi_over(3));
  // 2pi/3 via the exact cosine -1/2
  CHECK(vertex_angle(w, o, e1, -e2).as_rational_pi().value() == Angle::pi_times(2, 3));
  CHECK(vertex_angle(w, o, e1, -e2).at_least(Angle::pi_times(2, 3)));
  CHECK_FALSE(vertex_angle(w, o, e1, e2).at_least(Angle::pi_times(2, 3)));
  CHECK_THROWS_AS(vertex_angle(w, o, o, e1), DegenerateDirection);

  WeylData c2(WeylKind::C2affine);
  ApartmentPoint d{Rational(1), Rational(1)};
  CHECK(vertex_angle(c2, o, e1, d).as_rational_pi().value() == Angle::pi_over(4));
}

TEST_CASE("busemann step bound") {
  Surd d = Surd::sqrt_of(Rational(3));
  CHECK(busemann_step_bound(d, Angle::pi()) == d);
  CHECK(busemann_step_bound(d, Angle::pi_times(2, 3)) == Rational(1, 2) * d);
  CHECK(busemann_step_bound(d, Angle::pi_over(2)) == Surd(Rational(0)));
  CHECK(busemann_step_bound(d, Angle::pi_over(3)) == Surd(Rational(0)));  // clamped
  CHECK(busemann_step_bound(Surd(Rational(2)), Angle::pi_times(2, 3)) == Surd(Rational(1)));
}

TEST_CASE("walls through points") {
  WeylData a2(WeylKind::A2affine);
  ApartmentPoint o{Rational(0), Rational(0)};
  CHECK(weyl_walls_through(a2, o).size() == 3);
  // a point interior to an alcove lies on no wall
  CHECK(weyl_walls_through(a2, {Rational(1, 3), Rational(1, 3)}).empty());
  // an edge-interior point lies on exactly one wall
  CHECK(weyl_walls_through(a2, {Rational(1, 2), Rational(1, 2)}).size() == 1);

  WeylData c2(WeylKind::C2affine);
  CHECK(weyl_walls_through(c2, o).size() == 4);
  // the non-special vertex class of the C2 arrangement
  CHECK(weyl_walls_through(c2, {Rational(1, 2), Rational(1, 2)}).size() == 2);
}

TEST_CASE("ray types: two orbits, A2 flips type across the origin") {
  WeylData a2(WeylKind::A2affine);
  Vec2 e1{Rational(1), Rational(0)};
  auto t_pos = a2.ray_type(e1);
  auto t_neg = a2.ray_type(-e1);
  REQUIRE(t_pos.has_value());
  REQUIRE(t_neg.has_value());
  CHECK(*t_pos != *t_neg);
  // non-wall directions have no type
  CHECK_FALSE(a2.ray_type({Rational(2), Rational(1)}).has_value());

  WeylData c2(WeylKind::C2affine);
  CHECK(c2.ray_type({Rational(1), Rational(0)}) == c2.ray_type({Rational(-1), Rational(0)}));
  CHECK(c2.ray_type({Rational(1), Rational(1)}).value() !=
        c2.ray_type({Rational(1), Rational(0)}).value());
}

TEST_CASE("reflections preserve the special-vertex lattice") {
  for (WeylKind kind : {WeylKind::A2affine, WeylKind::C2affine}) {
    WeylData w(kind);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(-6, 6);
    for (int fam = 0; fam < w.num_wall_families(); ++fam) {
      for (int level : {0, 1, -2}) {
        Wall wall{fam, Rational(level)};
        for (int i = 0; i < 25; ++i) {
          Vec2 p{Rational(pick(rng)), Rational(pick(rng))};
          Vec2 q = w.reflect(wall, p);
          CHECK(w.is_special_vertex(q));
          // involution, and the wall is fixed pointwise
          CHECK(w.reflect(wall, q) == p);
        }
        // reflecting preserves distances to the wall's points
        Vec2 p{Rational(2), Rational(-1)};
        Vec2 q = w.reflect(wall, p);
        CHECK(w.norm2(p - q) * Rational(1) >= Rational(0));
      }
    }
  }
}

TEST_CASE("scene JSON roundtrip and SVG emission") {
  Scene s;
  s.kind = WeylKind::A2affine;
  s.points.push_back({{Rational(0), Rational(0)}, "a1"});
  s.points.push_back({{Rational(1), Rational(1)}, "a2"});
  s.rays.push_back({Ray{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}}, "r1"});
  s.walls.push_back({Wall{0, Rational(0)}, "M1"});
  s.horoball_levels.push_back({0, Rational(-1)});

  auto j = to_json(s);
  Scene back = scene_from_json(j);
  CHECK(back.points.size() == 2);
  CHECK(back.rays.size() == 1);
  CHECK(back.walls.size() == 1);
  CHECK(back.points[0].first == s.points[0].first);
  CHECK(back.horoball_levels.size() == 1);

  auto svg = to_svg(s);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("a1") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}
