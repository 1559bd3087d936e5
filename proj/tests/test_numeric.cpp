#include "forge/numeric.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace forge;

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 3) > Rational(-1, 2));
  CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
  CHECK(Rational::parse("-3/9") == Rational(-1, 3));
  CHECK(Rational(7).to_string() == "7");
  CHECK(Rational(22, 8).to_string() == "11/4");
}

TEST_CASE("angles are exact rational multiples of pi") {
  Angle third = Angle::pi_over(3);
  CHECK(third + third == Angle::pi_times(2, 3));
  CHECK(Angle::pi() - third == Angle::pi_times(2, 3));
  CHECK(third < Angle::pi_over(2));
  CHECK((2 * Angle::pi_over(8)) == Angle::pi_over(4));
  CHECK(Angle::pi_times(7, 8).to_string() == "7/8 pi");
  CHECK(Angle::zero().to_string() == "0/1 pi");
  CHECK(Angle::parse("7/8 pi") == Angle::pi_times(7, 8));
  CHECK(Angle::parse("2pi/3") == Angle::pi_times(2, 3));
  CHECK(Angle::parse("pi") == Angle::pi());
  CHECK(Angle::parse("0") == Angle::zero());
  CHECK(Angle::parse(Angle::pi_times(5, 12).to_string()) == Angle::pi_times(5, 12));
}

TEST_CASE("exact cosine table") {
  CHECK(Angle::zero().exact_cos().value() == Surd(Rational(1)));
  CHECK(Angle::pi_over(2).exact_cos().value() == Surd(Rational(0)));
  CHECK(Angle::pi_times(2, 3).exact_cos().value() == Surd(Rational(-1, 2)));
  CHECK(Angle::pi().exact_cos().value() == Surd(Rational(-1)));
  CHECK(Angle::pi_over(6).exact_cos().value() == Rational(1, 2) * Surd::sqrt_of(Rational(3)));
  CHECK(Angle::pi_over(4).exact_cos().value() == Rational(1, 2) * Surd::sqrt_of(Rational(2)));
  CHECK_FALSE(Angle::pi_over(8).exact_cos().has_value());
  CHECK_FALSE(Angle::pi_over(5).exact_cos().has_value());
}

TEST_CASE("surd canonicalization") {
  CHECK(Surd::sqrt_of(Rational(12)) == Rational(2) * Surd::sqrt_of(Rational(3)));
  CHECK(Surd::sqrt_of(Rational(4)) == Surd(Rational(2)));
  CHECK(Surd::sqrt_of(Rational(3, 2)).square() == Rational(3, 2));
  CHECK(Surd::sqrt_of(Rational(0)) == Surd(Rational(0)));
  CHECK(Surd::sqrt_of(Rational(2)) * Surd::sqrt_of(Rational(2)) == Surd(Rational(2)));
  CHECK(Surd::sqrt_of(Rational(6)) / Surd::sqrt_of(Rational(2)) == Surd::sqrt_of(Rational(3)));
}

TEST_CASE("surd ordering") {
  Surd r2 = Surd::sqrt_of(Rational(2));
  Surd r3 = Surd::sqrt_of(Rational(3));
  CHECK(r2 < r3);
  CHECK(-r3 < -r2);
  CHECK(-r2 < Surd(Rational(0)));
  CHECK(Surd(Rational(1)) < r2);
  CHECK(r2 < Surd(Rational(3, 2)));
  CHECK(Surd(Rational(7, 5)) < r2);
}

TEST_CASE("surd addition requires matching radicands") {
  Surd r2 = Surd::sqrt_of(Rational(2));
  CHECK(r2 + r2 == Rational(2) * r2);
  CHECK(r2 - r2 == Surd(Rational(0)));
  CHECK_THROWS_AS(r2 + Surd::sqrt_of(Rational(3)), std::domain_error);
  CHECK(Surd(Rational(0)) + Surd::sqrt_of(Rational(3)) == Surd::sqrt_of(Rational(3)));
}

TEST_CASE("triangle comparison across radicands") {
  Surd one{Rational(1)};
  Surd r2 = Surd::sqrt_of(Rational(2));
  Surd r3 = Surd::sqrt_of(Rational(3));
  CHECK(surd_triangle_le(r3, one, one));        // sqrt3 <= 2
  CHECK(surd_triangle_le(r2, one, one));        // sqrt2 <= 2
  CHECK_FALSE(surd_triangle_le(Surd(Rational(3)), one, one));
  CHECK(surd_triangle_le(r3, r2, one));
  CHECK_FALSE(surd_triangle_le(Surd(Rational(5, 2)), r2, one));  // 2.5 > sqrt2 + 1
  // boundary: equality counts as <=
  CHECK(surd_triangle_le(Surd(Rational(2)), one, one));
}

TEST_CASE("surd serialization roundtrip") {
  Surd v = Rational(-3, 4) * Surd::sqrt_of(Rational(5));
  CHECK(Surd::parse(v.to_string()) == v);
  CHECK(Surd::parse(Surd(Rational(7, 2)).to_string()) == Surd(Rational(7, 2)));
}
