#include "forge/gf.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace forge::gf;

TEST_CASE("field axioms hold for the desk orders") {
  for (int q : {2, 3, 4, 5}) {
    Field F(q);
    for (int a = 0; a < q; ++a) {
      CHECK(F.add(a, 0) == a);
      CHECK(F.mul(a, 1) == a);
      CHECK(F.add(a, F.neg(a)) == 0);
      if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
      for (int b = 0; b < q; ++b) {
        CHECK(F.add(a, b) == F.add(b, a));
        CHECK(F.mul(a, b) == F.mul(b, a));
        for (int c = 0; c < q; ++c) {
          CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
          CHECK(F.add(a, F.add(b, c)) == F.add(F.add(a, b), c));
          CHECK(F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c));
        }
      }
    }
  }
}

TEST_CASE("GF(4) is not Z/4") {
  Field F(4);
  // characteristic 2: x + x = 0 for all x
  for (int a = 0; a < 4; ++a) CHECK(F.add(a, a) == 0);
  // multiplicative group is cyclic of order 3
  elt g = 2;
  CHECK(F.mul(g, g) != 1);
  CHECK(F.mul(F.mul(g, g), g) == 1);
}

TEST_CASE("prime power detection") {
  CHECK(Field::is_prime_power(2));
  CHECK(Field::is_prime_power(4));
  CHECK(Field::is_prime_power(5));
  CHECK(Field::is_prime_power(9));
  CHECK_FALSE(Field::is_prime_power(6));
  CHECK_FALSE(Field::is_prime_power(1));
  CHECK_FALSE(Field::is_prime_power(12));
}

TEST_CASE("projective point counts match the subspace oracle") {
  // oracle: group all nonzero vectors by the scalar-multiple relation
  auto oracle_count = [](int q, int n) {
    Field F(q);
    std::vector<std::vector<elt>> all;
    std::vector<elt> v(n, 0);
    while (true) {
      int i = n - 1;
      while (i >= 0 && v[i] == q - 1) { v[i] = 0; --i; }
      if (i < 0) break;
      ++v[i];
      all.push_back(v);
    }
    std::set<std::set<std::vector<elt>>> classes;
    for (const auto& w : all) {
      std::set<std::vector<elt>> cls;
      for (int s = 1; s < q; ++s) {
        std::vector<elt> sw(n);
        for (int j = 0; j < n; ++j) sw[j] = F.mul(elt(s), w[j]);
        cls.insert(sw);
      }
      classes.insert(cls);
    }
    return classes.size();
  };
  for (int q : {2, 3, 4, 5}) {
    Field F(q);
    CHECK(projective_points(F, 3).size() == oracle_count(q, 3));
  }
  Field F2(2);
  CHECK(projective_points(F2, 3).size() == 7);
  Field F3(3);
  CHECK(projective_points(F3, 3).size() == 13);
  CHECK(projective_points(F2, 4).size() == 15);
  CHECK(projective_points(F3, 4).size() == 40);
}

TEST_CASE("two dimensional subspace counts (Gaussian binomials)") {
  Field F2(2);
  CHECK(two_dim_subspaces(F2, 3).size() == 7);    // lines of PG(2,2)
  CHECK(two_dim_subspaces(F2, 4).size() == 35);   // [4 choose 2]_2
  Field F3(3);
  CHECK(two_dim_subspaces(F3, 4).size() == 130);  // [4 choose 2]_3
}

TEST_CASE("matrix inverse and det") {
  Field F(3);
  Mat m(3, 3);
  // a fixed invertible matrix over GF(3)
  int vals[9] = {1, 2, 0, 0, 1, 1, 2, 0, 1};
  for (int i = 0; i < 9; ++i) m.a[i] = elt(vals[i]);
  REQUIRE(det(F, m) != 0);
  Mat mi = inverse(F, m);
  CHECK(mat_mul(F, m, mi) == Mat::identity(3));
  CHECK(mat_mul(F, mi, m) == Mat::identity(3));
}

TEST_CASE("determinant counts the general linear group") {
  // |GL3(F2)| = 168, by enumeration of all 512 matrices
  Field F(2);
  int count = 0;
  for (int bits = 0; bits < 512; ++bits) {
    Mat m(3, 3);
    for (int i = 0; i < 9; ++i) m.a[i] = elt((bits >> i) & 1);
    if (det(F, m) != 0) ++count;
  }
  CHECK(count == 168);
}
