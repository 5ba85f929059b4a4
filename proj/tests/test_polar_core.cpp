#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polarcs/errors.hpp"
#include "polarcs/polar_core.hpp"

using namespace polarcs;

TEST_SUITE("polar_core") {

TEST_CASE("g0 kernel") {
  const auto g = build_g0(0.5);
  CHECK(g(0, 0) == 0.5);
  CHECK(g(0, 1) == 0.5);
  CHECK(g(1, 0) == 0.0);
  CHECK(g(1, 1) == 1.0);
  CHECK_THROWS_AS(build_g0(0.0), InvalidParameter);
  CHECK_THROWS_AS(build_g0(std::nan("")), InvalidParameter);
  CHECK_THROWS_AS(build_g0(INFINITY), InvalidParameter);
}

TEST_CASE("bit reversal") {
  CHECK(bit_reverse(1, 3) == 4);
  CHECK(bit_reverse(3, 3) == 6);
  CHECK(bit_reverse(6, 4) == 6);
  CHECK(bit_reverse(0, 0) == 0);
  for (int n = 0; n <= 6; ++n) {
    const auto perm = bit_reversal_permutation(n);
    REQUIRE(perm.size() == (std::size_t{1} << n));
    for (std::size_t i = 0; i < perm.size(); ++i) {
      CHECK(perm[perm[i]] == i);
      CHECK(perm[i] == oracle::reverse_bits(i, n));
    }
  }
}

TEST_CASE("printed 8x8 matrix") {
  const double b = 0.37;
  const double b2 = b * b;
  const double b3 = b2 * b;
  Matrix expected(8, 8);
  expected << b3, b3, b3, b3, b3, b3, b3, b3,
              0, 0, 0, 0, b2, b2, b2, b2,
              0, 0, b2, b2, 0, 0, b2, b2,
              0, 0, 0, 0, 0, 0, b, b,
              0, b2, 0, b2, 0, b2, 0, b2,
              0, 0, 0, 0, 0, b, 0, b,
              0, 0, 0, b, 0, 0, 0, b,
              0, 0, 0, 0, 0, 0, 0, 1;
  const auto t = PolarTransform::build(3, b);
  CHECK(t.matrix() == expected);
}

TEST_CASE("dense matrix matches kronecker product with bit reversal") {
  for (double beta : {kDefaultBeta, 0.5, 1.3, -0.8}) {
    for (int n = 0; n <= 7; ++n) {
      const auto t = PolarTransform::build(n, beta);
      const Matrix ref = oracle::polar_matrix(n, beta);
      CHECK((t.matrix() - ref).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("butterfly, dense product and inverse agree") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  for (int n = 0; n <= 10; ++n) {
    const auto t = PolarTransform::build(n);
    Vector x(static_cast<Eigen::Index>(t.size()));
    for (auto& v : x) v = nd(gen);
    const Vector fast = t.apply(x);
    const Vector dense = t.apply_dense(x);
    CHECK((fast - dense).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + dense.cwiseAbs().maxCoeff()));
    CHECK((t.solve(fast) - x).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((apply(t, x) - fast).norm() == 0.0);
  }
}

TEST_CASE("columns") {
  const auto t = PolarTransform::build(5, 0.6);
  for (std::size_t j = 0; j < t.size(); ++j) {
    CHECK((t.column(j) - t.matrix().col(static_cast<Eigen::Index>(j))).norm() <= 1e-15);
  }
  CHECK_THROWS(t.column(t.size()));
}

TEST_CASE("dense cap and size limits") {
  const auto big = PolarTransform::build(15);
  CHECK_FALSE(big.has_dense());
  CHECK_THROWS(big.matrix());
  const auto forced = PolarTransform::build(4, kDefaultBeta, 3);
  CHECK_FALSE(forced.has_dense());
  CHECK(build_transform(3).has_dense());
  CHECK_THROWS_AS(PolarTransform::build(-1), InvalidParameter);
  CHECK_THROWS_AS(PolarTransform::build(kMaxStages + 1), InvalidParameter);
  CHECK_THROWS_AS(PolarTransform::build(2, 0.0), InvalidParameter);
}

TEST_CASE("length mismatch") {
  const auto t = PolarTransform::build(3);
  CHECK_THROWS_AS(t.apply(Vector::Zero(7)), DimensionError);
  CHECK_THROWS_AS(t.solve(Vector::Zero(9)), DimensionError);
}

TEST_CASE("n = 0 is the identity") {
  const auto t = PolarTransform::build(0);
  CHECK(t.size() == 1);
  CHECK(t.matrix()(0, 0) == 1.0);
}

}
