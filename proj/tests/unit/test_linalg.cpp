#include <doctest.h>

#include <cmath>

#include "linalg.hpp"
#include "rng.hpp"

using namespace spcecon;

namespace {

Mat benchmark_sigma() {
  Mat s(3, 3);
  s(0, 0) = 2; s(0, 1) = 1; s(0, 2) = 1;
  s(1, 0) = 1; s(1, 1) = 3; s(1, 2) = 1;
  s(2, 0) = 1; s(2, 1) = 1; s(2, 2) = 3;
  return s;
}

}  // namespace

TEST_CASE("cholesky factor reproduces the matrix") {
  const Mat sigma = benchmark_sigma();
  Cholesky chol(sigma);
  const Mat back = chol.lower() * transpose(chol.lower());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(back(i, j) == doctest::Approx(sigma(i, j)).epsilon(1e-14));
}

TEST_CASE("quadratic form against the hand-inverted matrix") {
  // inverse of [[2,1,1],[1,3,1],[1,1,3]] is (1/12) [[8,-2,-2],[-2,5,-1],[-2,-1,5]]
  const Mat sigma = benchmark_sigma();
  Cholesky chol(sigma);
  const Vec ones{1.0, 1.0, 1.0};
  CHECK(chol.quad_inv(ones) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const Mat inv = chol.inverse();
  const double expected[3][3] = {{8, -2, -2}, {-2, 5, -1}, {-2, -1, 5}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(inv(i, j) == doctest::Approx(expected[i][j] / 12.0).epsilon(1e-13));
}

TEST_CASE("solve satisfies the linear system") {
  const Mat sigma = benchmark_sigma();
  Cholesky chol(sigma);
  const Vec b{0.3, -1.2, 2.5};
  const Vec x = chol.solve(b);
  const Vec back = mul(sigma, x);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("singular matrix is rejected") {
  Mat bad(2, 2);
  bad(0, 0) = 1; bad(0, 1) = 1;
  bad(1, 0) = 1; bad(1, 1) = 1;
  CHECK_THROWS_AS(Cholesky{bad}, Error);
  try {
    Cholesky chol(bad);
    FAIL("expected a singular-matrix error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_matrix);
  }
}

TEST_CASE("random SPD matrices factor and solve") {
  Rng rng(7, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t q = 1 + (rng.next_u64() % 4);
    Mat a(q, q);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) a(i, j) = rng.normal();
    Mat spd = a * transpose(a);
    for (std::size_t i = 0; i < q; ++i) spd(i, i) += double(q);
    Cholesky chol(spd);
    Vec v(q);
    for (auto& x : v) x = rng.normal();
    const double quad = chol.quad_inv(v);
    CHECK(quad >= 0.0);
    const Vec x = chol.solve(v);
    CHECK(quad == doctest::Approx(dot(v, x)).epsilon(1e-10));
  }
}
