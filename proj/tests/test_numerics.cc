#include <doctest.h>

#include <cmath>

#include "fcopt/numerics.hpp"
#include "fcopt/random.hpp"

using namespace fcopt;

namespace {

DenseMatrix reconstruct(const Svd& s) {
  DenseMatrix out(s.u.rows(), s.v.rows());
  for (std::size_t k = 0; k < s.sigma.size(); ++k)
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += s.sigma[k] * s.u(i, k) * s.v(j, k);
  return out;
}

double orthogonality_error(const DenseMatrix& q) {
  const DenseMatrix g = multiply(q.transpose(), q);
  return max_abs(g - DenseMatrix::identity(g.rows()));
}

}  // namespace

TEST_CASE("vectors reject non-finite entries") {
  CHECK_THROWS_AS(DenseVector({1.0, std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(DenseVector(std::vector<double>{INFINITY}), InvalidArgument);
  CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
}

TEST_CASE("basic vector algebra") {
  const DenseVector a{1.0, -2.0, 2.0};
  const DenseVector b{0.5, 0.5, 0.5};
  CHECK(dot(a, b) == doctest::Approx(0.5));
  CHECK(norm2(a) == doctest::Approx(3.0));
  CHECK(norm1(a) == doctest::Approx(5.0));
  CHECK(norm_inf(a) == doctest::Approx(2.0));
  CHECK(lerp(a, b, 0.0) == a);
  CHECK(lerp(a, b, 1.0) == b);
  CHECK_THROWS_AS(dot(a, DenseVector{1.0}), DimensionError);
}

TEST_CASE("top singular pair of a scaled rank-one matrix") {
  const DenseVector u{0.6, 0.8};
  const DenseVector v{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  const SingularPair p = top_singular_pair(3.0 * DenseMatrix::outer(u, v));
  CHECK(p.sigma == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(std::abs(dot(p.u, u)) - 1.0) < 1e-10);
  CHECK(std::abs(std::abs(dot(p.v, v)) - 1.0) < 1e-10);
}

TEST_CASE("top singular pair of the identity") {
  CHECK(top_singular_pair(DenseMatrix::identity(2)).sigma == doctest::Approx(1.0));
}

TEST_CASE("top singular pair matches svd_full on random matrices") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const DenseMatrix m = rng.normal_matrix(1 + rng.index(8), 1 + rng.index(8));
    const SingularPair p = top_singular_pair(m);
    const double s1 = svd_full(m).sigma[0];
    CHECK(std::abs(p.sigma - s1) <= 1e-8 * s1);
    CHECK(p.sigma <= frobenius_norm(m) * (1.0 + 1e-12));
    CHECK(norm2(multiply(m, p.v) - p.sigma * p.u) <= 1e-9 * p.sigma);
    CHECK(norm2(p.u) == doctest::Approx(1.0));
    CHECK(norm2(p.v) == doctest::Approx(1.0));
  }
}

TEST_CASE("top singular pair reports non-convergence") {
  try {
    top_singular_pair(DenseMatrix{{1.0, 0.0, 0.0}, {0.0, 0.9999, 0.0}, {0.0, 0.0, 0.5}}, 1e-14, 3);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }
  CHECK_THROWS_AS(top_singular_pair(DenseMatrix(2, 2)), InvalidArgument);
}

TEST_CASE("svd of a diagonal matrix") {
  const Svd s = svd_full(DenseMatrix{{2.0, 0.0}, {0.0, 1.0}});
  CHECK(s.sigma[0] == doctest::Approx(2.0));
  CHECK(s.sigma[1] == doctest::Approx(1.0));
  CHECK(std::abs(s.u(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(s.v(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("svd of the zero matrix") {
  const Svd s = svd_full(DenseMatrix(3, 2));
  CHECK(s.sigma[0] == 0.0);
  CHECK(s.sigma[1] == 0.0);
  CHECK(orthogonality_error(s.u) <= 1e-12);
  CHECK(orthogonality_error(s.v) <= 1e-12);
}

TEST_CASE("svd rejects matrices above the size cap") {
  CHECK_THROWS_AS(svd_full(DenseMatrix(kSvdMaxDimension + 1, kSvdMaxDimension + 1)),
                  UnsupportedSizeError);
}

TEST_CASE("svd reconstruction and orthogonality on 200 random matrices") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const DenseMatrix m = rng.normal_matrix(1 + rng.index(20), 1 + rng.index(20));
    const Svd s = svd_full(m);
    CHECK(frobenius_norm(m - reconstruct(s)) <= 1e-10 * (1.0 + frobenius_norm(m)));
    CHECK(orthogonality_error(s.u) <= 1e-12);
    CHECK(orthogonality_error(s.v) <= 1e-12);
    for (std::size_t k = 0; k + 1 < s.sigma.size(); ++k) CHECK(s.sigma[k] >= s.sigma[k + 1]);
    CHECK(s.sigma[s.sigma.size() - 1] >= 0.0);
  }
}

TEST_CASE("orthonormal_q has orthonormal columns and positive R diagonal") {
  Rng rng(3);
  const DenseMatrix m = rng.normal_matrix(6, 6);
  const DenseMatrix q = orthonormal_q(m);
  CHECK(orthogonality_error(q) <= 1e-12);
  const DenseMatrix r = multiply(q.transpose(), m);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(r(i, i) > 0.0);
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(r(i, j)) <= 1e-10);
  }
}

TEST_CASE("rng is reproducible") {
  Rng a(666013);
  Rng b(666013);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  Rng c(1);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) mean += c.uniform();
  CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.02));
}
