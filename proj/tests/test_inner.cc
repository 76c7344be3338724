#include <doctest.h>

#include <cmath>

#include "fcopt/experiments.hpp"
#include "fcopt/inner.hpp"
#include "fcopt/random.hpp"
#include "fcopt/verify.hpp"

using namespace fcopt;

namespace {

DenseMatrix finite_difference_jacobian(const InnerMapping& m, const DenseVector& x) {
  const double h = 1e-6 * (1.0 + norm2(x));
  DenseMatrix j(m.n(), m.d());
  for (std::size_t k = 0; k < m.d(); ++k) {
    DenseVector xp = x;
    DenseVector xm = x;
    xp[k] += h;
    xm[k] -= h;
    const DenseVector diff = (1.0 / (2.0 * h)) * (eval_map(m, xp) - eval_map(m, xm));
    for (std::size_t i = 0; i < m.n(); ++i) j(i, k) = diff[i];
  }
  return j;
}

}  // namespace

TEST_CASE("value and jacobian examples") {
  const InnerMapping q(QuadMax{{DenseMatrix::identity(2)}, {DenseVector(2)}});
  CHECK(eval_map(q, DenseVector{1, 0}) == DenseVector{1.0});
  CHECK(jacobian(q, DenseVector{1, 0}).row_vector(0) == DenseVector{2, 0});

  const DenseVector x{0.3, -0.7};
  const InnerMapping lin(LinearSystem{DenseMatrix::identity(2), x});
  CHECK(eval_map(lin, x) == DenseVector{0, 0});
  CHECK(jacobian(lin, DenseVector{5, 5}) == DenseMatrix::identity(2));

  const DenseMatrix target{{1, 2}, {3, 4}};
  const InnerMapping mc(MatCompResiduals{2, 2, {target}, {DenseMatrix(2, 2, 1.0)}});
  CHECK(eval_map(mc, target.flatten()) == DenseVector{0.0});
  CHECK(eval_map(mc, DenseVector(4))[0] == doctest::Approx(30.0));
}

TEST_CASE("lipschitz vector examples") {
  const FeasibleSet s(Simplex{2});
  const LipschitzVector lin =
      lipschitz_vector(InnerMapping(LinearSystem{DenseMatrix{{1, 2}, {3, 4}}, DenseVector(2)}), s);
  CHECK(lin.values == DenseVector{0, 0});
  const FeasibleSet nb(NuclearBall{2, 2, 1.0});
  const InnerMapping mc(MatCompResiduals{2, 2, {DenseMatrix(2, 2), DenseMatrix(2, 2)},
                                         {DenseMatrix(2, 2, 1.0), DenseMatrix{{1, 0}, {0, 1}}}});
  CHECK(lipschitz_vector(mc, nb).values == DenseVector{2, 2});
  const InnerMapping q(QuadMax{{DenseMatrix::diagonal(DenseVector{1.0, 0.5})}, {DenseVector(2)}});
  CHECK(lipschitz_vector(q, s).values[0] == doctest::Approx(2.0));
}

TEST_CASE("quadratic components must be symmetric positive semidefinite") {
  CHECK_THROWS_AS(InnerMapping(QuadMax{{DenseMatrix{{1, 0}, {0, -1}}}, {DenseVector(2)}}), InvalidArgument);
  CHECK_THROWS_AS(InnerMapping(QuadMax{{DenseMatrix{{1, 1}, {0, 1}}}, {DenseVector(2)}}), InvalidArgument);
  CHECK_THROWS_AS(InnerMapping(QuadMax{{DenseMatrix::identity(2)}, {DenseVector(3)}}), DimensionError);
}

TEST_CASE("jacobians match central finite differences") {
  Rng rng(21);
  for (auto& inst : catalog_instances()) {
    const InnerMapping& m = inst.problem.inner();
    for (int t = 0; t < 50; ++t) {
      const DenseVector x = random_point(inst.problem.set(), rng);
      const DenseMatrix j = jacobian(m, x);
      const DenseMatrix fd = finite_difference_jacobian(m, x);
      for (std::size_t i = 0; i < m.n(); ++i) {
        const double err = norm2(j.row_vector(i) - fd.row_vector(i));
        CHECK(err <= 1e-5 * (1.0 + norm2(j.row_vector(i))));
      }
    }
  }
}

TEST_CASE("component gradients are Lipschitz with the reported constants") {
  Rng rng(22);
  for (auto& inst : catalog_instances()) {
    const InnerMapping& m = inst.problem.inner();
    const DenseVector& lips = inst.problem.lipschitz().values;
    for (int t = 0; t < 200; ++t) {
      const DenseVector x = random_point(inst.problem.set(), rng);
      const DenseVector y = random_point(inst.problem.set(), rng);
      const DenseMatrix jx = jacobian(m, x);
      const DenseMatrix jy = jacobian(m, y);
      for (std::size_t i = 0; i < m.n(); ++i)
        CHECK(norm2(jx.row_vector(i) - jy.row_vector(i)) <= lips[i] * norm2(x - y) * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("components claimed convex are convex") {
  Rng rng(23);
  for (auto& inst : catalog_instances()) {
    const InnerMapping& m = inst.problem.inner();
    if (!m.components_convex()) continue;
    for (int t = 0; t < 200; ++t) {
      const DenseVector x = random_point(inst.problem.set(), rng);
      const DenseVector y = random_point(inst.problem.set(), rng);
      const double theta = rng.uniform();
      const DenseVector fm = eval_map(m, lerp(y, x, theta));
      const DenseVector fx = eval_map(m, x);
      const DenseVector fy = eval_map(m, y);
      for (std::size_t i = 0; i < m.n(); ++i) {
        const double rhs = theta * fx[i] + (1.0 - theta) * fy[i];
        CHECK(fm[i] <= rhs + 1e-10 * (1.0 + std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("sinusoid components are not claimed convex") {
  const InnerMapping s(SinusoidMap{DenseMatrix(1, 2), DenseVector(1), DenseMatrix{{1.0, 0.0}}});
  CHECK_FALSE(s.components_convex());
  const InnerMapping flat(SinusoidMap{DenseMatrix(1, 2), DenseVector(1), DenseMatrix(1, 2)});
  CHECK(eval_map(flat, DenseVector{1.0, 2.0}) == DenseVector{0.0});
}
