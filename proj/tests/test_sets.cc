#include <doctest.h>

#include <cmath>

#include "fcopt/sets.hpp"

using namespace fcopt;

namespace {

DenseVector enumerate_simplex_projection(const DenseVector& y) {
  const std::size_t d = y.size();
  DenseVector best;
  double best_dist = INFINITY;
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    double s = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (1u << i)) {
        s += y[i];
        ++k;
      }
    const double tau = (s - 1.0) / k;
    DenseVector x(d);
    bool ok = true;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (1u << i)) {
        x[i] = y[i] - tau;
        ok = ok && x[i] >= -1e-15;
      }
    if (ok && norm2(x - y) < best_dist) {
      best_dist = norm2(x - y);
      best = x;
    }
  }
  return best;
}

std::vector<FeasibleSet> sample_sets() {
  return {FeasibleSet(Simplex{5}),
          FeasibleSet(Box{DenseVector{-1.0, 0.0, 2.0}, DenseVector{1.0, 0.0, 5.0}}),
          FeasibleSet(L2Ball{DenseVector{1.0, -1.0}, 0.5}), FeasibleSet(NuclearBall{3, 2, 1.5})};
}

}  // namespace

TEST_CASE("lmo examples") {
  CHECK(lmo(FeasibleSet(Simplex{3}), DenseVector{3, 1, 2}) == DenseVector{0, 1, 0});
  const DenseVector ball = lmo(FeasibleSet(L2Ball{DenseVector(2), 2.0}), DenseVector{3, 4});
  CHECK(ball[0] == doctest::Approx(-1.2));
  CHECK(ball[1] == doctest::Approx(-1.6));
  const DenseVector nuc = lmo(FeasibleSet(NuclearBall{2, 2, 1.0}), DenseVector{1, 0, 0, 0});
  CHECK(nuc[0] == doctest::Approx(-1.0));
  CHECK(std::abs(nuc[1]) < 1e-12);
  CHECK(std::abs(nuc[2]) < 1e-12);
  CHECK(std::abs(nuc[3]) < 1e-12);
}

TEST_CASE("lmo ties go to the lowest index") {
  CHECK(lmo(FeasibleSet(Simplex{3}), DenseVector{1, 0, 0}) == DenseVector{0, 1, 0});
  const Box box{DenseVector{0, 0}, DenseVector{1, 1}};
  CHECK(lmo(FeasibleSet(box), DenseVector{0, -1}) == DenseVector{0, 1});
}

TEST_CASE("projection examples") {
  const FeasibleSet s3(Simplex{3});
  const DenseVector p = project(s3, DenseVector{0.2, 0.3, 0.5});
  CHECK(norm_inf(p - DenseVector{0.2, 0.3, 0.5}) < 1e-15);
  CHECK(project(FeasibleSet(Simplex{2}), DenseVector{1, 1}) == DenseVector{0.5, 0.5});
  CHECK(project(s3, DenseVector{2, 0, 0}) == DenseVector{1, 0, 0});
  CHECK(norm_inf(project(s3, DenseVector{2, 0, 0}) - enumerate_simplex_projection({2, 0, 0})) < 1e-12);
}

TEST_CASE("diameter examples") {
  CHECK(diameter(FeasibleSet(Simplex{5})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(diameter(FeasibleSet(Box{DenseVector(4), DenseVector(4, 1.0)})) == doctest::Approx(2.0));
  CHECK(diameter(FeasibleSet(NuclearBall{30, 10, 7.0})) == doctest::Approx(14.0));
  CHECK(diameter(FeasibleSet(L2Ball{DenseVector(3), 2.5})) == doctest::Approx(5.0));
}

TEST_CASE("membership examples") {
  CHECK(contains(FeasibleSet(Simplex{2}), DenseVector{0.5, 0.5}, 0.0));
  CHECK_FALSE(contains(FeasibleSet(Simplex{2}), DenseVector{0.6, 0.6}, 1e-9));
  CHECK(contains(FeasibleSet(L2Ball{DenseVector(2), 1.0}), DenseVector{0.6, 0.8}, 1e-12));
  CHECK_FALSE(contains(FeasibleSet(NuclearBall{2, 2, 1.0}), DenseVector{1, 0, 0, 1}, 1e-9));
  CHECK(contains(FeasibleSet(NuclearBall{2, 2, 2.0}), DenseVector{1, 0, 0, 1}, 1e-9));
}

TEST_CASE("invalid sets are rejected") {
  CHECK_THROWS_AS(FeasibleSet(Box{DenseVector{1.0}, DenseVector{0.0}}), InvalidArgument);
  CHECK_THROWS_AS(FeasibleSet(L2Ball{DenseVector(2), 0.0}), InvalidArgument);
  CHECK_THROWS_AS(FeasibleSet(NuclearBall{2, 2, -1.0}), InvalidArgument);
  CHECK_THROWS_AS(lmo(FeasibleSet(Simplex{3}), DenseVector{1, 2}), DimensionError);
}

TEST_CASE("lmo optimality against random feasible points") {
  Rng rng(5);
  const auto sets = sample_sets();
  for (int t = 0; t < 500; ++t) {
    const FeasibleSet& set = sets[t % sets.size()];
    const DenseVector g = rng.normal_vector(set.dimension());
    const DenseVector v = lmo(set, g);
    REQUIRE(contains(set, v, 1e-9));
    for (int j = 0; j < 100; ++j) {
      const DenseVector p = random_point(set, rng);
      CHECK(dot(g, v) <= dot(g, p) + 1e-9);
    }
  }
}

TEST_CASE("convex combinations of lmo outputs stay feasible") {
  Rng rng(6);
  for (const auto& set : sample_sets()) {
    DenseVector y = lmo(set, rng.normal_vector(set.dimension()));
    for (int k = 0; k < 50; ++k) {
      y = lerp(y, lmo(set, rng.normal_vector(set.dimension())), 2.0 / (k + 3.0));
      CHECK(contains(set, y, 1e-9));
    }
  }
}

TEST_CASE("projection is idempotent and feasible") {
  Rng rng(8);
  for (const auto& set : sample_sets()) {
    for (int t = 0; t < 100; ++t) {
      const DenseVector y = 3.0 * rng.normal_vector(set.dimension());
      const DenseVector p = project(set, y);
      CHECK(contains(set, p, 1e-9));
      CHECK(norm_inf(project(set, p) - p) <= 1e-12);
    }
  }
}

TEST_CASE("simplex projection matches active-set enumeration") {
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + rng.index(4);
    const DenseVector y = 2.0 * rng.normal_vector(d);
    CHECK(norm_inf(project(FeasibleSet(Simplex{d}), y) - enumerate_simplex_projection(y)) <= 1e-10);
  }
}

TEST_CASE("nuclear projection shrinks singular values onto the l1 ball") {
  Rng rng(10);
  const FeasibleSet set(NuclearBall{4, 3, 1.0});
  const DenseVector y = 2.0 * rng.normal_vector(12);
  const DenseVector p = project(set, y);
  const Svd s = svd_full(DenseMatrix::reshape(p, 4, 3));
  CHECK(sum(s.sigma) == doctest::Approx(1.0).epsilon(1e-9));
  // Optimality: <y - p, x - p> <= 0 for feasible x.
  for (int j = 0; j < 50; ++j) {
    const DenseVector x = random_point(set, rng);
    CHECK(dot(y - p, x - p) <= 1e-9);
  }
}

TEST_CASE("center points are feasible") {
  for (const auto& set : sample_sets()) CHECK(contains(set, center_point(set), 1e-12));
}
