#include <doctest.h>

#include <cmath>

#include "fcopt/outer.hpp"
#include "fcopt/random.hpp"
#include "fcopt/verify.hpp"

using namespace fcopt;

namespace {
const DenseVector kNoX{0.0};
}

TEST_CASE("evaluation examples") {
  CHECK(eval(OuterFunction(MaxOfComponents{}, 3), DenseVector{1, 3, 2}, kNoX) == 3.0);
  CHECK(eval(OuterFunction(Norm{NormKind::L2}, 2), DenseVector{3, 4}, kNoX) == doctest::Approx(5.0));
  CHECK(eval(OuterFunction(SumLoss{LossKind::Hinge}, 2), DenseVector{-1, 2}, kNoX) == 2.0);
  CHECK(eval(OuterFunction(Norm{NormKind::L1}, 2), DenseVector{3, -4}, kNoX) == 7.0);
  CHECK(eval(OuterFunction(Norm{NormKind::LInf}, 2), DenseVector{3, -4}, kNoX) == 4.0);
  CHECK(eval(OuterFunction(Coordinate{1}, 2), DenseVector{3, -4}, kNoX) == -4.0);
  CHECK(eval(OuterFunction(SumLoss{LossKind::Abs}, 2), DenseVector{3, -4}, kNoX) == 7.0);
  CHECK(eval(OuterFunction(SumLoss{LossKind::Logistic}, 2), DenseVector{0, 0}, kNoX) ==
        doctest::Approx(2.0 * std::log(2.0)));
  const OuterFunction add(AdditiveComposite{0, ScaledL1{0.5}}, 2);
  CHECK(eval(add, DenseVector{1, 9}, DenseVector{2, -2}) == doctest::Approx(3.0));
}

TEST_CASE("subgradient examples") {
  CHECK(subgradient_weights(OuterFunction(MaxOfComponents{}, 3), DenseVector{1, 3, 3}) ==
        DenseVector{0, 1, 0});
  const DenseVector g = subgradient_weights(OuterFunction(Norm{NormKind::L2}, 2), DenseVector{3, 4});
  CHECK(g[0] == doctest::Approx(0.6));
  CHECK(g[1] == doctest::Approx(0.8));
  CHECK(subgradient_weights(OuterFunction(Norm{NormKind::L2}, 2), DenseVector{0, 0}) == DenseVector{0, 0});
  CHECK(subgradient_weights(OuterFunction(Coordinate{1}, 3), DenseVector{5, 5, 5}) == DenseVector{0, 1, 0});
  CHECK(subgradient_weights(OuterFunction(SumLoss{LossKind::Hinge}, 3), DenseVector{-1, 0, 2}) ==
        DenseVector{0, 0, 1});
  const DenseVector lg =
      subgradient_weights(OuterFunction(SumLoss{LossKind::Logistic}, 1), DenseVector{0.0});
  CHECK(lg[0] == doctest::Approx(0.5));
}

TEST_CASE("lipschitz bound examples") {
  const FeasibleSet s(Simplex{2});
  CHECK(lipschitz_bound(OuterFunction(MaxOfComponents{}, 3), DenseVector{1, 2, 3}, 2.0, s) == 6.0);
  CHECK(lipschitz_bound(OuterFunction(Coordinate{0}, 2), DenseVector{5, 1}, 1.0, s) == 5.0);
  CHECK(lipschitz_bound(OuterFunction(Norm{NormKind::L2}, 2), DenseVector{3, 4}, 1.0, s) ==
        doctest::Approx(5.0));
  CHECK(lipschitz_bound(OuterFunction(SumLoss{LossKind::Hinge}, 2), DenseVector{3, 4}, 2.0, s) == 14.0);
  CHECK(lipschitz_bound(OuterFunction(AdditiveComposite{1, ScaledL1{0.25}}, 2), DenseVector{3, 4}, 1.0,
                        s) == doctest::Approx(4.25));
  CHECK_THROWS_AS(lipschitz_bound(OuterFunction(MaxOfComponents{}, 2), DenseVector{-1, 1}, 1.0, s),
                  InvalidArgument);
}

TEST_CASE("monotonicity flags follow the variant") {
  CHECK(OuterFunction(MaxOfComponents{}, 2).is_monotone());
  CHECK(OuterFunction(Coordinate{0}, 2).is_monotone());
  CHECK(OuterFunction(AdditiveComposite{0, ZeroRegularizer{}}, 2).is_monotone());
  CHECK(OuterFunction(SumLoss{LossKind::Hinge}, 2).is_monotone());
  CHECK(OuterFunction(SumLoss{LossKind::Logistic}, 2).is_monotone());
  CHECK_FALSE(OuterFunction(Norm{NormKind::L2}, 2).is_monotone());
  CHECK_FALSE(OuterFunction(SumLoss{LossKind::Abs}, 2).is_monotone());
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(eval(OuterFunction(MaxOfComponents{}, 3), DenseVector{1, 2}, kNoX), DimensionError);
  CHECK_THROWS_AS(OuterFunction(Coordinate{3}, 3), InvalidArgument);
  CHECK_THROWS_AS(OuterFunction(AdditiveComposite{0, ScaledL1{-1.0}}, 1), InvalidArgument);
}

TEST_CASE("assumption suites hold for every variant") {
  const CheckOutcome c = check_outer_assumptions(1000);
  INFO(c.detail);
  CHECK(c.passed);
}
