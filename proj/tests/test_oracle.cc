#include <doctest.h>

#include <array>
#include <cmath>

#include "fcopt/oracle.hpp"
#include "fcopt/problem.hpp"
#include "fcopt/random.hpp"

using namespace fcopt;

namespace {

LinearizedModel model(DenseMatrix a, DenseVector b, DenseVector u = {}) {
  if (u.empty()) u = DenseVector(a.cols());
  return LinearizedModel{std::move(a), std::move(b), std::move(u), std::nullopt};
}

// Draws A, then b, then u (scaled by u_scale; zero when u_scale is 0) in a fixed order.
LinearizedModel random_model(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0,
                             double u_scale = 0.0) {
  DenseMatrix a = scale * rng.normal_matrix(n, d);
  DenseVector b = scale * rng.normal_vector(n);
  DenseVector u = u_scale > 0.0 ? u_scale * rng.normal_vector(d) : DenseVector(d);
  return model(std::move(a), std::move(b), std::move(u));
}

LinearizedModel symmetric_pair() { return model(DenseMatrix{{1, 0}, {0, 1}}, DenseVector(2)); }

const OuterFunction kMax2(MaxOfComponents{}, 2);

// Brute-force minimum of max_i(a_i x + b_i) + <u, x> over a grid of the d = 4 simplex.
double grid_minimum(const LinearizedModel& m, int steps) {
  const std::size_t n = m.n();
  // Row i of the model with u folded in, as c_i x + b_i.
  std::vector<std::array<double, 4>> c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < 4; ++j) c[i][j] = m.a(i, j) + m.u[j];
  const double h = 1.0 / steps;
  double best = INFINITY;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j)
      for (int k = 0; i + j + k <= steps; ++k) {
        const double x0 = i * h, x1 = j * h, x2 = k * h, x3 = (steps - i - j - k) * h;
        double top = -INFINITY;
        for (std::size_t r = 0; r < n; ++r)
          top = std::max(top, c[r][0] * x0 + c[r][1] * x1 + c[r][2] * x2 + c[r][3] * x3 + m.b[r]);
        best = std::min(best, top);
      }
  return best;
}

double row_lipschitz(const LinearizedModel& m) {
  double lip = 0.0;
  for (std::size_t i = 0; i < m.n(); ++i) lip = std::max(lip, norm_inf(m.a.row_vector(i) + m.u));
  return lip;
}

}  // namespace

TEST_CASE("symmetric two-component max on the 2-simplex") {
  const SubproblemSolution s = solve_subproblem(symmetric_pair(), kMax2, FeasibleSet(Simplex{2}), 1e-10);
  CHECK(s.x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(s.x[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(s.value == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("coordinate outer function reduces to one LMO") {
  const SubproblemSolution s = solve_subproblem(model(DenseMatrix{{3, 1, 2}}, DenseVector(1)),
                                                OuterFunction(Coordinate{0}, 1), FeasibleSet(Simplex{3}), 1e-8);
  CHECK(s.x == DenseVector{0, 1, 0});
  CHECK(s.value == 1.0);
  CHECK(s.lmo_calls == 1);
  CHECK(s.gap_estimate == 0.0);
}

TEST_CASE("three-component max agrees with the LP reference") {
  Rng rng(31);
  const FeasibleSet set(Simplex{3});
  const OuterFunction f(MaxOfComponents{}, 3);
  for (int t = 0; t < 20; ++t) {
    const LinearizedModel m = random_model(rng, 3, 3);
    const SubproblemSolution s = solve_subproblem(m, f, set, 1e-8);
    const double ref = epigraph_lp_reference(m.a, m.b, m.u, set).value;
    CHECK(std::abs(s.value - ref) <= 1e-4 * (1.0 + std::abs(ref)));
    CHECK(contains(set, s.x, 1e-8));
  }
}

TEST_CASE("LP reference examples") {
  const FeasibleSet s2(Simplex{2});
  const SubproblemSolution one = epigraph_lp_reference(DenseMatrix{{2, 1}}, DenseVector(1), DenseVector(2), s2);
  CHECK(one.x == DenseVector{0, 1});
  CHECK(one.value == doctest::Approx(1.0));
  const SubproblemSolution two = epigraph_lp_reference(DenseMatrix{{1, 0}, {0, 1}}, DenseVector(2), DenseVector(2), s2);
  CHECK(two.x[0] == doctest::Approx(0.5));
  CHECK(two.value == doctest::Approx(0.5));
  CHECK(two.gap_estimate == 0.0);
  CHECK_THROWS_AS(epigraph_lp_reference(DenseMatrix{{1, 0}}, DenseVector(1), DenseVector(2),
                                        FeasibleSet(L2Ball{DenseVector(2), 1.0})),
                  UnsupportedCombination);
  CHECK_THROWS_AS(epigraph_lp_reference(DenseMatrix(1, kEpigraphMaxDimension + 1), DenseVector(1),
                                        DenseVector(kEpigraphMaxDimension + 1),
                                        FeasibleSet(Simplex{kEpigraphMaxDimension + 1})),
                  UnsupportedSizeError);
}

TEST_CASE("LP reference matches a fine grid on the 4-simplex") {
  Rng rng(32);
  constexpr int steps = 1000;
  const FeasibleSet set(Simplex{4});
  {
    const LinearizedModel m = random_model(rng, 3, 4, 1.0, 0.2);
    const double ref = epigraph_lp_reference(m.a, m.b, m.u, set).value;
    const double grid = grid_minimum(m, steps);
    CHECK(ref <= grid + 1e-12);
    CHECK(grid - ref <= row_lipschitz(m) * 4.0 / steps);
  }
}

TEST_CASE("mirror descent on the symmetric pair") {
  const SubproblemSolution s = dual_mirror_descent(symmetric_pair(), FeasibleSet(Simplex{2}), 1e-6, 1'000'000);
  CHECK(s.gap_estimate <= 1e-6);
  CHECK(std::abs(s.value - 0.5) <= 1e-6);
}

TEST_CASE("mirror descent certificate is the exact primal-dual difference") {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const LinearizedModel m = random_model(rng, 4, 5);
    SubproblemSolution s;
    try {
      s = dual_mirror_descent(m, FeasibleSet(Simplex{5}), 1e-3, 2000);
    } catch (const SolverFailure& f) {
      s = f.best();
    }
    CHECK(s.gap_estimate >= 0.0);
    CHECK(s.value - s.dual_bound == doctest::Approx(s.gap_estimate));
  }
}

TEST_CASE("mirror descent on a nuclear ball") {
  Rng rng(34);
  const FeasibleSet set(NuclearBall{4, 3, 2.0});
  // Rows of roughly unit norm.
  const LinearizedModel m = random_model(rng, 5, 12, 0.2);
  const SubproblemSolution s = dual_mirror_descent(m, set, 1e-3, 5000);
  CHECK(s.gap_estimate <= 1e-3);
  CHECK(contains(set, s.x, 1e-8));
  SubproblemSolution longer;
  try {
    longer = dual_mirror_descent(m, set, 1e-12, 100000);
  } catch (const SolverFailure& f) {
    longer = f.best();
  }
  // Every dual value is a lower bound on every primal value.
  CHECK(s.value >= longer.dual_bound - 1e-12);
  CHECK(longer.value >= s.dual_bound - 1e-12);
}

TEST_CASE("mirror descent throws at its cap with the best point") {
  Rng rng(35);
  const LinearizedModel m = random_model(rng, 4, 6);
  try {
    dual_mirror_descent(m, FeasibleSet(Simplex{6}), 1e-14, 3);
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& f) {
    CHECK(contains(FeasibleSet(Simplex{6}), f.best().x, 1e-12));
    CHECK(f.best().gap_estimate > 1e-14);
  }
}

TEST_CASE("bisection examples") {
  const FeasibleSet s3(Simplex{3});
  const LinearizedModel same = model(DenseMatrix{{3, 1, 2}, {3, 1, 2}}, DenseVector{0.5, 0.5});
  const SubproblemSolution d = bisection_two(same, s3, 1e-9);
  CHECK(d.x == DenseVector{0, 1, 0});
  CHECK(d.value == doctest::Approx(1.5));

  const SubproblemSolution sym = bisection_two(symmetric_pair(), FeasibleSet(Simplex{2}), 1e-9);
  CHECK(std::abs(sym.value - 0.5) <= 1e-8);
  const SubproblemSolution tiny = bisection_two(symmetric_pair(), FeasibleSet(Simplex{2}), 1e-300);
  CHECK(std::abs(tiny.value - 0.5) <= 1e-12);
  CHECK(tiny.lmo_calls <= 100);

  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    const LinearizedModel m = random_model(rng, 2, 3, 1.0, 0.3);
    const double tol = 1e-7;
    const SubproblemSolution s = bisection_two(m, s3, tol);
    const double ref = epigraph_lp_reference(m.a, m.b, m.u, s3).value;
    CHECK(std::abs(s.value - ref) <= 10.0 * tol * (1.0 + std::abs(ref)));
    CHECK(s.lmo_calls <= int(std::ceil(std::log(1.0 / tol) / std::log(1.618))) + 2 + 2);
  }
}

TEST_CASE("column generation solves max models over balls") {
  Rng rng(37);
  const FeasibleSet ball(L2Ball{DenseVector(4), 1.0});
  for (int t = 0; t < 5; ++t) {
    const LinearizedModel m = random_model(rng, 4, 4);
    const SubproblemSolution s = column_generation_max(m, ball, 1e-6, 5000);
    CHECK(s.gap_estimate <= 1e-6);
    CHECK(contains(ball, s.x, 1e-9));
    for (int j = 0; j < 200; ++j)
      CHECK(s.value <= model_value(m, OuterFunction(MaxOfComponents{}, 4), random_point(ball, rng)) + 1e-6);
  }
}

TEST_CASE("norm subproblem examples") {
  const FeasibleSet box(Box{DenseVector(3), DenseVector(3, 1.0)});
  const DenseVector c{0.2, 0.9, 0.5};
  const SubproblemSolution fit =
      solve_norm_subproblem(model(DenseMatrix::identity(3), -1.0 * c), NormKind::L2, box, 1e-8, 200000);
  CHECK(norm_inf(fit.x - c) <= 1e-4);
  CHECK(fit.value <= 1e-8);

  const SubproblemSolution zero =
      solve_norm_subproblem(model(DenseMatrix(2, 3), DenseVector(2)), NormKind::L1, box, 1e-8, 1000);
  CHECK(zero.value == 0.0);
  CHECK(contains(box, zero.x, 0.0));
}

TEST_CASE("norm subproblem matches a grid on the unit box") {
  Rng rng(38);
  const FeasibleSet box(Box{DenseVector(3), DenseVector(3, 1.0)});
  for (NormKind kind : {NormKind::L2, NormKind::L1, NormKind::LInf}) {
    const LinearizedModel m = random_model(rng, 4, 3);
    const OuterFunction f(Norm{kind}, 4);
    const SubproblemSolution s = solve_norm_subproblem(m, kind, box, 1e-6, 400000);
    double grid = INFINITY;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j)
        for (int k = 0; k <= 100; ++k)
          grid = std::min(grid, model_value(m, f, DenseVector{i / 100.0, j / 100.0, k / 100.0}));
    // Any box point is within h sqrt(d) / 2 of the grid, and each norm of A dx is at most
    // sum_i ||a_i|| ||dx||.
    double lip = 0.0;
    for (std::size_t i = 0; i < 4; ++i) lip += norm2(m.a.row_vector(i));
    CHECK(s.value <= grid + 1e-9);
    CHECK(grid - s.value <= lip * 0.01 * std::sqrt(3.0) / 2.0);
  }
}

TEST_CASE("returned gaps bound the true suboptimality") {
  Rng rng(39);
  const FeasibleSet set(Simplex{6});
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng.index(4);
    const LinearizedModel m = random_model(rng, n, 6, 1.0, 0.1);
    const SubproblemSolution s = solve_subproblem(m, OuterFunction(MaxOfComponents{}, n), set, 1e-6);
    const double ref = epigraph_lp_reference(m.a, m.b, m.u, set).value;
    CHECK(s.value - ref <= s.gap_estimate + 1e-12);
    CHECK(s.gap_estimate >= 0.0);
    CHECK(contains(set, s.x, 1e-8));
  }
}

TEST_CASE("separable l1 model on a box is solved exactly") {
  const FeasibleSet box(Box{DenseVector(2, -1.0), DenseVector(2, 1.0)});
  const OuterFunction f(AdditiveComposite{0, ScaledL1{0.5}}, 1);
  const LinearizedModel m = model(DenseMatrix{{1.0, -0.2}}, DenseVector{0.0});
  const SubproblemSolution s = solve_subproblem(m, f, box, 1e-8);
  CHECK(s.x[0] == doctest::Approx(-1.0));
  CHECK(s.x[1] == doctest::Approx(0.0));
  CHECK(s.value == doctest::Approx(-0.5));
}

TEST_CASE("each problem solve counts one oracle call") {
  CompositeProblem p(OuterFunction(MaxOfComponents{}, 3),
                     InnerMapping(LinearSystem{DenseMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, DenseVector(3)}),
                     FeasibleSet(Simplex{3}));
  const Linearization lin = p.linearize(DenseVector{1, 0, 0});
  const SubproblemSolution s = p.solve(LinearizedModel::around(lin), 1e-8);
  const CounterSnapshot c = p.counters();
  CHECK(c.fo_calls == 1);
  CHECK(c.oracle_calls == 1);
  CHECK(c.lmo_calls == s.lmo_calls);
  CHECK(s.value == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  p.reset_counters();
  CHECK(p.counters().oracle_calls == 0);
}
