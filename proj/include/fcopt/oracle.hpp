#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fcopt/inner.hpp"
#include "fcopt/numerics.hpp"
#include "fcopt/outer.hpp"
#include "fcopt/sets.hpp"

namespace fcopt {

/// Composite linearized model  x -> F(A x + b, x) + <u, x>.
struct LinearizedModel {
  DenseMatrix a;  // n x d
  DenseVector b;  // n
  DenseVector u;  // d, zero when absent
  // Point the model was built around; solvers use it as a warm start when feasible.
  std::optional<DenseVector> anchor;

  // Model of f around lin.point: A = J, b = f(z) - J z.
  static LinearizedModel around(const Linearization& lin, DenseVector u);
  static LinearizedModel around(const Linearization& lin);

  std::size_t n() const { return a.rows(); }
  std::size_t d() const { return a.cols(); }
};

double model_value(const LinearizedModel& model, const OuterFunction& f, const DenseVector& x);

struct SubproblemSolution {
  DenseVector x;
  double value = 0.0;         // model value at x
  double gap_estimate = 0.0;  // certified bound on value - optimum
  double dual_bound = 0.0;    // lower bound on the optimum, value - gap_estimate
  int lmo_calls = 0;
  std::string solver;
};

// Iterative subproblem solver stopped before certifying the requested tolerance.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, SubproblemSolution best)
      : Error(what), best_(std::move(best)) {}
  const SubproblemSolution& best() const { return best_; }

 private:
  SubproblemSolution best_;
};

struct SubproblemOptions {
  // Mirror-descent iterations tried before falling back to an exact method.
  int mirror_descent_iterations = 20;
  int column_generation_iterations = 2000;
  int norm_iterations = 200'000;
  int bisection_retries = 3;
};

inline constexpr std::size_t kEpigraphMaxDimension = 1000;
inline constexpr std::size_t kEpigraphMaxComponents = 64;
inline constexpr std::size_t kPolyhedralNormMaxSize = 200;

/// min over the set of F(A x + b, x) + <u, x>, dispatched on (F, set):
///   Coordinate / AdditiveComposite over psi constant on the set -> one LMO;
///   AdditiveComposite with a scaled l1 term over a box -> exact coordinatewise minimization;
///   MaxOfComponents, n = 2 -> golden-section dual search;
///   MaxOfComponents, n >= 3 -> entropic mirror descent on the dual, then the exact epigraph
///     LP on simplices or restricted-master column generation elsewhere;
///   Norm and SumLoss -> solve_norm_subproblem / projected subgradient.
/// Iterative paths certify gap_estimate <= tol * (1 + |model value at the warm start|) and
/// throw SolverFailure otherwise.
SubproblemSolution solve_subproblem(const LinearizedModel& model, const OuterFunction& f,
                                    const FeasibleSet& set, double tol,
                                    const SubproblemOptions& options = {});

/// Exact minimum of max_i(<a_i, x> + b_i) + <u, x> over the simplex from the epigraph LP
/// (variables x, t; rows a_i^T x + b_i - t <= 0 and sum x = 1).
SubproblemSolution epigraph_lp_reference(const DenseMatrix& a, const DenseVector& b,
                                         const DenseVector& u, const FeasibleSet& set);

/// Entropic mirror ascent on the concave dual g(lambda) over the n-simplex. Primal candidates
/// are the running average of LMO outputs and the average since the last power-of-two
/// iteration; the best candidate seen is returned with gap_estimate = value - best dual value.
SubproblemSolution dual_mirror_descent(const LinearizedModel& model, const FeasibleSet& set,
                                       double tol, int max_iter);

/// n = 2: golden-section search on lambda in [0, 1] to bracket width max(tol, 8 eps).
SubproblemSolution bisection_two(const LinearizedModel& model, const FeasibleSet& set, double tol);

/// Max-type model by column generation over LMO points: each round solves the restricted
/// epigraph LP over the convex hull of the current columns and prices a new column with the
/// LP multipliers. Stops at gap <= tol; throws SolverFailure at the cap.
SubproblemSolution column_generation_max(const LinearizedModel& model, const FeasibleSet& set,
                                         double tol, int max_iter,
                                         std::vector<DenseVector> seeds = {});

/// min ||A x + b|| + <u, x>. With the Euclidean norm and u = 0 it runs projected gradient on
/// the squared residual; l1 and max norms over boxes and simplices (up to
/// kPolyhedralNormMaxSize rows and columns) are solved exactly as one LP; otherwise projected
/// subgradient with step D/(G sqrt(t)). Iterative paths certify their gap with LMO-based
/// lower bounds.
SubproblemSolution solve_norm_subproblem(const LinearizedModel& model, NormKind kind,
                                         const FeasibleSet& set, double tol, int max_iter);

/// Projected subgradient on a general convex model, certified by linear minorants.
SubproblemSolution subgradient_subproblem(const LinearizedModel& model, const OuterFunction& f,
                                          const FeasibleSet& set, double tol, int max_iter);

}  // namespace fcopt
