#include "fcopt/problem.hpp"

namespace fcopt {

CompositeProblem::CompositeProblem(OuterFunction outer, InnerMapping inner, FeasibleSet set)
    : outer_(std::move(outer)), inner_(std::move(inner)), set_(std::move(set)) {
  if (outer_.n() != inner_.n())
    throw DimensionError("CompositeProblem: outer function expects " + std::to_string(outer_.n()) +
                         " components, inner mapping has " + std::to_string(inner_.n()));
  if (inner_.d() != set_.dimension())
    throw DimensionError("CompositeProblem: inner mapping has " + std::to_string(inner_.d()) +
                         " variables, set " + set_.name() + " has " +
                         std::to_string(set_.dimension()));
  lipschitz_ = lipschitz_vector(inner_, set_);
}

CompositeProblem::CompositeProblem(const CompositeProblem& other)
    : subproblem_options(other.subproblem_options),
      outer_(other.outer_),
      inner_(other.inner_),
      set_(other.set_),
      lipschitz_(other.lipschitz_),
      fo_calls_(other.fo_calls_.load()),
      oracle_calls_(other.oracle_calls_.load()),
      lmo_calls_(other.lmo_calls_.load()) {}

double CompositeProblem::phi(const DenseVector& x) const {
  return eval(outer_, eval_map(inner_, x), x);
}

Linearization CompositeProblem::linearize(const DenseVector& x) {
  ++fo_calls_;
  return fcopt::linearize(inner_, x);
}

SubproblemSolution CompositeProblem::solve(const LinearizedModel& model, double tol) {
  ++oracle_calls_;
  try {
    SubproblemSolution s = solve_subproblem(model, outer_, set_, tol, subproblem_options);
    lmo_calls_ += s.lmo_calls;
    return s;
  } catch (const SolverFailure& failure) {
    lmo_calls_ += failure.best().lmo_calls;
    throw;
  }
}

DenseVector CompositeProblem::lmo(const DenseVector& g) {
  ++lmo_calls_;
  return fcopt::lmo(set_, g);
}

double CompositeProblem::curvature_bound() const {
  const double d = diameter(set_);
  return lipschitz_bound(outer_, lipschitz_.values, d * d, set_);
}

double CompositeProblem::fl() const { return lipschitz_bound(outer_, lipschitz_.values, 1.0, set_); }

CounterSnapshot CompositeProblem::counters() const {
  return {fo_calls_.load(), oracle_calls_.load(), lmo_calls_.load()};
}

void CompositeProblem::reset_counters() {
  fo_calls_ = 0;
  oracle_calls_ = 0;
  lmo_calls_ = 0;
}

}  // namespace fcopt
