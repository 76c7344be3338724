#pragma once

#include <atomic>
#include <cstdint>

#include "fcopt/inner.hpp"
#include "fcopt/oracle.hpp"
#include "fcopt/outer.hpp"
#include "fcopt/sets.hpp"

namespace fcopt {

struct CounterSnapshot {
  std::int64_t fo_calls = 0;
  std::int64_t oracle_calls = 0;
  std::int64_t lmo_calls = 0;
};

/// Bundle (F, f, X) of a fully composite problem min_{x in X} F(f(x), x), with the oracle
/// counters the convergence traces are measured in.
class CompositeProblem {
 public:
  CompositeProblem(OuterFunction outer, InnerMapping inner, FeasibleSet set);
  CompositeProblem(const CompositeProblem& other);
  CompositeProblem& operator=(const CompositeProblem& other) = delete;

  const OuterFunction& outer() const { return outer_; }
  const InnerMapping& inner() const { return inner_; }
  const FeasibleSet& set() const { return set_; }
  const LipschitzVector& lipschitz() const { return lipschitz_; }

  // phi(x) = F(f(x), x). Value evaluations are not counted.
  double phi(const DenseVector& x) const;
  // Value and Jacobian at x: one FO call.
  Linearization linearize(const DenseVector& x);
  // One subproblem-oracle call; internal LMO calls are logged separately.
  SubproblemSolution solve(const LinearizedModel& model, double tol);
  // One LMO call on the feasible set.
  DenseVector lmo(const DenseVector& g);

  // sup_x F(L * dsq, x); curvature_bound() = F(L D^2) bounds S, fl() = F(L).
  double curvature_bound() const;
  double fl() const;

  CounterSnapshot counters() const;
  void reset_counters();

  SubproblemOptions subproblem_options;

 private:
  OuterFunction outer_;
  InnerMapping inner_;
  FeasibleSet set_;
  LipschitzVector lipschitz_;
  std::atomic<std::int64_t> fo_calls_{0};
  std::atomic<std::int64_t> oracle_calls_{0};
  std::atomic<std::int64_t> lmo_calls_{0};
};

}  // namespace fcopt
