#pragma once

#include <cstddef>
#include <vector>

#include "fcopt/numerics.hpp"

namespace fcopt {

enum class RowSense { LessEqual, Equal, GreaterEqual };

// min c^T x  s.t.  row_i(A) x (sense_i) b_i,  x >= 0.
struct LinearProgram {
  DenseMatrix a;
  DenseVector b;
  std::vector<RowSense> sense;
  DenseVector c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  DenseVector x;
  double objective = 0.0;
  // Row multipliers y with c - A^T y >= 0 at optimality (y_i <= 0 on <= rows for a min).
  DenseVector duals;
  int pivots = 0;
};

// Dense two-phase tableau simplex with Bland's rule.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace fcopt
