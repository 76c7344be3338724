#include "fcopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fcopt {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_((rows) * (cols + 1), 0.0), basis_(rows), reduced_(cols, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::vector<double>& reduced() { return reduced_; }
  double& objective() { return objective_; }

  // Reduced costs r = c - c_B B^{-1} A for the current basis; objective = c_B B^{-1} b.
  void price(const std::vector<double>& cost) {
    reduced_ = cost;
    objective_ = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * at(i, j);
      objective_ += cb * rhs(i);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    const double f = reduced_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= f * at(r, j);
      objective_ += f * rhs(r);
      reduced_[c] = 0.0;
    }
    basis_[r] = c;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> reduced_;
  double objective_ = 0.0;
};

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit };

// Bland's rule: lowest-index improving column, lowest-index basic variable among ratio ties.
PhaseOutcome run_phase(Tableau& t, const std::vector<bool>& barred, double eps, int max_pivots,
                       int& pivots) {
  while (true) {
    std::size_t enter = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!barred[j] && t.reduced()[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == t.cols()) return PhaseOutcome::Optimal;
    if (pivots >= max_pivots) return PhaseOutcome::IterationLimit;

    std::size_t leave = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, enter);
      if (a <= eps) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leave == t.rows() || ratio < best_ratio - 1e-14) {
        best_ratio = ratio;
        leave = i;
      } else if (ratio <= best_ratio + 1e-14 && t.basis()[i] < t.basis()[leave]) {
        best_ratio = std::min(best_ratio, ratio);
        leave = i;
      }
    }
    if (leave == t.rows()) return PhaseOutcome::Unbounded;
    t.pivot(leave, enter);
    ++pivots;
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.a.rows();
  const std::size_t n = lp.a.cols();
  if (lp.b.size() != m || lp.sense.size() != m || lp.c.size() != n)
    throw DimensionError("solve_lp: inconsistent LP dimensions");

  // Normalize to b >= 0.
  std::vector<double> flip(m, 1.0);
  std::vector<RowSense> sense = lp.sense;
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.b[i] < 0.0) {
      flip[i] = -1.0;
      if (sense[i] == RowSense::LessEqual)
        sense[i] = RowSense::GreaterEqual;
      else if (sense[i] == RowSense::GreaterEqual)
        sense[i] = RowSense::LessEqual;
    }
  }

  // Column layout: originals, then one slack/surplus per inequality, then artificials.
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (RowSense s : sense) {
    if (s != RowSense::Equal) ++n_slack;
    if (s != RowSense::LessEqual) ++n_art;
  }
  const std::size_t total = n + n_slack + n_art;
  Tableau t(m, total);
  std::vector<bool> artificial(total, false);
  std::vector<std::size_t> identity_col(m);

  double scale = 1.0;
  for (double v : lp.a.values()) scale = std::max(scale, std::abs(v));
  const double eps = 1e-11 * scale;

  std::size_t next_slack = n;
  std::size_t next_art = n + n_slack;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = flip[i] * lp.a(i, j);
    t.rhs(i) = flip[i] * lp.b[i];
    if (sense[i] == RowSense::LessEqual) {
      t.at(i, next_slack) = 1.0;
      t.basis()[i] = next_slack;
      identity_col[i] = next_slack++;
    } else {
      if (sense[i] == RowSense::GreaterEqual) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      artificial[next_art] = true;
      t.basis()[i] = next_art;
      identity_col[i] = next_art++;
    }
  }

  LpResult result;
  const int max_pivots = static_cast<int>(50 * (m + total) + 1000);

  if (n_art > 0) {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = 0; j < total; ++j)
      if (artificial[j]) phase1[j] = 1.0;
    t.price(phase1);
    std::vector<bool> none(total, false);
    if (run_phase(t, none, eps, max_pivots, result.pivots) == PhaseOutcome::IterationLimit) {
      result.status = LpStatus::IterationLimit;
      return result;
    }
    double rhs_scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) rhs_scale = std::max(rhs_scale, std::abs(lp.b[i]));
    if (t.objective() > 1e-9 * rhs_scale) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (!artificial[t.basis()[i]]) continue;
      for (std::size_t j = 0; j < total; ++j) {
        if (!artificial[j] && std::abs(t.at(i, j)) > eps) {
          t.pivot(i, j);
          ++result.pivots;
          break;
        }
      }
    }
  }

  std::vector<double> cost(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
  t.price(cost);
  const PhaseOutcome outcome = run_phase(t, artificial, eps, max_pivots, result.pivots);
  if (outcome == PhaseOutcome::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  if (outcome == PhaseOutcome::IterationLimit) {
    result.status = LpStatus::IterationLimit;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x = DenseVector(n);
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis()[i] < n) result.x[t.basis()[i]] = std::max(t.rhs(i), 0.0);
  result.objective = dot(lp.c, result.x);
  result.duals = DenseVector(m);
  for (std::size_t i = 0; i < m; ++i)
    result.duals[i] = -flip[i] * t.reduced()[identity_col[i]];
  return result;
}

}  // namespace fcopt
