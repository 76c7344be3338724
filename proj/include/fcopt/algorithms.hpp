#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fcopt/problem.hpp"

namespace fcopt {

struct TwoOverKPlusTwo {};
struct OneOverSqrt {};
// gamma_k = min{1, Delta_k / s_hat}
struct AdaptiveDeltaOverS {
  double s_hat = 1.0;
};
struct AccelThreeOverKPlusThree {};
using StepsizeRule =
    std::variant<TwoOverKPlusTwo, OneOverSqrt, AdaptiveDeltaOverS, AccelThreeOverKPlusThree>;

// gamma_k for iteration k >= 0. `delta` is only read by the adaptive rule.
double step_size(const StepsizeRule& rule, int k, double delta = 0.0);
std::string rule_name(const StepsizeRule& rule);

enum class RunStatus { Converged, IterationCap, TimeLimit, SolverFailure };
std::string status_name(RunStatus s);

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  // Certificate Delta_k; NaN when the method does not produce one at this row.
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::int64_t fo_calls = 0;
  std::int64_t oracle_calls = 0;
  std::int64_t lmo_calls = 0;
  double elapsed_ms = 0.0;
  // Gauss-Newton only.
  double fw_gap = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::string method;
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::IterationCap;
  std::string message;
  DenseVector final_point;

  double best_objective() const;
  // Smallest finite Delta recorded, +inf when there is none.
  double min_delta() const;
};

struct RunOptions {
  int max_iter = 1000;
  // Stop once a recorded certificate is <= target_delta (ignored when <= 0).
  double target_delta = 0.0;
  // Stop once objective - *reference <= target_residual (ignored when <= 0 or no reference).
  std::optional<double> reference;
  double target_residual = 0.0;
  double max_seconds = std::numeric_limits<double>::infinity();
  double subproblem_tol = 1e-8;
  bool verbose = false;
};

/// Delta = phi(y) - F(f(y) + J(y)(x_next - y), x_next), from a linearization at y.
double certificate_delta(const CompositeProblem& problem, const Linearization& at_y,
                         const DenseVector& x_next);
/// Same, evaluating the linearization without touching the FO counter.
double certificate_delta(const CompositeProblem& problem, const DenseVector& y,
                         const DenseVector& x_next);

/// Linearize-then-contract: x_{k+1} minimizes the linearized model at y_k,
/// y_{k+1} = (1 - gamma_k) y_k + gamma_k x_{k+1}. Row k holds y_k and its certificate Delta_k.
RunTrace basic_method(CompositeProblem& problem, const StepsizeRule& rule,
                      const RunOptions& options, const DenseVector& y0);

struct AccelParams {
  double c = 1.0;
  double delta = 1.0;
  double fl = 1.0;

  double beta(int k) const;
  double eta(int k) const;
};

/// Three-sequence accelerated scheme with gamma_k = 3/(k+3), proximal steps solved by
/// inexact_prox. Requires F monotone in u and convex inner components. Row k holds y_k.
RunTrace accelerated_method(CompositeProblem& problem, const AccelParams& params,
                            const RunOptions& options, const DenseVector& y0);

struct ProxResult {
  DenseVector point;
  int iterations = 0;    // update steps taken
  int oracle_calls = 0;  // subproblem calls, iterations + 1 unless beta = 0
  double final_delta = 0.0;
  // Per inner step t: P(u_t) and Delta_t.
  std::vector<double> prox_values;
  std::vector<double> deltas;
};

class ProxFailure : public Error {
 public:
  ProxFailure(const std::string& what, ProxResult best) : Error(what), best_(std::move(best)) {}
  const ProxResult& best() const { return best_; }

 private:
  ProxResult best_;
};

/// Approximately minimizes P(u) = F(f(z) + J(z)(u - z), u) + beta/2 ||u - x||^2 by a
/// Frank-Wolfe loop on the linearized regularizer, stopping at Delta_t <= eta.
/// One FO call (at z) per invocation; one subproblem call per inner step.
ProxResult inexact_prox(CompositeProblem& problem, const DenseVector& x, const DenseVector& z,
                        double beta, double eta, int max_iter, double subproblem_tol = 1e-8);
/// Same loop around an existing linearization at z (no FO call).
ProxResult inexact_prox(CompositeProblem& problem, const Linearization& at_z,
                        const DenseVector& x, double beta, double eta, int max_iter,
                        double subproblem_tol = 1e-8);
/// P(u) for the prox objective around `at_z`.
double prox_objective(const CompositeProblem& problem, const Linearization& at_z,
                      const DenseVector& x, double beta, const DenseVector& u);

/// y_{k+1} = project(y_k - p / sqrt(k+1) g_k). The delta column holds phi(y_k) minus the best
/// objective seen so far.
RunTrace projected_subgradient(CompositeProblem& problem, double p, const RunOptions& options,
                               const DenseVector& y0);

/// Contracted Gauss-Newton iterations for Norm outer functions: each step minimizes
/// ||f(y_k) + J(y_k)(y - y_k)|| over y in y_k + gamma_k (X - y_k). Delta holds the contracted
/// model decrease; fw_gap holds fw_gap_phi(y_k).
RunTrace gauss_newton(CompositeProblem& problem, const StepsizeRule& rule,
                      const RunOptions& options, const DenseVector& y0);

/// max_{v in X} <grad Phi(y), y - v> for Phi = ||f||^2 / 2.
double fw_gap_phi(const CompositeProblem& problem, const DenseVector& y);
double fw_gap_phi(const CompositeProblem& problem, const Linearization& at_y);

struct CurvatureEstimate {
  double empirical = 0.0;
  double analytic_bound = 0.0;
};

/// Samples F((2/gamma^2)[f(y_g) - f(x) - J(x)(y_g - x)], y_g) over random x, y in X and
/// gamma in (0, 1]; throws InternalInconsistency if the sample exceeds F(L D^2).
CurvatureEstimate estimate_curvature(const CompositeProblem& problem, int samples,
                                     std::uint64_t seed);

DenseVector default_start(const FeasibleSet& set);

}  // namespace fcopt
