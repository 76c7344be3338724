#include "fcopt/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

#include "fcopt/detail/overloaded.hpp"
#include "fcopt/random.hpp"

namespace fcopt {

namespace {

using detail::Overloaded;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Counters relative to the start of a run, so one problem can host several runs.
class RunRecorder {
 public:
  RunRecorder(RunTrace& trace, const CompositeProblem& problem, const RunOptions& options)
      : trace_(trace), problem_(problem), options_(options), base_(problem.counters()) {}

  TraceRecord& push(int k, double objective, double delta) {
    const CounterSnapshot now = problem_.counters();
    TraceRecord r;
    r.iter = k;
    r.objective = objective;
    r.delta = delta;
    r.fo_calls = now.fo_calls - base_.fo_calls;
    r.oracle_calls = now.oracle_calls - base_.oracle_calls;
    r.lmo_calls = now.lmo_calls - base_.lmo_calls;
    r.elapsed_ms = clock_.ms();
    trace_.records.push_back(r);
    if (options_.verbose)
      std::cerr << trace_.method << " k=" << k << " objective=" << objective << " delta=" << delta
                << '\n';
    return trace_.records.back();
  }

  // True once a stopping criterion other than the iteration cap is met; sets the status.
  bool should_stop(double objective, double delta) {
    if (options_.target_delta > 0.0 && std::isfinite(delta) && delta <= options_.target_delta) {
      trace_.status = RunStatus::Converged;
      return true;
    }
    if (options_.reference && options_.target_residual > 0.0 &&
        objective - *options_.reference <= options_.target_residual) {
      trace_.status = RunStatus::Converged;
      return true;
    }
    if (clock_.ms() > 1000.0 * options_.max_seconds) {
      trace_.status = RunStatus::TimeLimit;
      return true;
    }
    return false;
  }

  void fail(const std::string& message) {
    trace_.status = RunStatus::SolverFailure;
    trace_.message = message;
  }

 private:
  RunTrace& trace_;
  const CompositeProblem& problem_;
  const RunOptions& options_;
  CounterSnapshot base_;
  Stopwatch clock_;
};

void require_feasible(const CompositeProblem& problem, const DenseVector& y, const char* where) {
  if (y.size() != problem.set().dimension())
    throw DimensionError(std::string(where) + ": start point has " + std::to_string(y.size()) +
                         " entries, expected " + std::to_string(problem.set().dimension()));
  if (!contains(problem.set(), y, 1e-8))
    throw InvalidArgument(std::string(where) + ": start point is not in " + problem.set().name());
}

void require_max_iter(const RunOptions& options) {
  if (options.max_iter < 0) throw InvalidArgument("max_iter must be nonnegative");
}

}  // namespace

double step_size(const StepsizeRule& rule, int k, double delta) {
  if (k < 0) throw InvalidArgument("step_size: k must be nonnegative");
  return std::visit(
      Overloaded{[&](const TwoOverKPlusTwo&) { return 2.0 / (2.0 + k); },
                 [&](const OneOverSqrt&) { return 1.0 / std::sqrt(1.0 + k); },
                 [&](const AdaptiveDeltaOverS& a) {
                   if (!(a.s_hat > 0.0)) throw InvalidArgument("AdaptiveDeltaOverS: s_hat <= 0");
                   if (std::isnan(delta))
                     throw InvalidArgument("AdaptiveDeltaOverS: needs the certificate Delta_k");
                   return std::min(1.0, std::max(delta, 0.0) / a.s_hat);
                 },
                 [&](const AccelThreeOverKPlusThree&) { return 3.0 / (k + 3.0); }},
      rule);
}

std::string rule_name(const StepsizeRule& rule) {
  return std::visit(Overloaded{[](const TwoOverKPlusTwo&) { return "two_over_k_plus_two"; },
                               [](const OneOverSqrt&) { return "one_over_sqrt"; },
                               [](const AdaptiveDeltaOverS&) { return "adaptive"; },
                               [](const AccelThreeOverKPlusThree&) { return "three_over_k_plus_three"; }},
                    rule);
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::IterationCap: return "iteration_cap";
    case RunStatus::TimeLimit: return "time_limit";
    case RunStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

double RunTrace::best_objective() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : records) best = std::min(best, r.objective);
  return best;
}

double RunTrace::min_delta() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : records)
    if (std::isfinite(r.delta)) best = std::min(best, r.delta);
  return best;
}

double certificate_delta(const CompositeProblem& problem, const Linearization& at_y,
                         const DenseVector& x_next) {
  const DenseVector& y = at_y.point;
  const double phi_y = eval(problem.outer(), at_y.value, y);
  DenseVector model = at_y.value + multiply(at_y.jacobian, x_next - y);
  return phi_y - eval(problem.outer(), model, x_next);
}

double certificate_delta(const CompositeProblem& problem, const DenseVector& y,
                         const DenseVector& x_next) {
  return certificate_delta(problem, linearize(problem.inner(), y), x_next);
}

RunTrace basic_method(CompositeProblem& problem, const StepsizeRule& rule,
                      const RunOptions& options, const DenseVector& y0) {
  if (std::holds_alternative<AccelThreeOverKPlusThree>(rule))
    throw InvalidArgument("basic_method: the 3/(k+3) rule belongs to the accelerated method");
  require_feasible(problem, y0, "basic_method");
  require_max_iter(options);

  RunTrace trace;
  trace.method = "basic";
  RunRecorder rec(trace, problem, options);
  DenseVector y = y0;
  for (int k = 0;; ++k) {
    Linearization lin = problem.linearize(y);
    const double objective = eval(problem.outer(), lin.value, y);
    SubproblemSolution sol;
    try {
      sol = problem.solve(LinearizedModel::around(lin), options.subproblem_tol);
    } catch (const SolverFailure& e) {
      rec.push(k, objective, std::numeric_limits<double>::quiet_NaN());
      rec.fail(e.what());
      break;
    }
    const double delta = certificate_delta(problem, lin, sol.x);
    rec.push(k, objective, delta);
    if (rec.should_stop(objective, delta)) break;
    if (k >= options.max_iter) {
      trace.status = RunStatus::IterationCap;
      break;
    }
    y = lerp(y, sol.x, step_size(rule, k, delta));
  }
  trace.final_point = y;
  return trace;
}

double AccelParams::beta(int k) const { return c * fl * 3.0 / (k + 3.0); }

double AccelParams::eta(int k) const { return delta / (3.0 * (k + 1.0) * (k + 2.0)); }

double prox_objective(const CompositeProblem& problem, const Linearization& at_z,
                      const DenseVector& x, double beta, const DenseVector& u) {
  const DenseVector diff = u - x;
  const DenseVector model = at_z.value + multiply(at_z.jacobian, u - at_z.point);
  return eval(problem.outer(), model, u) + 0.5 * beta * dot(diff, diff);
}

ProxResult inexact_prox(CompositeProblem& problem, const Linearization& at_z,
                        const DenseVector& x, double beta, double eta, int max_iter,
                        double subproblem_tol) {
  if (!(beta >= 0.0)) throw InvalidArgument("inexact_prox: beta must be nonnegative");
  if (!(eta >= 0.0)) throw InvalidArgument("inexact_prox: eta must be nonnegative");
  if (max_iter < 1) throw InvalidArgument("inexact_prox: max_iter must be positive");

  const LinearizedModel base = LinearizedModel::around(at_z);
  auto model_at = [&](const DenseVector& v) { return model_value(base, problem.outer(), v); };

  ProxResult result;
  DenseVector u = x;
  double mu = model_at(u);
  for (int t = 0;; ++t) {
    LinearizedModel model = base;
    model.u = beta * (u - x);
    model.anchor = u;
    SubproblemSolution sol = problem.solve(model, subproblem_tol);
    ++result.oracle_calls;
    const DenseVector& v = sol.x;
    const double mv = model_at(v);
    const DenseVector ux = u - x;
    const double delta = mu - mv + beta * dot(ux, u - v);
    result.prox_values.push_back(mu + 0.5 * beta * dot(ux, ux));
    result.deltas.push_back(delta);

    if (beta == 0.0) {
      result.point = v;
      result.iterations = 1;
      result.final_delta = sol.gap_estimate;
      return result;
    }
    if (delta <= eta) {
      result.point = u;
      result.iterations = t;
      result.final_delta = delta;
      return result;
    }
    if (t + 1 >= max_iter) {
      result.point = u;
      result.iterations = t;
      result.final_delta = delta;
      throw ProxFailure("inexact_prox: Delta_t = " + std::to_string(delta) + " above eta = " +
                            std::to_string(eta) + " after " + std::to_string(max_iter) +
                            " subproblem calls",
                        std::move(result));
    }
    const DenseVector step = v - u;
    const double alpha = std::min(1.0, delta / (beta * dot(step, step)));
    u = lerp(u, v, alpha);
    mu = model_at(u);
  }
}

ProxResult inexact_prox(CompositeProblem& problem, const DenseVector& x, const DenseVector& z,
                        double beta, double eta, int max_iter, double subproblem_tol) {
  require_feasible(problem, x, "inexact_prox");
  require_feasible(problem, z, "inexact_prox");
  return inexact_prox(problem, problem.linearize(z), x, beta, eta, max_iter, subproblem_tol);
}

RunTrace accelerated_method(CompositeProblem& problem, const AccelParams& params,
                            const RunOptions& options, const DenseVector& y0) {
  if (!problem.outer().is_monotone() || !problem.inner().components_convex())
    throw PreconditionError("accelerated_method: requires F nondecreasing in u (" +
                            problem.outer().name() + ") and convex components f_i (" +
                            problem.inner().name() + ")");
  if (!(params.c >= 0.0) || !(params.delta > 0.0) || !(params.fl >= 0.0))
    throw InvalidArgument("accelerated_method: need c >= 0, delta > 0, F(L) >= 0");
  require_feasible(problem, y0, "accelerated_method");
  require_max_iter(options);

  constexpr int kMaxInner = 1'000'000;
  RunTrace trace;
  trace.method = "accelerated";
  RunRecorder rec(trace, problem, options);
  DenseVector y = y0;
  DenseVector x = y0;
  for (int k = 0;; ++k) {
    const double objective = problem.phi(y);
    rec.push(k, objective, std::numeric_limits<double>::quiet_NaN());
    if (rec.should_stop(objective, std::numeric_limits<double>::quiet_NaN())) break;
    if (k >= options.max_iter) {
      trace.status = RunStatus::IterationCap;
      break;
    }
    const double gamma = 3.0 / (k + 3.0);
    const DenseVector z = lerp(y, x, gamma);
    const double eta = params.eta(k);
    try {
      ProxResult prox = inexact_prox(problem, problem.linearize(z), x, params.beta(k), eta,
                                     kMaxInner, std::min(options.subproblem_tol, eta / 10.0));
      x = std::move(prox.point);
    } catch (const ProxFailure& e) {
      rec.fail(e.what());
      break;
    } catch (const SolverFailure& e) {
      rec.fail(e.what());
      break;
    }
    y = lerp(y, x, gamma);
  }
  trace.final_point = y;
  return trace;
}

RunTrace projected_subgradient(CompositeProblem& problem, double p, const RunOptions& options,
                               const DenseVector& y0) {
  if (!(p > 0.0)) throw InvalidArgument("projected_subgradient: p must be positive");
  require_feasible(problem, y0, "projected_subgradient");
  require_max_iter(options);

  RunTrace trace;
  trace.method = "subgradient";
  RunRecorder rec(trace, problem, options);
  DenseVector y = y0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0;; ++k) {
    const double objective = problem.phi(y);
    best = std::min(best, objective);
    rec.push(k, objective, objective - best);
    if (rec.should_stop(objective, std::numeric_limits<double>::quiet_NaN())) break;
    if (k >= options.max_iter) {
      trace.status = RunStatus::IterationCap;
      break;
    }
    Linearization lin = problem.linearize(y);
    DenseVector g = transpose_multiply(lin.jacobian, subgradient_weights(problem.outer(), lin.value)) +
                    regularizer_subgradient(problem.outer(), y);
    y = project(problem.set(), y - (p / std::sqrt(k + 1.0)) * g);
  }
  trace.final_point = y;
  return trace;
}

double fw_gap_phi(const CompositeProblem& problem, const Linearization& at_y) {
  const auto* norm = problem.outer().get_if<Norm>();
  if (norm == nullptr || norm->kind != NormKind::L2)
    throw PreconditionError("fw_gap_phi: requires the Euclidean norm outer function");
  const DenseVector grad = transpose_multiply(at_y.jacobian, at_y.value);
  const DenseVector v = lmo(problem.set(), grad);
  return std::max(dot(grad, at_y.point - v), 0.0);
}

double fw_gap_phi(const CompositeProblem& problem, const DenseVector& y) {
  return fw_gap_phi(problem, linearize(problem.inner(), y));
}

RunTrace gauss_newton(CompositeProblem& problem, const StepsizeRule& rule,
                      const RunOptions& options, const DenseVector& y0) {
  if (problem.outer().get_if<Norm>() == nullptr)
    throw PreconditionError("gauss_newton: requires a Norm outer function, got " +
                            problem.outer().name());
  if (std::holds_alternative<AdaptiveDeltaOverS>(rule) ||
      std::holds_alternative<AccelThreeOverKPlusThree>(rule))
    throw InvalidArgument("gauss_newton: gamma_k must be fixed before the oracle call");
  require_feasible(problem, y0, "gauss_newton");
  require_max_iter(options);
  const bool euclidean = problem.outer().get_if<Norm>()->kind == NormKind::L2;

  RunTrace trace;
  trace.method = "gauss_newton";
  RunRecorder rec(trace, problem, options);
  DenseVector y = y0;
  for (int k = 0;; ++k) {
    Linearization lin = problem.linearize(y);
    const double objective = eval(problem.outer(), lin.value, y);
    const double fw = euclidean ? fw_gap_phi(problem, lin) : std::numeric_limits<double>::quiet_NaN();
    const double gamma = step_size(rule, k);
    // Substituting y = y_k + gamma (x - y_k) turns the contracted problem into one over X.
    LinearizedModel model;
    model.a = gamma * lin.jacobian;
    model.b = lin.value - multiply(model.a, y);
    model.u = DenseVector(y.size());
    model.anchor = y;
    SubproblemSolution sol;
    try {
      sol = problem.solve(model, options.subproblem_tol);
    } catch (const SolverFailure& e) {
      rec.push(k, objective, std::numeric_limits<double>::quiet_NaN()).fw_gap = fw;
      rec.fail(e.what());
      break;
    }
    const double delta = objective - sol.value;
    rec.push(k, objective, delta).fw_gap = fw;
    if (rec.should_stop(objective, std::numeric_limits<double>::quiet_NaN())) break;
    if (k >= options.max_iter) {
      trace.status = RunStatus::IterationCap;
      break;
    }
    y = lerp(y, sol.x, gamma);
  }
  trace.final_point = y;
  return trace;
}

CurvatureEstimate estimate_curvature(const CompositeProblem& problem, int samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("estimate_curvature: samples must be >= 1");
  Rng rng(seed);
  CurvatureEstimate est;
  est.analytic_bound = problem.curvature_bound();
  est.empirical = -std::numeric_limits<double>::infinity();
  const FeasibleSet& set = problem.set();
  for (int s = 0; s < samples; ++s) {
    const DenseVector x = random_point(set, rng);
    const DenseVector y = random_point(set, rng);
    // Very small gamma only amplifies cancellation error in the remainder.
    const double gamma = rng.uniform(1e-2, 1.0);
    const DenseVector yg = lerp(x, y, gamma);
    const Linearization lin = linearize(problem.inner(), x);
    DenseVector remainder = eval_map(problem.inner(), yg) - lin.value - multiply(lin.jacobian, yg - x);
    remainder *= 2.0 / (gamma * gamma);
    est.empirical = std::max(est.empirical, eval(problem.outer(), remainder, yg));
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(est.analytic_bound));
  if (est.empirical > est.analytic_bound + slack)
    throw InternalInconsistency("estimate_curvature: sampled curvature " +
                                std::to_string(est.empirical) + " exceeds the bound " +
                                std::to_string(est.analytic_bound));
  return est;
}

DenseVector default_start(const FeasibleSet& set) { return center_point(set); }

}  // namespace fcopt
