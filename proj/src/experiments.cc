#include "fcopt/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fcopt {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

CompositeProblem gen_simplex_problem(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("gen_simplex_problem: n must be at least 2");
  if (d < n || d < 3) throw InvalidArgument("gen_simplex_problem: need d >= max(n, 3)");
  Rng rng(seed);
  DenseVector eig(d);
  for (std::size_t j = 0; j < d; ++j)
    eig[j] = 1.0 - (1.0 - 1e-6) * static_cast<double>(j) / static_cast<double>(d - 1);

  QuadMax q;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseMatrix qi = orthonormal_q(rng.normal_matrix(d, d));
    DenseMatrix scaled = qi;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) scaled(r, c) *= eig[c];
    DenseMatrix a = multiply(scaled, qi.transpose());
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r + 1; c < d; ++c) a(r, c) = a(c, r) = 0.5 * (a(r, c) + a(c, r));
    q.a.push_back(std::move(a));
  }
  for (std::size_t i = 0; i + 2 < n; ++i) q.b.push_back(10.0 * DenseVector::unit(d, i));
  q.b.push_back(DenseVector(d));
  q.b.push_back(DenseVector(d, 10.0));
  return CompositeProblem(OuterFunction(MaxOfComponents{}, n), InnerMapping(std::move(q)),
                          FeasibleSet(Simplex{d}));
}

CompositeProblem gen_matcomp_problem(std::size_t d, std::size_t m, std::size_t r, std::size_t n,
                                     double density, std::uint64_t seed) {
  if (d == 0 || m == 0 || n == 0) throw InvalidArgument("gen_matcomp_problem: empty dimensions");
  if (r == 0 || r > std::min(d, m)) throw InvalidArgument("gen_matcomp_problem: need 1 <= r <= min(d, m)");
  if (!(density > 0.0 && density <= 1.0))
    throw InvalidArgument("gen_matcomp_problem: density must lie in (0, 1]");
  Rng rng(seed);
  MatCompResiduals mc;
  mc.rows = d;
  mc.cols = m;
  for (std::size_t i = 0; i < n; ++i) {
    const DenseMatrix u = rng.normal_matrix(d, r);
    const DenseMatrix v = rng.normal_matrix(m, r);
    mc.targets.push_back(multiply(u, v.transpose()));
    DenseMatrix mask(d, m);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < m; ++l) mask(k, l) = rng.uniform() < density ? 1.0 : 0.0;
    mc.masks.push_back(std::move(mask));
  }
  return CompositeProblem(OuterFunction(MaxOfComponents{}, n), InnerMapping(std::move(mc)),
                          FeasibleSet(NuclearBall{d, m, static_cast<double>(r)}));
}

ReferenceOptimum reference_optimum(const CompositeProblem& problem, int budget,
                                   const DenseVector& y0) {
  if (budget < 1) throw InvalidArgument("reference_optimum: budget must be positive");
  RunOptions options;
  options.max_iter = budget;
  options.subproblem_tol = 1e-10;

  CompositeProblem work(problem);
  const double fl = work.fl();
  const double dsq = std::pow(diameter(work.set()), 2);
  AccelParams params{1.0, std::max(fl * dsq, 1e-12), fl};
  const RunTrace basic = basic_method(work, TwoOverKPlusTwo{}, options, y0);
  ReferenceOptimum ref;
  ref.value = basic.best_objective();
  if (work.outer().is_monotone() && work.inner().components_convex())
    ref.value = std::min(ref.value, accelerated_method(work, params, options, y0).best_objective());
  ref.lower_bound = -std::numeric_limits<double>::infinity();
  for (const auto& r : basic.records)
    if (std::isfinite(r.delta)) ref.lower_bound = std::max(ref.lower_bound, r.objective - r.delta);
  ref.lower_bound = std::min(ref.lower_bound, ref.value);
  ref.error_bar = ref.value - ref.lower_bound;
  return ref;
}

ReferenceOptimum reference_optimum(const CompositeProblem& problem, int budget) {
  return reference_optimum(problem, budget, default_start(problem.set()));
}

bool ExperimentResult::all_succeeded() const {
  for (const auto& [name, trace] : traces)
    if (trace.status == RunStatus::SolverFailure) return false;
  return true;
}

CompositeProblem build_problem(const ExperimentConfig& config) {
  config.validate();
  if (config.family == "simplex") return gen_simplex_problem(config.d, config.n, config.seed);
  if (config.family == "matcomp")
    return gen_matcomp_problem(config.d, config.m, config.r, config.n, config.density,
                               config.seed);
  throw ConfigError("family '" + config.family +
                    "' has no generator; pass the problem to run_experiment directly");
}

DenseVector default_start(const ExperimentConfig& config, const CompositeProblem& problem) {
  if (config.family == "simplex") return DenseVector::unit(problem.set().dimension(), 2);
  if (config.family == "matcomp") return DenseVector(problem.set().dimension());
  return default_start(problem.set());
}

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.delta) << ','
        << r.fo_calls << ',' << r.oracle_calls << ',' << r.lmo_calls << ','
        << format_double(r.elapsed_ms) << '\n';
  }
  return out.str();
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path) {
  write_text(path, trace_csv(trace));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const CompositeProblem problem = build_problem(config);
  return run_experiment(config, problem, default_start(config, problem));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const CompositeProblem& problem,
                                const DenseVector& y0) {
  config.validate();
  ExperimentResult result;
  result.reference = reference_optimum(problem, config.effective_reference_budget(), y0);

  RunOptions base;
  base.max_iter = config.max_iter;
  base.max_seconds = config.max_seconds;
  base.subproblem_tol = config.subproblem_tol;
  base.reference = result.reference.value;
  base.verbose = config.verbose;

  for (const std::string& method : config.methods) {
    CompositeProblem work(problem);
    work.reset_counters();
    RunOptions options = base;
    RunTrace trace;
    try {
      if (method == "basic") {
        options.max_iter = config.basic.max_iter.value_or(config.max_iter);
        StepsizeRule rule = TwoOverKPlusTwo{};
        if (config.basic.rule == "one_over_sqrt") rule = OneOverSqrt{};
        if (config.basic.rule == "adaptive")
          rule = AdaptiveDeltaOverS{config.basic.s_hat.value_or(work.curvature_bound())};
        trace = basic_method(work, rule, options, y0);
      } else if (method == "accelerated") {
        options.max_iter = config.accelerated.max_iter.value_or(config.max_iter);
        AccelParams params{config.accelerated.c, config.accelerated_delta(), work.fl()};
        trace = accelerated_method(work, params, options, y0);
      } else if (method == "subgradient") {
        options.max_iter = config.subgradient.max_iter.value_or(config.max_iter);
        trace = projected_subgradient(work, config.subgradient_p(), options, y0);
      }
    } catch (const Error& e) {
      trace.method = method;
      trace.status = RunStatus::SolverFailure;
      trace.message = e.what();
    }
    result.traces[method] = std::move(trace);
  }

  if (config.output.empty()) return result;
  const std::filesystem::path dir(config.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  nlohmann::json summary;
  summary["family"] = config.family;
  summary["seed"] = config.seed;
  summary["reference_optimum"] = {{"value", json_number(result.reference.value)},
                                  {"lower_bound", json_number(result.reference.lower_bound)},
                                  {"error_bar", json_number(result.reference.error_bar)}};
  for (const auto& [method, trace] : result.traces) {
    write_trace_csv(trace, dir / (method + ".csv"));
    nlohmann::json entry;
    const TraceRecord* last = trace.records.empty() ? nullptr : &trace.records.back();
    entry["final_objective"] = json_number(last ? last->objective : NAN);
    entry["final_delta"] = json_number(last ? last->delta : NAN);
    entry["fo_calls"] = last ? last->fo_calls : 0;
    entry["oracle_calls"] = last ? last->oracle_calls : 0;
    entry["lmo_calls"] = last ? last->lmo_calls : 0;
    entry["iterations"] = last ? last->iter : 0;
    entry["status"] = status_name(trace.status);
    if (!trace.message.empty()) entry["message"] = trace.message;
    summary["methods"][method] = std::move(entry);
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_text(dir / "config.yaml", to_yaml(config));
  return result;
}

}  // namespace fcopt
