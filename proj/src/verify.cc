#include "fcopt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fcopt {

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

DenseMatrix random_psd(Rng& rng, std::size_t d) {
  const DenseMatrix g = rng.normal_matrix(d, d);
  DenseMatrix a = (1.0 / static_cast<double>(d)) * multiply(g, g.transpose());
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r + 1; c < d; ++c) a(r, c) = a(c, r) = 0.5 * (a(r, c) + a(c, r));
  return a;
}

QuadMax random_quadmax(Rng& rng, std::size_t d, std::size_t n) {
  QuadMax q;
  for (std::size_t i = 0; i < n; ++i) {
    q.a.push_back(random_psd(rng, d));
    q.b.push_back(rng.normal_vector(d));
  }
  return q;
}

Box unit_box(std::size_t d, double lo = 0.0, double hi = 1.0) {
  return Box{DenseVector(d, lo), DenseVector(d, hi)};
}

// First row whose residual is <= eps; -1 when never reached.
std::int64_t fo_to_reach(const RunTrace& trace, double reference, double eps) {
  for (const auto& r : trace.records)
    if (r.objective - reference <= eps) return r.fo_calls;
  return -1;
}

struct Tally {
  long checks = 0;
  long violations = 0;
  double worst = 0.0;  // largest violation relative to the allowed slack scale
  std::string first;

  void expect_le(double lhs, double rhs, double slack, const std::string& what) {
    ++checks;
    if (lhs <= rhs + slack) return;
    ++violations;
    worst = std::max(worst, lhs - rhs);
    if (first.empty()) first = what + ": " + fmt(lhs) + " > " + fmt(rhs);
  }
};

}  // namespace

std::vector<NamedProblem> catalog_instances(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NamedProblem> out;
  out.push_back({"simplex_quadmax", gen_simplex_problem(10, 3, seed), true});
  out.push_back({"matcomp_small", gen_matcomp_problem(6, 4, 2, 3, 0.5, seed), true});
  out.push_back({"linear_norm_box",
                 CompositeProblem(OuterFunction(Norm{NormKind::L2}, 4),
                                  InnerMapping(LinearSystem{rng.normal_matrix(4, 3), rng.normal_vector(4)}),
                                  FeasibleSet(unit_box(3))),
                 true});
  out.push_back({"quad_additive_box",
                 CompositeProblem(OuterFunction(AdditiveComposite{1, ScaledL1{0.5}}, 2),
                                  InnerMapping(random_quadmax(rng, 4, 2)),
                                  FeasibleSet(unit_box(4, -1.0, 1.0))),
                 true});
  out.push_back({"quad_hinge_ball",
                 CompositeProblem(OuterFunction(SumLoss{LossKind::Hinge}, 3),
                                  InnerMapping(random_quadmax(rng, 4, 3)),
                                  FeasibleSet(L2Ball{DenseVector(4), 1.0})),
                 true});
  out.push_back({"quad_logistic_simplex",
                 CompositeProblem(OuterFunction(SumLoss{LossKind::Logistic}, 2),
                                  InnerMapping(random_quadmax(rng, 5, 2)),
                                  FeasibleSet(Simplex{5})),
                 true});
  {
    const DenseMatrix a = rng.normal_matrix(3, 4);
    const DenseVector b = rng.normal_vector(3);
    const DenseMatrix c = 0.5 * rng.normal_matrix(3, 4);
    out.push_back({"sinusoid_max_box",
                   CompositeProblem(OuterFunction(MaxOfComponents{}, 3),
                                    InnerMapping(SinusoidMap{a, b, c}), FeasibleSet(unit_box(4))),
                   false});
  }
  return out;
}

CheckOutcome check_outer_assumptions(int draws) {
  Timer timer;
  CheckOutcome out{"outer assumption suites", false, "", 0.0};
  constexpr std::size_t n = 4;
  const std::vector<OuterFunction> variants = {
      OuterFunction(MaxOfComponents{}, n),
      OuterFunction(Norm{NormKind::L1}, n),
      OuterFunction(Norm{NormKind::L2}, n),
      OuterFunction(Norm{NormKind::LInf}, n),
      OuterFunction(Coordinate{2}, n),
      OuterFunction(AdditiveComposite{1, ZeroRegularizer{}}, n),
      OuterFunction(AdditiveComposite{3, ScaledL1{0.7}}, n),
      OuterFunction(SumLoss{LossKind::Abs}, n),
      OuterFunction(SumLoss{LossKind::Hinge}, n),
      OuterFunction(SumLoss{LossKind::Logistic}, n),
  };
  Rng rng(kDefaultSeed);
  std::ostringstream detail;
  bool ok = true;
  for (const auto& f : variants) {
    Tally tally;
    bool witness = false;
    const bool logistic = f.get_if<SumLoss>() && f.get_if<SumLoss>()->loss == LossKind::Logistic;
    for (int k = 0; k < draws; ++k) {
      const double spread = std::pow(10.0, rng.uniform(-1.0, 1.0));
      const DenseVector u = spread * rng.normal_vector(n);
      const DenseVector v = spread * rng.normal_vector(n);
      const DenseVector x = rng.normal_vector(n);
      const DenseVector x2 = rng.normal_vector(n);
      const double fu = eval(f, u, x);
      const double fv = eval(f, v, x);

      const double gamma = rng.uniform(1.0, 10.0);
      const double fgu = eval(f, gamma * u, x);
      const double sub_slack = logistic ? (gamma - 1.0) * n * std::log(2.0) : 0.0;
      tally.expect_le(fgu, gamma * fu + sub_slack,
                      1e-12 * (1.0 + std::abs(fgu) + gamma * std::abs(fu)), "subhomogeneity");

      const double t = rng.uniform(0.0, 5.0);
      const double fsum = eval(f, u + t * v, x);
      tally.expect_le(fsum, fu + t * fv, 1e-12 * (1.0 + std::abs(fsum) + std::abs(fu) + t * std::abs(fv)),
                      "subadditivity");

      const double theta = rng.uniform();
      const double fmix = eval(f, lerp(u, v, theta), lerp(x, x2, theta));
      const double fv2 = eval(f, v, x2);
      tally.expect_le(fmix, (1.0 - theta) * fu + theta * fv2,
                      1e-12 * (1.0 + std::abs(fmix) + std::abs(fu) + std::abs(fv2)), "joint convexity");

      DenseVector up = u;
      for (std::size_t i = 0; i < n; ++i) up[i] += std::abs(spread * rng.normal());
      const double fup = eval(f, up, x);
      if (f.is_monotone())
        tally.expect_le(fu, fup, 1e-12 * (1.0 + std::abs(fu) + std::abs(fup)), "monotonicity");
      else if (fu > fup + 1e-12 * (1.0 + std::abs(fu)))
        witness = true;

      const DenseVector lambda = subgradient_weights(f, u);
      const double lin = fu + dot(lambda, v - u);
      tally.expect_le(lin, fv, 1e-10 * (1.0 + std::abs(fu) + std::abs(fv) + std::abs(lin)),
                      "subgradient inequality");
    }
    const bool flag_ok = f.is_monotone() || witness;
    if (tally.violations > 0 || !flag_ok) {
      ok = false;
      detail << f.name() << ": " << tally.violations << " violations"
             << (tally.first.empty() ? "" : " (" + tally.first + ")")
             << (flag_ok ? "" : ", no monotonicity witness") << "; ";
    }
  }
  out.passed = ok;
  out.detail = ok ? std::to_string(variants.size()) + " variants x " + std::to_string(draws) +
                        " draws, 0 violations"
                  : detail.str();
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_progress_bound(int triples) {
  Timer timer;
  CheckOutcome out{"linearization progress bound", false, "", 0.0};
  Rng rng(kDefaultSeed + 1);
  Tally tally;
  int instances = 0;
  for (const auto& inst : catalog_instances()) {
    const CompositeProblem& p = inst.problem;
    const double s_bound = p.curvature_bound();
    ++instances;
    for (int k = 0; k < triples; ++k) {
      const DenseVector x = random_point(p.set(), rng);
      const DenseVector y = random_point(p.set(), rng);
      const double gamma = rng.uniform();
      const DenseVector yg = lerp(x, y, gamma);
      const Linearization lin = linearize(p.inner(), x);
      const double phi = p.phi(yg);
      const double model = eval(p.outer(), lin.value + multiply(lin.jacobian, yg - x), yg);
      const double rhs = model + 0.5 * gamma * gamma * s_bound;
      tally.expect_le(phi, rhs, 1e-9 * (1.0 + std::abs(phi) + std::abs(model)), inst.name);
    }
  }
  out.passed = tally.violations == 0;
  out.detail = std::to_string(instances) + " instances x " + std::to_string(triples) +
               " triples, " + std::to_string(tally.violations) + " violations" +
               (tally.first.empty() ? "" : " (" + tally.first + ")");
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_prox_rates() {
  Timer timer;
  CheckOutcome out{"inexact prox rates", false, "", 0.0};
  constexpr int kSteps = 200;
  constexpr int kLongRun = 3000;
  Tally rate;
  Tally certificate;
  Tally exit_rule;
  double worst_ratio = 0.0;
  for (int inst = 0; inst < 10; ++inst) {
    CompositeProblem problem = gen_simplex_problem(10, 3, kDefaultSeed + 100 + inst);
    Rng rng(kDefaultSeed + 200 + inst);
    const DenseVector x = random_point(problem.set(), rng);
    const DenseVector z = random_point(problem.set(), rng);
    const Linearization lin = linearize(problem.inner(), z);
    const double dsq = std::pow(diameter(problem.set()), 2);
    for (double beta : {0.1, 1.0, 10.0}) {
      auto run = [&](int steps, double eta) {
        try {
          return inexact_prox(problem, lin, x, beta, eta, steps + 1, 1e-11);
        } catch (const ProxFailure& f) {
          return f.best();
        }
      };
      const ProxResult shortrun = run(kSteps, 0.0);
      const ProxResult longrun = run(kLongRun, 0.0);
      // Delta_t >= P(u_t) - P*, so max_t (P(u_t) - Delta_t) is a certified lower bound.
      double p_lb = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < longrun.deltas.size(); ++t)
        p_lb = std::max(p_lb, longrun.prox_values[t] - longrun.deltas[t]);
      double min_delta = std::numeric_limits<double>::infinity();
      for (std::size_t t = 1; t < shortrun.prox_values.size(); ++t) {
        const double bound = 2.0 * beta * dsq / (t + 1.0);
        const double residual = shortrun.prox_values[t] - p_lb;
        worst_ratio = std::max(worst_ratio, residual / bound);
        rate.expect_le(residual, bound, 1e-9, "P(u_t) - P*");
        min_delta = std::min(min_delta, shortrun.deltas[t]);
        certificate.expect_le(min_delta, 6.0 * beta * dsq / t, 1e-9, "min Delta_t");
      }
      const double eta = 1e-3 * beta;
      const ProxResult stopped = inexact_prox(problem, lin, x, beta, eta, 100000, 1e-11);
      exit_rule.expect_le(stopped.final_delta, eta, 0.0, "returned Delta");
    }
  }
  out.passed = rate.violations == 0 && certificate.violations == 0 && exit_rule.violations == 0;
  std::ostringstream d;
  d << "30 runs; rate violations " << rate.violations << ", certificate violations "
    << certificate.violations << ", exit violations " << exit_rule.violations
    << "; worst residual/bound " << fmt(worst_ratio);
  if (!rate.first.empty()) d << " (" << rate.first << ")";
  out.detail = d.str();
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_oracle_equivalence() {
  Timer timer;
  CheckOutcome out{"subproblem oracle equivalence", false, "", 0.0};
  Rng rng(kDefaultSeed + 2);
  Tally md;
  Tally bis;
  Tally grid;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t d = 2 + rng.index(9);
    const std::size_t n = 2 + rng.index(4);
    LinearizedModel m{rng.normal_matrix(n, d), rng.normal_vector(n), 0.3 * rng.normal_vector(d),
                      std::nullopt};
    const FeasibleSet set(Simplex{d});
    const double ref = epigraph_lp_reference(m.a, m.b, m.u, set).value;
    const double tol = 1e-4 * (1.0 + std::abs(ref));
    SubproblemSolution s;
    try {
      s = dual_mirror_descent(m, set, 0.5 * tol, 400000);
    } catch (const SolverFailure& f) {
      s = f.best();
    }
    md.expect_le(std::abs(s.value - ref), tol, 0.0, "mirror descent n=" + std::to_string(n));
    if (n == 2) {
      const SubproblemSolution b = bisection_two(m, set, 1e-9);
      bis.expect_le(std::abs(b.value - ref), tol, 0.0, "bisection");
    }
  }
  for (int inst = 0; inst < 5; ++inst) {
    constexpr std::size_t d = 4;
    constexpr int steps = 100;
    const double h = 1.0 / steps;
    const std::size_t n = 2 + rng.index(3);
    LinearizedModel m{rng.normal_matrix(n, d), rng.normal_vector(n), DenseVector(d), std::nullopt};
    const FeasibleSet set(Simplex{d});
    const OuterFunction fmax(MaxOfComponents{}, n);
    const double ref = epigraph_lp_reference(m.a, m.b, m.u, set).value;
    double best = std::numeric_limits<double>::infinity();
    DenseVector x(d);
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; i + j <= steps; ++j)
        for (int k = 0; i + j + k <= steps; ++k) {
          x[0] = i * h;
          x[1] = j * h;
          x[2] = k * h;
          x[3] = (steps - i - j - k) * h;
          best = std::min(best, model_value(m, fmax, x));
        }
    // Every simplex point is within l1 distance d*h of a grid point.
    double lip = 0.0;
    for (std::size_t i = 0; i < n; ++i) lip = std::max(lip, norm_inf(m.a.row_vector(i)));
    grid.expect_le(ref, best, 1e-12, "LP above grid minimum");
    grid.expect_le(best - ref, lip * d * h, 1e-12, "grid gap");
  }
  out.passed = md.violations == 0 && bis.violations == 0 && grid.violations == 0;
  std::ostringstream d;
  d << "100 instances: mirror descent " << md.violations << " disagreements, bisection "
    << bis.violations << "/" << bis.checks << "; grid " << grid.violations << "/" << grid.checks;
  for (const Tally* t : {&md, &bis, &grid})
    if (!t->first.empty()) d << " (" << t->first << ")";
  out.detail = d.str();
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_gauss_newton() {
  Timer timer;
  CheckOutcome out{"gauss-newton stationarity decay", false, "", 0.0};
  Rng rng(kDefaultSeed + 3);
  const DenseMatrix a = rng.normal_matrix(3, 5);
  const DenseVector b = rng.normal_vector(3);
  const DenseMatrix c = 0.5 * rng.normal_matrix(3, 5);
  CompositeProblem problem(OuterFunction(Norm{NormKind::L2}, 3), InnerMapping(SinusoidMap{a, b, c}),
                           FeasibleSet(unit_box(5)));
  RunOptions options;
  options.max_iter = 2000;
  const RunTrace trace = gauss_newton(problem, OneOverSqrt{}, options, center_point(problem.set()));
  if (trace.records.empty() || trace.status == RunStatus::SolverFailure) {
    out.detail = "run failed: " + trace.message;
    out.seconds = timer.seconds();
    return out;
  }
  const double g0 = trace.records.front().fw_gap;
  double running = std::numeric_limits<double>::infinity();
  bool monotone = true;
  int reached = -1;
  double prev = running;
  for (const auto& r : trace.records) {
    running = std::min(running, r.fw_gap);
    if (running > prev) monotone = false;
    prev = running;
    if (reached < 0 && running <= g0 / 10.0) reached = r.iter;
  }
  out.passed = g0 > 0.0 && reached >= 0 && monotone;
  out.detail = "fw gap " + fmt(g0) + " -> " + fmt(running) +
               (reached >= 0 ? ", below a tenth at k = " + std::to_string(reached)
                             : ", never below a tenth") +
               (monotone ? "" : ", running minimum increased");
  out.seconds = timer.seconds();
  return out;
}

namespace {

DenseVector enumerate_simplex_projection(const DenseVector& y) {
  const std::size_t d = y.size();
  DenseVector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    double sum_s = 0.0;
    int size = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (1u << i)) {
        sum_s += y[i];
        ++size;
      }
    const double tau = (sum_s - 1.0) / size;
    DenseVector x(d);
    bool feasible = true;
    for (std::size_t i = 0; i < d; ++i)
      if (mask & (1u << i)) {
        x[i] = y[i] - tau;
        if (x[i] < -1e-15) feasible = false;
      }
    if (!feasible) continue;
    const double dist = norm2(x - y);
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

DenseVector enumerate_box_projection(const DenseVector& y, const Box& box) {
  const std::size_t d = y.size();
  DenseVector best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < d; ++i) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    DenseVector x(d);
    bool feasible = true;
    std::size_t c = code;
    for (std::size_t i = 0; i < d; ++i, c /= 3) {
      switch (c % 3) {
        case 0: x[i] = box.lo[i]; break;
        case 1: x[i] = box.hi[i]; break;
        default:
          x[i] = y[i];
          if (y[i] < box.lo[i] || y[i] > box.hi[i]) feasible = false;
      }
    }
    if (!feasible) continue;
    const double dist = norm2(x - y);
    if (dist < best_dist) {
      best_dist = dist;
      best = x;
    }
  }
  return best;
}

}  // namespace

CheckOutcome check_set_oracles() {
  Timer timer;
  CheckOutcome out{"set oracles", false, "", 0.0};
  Rng rng(kDefaultSeed + 4);
  const std::vector<FeasibleSet> sets = {
      FeasibleSet(Simplex{4}),
      FeasibleSet(Box{DenseVector{-1.0, 0.0, 0.5, -2.0}, DenseVector{1.0, 2.0, 0.5, 3.0}}),
      FeasibleSet(L2Ball{DenseVector{0.5, -1.0, 2.0}, 1.5}),
      FeasibleSet(NuclearBall{3, 4, 2.0}),
  };
  Tally lmo_tally;
  for (const auto& set : sets) {
    for (int k = 0; k < 200; ++k) {
      const DenseVector g = rng.normal_vector(set.dimension());
      const DenseVector v = lmo(set, g);
      lmo_tally.expect_le(0.0, 0.0, 0.0, "");
      if (!contains(set, v, 1e-9)) lmo_tally.expect_le(1.0, 0.0, 0.0, set.name() + " lmo infeasible");
      for (int j = 0; j < 10; ++j) {
        const DenseVector x = random_point(set, rng);
        lmo_tally.expect_le(dot(g, v), dot(g, x), 1e-9 * (1.0 + norm2(g) * norm2(x)),
                            set.name() + " lmo optimality");
      }
    }
  }
  Tally proj;
  const Box box = *sets[1].get_if<Box>();
  for (int k = 0; k < 500; ++k) {
    const std::size_t d = 1 + rng.index(4);
    const DenseVector y = 2.0 * rng.normal_vector(d);
    const DenseVector ps = project(FeasibleSet(Simplex{d}), y);
    proj.expect_le(norm_inf(ps - enumerate_simplex_projection(y)), 0.0, 1e-12, "simplex projection");
    const DenseVector yb = 3.0 * rng.normal_vector(4);
    proj.expect_le(norm_inf(project(sets[1], yb) - enumerate_box_projection(yb, box)), 0.0, 1e-12,
                   "box projection");
  }
  Tally nuclear;
  for (int k = 0; k < 200; ++k) {
    const std::size_t rows = 2 + rng.index(6);
    const std::size_t cols = 2 + rng.index(6);
    const double radius = rng.uniform(0.5, 3.0);
    const FeasibleSet set(NuclearBall{rows, cols, radius});
    const DenseMatrix g = rng.normal_matrix(rows, cols);
    const DenseVector v = lmo(set, g.flatten());
    const double sigma = svd_full(g).sigma[0];
    nuclear.expect_le(std::abs(dot(g.flatten(), v) + radius * sigma), 0.0, 1e-8 * (1.0 + radius * sigma),
                      "nuclear lmo value");
  }
  out.passed = lmo_tally.violations == 0 && proj.violations == 0 && nuclear.violations == 0;
  std::ostringstream d;
  d << "lmo " << lmo_tally.violations << " violations, projection " << proj.violations << "/"
    << proj.checks << ", nuclear lmo " << nuclear.violations << "/" << nuclear.checks;
  for (const Tally* t : {&lmo_tally, &proj, &nuclear})
    if (!t->first.empty()) d << " (" << t->first << ")";
  out.detail = d.str();
  out.seconds = timer.seconds();
  return out;
}

namespace {

std::string strip_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CheckOutcome check_determinism() {
  Timer timer;
  CheckOutcome out{"determinism", false, "", 0.0};
  const auto root = std::filesystem::temp_directory_path() /
                    ("fcopt-determinism-" + std::to_string(std::chrono::steady_clock::now()
                                                                .time_since_epoch()
                                                                .count()));
  ExperimentConfig config;
  config.d = 20;
  config.n = 4;
  config.max_iter = 80;
  config.reference_budget = 300;
  std::vector<std::string> runs;
  for (int rep = 0; rep < 2; ++rep) {
    config.output = (root / std::to_string(rep)).string();
    run_experiment(config);
  }
  bool same = true;
  std::string mismatch;
  for (const auto& method : config.methods) {
    const auto a = strip_elapsed(slurp(root / "0" / (method + ".csv")));
    const auto b = strip_elapsed(slurp(root / "1" / (method + ".csv")));
    if (a != b || a.empty()) {
      same = false;
      mismatch += method + ".csv ";
    }
  }
  if (slurp(root / "0" / "summary.json") != slurp(root / "1" / "summary.json")) {
    same = false;
    mismatch += "summary.json ";
  }
  std::error_code ec;
  std::filesystem::remove_all(root, ec);
  out.passed = same;
  out.detail = same ? "two seeded runs produced identical CSVs (elapsed_ms excluded) and summaries"
                    : "differences in " + mismatch;
  out.seconds = timer.seconds();
  return out;
}

namespace {

// Shared runs on the d = 50, n = 5 simplex instance.
struct SimplexSuite {
  CompositeProblem problem = gen_simplex_problem(50, 5, kDefaultSeed);
  DenseVector y0 = DenseVector::unit(50, 2);
  ReferenceOptimum ref;
  double s_hat = 0.0;
  double fl = 0.0;
  double dsq = 0.0;
  RunTrace basic_two;
  RunTrace basic_adaptive;
  RunTrace basic_sqrt;
  RunTrace accel;
  double setup_seconds = 0.0;

  SimplexSuite() {
    Timer timer;
    ref = reference_optimum(problem, 10000, y0);
    s_hat = problem.curvature_bound();
    fl = problem.fl();
    dsq = std::pow(diameter(problem.set()), 2);
    RunOptions options;
    options.max_iter = 500;
    basic_two = basic_method(problem, TwoOverKPlusTwo{}, options, y0);
    basic_adaptive = basic_method(problem, AdaptiveDeltaOverS{s_hat}, options, y0);
    basic_sqrt = basic_method(problem, OneOverSqrt{}, options, y0);
    options.max_iter = 300;
    accel = accelerated_method(problem, AccelParams{1.0, fl * dsq, fl}, options, y0);
    setup_seconds = timer.seconds();
  }
};

CheckOutcome check_basic_rate(const SimplexSuite& s) {
  Timer timer;
  CheckOutcome out{"basic method rate", false, "", 0.0};
  Tally gap;
  Tally cert;
  double worst = 0.0;
  for (const RunTrace* t : {&s.basic_two, &s.basic_adaptive}) {
    if (t->status == RunStatus::SolverFailure || t->records.size() < 501) {
      out.detail = t->method + " run incomplete: " + t->message;
      return out;
    }
    double min_delta = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 500; ++k) {
      const TraceRecord& r = t->records[k];
      const double bound = 2.0 * s.s_hat / (1.0 + k);
      worst = std::max(worst, (r.objective - s.ref.value) / bound);
      gap.expect_le(r.objective - s.ref.value, bound, 0.0, "k=" + std::to_string(k));
      min_delta = std::min(min_delta, r.delta);
      cert.expect_le(min_delta, 6.0 * s.s_hat / k, 0.0, "k=" + std::to_string(k));
    }
  }
  out.passed = gap.violations == 0 && cert.violations == 0;
  out.detail = "2/(k+2) and adaptive rules, k <= 500, S = " + fmt(s.s_hat) + "; gap violations " +
               std::to_string(gap.violations) + ", certificate violations " +
               std::to_string(cert.violations) + ", worst residual/bound " + fmt(worst);
  out.seconds = timer.seconds() + s.setup_seconds;
  return out;
}

CheckOutcome check_certificates(const SimplexSuite& s) {
  Timer timer;
  CheckOutcome out{"certificate lower bound", false, "", 0.0};
  Tally tally;
  int runs = 0;
  auto check_run = [&](const RunTrace& t, double reference, const std::string& label) {
    ++runs;
    for (const auto& r : t.records)
      if (std::isfinite(r.delta))
        tally.expect_le(r.objective - reference - 1e-8, r.delta, 0.0,
                        label + " k=" + std::to_string(r.iter));
  };
  check_run(s.basic_two, s.ref.value, "simplex d=50 2/(k+2)");
  check_run(s.basic_adaptive, s.ref.value, "simplex d=50 adaptive");
  check_run(s.basic_sqrt, s.ref.value, "simplex d=50 1/sqrt(k+1)");
  for (auto& inst : catalog_instances()) {
    const bool monotone_or_affine =
        inst.problem.outer().is_monotone() || inst.problem.inner().get_if<LinearSystem>() != nullptr;
    const bool exact_oracle = inst.problem.outer().get_if<SumLoss>() == nullptr;
    if (!inst.convex || !monotone_or_affine || !exact_oracle) continue;
    const DenseVector y0 = center_point(inst.problem.set());
    const ReferenceOptimum ref = reference_optimum(inst.problem, 2000, y0);
    RunOptions options;
    options.max_iter = 200;
    for (const StepsizeRule& rule : std::vector<StepsizeRule>{TwoOverKPlusTwo{}, OneOverSqrt{}}) {
      CompositeProblem work(inst.problem);
      check_run(basic_method(work, rule, options, y0), ref.value, inst.name);
    }
  }
  out.passed = tally.violations == 0;
  out.detail = std::to_string(runs) + " runs, " + std::to_string(tally.checks) + " certificates, " +
               std::to_string(tally.violations) + " violations" +
               (tally.first.empty() ? "" : " (" + tally.first + ")");
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_nonconvex_rate(const SimplexSuite& s) {
  Timer timer;
  CheckOutcome out{"one-over-sqrt certificate rate", false, "", 0.0};
  Tally tally;
  auto check_run = [&](const RunTrace& t, double lower, double s_bound, const std::string& label) {
    if (t.records.empty()) return;
    const double phi0 = t.records.front().objective;
    double min_delta = std::numeric_limits<double>::infinity();
    for (const auto& r : t.records) {
      min_delta = std::min(min_delta, r.delta);
      const double k = r.iter;
      const double bound = (phi0 - lower + 0.5 * s_bound * (1.0 + std::log(k + 1.0))) / std::sqrt(k + 1.0);
      tally.expect_le(min_delta, bound, 0.0, label + " k=" + std::to_string(r.iter));
    }
  };
  if (s.basic_sqrt.records.size() < 501) {
    out.detail = "run incomplete: " + s.basic_sqrt.message;
    return out;
  }
  check_run(s.basic_sqrt, 0.0, s.s_hat, "simplex d=50");
  // Nonconvex: max of sinusoid-perturbed affine maps, bounded below coordinatewise.
  for (auto& inst : catalog_instances()) {
    if (inst.convex) continue;
    const auto& sm = *inst.problem.inner().get_if<SinusoidMap>();
    double lower = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sm.a.rows(); ++i) {
      double li = sm.b[i];
      for (std::size_t j = 0; j < sm.a.cols(); ++j) li += std::min(0.0, sm.a(i, j)) - std::abs(sm.c(i, j));
      lower = std::max(lower, li);
    }
    CompositeProblem work(inst.problem);
    RunOptions options;
    options.max_iter = 500;
    const RunTrace t = basic_method(work, OneOverSqrt{}, options, center_point(work.set()));
    check_run(t, lower, work.curvature_bound(), inst.name);
  }
  out.passed = tally.violations == 0;
  out.detail = std::to_string(tally.checks) + " iterates, " + std::to_string(tally.violations) +
               " violations" + (tally.first.empty() ? "" : " (" + tally.first + ")");
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_accelerated_rate(const SimplexSuite& s) {
  Timer timer;
  CheckOutcome out{"accelerated method rate", false, "", 0.0};
  if (s.accel.status == RunStatus::SolverFailure || s.accel.records.size() < 301) {
    out.detail = "run incomplete: " + s.accel.message;
    return out;
  }
  Tally tally;
  double worst = 0.0;
  const double num = s.fl * s.dsq + 8.0 * s.fl * s.dsq;
  for (int k = 0; k <= 300; ++k) {
    const double bound = num / ((k + 2.0) * (k + 3.0));
    const double residual = s.accel.records[k].objective - s.ref.value;
    worst = std::max(worst, residual / bound);
    tally.expect_le(residual, bound, 0.0, "k=" + std::to_string(k));
  }
  out.passed = tally.violations == 0;
  out.detail = "c = 1, delta = F(L)D^2 = " + fmt(s.fl * s.dsq) + ", k <= 300; " +
               std::to_string(tally.violations) + " violations, worst residual/bound " + fmt(worst) +
               "; reference " + fmt(s.ref.value) + " +- " + fmt(s.ref.error_bar);
  out.seconds = timer.seconds();
  return out;
}

CheckOutcome check_oracle_ordering(SimplexSuite& s) {
  Timer timer;
  CheckOutcome out{"first-order call ordering", false, "", 0.0};
  CompositeProblem work(s.problem);
  RunOptions options;
  options.max_iter = 200000;
  options.reference = s.ref.value;
  options.target_residual = 1e-3;
  const RunTrace sub = projected_subgradient(work, 1.42, options, s.y0);
  const auto acc = fo_to_reach(s.accel, s.ref.value, 1e-3);
  const auto bas = fo_to_reach(s.basic_two, s.ref.value, 1e-3);
  const auto sg = fo_to_reach(sub, s.ref.value, 1e-3);
  auto less = [](std::int64_t a, std::int64_t b) { return a >= 0 && (b < 0 || a < b); };
  bool ok = less(acc, bas) && less(bas, sg);
  std::ostringstream d;
  d << "FO calls to 1e-3: accelerated " << acc << ", basic " << bas << ", subgradient "
    << (sg < 0 ? ">" + std::to_string(sub.records.back().fo_calls) : std::to_string(sg)) << ";";
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto calls = fo_to_reach(s.accel, s.ref.value, eps);
    const double limit = 4.0 * std::sqrt(s.fl * s.dsq / eps);
    d << " eps " << eps << ": " << calls << " <= " << fmt(limit);
    if (calls < 0 || calls > limit) ok = false;
  }
  out.passed = ok;
  out.detail = d.str();
  out.seconds = timer.seconds();
  return out;
}

}  // namespace

std::vector<CheckOutcome> run_acceptance_suite(std::ostream& out) {
  std::vector<CheckOutcome> results;
  auto report = [&](int index, CheckOutcome c) {
    out << (c.passed ? "PASS" : "FAIL") << " [" << index << "] " << c.name << " (" << std::fixed
        << std::setprecision(2) << c.seconds << " s): " << c.detail << '\n';
    out.unsetf(std::ios::fixed);
    out.flush();
    results.push_back(std::move(c));
  };
  report(1, check_outer_assumptions());
  report(2, check_progress_bound());
  SimplexSuite suite;
  report(3, check_basic_rate(suite));
  report(4, check_certificates(suite));
  report(5, check_nonconvex_rate(suite));
  report(6, check_accelerated_rate(suite));
  report(7, check_prox_rates());
  report(8, check_oracle_ordering(suite));
  report(9, check_oracle_equivalence());
  report(10, check_gauss_newton());
  report(11, check_set_oracles());
  report(12, check_determinism());
  return results;
}

}  // namespace fcopt
