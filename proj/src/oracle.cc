#include "fcopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fcopt/lp.hpp"

namespace fcopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows h_i = a_i + u, so the max-type model reads max_i(<h_i, x> + b_i).
DenseMatrix shifted_rows(const LinearizedModel& model) {
  DenseMatrix h = model.a;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    auto row = h.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += model.u[j];
  }
  return h;
}

DenseVector affine_values(const DenseMatrix& h, const DenseVector& b, const DenseVector& x) {
  return multiply(h, x) + b;
}

double max_entry(const DenseVector& v) { return *std::max_element(v.begin(), v.end()); }

void check_model(const LinearizedModel& model, const FeasibleSet& set) {
  if (model.b.size() != model.n() || model.u.size() != model.d())
    throw DimensionError("LinearizedModel: inconsistent dimensions");
  if (model.d() != set.dimension())
    throw DimensionError("LinearizedModel: model has " + std::to_string(model.d()) +
                         " variables, set " + set.name() + " has " +
                         std::to_string(set.dimension()));
}

DenseVector warm_start(const LinearizedModel& model, const FeasibleSet& set) {
  if (model.anchor && model.anchor->size() == set.dimension() && contains(set, *model.anchor, 1e-9))
    return *model.anchor;
  return center_point(set);
}

struct EpigraphSolution {
  DenseVector x;
  DenseVector lambda;
  double value = 0.0;
};

// min over the J-simplex of max_i (H x + b)_i via the epigraph LP.
EpigraphSolution solve_epigraph(const DenseMatrix& h, const DenseVector& b) {
  const std::size_t n = h.rows();
  const std::size_t d = h.cols();
  LinearProgram lp;
  lp.a = DenseMatrix(n + 1, d + 2);
  lp.b = DenseVector(n + 1);
  lp.sense.assign(n, RowSense::LessEqual);
  lp.sense.push_back(RowSense::Equal);
  lp.c = DenseVector(d + 2);
  lp.c[d] = 1.0;       // t+
  lp.c[d + 1] = -1.0;  // t-
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) lp.a(i, j) = h(i, j);
    lp.a(i, d) = -1.0;
    lp.a(i, d + 1) = 1.0;
    lp.b[i] = -b[i];
  }
  for (std::size_t j = 0; j < d; ++j) lp.a(n, j) = 1.0;
  lp.b[n] = 1.0;

  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw InternalInconsistency("epigraph LP over the simplex did not reach optimality");

  EpigraphSolution out;
  out.x = DenseVector(d);
  for (std::size_t j = 0; j < d; ++j) out.x[j] = res.x[j];
  const double total = sum(out.x);
  if (total > 0.0) out.x *= 1.0 / total;
  out.value = max_entry(affine_values(h, b, out.x));
  out.lambda = DenseVector(n);
  for (std::size_t i = 0; i < n; ++i) out.lambda[i] = std::max(-res.duals[i], 0.0);
  const double lsum = sum(out.lambda);
  if (lsum > 0.0)
    out.lambda *= 1.0 / lsum;
  else
    out.lambda = DenseVector(n, 1.0 / static_cast<double>(n));
  return out;
}

// g(lambda) = min_x sum_i lambda_i (<h_i, x> + b_i), one LMO call.
struct DualEval {
  DenseVector x;
  DenseVector values;  // (H x + b), a supergradient of g at lambda
  double g = 0.0;
};

DualEval eval_dual(const DenseMatrix& h, const DenseVector& b, const DenseVector& lambda,
                   const FeasibleSet& set) {
  DualEval e;
  e.x = lmo(set, transpose_multiply(h, lambda));
  e.values = affine_values(h, b, e.x);
  e.g = dot(lambda, e.values);
  return e;
}

SubproblemSolution lmo_solution(const LinearizedModel& model, const OuterFunction& f,
                                const FeasibleSet& set, std::size_t index) {
  DenseVector c = model.a.row_vector(index) + model.u;
  SubproblemSolution s;
  s.x = lmo(set, c);
  s.value = model_value(model, f, s.x);
  s.dual_bound = s.value;
  s.lmo_calls = 1;
  s.solver = "lmo";
  return s;
}

bool psi_constant_on(const OuterFunction& f, const FeasibleSet& set) {
  const auto* a = f.get_if<AdditiveComposite>();
  if (a == nullptr) return false;
  return std::holds_alternative<ZeroRegularizer>(a->psi) || set.is_simplex();
}

// min over a box of <c, x> + w ||x||_1, coordinate by coordinate.
SubproblemSolution separable_l1_box(const LinearizedModel& model, const OuterFunction& f,
                                    const Box& box, std::size_t index, double weight) {
  const DenseVector c = model.a.row_vector(index) + model.u;
  SubproblemSolution s;
  s.x = DenseVector(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    auto cost = [&](double t) { return c[j] * t + weight * std::abs(t); };
    double best = box.lo[j];
    for (double t : {box.hi[j], 0.0}) {
      if (t < box.lo[j] || t > box.hi[j]) continue;
      if (cost(t) < cost(best)) best = t;
    }
    s.x[j] = best;
  }
  s.value = model_value(model, f, s.x);
  s.dual_bound = s.value;
  s.solver = "separable_l1_box";
  return s;
}

std::vector<DenseVector> dedupe(std::vector<DenseVector> points) {
  std::vector<DenseVector> out;
  for (auto& p : points) {
    bool seen = false;
    for (const auto& q : out)
      if (norm_inf(p - q) <= 1e-14) seen = true;
    if (!seen) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

LinearizedModel LinearizedModel::around(const Linearization& lin, DenseVector u) {
  LinearizedModel m;
  m.a = lin.jacobian;
  m.b = lin.value - multiply(lin.jacobian, lin.point);
  m.u = std::move(u);
  m.anchor = lin.point;
  return m;
}

LinearizedModel LinearizedModel::around(const Linearization& lin) {
  return around(lin, DenseVector(lin.point.size()));
}

double model_value(const LinearizedModel& model, const OuterFunction& f, const DenseVector& x) {
  return eval(f, multiply(model.a, x) + model.b, x) + dot(model.u, x);
}

SubproblemSolution epigraph_lp_reference(const DenseMatrix& a, const DenseVector& b,
                                         const DenseVector& u, const FeasibleSet& set) {
  const auto* simplex = set.get_if<Simplex>();
  if (simplex == nullptr)
    throw UnsupportedCombination("epigraph_lp_reference: requires a simplex, got " + set.name());
  if (simplex->d > kEpigraphMaxDimension || a.rows() > kEpigraphMaxComponents)
    throw UnsupportedSizeError("epigraph_lp_reference: d = " + std::to_string(simplex->d) +
                               ", n = " + std::to_string(a.rows()) + " exceeds the dense LP cap");
  if (a.cols() != simplex->d || u.size() != simplex->d || b.size() != a.rows())
    throw DimensionError("epigraph_lp_reference: inconsistent dimensions");

  LinearizedModel model{a, b, u, std::nullopt};
  EpigraphSolution e = solve_epigraph(shifted_rows(model), b);
  SubproblemSolution s;
  s.x = std::move(e.x);
  s.value = e.value;
  s.gap_estimate = 0.0;
  s.dual_bound = e.value;
  s.solver = "epigraph_lp";
  return s;
}

SubproblemSolution dual_mirror_descent(const LinearizedModel& model, const FeasibleSet& set,
                                       double tol, int max_iter) {
  check_model(model, set);
  const std::size_t n = model.n();
  if (n < 2) throw InvalidArgument("dual_mirror_descent: needs at least two components");
  const DenseMatrix h = shifted_rows(model);
  const double log_n = std::log(static_cast<double>(n));

  DenseVector lambda(n, 1.0 / static_cast<double>(n));
  DenseVector x_sum(set.dimension());
  DenseVector suffix_sum(set.dimension());
  int suffix_start = 1;
  double best_dual = -kInf;
  double grad_bound = 0.0;
  SubproblemSolution s;
  s.value = kInf;
  s.solver = "dual_mirror_descent";
  for (int t = 1; t <= max_iter; ++t) {
    DualEval e = eval_dual(h, model.b, lambda, set);
    ++s.lmo_calls;
    best_dual = std::max(best_dual, e.g);
    x_sum += e.x;
    // Second candidate: average of the iterates since the last power of two.
    if ((t & (t - 1)) == 0) {
      suffix_sum = DenseVector(set.dimension());
      suffix_start = t;
    }
    suffix_sum += e.x;
    DenseVector full = (1.0 / t) * x_sum;
    DenseVector suffix = (1.0 / (t - suffix_start + 1)) * suffix_sum;
    const double full_value = max_entry(affine_values(h, model.b, full));
    const double suffix_value = max_entry(affine_values(h, model.b, suffix));
    // Any feasible candidate certifies; keep the best one seen.
    if (full_value < s.value) {
      s.value = full_value;
      s.x = std::move(full);
    }
    if (suffix_value < s.value) {
      s.value = suffix_value;
      s.x = std::move(suffix);
    }
    s.dual_bound = best_dual;
    s.gap_estimate = std::max(s.value - best_dual, 0.0);
    if (s.gap_estimate <= tol) return s;

    grad_bound = std::max(grad_bound, norm_inf(e.values));
    if (grad_bound == 0.0) continue;
    const double step = std::sqrt(2.0 * log_n) / (grad_bound * std::sqrt(static_cast<double>(t)));
    double top = -kInf;
    for (std::size_t i = 0; i < n; ++i) top = std::max(top, step * e.values[i]);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lambda[i] *= std::exp(step * e.values[i] - top);
      z += lambda[i];
    }
    lambda *= 1.0 / z;
  }
  throw SolverFailure("dual_mirror_descent: gap " + std::to_string(s.gap_estimate) +
                          " above tolerance after " + std::to_string(max_iter) + " iterations",
                      s);
}

SubproblemSolution bisection_two(const LinearizedModel& model, const FeasibleSet& set,
                                 double tol) {
  check_model(model, set);
  if (model.n() != 2) throw InvalidArgument("bisection_two: requires exactly two components");
  if (!(tol > 0.0)) throw InvalidArgument("bisection_two: tol must be positive");
  const DenseMatrix h = shifted_rows(model);

  struct Probe {
    double lambda;
    DualEval eval;
    double slope;  // h_1(x) - h_2(x): supergradient of g in lambda
  };
  std::vector<Probe> probes;
  auto probe = [&](double lambda) {
    DualEval e = eval_dual(h, model.b, DenseVector{lambda, 1.0 - lambda}, set);
    const double slope = e.values[0] - e.values[1];
    probes.push_back({lambda, std::move(e), slope});
    return probes.back().eval.g;
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double c1 = hi - inv_phi * (hi - lo);
  double c2 = lo + inv_phi * (hi - lo);
  double g1 = probe(c1);
  double g2 = probe(c2);
  const double width = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon());
  while (hi - lo > width) {
    if (g1 < g2) {
      lo = c1;
      c1 = c2;
      g1 = g2;
      c2 = lo + inv_phi * (hi - lo);
      g2 = probe(c2);
    } else {
      hi = c2;
      c2 = c1;
      g2 = g1;
      c1 = hi - inv_phi * (hi - lo);
      g1 = probe(c1);
    }
  }

  double best_dual = -kInf;
  for (const auto& p : probes) best_dual = std::max(best_dual, p.eval.g);

  SubproblemSolution s;
  s.solver = "bisection_two";
  s.lmo_calls = static_cast<int>(probes.size());
  s.value = kInf;
  auto consider = [&](const DenseVector& x) {
    const double v = max_entry(affine_values(h, model.b, x));
    if (v < s.value) {
      s.value = v;
      s.x = x;
    }
  };
  for (const auto& p : probes) consider(p.eval.x);

  // Combine the closest probes on either side of the maximizer so both pieces are equal.
  const Probe* left = nullptr;
  const Probe* right = nullptr;
  for (const auto& p : probes) {
    if (p.slope >= 0.0 && (left == nullptr || p.lambda > left->lambda)) left = &p;
    if (p.slope <= 0.0 && (right == nullptr || p.lambda < right->lambda)) right = &p;
  }
  if (left != nullptr && right != nullptr && left->slope > 0.0 && right->slope < 0.0) {
    const double theta = -right->slope / (left->slope - right->slope);
    consider(lerp(right->eval.x, left->eval.x, theta));
  }
  s.dual_bound = best_dual;
  s.gap_estimate = std::max(s.value - best_dual, 0.0);
  return s;
}

SubproblemSolution column_generation_max(const LinearizedModel& model, const FeasibleSet& set,
                                         double tol, int max_iter, std::vector<DenseVector> seeds) {
  check_model(model, set);
  const std::size_t n = model.n();
  const DenseMatrix h = shifted_rows(model);

  SubproblemSolution s;
  s.solver = "column_generation";
  std::vector<DenseVector> columns = dedupe(std::move(seeds));
  if (columns.empty()) {
    DualEval e = eval_dual(h, model.b, DenseVector(n, 1.0 / static_cast<double>(n)), set);
    ++s.lmo_calls;
    s.dual_bound = e.g;
    columns.push_back(std::move(e.x));
  } else {
    s.dual_bound = -kInf;
  }

  for (int it = 0; it < max_iter; ++it) {
    // Restricted master over the convex hull of the columns: its rows are h_i at each column.
    DenseMatrix master(n, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      DenseVector vals = affine_values(h, model.b, columns[j]);
      for (std::size_t i = 0; i < n; ++i) master(i, j) = vals[i];
    }
    EpigraphSolution e = solve_epigraph(master, DenseVector(n));
    DenseVector x(set.dimension());
    for (std::size_t j = 0; j < columns.size(); ++j)
      if (e.x[j] != 0.0) axpy(e.x[j], columns[j], x);
    const double primal = max_entry(affine_values(h, model.b, x));
    if (s.x.empty() || primal < s.value) {
      s.x = std::move(x);
      s.value = primal;
    }

    DualEval priced = eval_dual(h, model.b, e.lambda, set);
    ++s.lmo_calls;
    s.dual_bound = std::max(s.dual_bound, priced.g);
    s.gap_estimate = std::max(s.value - s.dual_bound, 0.0);
    if (s.gap_estimate <= tol) return s;

    bool duplicate = false;
    for (const auto& c : columns)
      if (norm_inf(c - priced.x) <= 1e-14) duplicate = true;
    if (duplicate) break;
    columns.push_back(std::move(priced.x));
  }
  throw SolverFailure("column_generation_max: gap " + std::to_string(s.gap_estimate) +
                          " above tolerance " + std::to_string(tol),
                      s);
}

namespace {

SubproblemSolution squared_residual_pg(const LinearizedModel& model, const FeasibleSet& set,
                                       double tol, int max_iter) {
  SubproblemSolution s;
  s.solver = "projected_gradient";
  DenseVector x = warm_start(model, set);
  if (max_abs(model.a) == 0.0) {
    s.x = x;
    s.value = norm2(model.b);
    s.dual_bound = s.value;
    return s;
  }
  const double sigma = top_singular_pair(model.a).sigma;
  const double step = 1.0 / (sigma * sigma);
  double lower = 0.0;
  s.value = kInf;
  for (int it = 0; it < max_iter; ++it) {
    DenseVector r = multiply(model.a, x) + model.b;
    DenseVector grad = transpose_multiply(model.a, r);
    DenseVector v = lmo(set, grad);
    ++s.lmo_calls;
    // Frank-Wolfe gap of q = ||r||^2 / 2 bounds q - q*, hence ||r*|| >= sqrt(||r||^2 - 2 gap).
    const double fw_gap = std::max(dot(grad, x - v), 0.0);
    const double rr = dot(r, r);
    const double res = std::sqrt(rr);
    lower = std::max(lower, std::sqrt(std::max(rr - 2.0 * fw_gap, 0.0)));
    if (res < s.value) {
      s.value = res;
      s.x = x;
    }
    s.dual_bound = lower;
    s.gap_estimate = std::max(s.value - lower, 0.0);
    if (s.gap_estimate <= tol) return s;
    x = project(set, x - step * grad);
  }
  throw SolverFailure("solve_norm_subproblem: gap " + std::to_string(s.gap_estimate) +
                          " above tolerance after " + std::to_string(max_iter) + " iterations",
                      s);
}

}  // namespace

SubproblemSolution subgradient_subproblem(const LinearizedModel& model, const OuterFunction& f,
                                          const FeasibleSet& set, double tol, int max_iter) {
  check_model(model, set);
  if (const auto* nb = set.get_if<NuclearBall>();
      nb != nullptr && std::min(nb->rows, nb->cols) > kSvdMaxDimension)
    throw UnsupportedCombination("subgradient_subproblem: no projection for " + set.name());

  SubproblemSolution s;
  s.solver = "projected_subgradient";
  s.value = kInf;
  double lower = -kInf;
  double grad_bound = 0.0;
  const double radius = diameter(set);
  DenseVector x = warm_start(model, set);
  // Step-weighted sum of the linear minorants h(x_s) + <g_s, y - x_s>.
  DenseVector agg_slope(model.d());
  double agg_offset = 0.0;
  double agg_weight = 0.0;
  for (int t = 1; t <= max_iter; ++t) {
    DenseVector inner = multiply(model.a, x) + model.b;
    const double hx = eval(f, inner, x) + dot(model.u, x);
    DenseVector g = transpose_multiply(model.a, subgradient_weights(f, inner)) +
                    regularizer_subgradient(f, x) + model.u;
    if (hx < s.value) {
      s.value = hx;
      s.x = x;
    }
    DenseVector v = lmo(set, g);
    ++s.lmo_calls;
    lower = std::max(lower, hx + dot(g, v - x));
    grad_bound = std::max(grad_bound, norm2(g));
    const double step = grad_bound == 0.0 ? 0.0 : radius / (grad_bound * std::sqrt(static_cast<double>(t)));
    if (step > 0.0) {
      axpy(step, g, agg_slope);
      agg_offset += step * (hx - dot(g, x));
      agg_weight += step;
      if (t % 8 == 0) {
        const DenseVector w = lmo(set, agg_slope);
        ++s.lmo_calls;
        lower = std::max(lower, (agg_offset + dot(agg_slope, w)) / agg_weight);
      }
    }
    s.dual_bound = lower;
    s.gap_estimate = std::max(s.value - lower, 0.0);
    if (s.gap_estimate <= tol) return s;
    if (step == 0.0) continue;
    x = project(set, x - step * g);
  }
  throw SolverFailure("subgradient_subproblem: gap " + std::to_string(s.gap_estimate) +
                          " above tolerance after " + std::to_string(max_iter) + " iterations",
                      s);
}

namespace {

// min ||A x + b||_1 (or _inf) + <u, x> over a box or simplex as one LP. With x = lo + z
// (z = x on the simplex), variables are (z, s) where s bounds |A x + b| per row (a single
// shared s for the max norm).
SubproblemSolution polyhedral_norm_lp(const LinearizedModel& model, NormKind kind,
                                      const FeasibleSet& set) {
  const std::size_t n = model.n();
  const std::size_t d = model.d();
  const auto* box = set.get_if<Box>();
  const std::size_t ns = kind == NormKind::L1 ? n : 1;
  const std::size_t set_rows = box != nullptr ? d : 1;
  const DenseVector lo = box != nullptr ? box->lo : DenseVector(d);
  const DenseVector shift = multiply(model.a, lo) + model.b;

  LinearProgram lp;
  lp.a = DenseMatrix(2 * n + set_rows, d + ns);
  lp.b = DenseVector(2 * n + set_rows);
  lp.c = DenseVector(d + ns);
  for (std::size_t j = 0; j < d; ++j) lp.c[j] = model.u[j];
  for (std::size_t k = 0; k < ns; ++k) lp.c[d + k] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t sk = kind == NormKind::L1 ? i : 0;
    for (std::size_t j = 0; j < d; ++j) {
      lp.a(2 * i, j) = model.a(i, j);
      lp.a(2 * i + 1, j) = -model.a(i, j);
    }
    lp.a(2 * i, d + sk) = -1.0;
    lp.a(2 * i + 1, d + sk) = -1.0;
    lp.b[2 * i] = -shift[i];
    lp.b[2 * i + 1] = shift[i];
  }
  lp.sense.assign(2 * n, RowSense::LessEqual);
  if (box != nullptr) {
    for (std::size_t j = 0; j < d; ++j) {
      lp.a(2 * n + j, j) = 1.0;
      lp.b[2 * n + j] = box->hi[j] - box->lo[j];
      lp.sense.push_back(RowSense::LessEqual);
    }
  } else {
    for (std::size_t j = 0; j < d; ++j) lp.a(2 * n, j) = 1.0;
    lp.b[2 * n] = 1.0;
    lp.sense.push_back(RowSense::Equal);
  }
  const LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw InternalInconsistency("polyhedral norm LP did not reach optimality");

  SubproblemSolution s;
  s.x = DenseVector(d);
  for (std::size_t j = 0; j < d; ++j) s.x[j] = lo[j] + res.x[j];
  s.x = project(set, s.x);
  s.value = model_value(model, OuterFunction(Norm{kind}, n), s.x);
  s.gap_estimate = 0.0;
  s.dual_bound = s.value;
  s.solver = "polyhedral_norm_lp";
  return s;
}

}  // namespace

SubproblemSolution solve_norm_subproblem(const LinearizedModel& model, NormKind kind,
                                         const FeasibleSet& set, double tol, int max_iter) {
  check_model(model, set);
  if (!(tol > 0.0)) throw InvalidArgument("solve_norm_subproblem: tol must be positive");
  if (kind == NormKind::L2 && norm_inf(model.u) == 0.0)
    return squared_residual_pg(model, set, tol, max_iter);
  if (kind != NormKind::L2 && (set.is_simplex() || set.get_if<Box>() != nullptr) &&
      model.d() <= kPolyhedralNormMaxSize && model.n() <= kPolyhedralNormMaxSize)
    return polyhedral_norm_lp(model, kind, set);
  return subgradient_subproblem(model, OuterFunction(Norm{kind}, model.n()), set, tol, max_iter);
}

SubproblemSolution solve_subproblem(const LinearizedModel& model, const OuterFunction& f,
                                    const FeasibleSet& set, double tol,
                                    const SubproblemOptions& options) {
  check_model(model, set);
  if (!(tol > 0.0)) throw InvalidArgument("solve_subproblem: tol must be positive");
  if (model.n() != f.n())
    throw DimensionError("solve_subproblem: model has " + std::to_string(model.n()) +
                         " components, outer function expects " + std::to_string(f.n()));

  if (const auto* c = f.get_if<Coordinate>()) return lmo_solution(model, f, set, c->index);
  if (const auto* a = f.get_if<AdditiveComposite>(); a != nullptr && psi_constant_on(f, set))
    return lmo_solution(model, f, set, a->index);
  if (const auto* a = f.get_if<AdditiveComposite>()) {
    const auto* box = set.get_if<Box>();
    const auto* l1 = std::get_if<ScaledL1>(&a->psi);
    if (box != nullptr && l1 != nullptr)
      return separable_l1_box(model, f, *box, a->index, l1->weight);
  }
  // Iterative solvers certify the gap relative to the model's magnitude.
  tol *= 1.0 + std::abs(model_value(model, f, warm_start(model, set)));
  if (const auto* nrm = f.get_if<Norm>())
    return solve_norm_subproblem(model, nrm->kind, set, tol, options.norm_iterations);
  if (f.get_if<MaxOfComponents>() == nullptr)
    return subgradient_subproblem(model, f, set, tol, options.norm_iterations);

  const std::size_t n = model.n();
  if (n == 1) return lmo_solution(model, f, set, 0);

  const bool lp_applies = set.is_simplex() && set.dimension() <= kEpigraphMaxDimension &&
                          n <= kEpigraphMaxComponents;
  std::vector<DenseVector> seeds;
  int lmo_calls = 0;
  if (n == 2) {
    double width = tol;
    for (int attempt = 0; attempt <= options.bisection_retries; ++attempt) {
      SubproblemSolution s = bisection_two(model, set, width);
      lmo_calls += s.lmo_calls;
      if (s.gap_estimate <= tol) {
        s.lmo_calls = lmo_calls;
        return s;
      }
      seeds.push_back(s.x);
      // The gap scales like width times the slope of g, so shrink accordingly.
      width = std::max(0.5 * width * tol / s.gap_estimate, 1e-16);
    }
  } else {
    try {
      SubproblemSolution s = dual_mirror_descent(model, set, tol, options.mirror_descent_iterations);
      return s;
    } catch (const SolverFailure& failure) {
      lmo_calls += failure.best().lmo_calls;
      seeds.push_back(failure.best().x);
    }
  }

  SubproblemSolution s;
  if (lp_applies) {
    s = epigraph_lp_reference(model.a, model.b, model.u, set);
  } else {
    try {
      s = column_generation_max(model, set, tol, options.column_generation_iterations, seeds);
    } catch (SolverFailure& failure) {
      SubproblemSolution best = failure.best();
      best.lmo_calls += lmo_calls;
      throw SolverFailure(failure.what(), std::move(best));
    }
  }
  s.lmo_calls += lmo_calls;
  return s;
}

}  // namespace fcopt
