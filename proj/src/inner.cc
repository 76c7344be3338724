#include "fcopt/inner.hpp"

#include <algorithm>
#include <cmath>

#include "fcopt/detail/overloaded.hpp"
#include "fcopt/random.hpp"

namespace fcopt {

namespace {

using detail::Overloaded;

void check_symmetric_psd(const DenseMatrix& a, std::size_t index) {
  const std::size_t d = a.rows();
  if (a.cols() != d) throw InvalidArgument("QuadMax: A_" + std::to_string(index) + " not square");
  const double scale = std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw InvalidArgument("QuadMax: A_" + std::to_string(index) + " not symmetric");

  if (d <= kSvdMaxDimension) {
    // For symmetric A the sign of each eigenvalue is the sign of <u_k, v_k>.
    Svd s = svd_full(a);
    for (std::size_t k = 0; k < d; ++k) {
      if (s.sigma[k] <= 1e-9 * scale) continue;
      if (dot(s.u.column_vector(k), s.v.column_vector(k)) < 0.0)
        throw InvalidArgument("QuadMax: A_" + std::to_string(index) + " is not PSD");
    }
    return;
  }
  Rng rng(0x5eed + index);
  for (int sample = 0; sample < 20; ++sample) {
    DenseVector x = rng.normal_vector(d);
    x *= 1.0 / norm2(x);
    if (dot(x, multiply(a, x)) < -1e-9 * scale)
      throw InvalidArgument("QuadMax: A_" + std::to_string(index) + " is not PSD");
  }
}

void require_point(const InnerMapping& m, const DenseVector& x, const char* where) {
  if (x.size() != m.d()) {
    throw DimensionError(std::string(where) + ": inner mapping expects " + std::to_string(m.d()) +
                         " entries, got " + std::to_string(x.size()));
  }
}

}  // namespace

InnerMapping::InnerMapping(QuadMax m) : map_(std::move(m)) {
  const auto& q = std::get<QuadMax>(map_);
  if (q.a.empty() || q.a.size() != q.b.size())
    throw InvalidArgument("QuadMax: need matching nonempty A and b lists");
  n_ = q.a.size();
  d_ = q.a[0].rows();
  for (std::size_t i = 0; i < n_; ++i) {
    if (q.a[i].rows() != d_ || q.b[i].size() != d_)
      throw DimensionError("QuadMax: component " + std::to_string(i) + " has wrong dimension");
    check_symmetric_psd(q.a[i], i);
  }
}

InnerMapping::InnerMapping(MatCompResiduals m) : map_(std::move(m)) {
  const auto& mc = std::get<MatCompResiduals>(map_);
  if (mc.targets.empty() || mc.targets.size() != mc.masks.size())
    throw InvalidArgument("MatCompResiduals: need matching nonempty target and mask lists");
  n_ = mc.targets.size();
  d_ = mc.rows * mc.cols;
  for (std::size_t i = 0; i < n_; ++i) {
    if (mc.targets[i].rows() != mc.rows || mc.targets[i].cols() != mc.cols ||
        mc.masks[i].rows() != mc.rows || mc.masks[i].cols() != mc.cols)
      throw DimensionError("MatCompResiduals: component " + std::to_string(i) + " has wrong shape");
    for (double v : mc.masks[i].values())
      if (v != 0.0 && v != 1.0) throw InvalidArgument("MatCompResiduals: mask must be 0/1");
  }
}

InnerMapping::InnerMapping(LinearSystem m) : map_(std::move(m)) {
  const auto& ls = std::get<LinearSystem>(map_);
  if (ls.a.rows() != ls.b.size() || ls.a.rows() == 0 || ls.a.cols() == 0)
    throw DimensionError("LinearSystem: A rows must match b");
  n_ = ls.a.rows();
  d_ = ls.a.cols();
}

InnerMapping::InnerMapping(SinusoidMap m) : map_(std::move(m)) {
  const auto& s = std::get<SinusoidMap>(map_);
  if (s.a.rows() != s.b.size() || s.a.rows() != s.c.rows() || s.a.cols() != s.c.cols() ||
      s.a.rows() == 0 || s.a.cols() == 0)
    throw DimensionError("SinusoidMap: inconsistent shapes");
  n_ = s.a.rows();
  d_ = s.a.cols();
}

bool InnerMapping::components_convex() const {
  return std::visit(Overloaded{[](const SinusoidMap& s) { return max_abs(s.c) == 0.0; },
                               [](const auto&) { return true; }},
                    map_);
}

std::string InnerMapping::name() const {
  return std::visit(Overloaded{[](const QuadMax&) { return "quad_max"; },
                               [](const MatCompResiduals&) { return "matcomp_residuals"; },
                               [](const LinearSystem&) { return "linear_system"; },
                               [](const SinusoidMap&) { return "sinusoid_map"; }},
                    map_);
}

Linearization linearize(const InnerMapping& m, const DenseVector& x) {
  require_point(m, x, "linearize");
  const std::size_t n = m.n();
  const std::size_t d = m.d();
  Linearization out{x, DenseVector(n), DenseMatrix(n, d)};
  std::visit(
      Overloaded{
          [&](const QuadMax& q) {
            for (std::size_t i = 0; i < n; ++i) {
              DenseVector ax = multiply(q.a[i], x);
              out.value[i] = dot(x, ax) - dot(q.b[i], x);
              auto row = out.jacobian.row(i);
              for (std::size_t j = 0; j < d; ++j) row[j] = 2.0 * ax[j] - q.b[i][j];
            }
          },
          [&](const MatCompResiduals& mc) {
            for (std::size_t i = 0; i < n; ++i) {
              const auto& t = mc.targets[i].values();
              const auto& mask = mc.masks[i].values();
              auto row = out.jacobian.row(i);
              double acc = 0.0;
              for (std::size_t j = 0; j < d; ++j) {
                const double r = mask[j] * (x[j] - t[j]);
                acc += r * r;
                row[j] = 2.0 * r;
              }
              out.value[i] = acc;
            }
          },
          [&](const LinearSystem& ls) {
            out.value = multiply(ls.a, x) - ls.b;
            out.jacobian = ls.a;
          },
          [&](const SinusoidMap& s) {
            out.value = multiply(s.a, x) + s.b;
            for (std::size_t i = 0; i < n; ++i) {
              auto row = out.jacobian.row(i);
              for (std::size_t j = 0; j < d; ++j) {
                out.value[i] += s.c(i, j) * std::sin(x[j]);
                row[j] = s.a(i, j) + s.c(i, j) * std::cos(x[j]);
              }
            }
          }},
      m.variant());
  return out;
}

DenseVector eval_map(const InnerMapping& m, const DenseVector& x) {
  require_point(m, x, "eval_map");
  if (const auto* q = m.get_if<QuadMax>()) {
    DenseVector v(m.n());
    for (std::size_t i = 0; i < m.n(); ++i) v[i] = dot(x, multiply(q->a[i], x)) - dot(q->b[i], x);
    return v;
  }
  return linearize(m, x).value;
}

DenseMatrix jacobian(const InnerMapping& m, const DenseVector& x) {
  return linearize(m, x).jacobian;
}

LipschitzVector lipschitz_vector(const InnerMapping& m, const FeasibleSet&) {
  const std::size_t n = m.n();
  return std::visit(
      Overloaded{[&](const QuadMax& q) {
                   LipschitzVector l{DenseVector(n), LipschitzProvenance::Analytic};
                   for (std::size_t i = 0; i < n; ++i)
                     l.values[i] = max_abs(q.a[i]) == 0.0
                                       ? 0.0
                                       : 2.0 * top_singular_pair(q.a[i]).sigma;
                   return l;
                 },
                 [&](const MatCompResiduals& mc) {
                   LipschitzVector l{DenseVector(n), LipschitzProvenance::Analytic};
                   // Hessian is 2 diag(mask); an all-zero mask gives a constant component.
                   for (std::size_t i = 0; i < n; ++i)
                     l.values[i] = max_abs(mc.masks[i]) > 0.0 ? 2.0 : 0.0;
                   return l;
                 },
                 [&](const LinearSystem&) {
                   return LipschitzVector{DenseVector(n), LipschitzProvenance::Analytic};
                 },
                 [&](const SinusoidMap& s) {
                   LipschitzVector l{DenseVector(n), LipschitzProvenance::Analytic};
                   for (std::size_t i = 0; i < n; ++i)
                     for (std::size_t j = 0; j < m.d(); ++j)
                       l.values[i] = std::max(l.values[i], std::abs(s.c(i, j)));
                   return l;
                 }},
      m.variant());
}

}  // namespace fcopt
