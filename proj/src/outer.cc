#include "fcopt/outer.hpp"

#include <algorithm>
#include <cmath>

#include "fcopt/detail/overloaded.hpp"

namespace fcopt {

namespace {

using detail::Overloaded;

void require_inner_dimension(const OuterFunction& f, const DenseVector& u, const char* where) {
  if (u.size() != f.n()) {
    throw DimensionError(std::string(where) + ": outer function expects " +
                         std::to_string(f.n()) + " components, got " + std::to_string(u.size()));
  }
}

std::size_t argmax_lowest(const DenseVector& u) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (u[i] > u[best]) best = i;
  return best;
}

double norm_value(NormKind kind, const DenseVector& u) {
  switch (kind) {
    case NormKind::L1:
      return norm1(u);
    case NormKind::L2:
      return norm2(u);
    case NormKind::LInf:
      return norm_inf(u);
  }
  return 0.0;
}

double sign(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

// sup of psi over the set (an upper bound where the exact supremum is not closed-form).
double regularizer_sup(const Regularizer& psi, const FeasibleSet& set) {
  const auto* l1 = std::get_if<ScaledL1>(&psi);
  if (l1 == nullptr || l1->weight == 0.0) return 0.0;
  const double w = l1->weight;
  return std::visit(
      Overloaded{[&](const Simplex&) { return w; },
                 [&](const Box& b) {
                   double acc = 0.0;
                   for (std::size_t i = 0; i < b.lo.size(); ++i)
                     acc += std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
                   return w * acc;
                 },
                 [&](const L2Ball& b) {
                   return w * (norm1(b.center) +
                               b.radius * std::sqrt(static_cast<double>(b.center.size())));
                 },
                 [&](const NuclearBall& b) {
                   return w * b.radius * std::sqrt(static_cast<double>(b.rows * b.cols));
                 }},
      set.variant());
}

}  // namespace

OuterFunction::OuterFunction(Variant f, std::size_t n) : f_(std::move(f)), n_(n) {
  if (n_ == 0) throw InvalidArgument("OuterFunction: inner dimension must be positive");
  std::visit(Overloaded{[&](const Coordinate& c) {
                          if (c.index >= n_) throw InvalidArgument("Coordinate: index out of range");
                        },
                        [&](const AdditiveComposite& a) {
                          if (a.index >= n_)
                            throw InvalidArgument("AdditiveComposite: index out of range");
                          if (const auto* l1 = std::get_if<ScaledL1>(&a.psi);
                              l1 != nullptr && !(l1->weight >= 0.0))
                            throw InvalidArgument("ScaledL1: weight must be nonnegative");
                        },
                        [](const auto&) {}},
             f_);
}

bool OuterFunction::is_monotone() const {
  return std::visit(Overloaded{[](const MaxOfComponents&) { return true; },
                               [](const Norm&) { return false; },
                               [](const Coordinate&) { return true; },
                               [](const AdditiveComposite&) { return true; },
                               [](const SumLoss& s) { return s.loss != LossKind::Abs; }},
                    f_);
}

std::string OuterFunction::name() const {
  return std::visit(
      Overloaded{[](const MaxOfComponents&) -> std::string { return "max"; },
                 [](const Norm& nrm) -> std::string {
                   switch (nrm.kind) {
                     case NormKind::L1:
                       return "norm_l1";
                     case NormKind::L2:
                       return "norm_l2";
                     case NormKind::LInf:
                       return "norm_linf";
                   }
                   return "norm";
                 },
                 [](const Coordinate& c) { return "coordinate_" + std::to_string(c.index); },
                 [](const AdditiveComposite& a) {
                   return std::string(std::holds_alternative<ZeroRegularizer>(a.psi)
                                          ? "additive_zero_"
                                          : "additive_l1_") +
                          std::to_string(a.index);
                 },
                 [](const SumLoss& s) -> std::string {
                   switch (s.loss) {
                     case LossKind::Abs:
                       return "sum_abs";
                     case LossKind::Hinge:
                       return "sum_hinge";
                     case LossKind::Logistic:
                       return "sum_logistic";
                   }
                   return "sum_loss";
                 }},
      f_);
}

double loss_value(LossKind kind, double t) {
  switch (kind) {
    case LossKind::Abs:
      return std::abs(t);
    case LossKind::Hinge:
      return std::max(0.0, t);
    case LossKind::Logistic:
      // log(1 + e^t) without overflow.
      return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
  }
  return 0.0;
}

double loss_derivative(LossKind kind, double t) {
  switch (kind) {
    case LossKind::Abs:
      return sign(t);
    case LossKind::Hinge:
      return t > 0.0 ? 1.0 : 0.0;
    case LossKind::Logistic:
      return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
  }
  return 0.0;
}

double regularizer_value(const OuterFunction& f, const DenseVector& x) {
  const auto* a = f.get_if<AdditiveComposite>();
  if (a == nullptr) return 0.0;
  if (const auto* l1 = std::get_if<ScaledL1>(&a->psi)) return l1->weight * norm1(x);
  return 0.0;
}

DenseVector regularizer_subgradient(const OuterFunction& f, const DenseVector& x) {
  DenseVector g(x.size());
  const auto* a = f.get_if<AdditiveComposite>();
  if (a == nullptr) return g;
  if (const auto* l1 = std::get_if<ScaledL1>(&a->psi))
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = l1->weight * sign(x[i]);
  return g;
}

double eval(const OuterFunction& f, const DenseVector& u, const DenseVector& x) {
  require_inner_dimension(f, u, "eval");
  return std::visit(
      Overloaded{[&](const MaxOfComponents&) { return u[argmax_lowest(u)]; },
                 [&](const Norm& nrm) { return norm_value(nrm.kind, u); },
                 [&](const Coordinate& c) { return u[c.index]; },
                 [&](const AdditiveComposite& a) { return u[a.index] + regularizer_value(f, x); },
                 [&](const SumLoss& s) {
                   double acc = 0.0;
                   for (double t : u) acc += loss_value(s.loss, t);
                   return acc;
                 }},
      f.variant());
}

DenseVector subgradient_weights(const OuterFunction& f, const DenseVector& u) {
  require_inner_dimension(f, u, "subgradient_weights");
  const std::size_t n = u.size();
  return std::visit(
      Overloaded{[&](const MaxOfComponents&) { return DenseVector::unit(n, argmax_lowest(u)); },
                 [&](const Norm& nrm) {
                   DenseVector g(n);
                   switch (nrm.kind) {
                     case NormKind::L1:
                       for (std::size_t i = 0; i < n; ++i) g[i] = sign(u[i]);
                       break;
                     case NormKind::L2: {
                       const double r = norm2(u);
                       if (r > 0.0) g = (1.0 / r) * u;
                       break;
                     }
                     case NormKind::LInf: {
                       std::size_t best = 0;
                       for (std::size_t i = 1; i < n; ++i)
                         if (std::abs(u[i]) > std::abs(u[best])) best = i;
                       g[best] = sign(u[best]);
                       break;
                     }
                   }
                   return g;
                 },
                 [&](const Coordinate& c) { return DenseVector::unit(n, c.index); },
                 [&](const AdditiveComposite& a) { return DenseVector::unit(n, a.index); },
                 [&](const SumLoss& s) {
                   DenseVector g(n);
                   for (std::size_t i = 0; i < n; ++i) g[i] = loss_derivative(s.loss, u[i]);
                   return g;
                 }},
      f.variant());
}

double lipschitz_bound(const OuterFunction& f, const DenseVector& lipschitz, double dsq,
                       const FeasibleSet& set) {
  require_inner_dimension(f, lipschitz, "lipschitz_bound");
  for (double l : lipschitz)
    if (l < 0.0) throw InvalidArgument("lipschitz_bound: negative Lipschitz constant");
  if (!(dsq >= 0.0)) throw InvalidArgument("lipschitz_bound: dsq must be nonnegative");
  const DenseVector scaled = dsq * lipschitz;
  return std::visit(
      Overloaded{[&](const AdditiveComposite& a) {
                   return scaled[a.index] + regularizer_sup(a.psi, set);
                 },
                 // Every other variant ignores x.
                 [&](const auto&) { return eval(f, scaled, DenseVector(set.dimension())); }},
      f.variant());
}

}  // namespace fcopt
