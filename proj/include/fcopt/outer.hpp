#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "fcopt/numerics.hpp"
#include "fcopt/sets.hpp"

namespace fcopt {

// max_i u_i
struct MaxOfComponents {};

enum class NormKind { L1, L2, LInf };
// ||u||
struct Norm {
  NormKind kind = NormKind::L2;
};

// u_i
struct Coordinate {
  std::size_t index = 0;
};

struct ZeroRegularizer {};
// w * ||x||_1, w >= 0
struct ScaledL1 {
  double weight = 0.0;
};
using Regularizer = std::variant<ZeroRegularizer, ScaledL1>;

// u_i + psi(x)
struct AdditiveComposite {
  std::size_t index = 0;
  Regularizer psi = ZeroRegularizer{};
};

enum class LossKind { Abs, Hinge, Logistic };
// sum_i loss(u_i). Logistic uses the standard log(1 + e^t), so F(0) = n log 2.
struct SumLoss {
  LossKind loss = LossKind::Hinge;
};

/// Simple outer function F(u, x) of a fully composite objective F(f(x), x).
class OuterFunction {
 public:
  using Variant = std::variant<MaxOfComponents, Norm, Coordinate, AdditiveComposite, SumLoss>;

  OuterFunction(Variant f, std::size_t n);

  const Variant& variant() const { return f_; }
  // Expected inner dimension.
  std::size_t n() const { return n_; }
  // F(., x) nondecreasing in each component of u.
  bool is_monotone() const;
  std::string name() const;

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&f_); }

 private:
  Variant f_;
  std::size_t n_;
};

double eval(const OuterFunction& f, const DenseVector& u, const DenseVector& x);

// Element of the u-subdifferential. Ties in max/argmax resolve to the lowest index and the
// norm subgradient at zero is the zero vector.
DenseVector subgradient_weights(const OuterFunction& f, const DenseVector& u);

// psi(x) for AdditiveComposite, zero for every other variant.
double regularizer_value(const OuterFunction& f, const DenseVector& x);
// Subgradient of psi at x (zero vector when psi is absent).
DenseVector regularizer_subgradient(const OuterFunction& f, const DenseVector& x);

// sup_{x in set} F(L * dsq, x). Pass dsq = 1 for F(L).
double lipschitz_bound(const OuterFunction& f, const DenseVector& lipschitz, double dsq,
                       const FeasibleSet& set);

double loss_value(LossKind kind, double t);
double loss_derivative(LossKind kind, double t);

}  // namespace fcopt
