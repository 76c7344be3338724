#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "fcopt/numerics.hpp"
#include "fcopt/sets.hpp"

namespace fcopt {

// f_i(x) = x^T A_i x - b_i^T x with A_i symmetric PSD.
struct QuadMax {
  std::vector<DenseMatrix> a;
  std::vector<DenseVector> b;
};

// f_i(X) = sum over observed (k, l) of (X_kl - T_kl)^2 for target T = targets[i] and a 0/1
// mask. X is flattened row-major.
struct MatCompResiduals {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<DenseMatrix> targets;
  std::vector<DenseMatrix> masks;
};

// f(x) = A x - b.
struct LinearSystem {
  DenseMatrix a;
  DenseVector b;
};

// f_i(x) = (A x + b)_i + sum_j C_ij sin(x_j). Smooth and, unless C = 0, nonconvex.
struct SinusoidMap {
  DenseMatrix a;
  DenseVector b;
  DenseMatrix c;
};

enum class LipschitzProvenance { Analytic, PowerIteration };

struct LipschitzVector {
  DenseVector values;
  LipschitzProvenance provenance = LipschitzProvenance::Analytic;
};

// f(x) and its Jacobian at one point.
struct Linearization {
  DenseVector point;
  DenseVector value;
  DenseMatrix jacobian;  // n x d
};

/// Differentiable inner mapping f: R^d -> R^n. Construction validates shapes and, for
/// QuadMax, symmetry and positive semidefiniteness of every A_i.
class InnerMapping {
 public:
  using Variant = std::variant<QuadMax, MatCompResiduals, LinearSystem, SinusoidMap>;

  InnerMapping(QuadMax m);
  InnerMapping(MatCompResiduals m);
  InnerMapping(LinearSystem m);
  InnerMapping(SinusoidMap m);

  const Variant& variant() const { return map_; }
  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  // Every component f_i is convex.
  bool components_convex() const;
  std::string name() const;

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&map_); }

 private:
  Variant map_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
};

DenseVector eval_map(const InnerMapping& m, const DenseVector& x);
// Rows are the component gradients. Pure; oracle accounting happens in CompositeProblem.
DenseMatrix jacobian(const InnerMapping& m, const DenseVector& x);
// Value and Jacobian in one pass.
Linearization linearize(const InnerMapping& m, const DenseVector& x);
LipschitzVector lipschitz_vector(const InnerMapping& m, const FeasibleSet& set);

}  // namespace fcopt
