#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "fcopt/numerics.hpp"
#include "fcopt/random.hpp"

namespace fcopt {

// Probability simplex {x >= 0, sum x = 1} in R^d.
struct Simplex {
  std::size_t d = 0;
};

struct Box {
  DenseVector lo;
  DenseVector hi;
};

struct L2Ball {
  DenseVector center;
  double radius = 1.0;
};

// {X in R^{rows x cols} : ||X||_* <= radius}; points are flattened row-major.
struct NuclearBall {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double radius = 1.0;
};

/// Compact convex feasible set. Immutable after construction; the constructor validates
/// lo <= hi and positive radii.
class FeasibleSet {
 public:
  using Variant = std::variant<Simplex, Box, L2Ball, NuclearBall>;

  FeasibleSet(Simplex s);
  FeasibleSet(Box b);
  FeasibleSet(L2Ball b);
  FeasibleSet(NuclearBall b);

  const Variant& variant() const { return set_; }
  std::size_t dimension() const;
  std::string name() const;

  bool is_simplex() const { return std::holds_alternative<Simplex>(set_); }
  template <typename T>
  const T* get_if() const { return std::get_if<T>(&set_); }

 private:
  Variant set_;
};

// Extreme point minimizing <g, x>. Ties go to the lowest index; a zero direction returns
// the lowest-index extreme point.
DenseVector lmo(const FeasibleSet& set, const DenseVector& g);

// Euclidean projection.
DenseVector project(const FeasibleSet& set, const DenseVector& y);

// Upper bound on max ||x - y||_2 over the set (exact except for NuclearBall).
double diameter(const FeasibleSet& set);

bool contains(const FeasibleSet& set, const DenseVector& x, double tol);

// Barycenter of the simplex, center of the box/ball, zero matrix for the nuclear ball.
DenseVector center_point(const FeasibleSet& set);

// Random feasible point: projection of a random Gaussian perturbation of the center,
// or (one draw in four) an extreme point from a random linear direction.
DenseVector random_point(const FeasibleSet& set, Rng& rng);

// Projection of `v` (nonnegative-free) onto {s : s >= 0, sum s = radius}.
DenseVector project_simplex_scaled(const DenseVector& v, double radius);

}  // namespace fcopt
