#include "fcopt/random.hpp"

#include <cmath>
#include <numbers>

namespace fcopt {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

DenseVector Rng::normal_vector(std::size_t n) {
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal();
  return v;
}

DenseMatrix Rng::normal_matrix(std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (double& x : m.values()) x = normal();
  return m;
}

}  // namespace fcopt
