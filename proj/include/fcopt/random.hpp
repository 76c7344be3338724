#pragma once

#include <cstdint>
#include <random>

#include "fcopt/numerics.hpp"

namespace fcopt {

inline constexpr std::uint64_t kDefaultSeed = 666013;

// Portable seeded generator: std::mt19937_64 (its output sequence is fixed by the C++
// standard) with hand-written uniform and normal transforms, since the standard library
// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller.
  double normal();
  std::uint64_t next() { return engine_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

  DenseVector normal_vector(std::size_t n);
  DenseMatrix normal_matrix(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fcopt
