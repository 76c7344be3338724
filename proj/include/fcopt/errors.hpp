#pragma once

#include <stdexcept>
#include <string>

namespace fcopt {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Requested size exceeds what a dense routine supports.
class UnsupportedSizeError : public Error {
 public:
  using Error::Error;
};

// An iterative routine stopped at its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// Combination of outer function and feasible set with no subproblem solver.
class UnsupportedCombination : public Error {
 public:
  using Error::Error;
};

// A method was called on a problem that violates its assumptions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A state that cannot occur if the code is correct (e.g. an infeasible LP on the simplex).
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcopt
