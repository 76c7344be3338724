#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "fcopt/errors.hpp"

namespace fcopt {

/// Dense real vector. Constructors reject non-finite entries.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n, double fill = 0.0);
  explicit DenseVector(std::vector<double> values);
  DenseVector(std::initializer_list<double> values);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(double s);

  bool operator==(const DenseVector& other) const = default;

  static DenseVector unit(std::size_t n, std::size_t i);

 private:
  std::vector<double> data_;
};

DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator*(double s, DenseVector a);
DenseVector operator*(DenseVector a, double s);

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
double norm1(const DenseVector& a);
double norm_inf(const DenseVector& a);
double sum(const DenseVector& a);
bool all_finite(std::span<const double> values);

// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);

// (1 - t) * a + t * b
DenseVector lerp(const DenseVector& a, const DenseVector& b, double t);

void require_same_size(const DenseVector& a, const DenseVector& b, const char* where);

/// Dense row-major matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const DenseVector& d);
  // Reinterprets a flattened row-major vector as a rows x cols matrix.
  static DenseMatrix reshape(const DenseVector& flat, std::size_t rows, std::size_t cols);
  static DenseMatrix outer(const DenseVector& u, const DenseVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  DenseVector row_vector(std::size_t i) const;
  DenseVector column_vector(std::size_t j) const;
  void set_column(std::size_t j, const DenseVector& v);

  const std::vector<double>& values() const { return data_; }
  std::vector<double>& values() { return data_; }
  DenseVector flatten() const { return DenseVector(data_); }

  DenseMatrix transpose() const;

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseVector multiply(const DenseMatrix& m, const DenseVector& x);
// m^T x
DenseVector transpose_multiply(const DenseMatrix& m, const DenseVector& x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& m);
double max_abs(const DenseMatrix& m);

struct SingularPair {
  double sigma = 0.0;
  DenseVector u;
  DenseVector v;
};

inline constexpr double kPowerIterationTol = 1e-10;
inline constexpr int kPowerIterationMaxIter = 10'000;

// Leading singular triple by power iteration on the smaller Gram matrix, started
// from the normalized all-ones vector. Converged when ||M^T u - sigma v|| <= tol * sigma.
// Throws ConvergenceError carrying the last residual if max_iter is reached.
SingularPair top_singular_pair(const DenseMatrix& m, double tol = kPowerIterationTol,
                               int max_iter = kPowerIterationMaxIter);

struct Svd {
  DenseMatrix u;        // rows x k, orthonormal columns
  DenseVector sigma;    // k = min(rows, cols), nonincreasing
  DenseMatrix v;        // cols x k, orthonormal columns
};

inline constexpr std::size_t kSvdMaxDimension = 64;

// Thin SVD by one-sided Jacobi rotations. min(rows, cols) must not exceed kSvdMaxDimension.
Svd svd_full(const DenseMatrix& m);

// Q factor of a square matrix with the sign convention diag(R) > 0 (Gram-Schmidt, two passes).
DenseMatrix orthonormal_q(const DenseMatrix& m);

}  // namespace fcopt
