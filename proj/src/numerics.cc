#include "fcopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace fcopt {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  if (!all_finite(values)) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

}  // namespace

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

DenseVector::DenseVector(std::size_t n, double fill) : data_(n, fill) {
  if (!std::isfinite(fill)) throw InvalidArgument("DenseVector: non-finite fill value");
}

DenseVector::DenseVector(std::vector<double> values) : data_(std::move(values)) {
  require_finite(data_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {
  require_finite(data_, "DenseVector");
}

DenseVector DenseVector::unit(std::size_t n, std::size_t i) {
  DenseVector e(n);
  e[i] = 1.0;
  return e;
}

void require_same_size(const DenseVector& a, const DenseVector& b, const char* where) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(where) + ": size " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  require_same_size(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  require_same_size(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator*(double s, DenseVector a) { return a *= s; }
DenseVector operator*(DenseVector a, double s) { return a *= s; }

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_size(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector& a) {
  // Scaled to avoid overflow on large entries.
  double scale = norm_inf(a);
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : a) {
    double t = v / scale;
    acc += t * t;
  }
  return scale * std::sqrt(acc);
}

double norm1(const DenseVector& a) {
  double acc = 0.0;
  for (double v : a) acc += std::abs(v);
  return acc;
}

double norm_inf(const DenseVector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double sum(const DenseVector& a) { return std::accumulate(a.begin(), a.end(), 0.0); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  require_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

DenseVector lerp(const DenseVector& a, const DenseVector& b, double t) {
  require_same_size(a, b, "lerp");
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - t) * a[i] + t * b[i];
  return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw InvalidArgument("DenseMatrix: non-finite fill value");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("DenseMatrix: " + std::to_string(data_.size()) + " entries for " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const DenseVector& d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::reshape(const DenseVector& flat, std::size_t rows, std::size_t cols) {
  if (flat.size() != rows * cols) {
    throw DimensionError("reshape: " + std::to_string(flat.size()) + " entries for " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = flat.values();
  return m;
}

DenseMatrix DenseMatrix::outer(const DenseVector& u, const DenseVector& v) {
  DenseMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

DenseVector DenseMatrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return DenseVector(std::vector<double>(r.begin(), r.end()));
}

DenseVector DenseMatrix::column_vector(std::size_t j) const {
  DenseVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(std::size_t j, const DenseVector& v) {
  if (v.size() != rows_) throw DimensionError("set_column: size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseVector multiply(const DenseMatrix& m, const DenseVector& x) {
  if (x.size() != m.cols()) {
    throw DimensionError("multiply: matrix has " + std::to_string(m.cols()) +
                         " columns, vector has " + std::to_string(x.size()) + " entries");
  }
  DenseVector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseVector transpose_multiply(const DenseMatrix& m, const DenseVector& x) {
  if (x.size() != m.rows()) {
    throw DimensionError("transpose_multiply: matrix has " + std::to_string(m.rows()) +
                         " rows, vector has " + std::to_string(x.size()) + " entries");
  }
  DenseVector y(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += r[j] * xi;
  }
  return y;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix multiply: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix minus: shape");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.values().size(); ++i) c.values()[i] -= b.values()[i];
  return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& v : c.values()) v *= s;
  return c;
}

double frobenius_norm(const DenseMatrix& m) { return norm2(DenseVector(m.values())); }

double max_abs(const DenseMatrix& m) {
  double r = 0.0;
  for (double v : m.values()) r = std::max(r, std::abs(v));
  return r;
}

namespace {

// Power iteration for the right singular vector of `m` (or of m^T when `transposed`).
SingularPair power_iterate(const DenseMatrix& m, bool transposed, double tol, int max_iter) {
  auto apply = [&](const DenseVector& v) {
    return transposed ? transpose_multiply(m, v) : multiply(m, v);
  };
  auto apply_t = [&](const DenseVector& u) {
    return transposed ? multiply(m, u) : transpose_multiply(m, u);
  };
  const std::size_t n = transposed ? m.rows() : m.cols();

  DenseVector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  DenseVector mv = apply(v);
  if (norm2(mv) == 0.0) {
    // All-ones start lies in the null space; restart from the heaviest coordinate.
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      double c = norm2(apply(DenseVector::unit(n, j)));
      if (c > best_norm) {
        best_norm = c;
        best = j;
      }
    }
    v = DenseVector::unit(n, best);
    mv = apply(v);
  }

  double residual = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double sigma = norm2(mv);
    DenseVector u = (1.0 / sigma) * mv;
    DenseVector w = apply_t(u);
    residual = norm2(w - sigma * v);
    if (residual <= tol * sigma) {
      // Refresh sigma and u against the final v.
      v = (1.0 / norm2(w)) * w;
      mv = apply(v);
      const double s = norm2(mv);
      return SingularPair{s, (1.0 / s) * mv, v};
    }
    v = (1.0 / norm2(w)) * w;
    mv = apply(v);
  }
  throw ConvergenceError("top_singular_pair: no convergence after " + std::to_string(max_iter) +
                             " iterations (residual " + std::to_string(residual) + ")",
                         residual);
}

}  // namespace

SingularPair top_singular_pair(const DenseMatrix& m, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("top_singular_pair: tol must be positive");
  if (m.rows() == 0 || m.cols() == 0 || max_abs(m) == 0.0) {
    throw InvalidArgument("top_singular_pair: matrix must be nonzero");
  }
  if (m.cols() <= m.rows()) return power_iterate(m, false, tol, max_iter);
  SingularPair p = power_iterate(m, true, tol, max_iter);
  std::swap(p.u, p.v);
  return p;
}

namespace {

// Orthonormalizes `cols` in place (two Gram-Schmidt passes). Columns whose remaining norm
// is below `drop` are replaced by standard basis vectors orthogonalized against the rest.
void orthonormalize(std::vector<DenseVector>& cols, std::size_t dim, const std::vector<bool>& keep) {
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto project_out = [&](DenseVector& c) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < j; ++k) axpy(-dot(cols[k], c), cols[k], c);
    };
    if (keep[j]) {
      project_out(cols[j]);
      double nrm = norm2(cols[j]);
      if (nrm > 0.5) {
        cols[j] *= 1.0 / nrm;
        continue;
      }
    }
    while (true) {
      DenseVector c = DenseVector::unit(dim, next_basis++ % dim);
      project_out(c);
      double nrm = norm2(c);
      if (nrm > 1e-3) {
        cols[j] = (1.0 / nrm) * c;
        break;
      }
    }
  }
}

Svd jacobi_tall(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  std::vector<DenseVector> a(n, DenseVector(rows));
  std::vector<DenseVector> v(n, DenseVector(n));
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = m.column_vector(j);
    v[j][j] = 1.0;
  }

  constexpr double kEps = 1e-15;
  constexpr int kMaxSweeps = 80;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(a[p], a[p]);
        const double beta = dot(a[q], a[q]);
        const double gamma = dot(a[p], a[q]);
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double ap = a[p][i];
          const double aq = a[q][i];
          a[p][i] = c * ap - s * aq;
          a[q][i] = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v[p][i];
          const double vq = v[q][i];
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(n);
  for (std::size_t j = 0; j < n; ++j) sig[j] = norm2(a[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  const double sigma_max = n == 0 ? 0.0 : sig[order[0]];
  const double drop = sigma_max * 1e-13 * static_cast<double>(std::max(rows, n));
  std::vector<DenseVector> ucols(n);
  std::vector<DenseVector> vcols(n);
  std::vector<bool> keep(n);
  Svd out;
  out.sigma = DenseVector(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sig[j];
    keep[k] = sig[j] > drop && sig[j] > 0.0;
    ucols[k] = keep[k] ? (1.0 / sig[j]) * a[j] : DenseVector(rows);
    vcols[k] = v[j];
  }
  orthonormalize(ucols, rows, keep);

  out.u = DenseMatrix(rows, n);
  out.v = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.u.set_column(k, ucols[k]);
    out.v.set_column(k, vcols[k]);
  }
  return out;
}

}  // namespace

Svd svd_full(const DenseMatrix& m) {
  const std::size_t k = std::min(m.rows(), m.cols());
  if (k > kSvdMaxDimension) {
    throw UnsupportedSizeError("svd_full: min(rows, cols) = " + std::to_string(k) +
                               " exceeds " + std::to_string(kSvdMaxDimension));
  }
  if (m.rows() >= m.cols()) return jacobi_tall(m);
  Svd t = jacobi_tall(m.transpose());
  return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

DenseMatrix orthonormal_q(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("orthonormal_q: matrix must be square");
  const std::size_t n = m.rows();
  std::vector<DenseVector> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = m.column_vector(j);
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) axpy(-dot(cols[k], cols[j]), cols[k], cols[j]);
    const double nrm = norm2(cols[j]);
    if (nrm == 0.0) throw InvalidArgument("orthonormal_q: matrix is singular");
    cols[j] *= 1.0 / nrm;
  }
  DenseMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) q.set_column(j, cols[j]);
  return q;
}

}  // namespace fcopt
