#include "fcopt/sets.hpp"

#include "fcopt/detail/overloaded.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace fcopt {

namespace {

using detail::Overloaded;

void require_dimension(const FeasibleSet& set, const DenseVector& x, const char* where) {
  if (x.size() != set.dimension()) {
    throw DimensionError(std::string(where) + ": expected " + std::to_string(set.dimension()) +
                         " entries for " + set.name() + ", got " + std::to_string(x.size()));
  }
}

// Leading singular pair for the nuclear-ball oracle. Falls back to the Jacobi SVD when power
// iteration stalls on a near-degenerate spectrum.
SingularPair leading_pair(const DenseMatrix& g) {
  // Small matrices switch to the full SVD early when the spectral gap is tiny.
  const bool small = std::min(g.rows(), g.cols()) <= kSvdMaxDimension;
  try {
    return top_singular_pair(g, kPowerIterationTol, small ? 60 : kPowerIterationMaxIter);
  } catch (const ConvergenceError&) {
    if (!small) throw;
    Svd s = svd_full(g);
    return SingularPair{s.sigma[0], s.u.column_vector(0), s.v.column_vector(0)};
  }
}

}  // namespace

FeasibleSet::FeasibleSet(Simplex s) : set_(s) {
  if (s.d == 0) throw InvalidArgument("Simplex: dimension must be positive");
}

FeasibleSet::FeasibleSet(Box b) : set_(std::move(b)) {
  const auto& box = std::get<Box>(set_);
  require_same_size(box.lo, box.hi, "Box");
  if (box.lo.empty()) throw InvalidArgument("Box: dimension must be positive");
  bool positive_extent = false;
  for (std::size_t i = 0; i < box.lo.size(); ++i) {
    if (box.lo[i] > box.hi[i]) throw InvalidArgument("Box: lo must not exceed hi");
    positive_extent |= box.lo[i] < box.hi[i];
  }
  if (!positive_extent) throw InvalidArgument("Box: diameter must be positive");
}

FeasibleSet::FeasibleSet(L2Ball b) : set_(std::move(b)) {
  const auto& ball = std::get<L2Ball>(set_);
  if (!(ball.radius > 0.0)) throw InvalidArgument("L2Ball: radius must be positive");
  if (ball.center.empty()) throw InvalidArgument("L2Ball: dimension must be positive");
}

FeasibleSet::FeasibleSet(NuclearBall b) : set_(b) {
  if (!(b.radius > 0.0)) throw InvalidArgument("NuclearBall: radius must be positive");
  if (b.rows == 0 || b.cols == 0) throw InvalidArgument("NuclearBall: empty shape");
}

std::size_t FeasibleSet::dimension() const {
  return std::visit(Overloaded{[](const Simplex& s) { return s.d; },
                               [](const Box& b) { return b.lo.size(); },
                               [](const L2Ball& b) { return b.center.size(); },
                               [](const NuclearBall& b) { return b.rows * b.cols; }},
                    set_);
}

std::string FeasibleSet::name() const {
  return std::visit(
      Overloaded{[](const Simplex& s) { return "Simplex(" + std::to_string(s.d) + ")"; },
                 [](const Box& b) { return "Box(" + std::to_string(b.lo.size()) + ")"; },
                 [](const L2Ball& b) { return "L2Ball(" + std::to_string(b.center.size()) + ")"; },
                 [](const NuclearBall& b) {
                   return "NuclearBall(" + std::to_string(b.rows) + "x" + std::to_string(b.cols) +
                          ")";
                 }},
      set_);
}

DenseVector lmo(const FeasibleSet& set, const DenseVector& g) {
  require_dimension(set, g, "lmo");
  return std::visit(
      Overloaded{
          [&](const Simplex& s) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < s.d; ++i)
              if (g[i] < g[best]) best = i;
            return DenseVector::unit(s.d, best);
          },
          [&](const Box& b) {
            DenseVector x(b.lo.size());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = g[i] < 0.0 ? b.hi[i] : b.lo[i];
            return x;
          },
          [&](const L2Ball& b) {
            const double nrm = norm2(g);
            if (nrm == 0.0) {
              DenseVector x = b.center;
              x[0] -= b.radius;
              return x;
            }
            return b.center - (b.radius / nrm) * g;
          },
          [&](const NuclearBall& b) {
            if (norm_inf(g) == 0.0) {
              DenseVector x(b.rows * b.cols);
              x[0] = -b.radius;
              return x;
            }
            SingularPair p = leading_pair(DenseMatrix::reshape(g, b.rows, b.cols));
            return (-b.radius * DenseMatrix::outer(p.u, p.v)).flatten();
          }},
      set.variant());
}

DenseVector project_simplex_scaled(const DenseVector& v, double radius) {
  // Sort-and-threshold: find tau with sum max(v_i - tau, 0) = radius.
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
      tau = candidate;
      break;
    }
  }
  DenseVector x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::max(v[i] - tau, 0.0);
  return x;
}

DenseVector project(const FeasibleSet& set, const DenseVector& y) {
  require_dimension(set, y, "project");
  return std::visit(
      Overloaded{[&](const Simplex&) { return project_simplex_scaled(y, 1.0); },
                 [&](const Box& b) {
                   DenseVector x(y.size());
                   for (std::size_t i = 0; i < y.size(); ++i)
                     x[i] = std::clamp(y[i], b.lo[i], b.hi[i]);
                   return x;
                 },
                 [&](const L2Ball& b) {
                   DenseVector offset = y - b.center;
                   const double nrm = norm2(offset);
                   if (nrm <= b.radius) return y;
                   return b.center + (b.radius / nrm) * offset;
                 },
                 [&](const NuclearBall& b) {
                   Svd s = svd_full(DenseMatrix::reshape(y, b.rows, b.cols));
                   if (sum(s.sigma) <= b.radius) return y;
                   DenseVector shrunk = project_simplex_scaled(s.sigma, b.radius);
                   DenseMatrix x(b.rows, b.cols);
                   for (std::size_t k = 0; k < shrunk.size(); ++k) {
                     if (shrunk[k] == 0.0) continue;
                     for (std::size_t i = 0; i < b.rows; ++i)
                       for (std::size_t j = 0; j < b.cols; ++j)
                         x(i, j) += shrunk[k] * s.u(i, k) * s.v(j, k);
                   }
                   return x.flatten();
                 }},
      set.variant());
}

double diameter(const FeasibleSet& set) {
  return std::visit(Overloaded{[](const Simplex&) { return std::numbers::sqrt2; },
                               [](const Box& b) { return norm2(b.hi - b.lo); },
                               [](const L2Ball& b) { return 2.0 * b.radius; },
                               [](const NuclearBall& b) { return 2.0 * b.radius; }},
                    set.variant());
}

bool contains(const FeasibleSet& set, const DenseVector& x, double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("contains: tol must be nonnegative");
  require_dimension(set, x, "contains");
  return std::visit(
      Overloaded{[&](const Simplex&) {
                   for (double v : x)
                     if (v < -tol) return false;
                   return std::abs(sum(x) - 1.0) <= tol;
                 },
                 [&](const Box& b) {
                   for (std::size_t i = 0; i < x.size(); ++i)
                     if (x[i] < b.lo[i] - tol || x[i] > b.hi[i] + tol) return false;
                   return true;
                 },
                 [&](const L2Ball& b) { return norm2(x - b.center) <= b.radius + tol; },
                 [&](const NuclearBall& b) {
                   Svd s = svd_full(DenseMatrix::reshape(x, b.rows, b.cols));
                   return sum(s.sigma) <= b.radius + tol;
                 }},
      set.variant());
}

DenseVector center_point(const FeasibleSet& set) {
  return std::visit(
      Overloaded{[](const Simplex& s) { return DenseVector(s.d, 1.0 / static_cast<double>(s.d)); },
                 [](const Box& b) { return 0.5 * (b.lo + b.hi); },
                 [](const L2Ball& b) { return b.center; },
                 [](const NuclearBall& b) { return DenseVector(b.rows * b.cols); }},
      set.variant());
}

DenseVector random_point(const FeasibleSet& set, Rng& rng) {
  const std::size_t n = set.dimension();
  if (rng.uniform() < 0.25) return lmo(set, rng.normal_vector(n));
  const double scale = diameter(set) / std::sqrt(static_cast<double>(n));
  DenseVector y = center_point(set) + (scale * rng.uniform(0.1, 1.0)) * rng.normal_vector(n);
  return project(set, y);
}

}  // namespace fcopt
