#include "sdmac/dense.hpp"

#include <algorithm>
#include <cmath>

namespace sdmac {

namespace {

template <typename T>
double absval(const T& v) {
  return std::abs(v);
}

template <typename T>
std::size_t eliminate_impl(Dense<T>& a, double abs_tol, bool parallel) {
  const std::size_t m = a.rows, n = a.cols;
  const std::size_t steps = std::min(m, n);
  std::size_t rank = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    // Complete pivot search (serial: deterministic regardless of threads).
    std::size_t pi = k, pj = k;
    double pmax = 0.0;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < n; ++j) {
        double v = absval(a(i, j));
        if (v > pmax) {
          pmax = v;
          pi = i;
          pj = j;
        }
      }
    if (pmax <= abs_tol) break;
    ++rank;
    if (pi != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pi, j));
    if (pj != k)
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, pj));
    const T piv = a(k, k);
    if (parallel) {
      // worth forking only while the trailing block is big
#pragma omp parallel for schedule(static) if ((m - k) * (n - k) > 1u << 20)
      for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) + 1;
           i < static_cast<std::ptrdiff_t>(m); ++i) {
        const T f = a(i, k) / piv;
        a(i, k) = T(0);
        for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    } else {
      for (std::size_t i = k + 1; i < m; ++i) {
        const T f = a(i, k) / piv;
        a(i, k) = T(0);
        for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    }
  }
  return rank;
}

}  // namespace

double dense_maxabs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

double dense_maxabs(const DenseMatrixZ& a) {
  double m = 0.0;
  for (const auto& v : a.data) m = std::max(m, std::abs(v));
  return m;
}

std::size_t eliminate_complete_pivot(Dense<double>& a, double abs_tol, bool parallel) {
  return eliminate_impl(a, abs_tol, parallel);
}

std::size_t eliminate_complete_pivot(Dense<std::complex<double>>& a, double abs_tol,
                                     bool parallel) {
  return eliminate_impl(a, abs_tol, parallel);
}

std::size_t dense_rank(DenseMatrix a, double tol) {
  const double t = tol * dense_maxabs(a);
  return eliminate_complete_pivot(a, t);
}

std::size_t dense_nullity(DenseMatrix a, double tol) {
  const std::size_t c = a.cols;
  return c - dense_rank(std::move(a), tol);
}

std::size_t dense_rank_abs(DenseMatrix a, double abs_tol) {
  return eliminate_complete_pivot(a, abs_tol);
}

std::size_t dense_nullity_abs(DenseMatrixZ a, double abs_tol) {
  const std::size_t c = a.cols;
  return c - eliminate_complete_pivot(a, abs_tol);
}

DenseMatrix dense_ata(const DenseMatrix& a, double scale) {
  DenseMatrix c(a.cols, a.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.cols); ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows; ++k) s += a(k, i) * a(k, j);
      c(i, j) = s * scale;
    }
  return c;
}

DenseMatrix dense_ata_serial(const DenseMatrix& a, double scale) {
  DenseMatrix c(a.cols, a.cols);
  for (std::size_t i = 0; i < a.cols; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows; ++k) s += a(k, i) * a(k, j);
      c(i, j) = s * scale;
    }
  return c;
}

DenseMatrix dense_cholesky(DenseMatrix a) {
  const std::size_t n = a.rows;
  for (std::size_t k = 0; k < n; ++k) {
    double d = a(k, k);
    for (std::size_t j = 0; j < k; ++j) d -= a(k, j) * a(k, j);
    if (d <= 0.0) throw std::runtime_error("dense_cholesky: non-positive pivot at " +
                                           std::to_string(k));
    a(k, k) = std::sqrt(d);
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = a(i, k);
      for (std::size_t j = 0; j < k; ++j) s -= a(i, j) * a(k, j);
      a(i, k) = s / a(k, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return a;
}

void dense_matvec(const DenseMatrix& a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

}  // namespace sdmac
