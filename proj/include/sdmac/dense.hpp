#pragma once
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sdmac {

/// Row-major dense matrix, sized for verification work (dimension <= ~4000).
template <typename T = double>
struct Dense {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;

  Dense() = default;
  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, T(0)) {}

  T& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

using DenseMatrix = Dense<double>;
using DenseMatrixZ = Dense<std::complex<double>>;

double dense_maxabs(const DenseMatrix& a);
double dense_maxabs(const DenseMatrixZ& a);

/// Gaussian elimination with complete (row and column) pivoting; returns the
/// number of pivots whose magnitude exceeds `abs_tol`. Destroys `a`.
/// `parallel` toggles the OpenMP row-update path; both paths give identical
/// results (pivot search is serial either way).
std::size_t eliminate_complete_pivot(Dense<double>& a, double abs_tol, bool parallel = true);
std::size_t eliminate_complete_pivot(Dense<std::complex<double>>& a, double abs_tol,
                                     bool parallel = true);

/// rank(a): pivots with magnitude > tol * max|a| under complete pivoting.
std::size_t dense_rank(DenseMatrix a, double tol = 1e-12);
std::size_t dense_nullity(DenseMatrix a, double tol = 1e-12);

/// Variants with an absolute pivot threshold (multiplicity counting uses a
/// threshold tied to the norm of the un-shifted operator).
std::size_t dense_rank_abs(DenseMatrix a, double abs_tol);
std::size_t dense_nullity_abs(DenseMatrixZ a, double abs_tol);

/// c = a^T a * scale for a rectangular a (used to form F22^{-T} F22^{-1}).
DenseMatrix dense_ata(const DenseMatrix& a, double scale);
DenseMatrix dense_ata_serial(const DenseMatrix& a, double scale);

/// In-place dense Cholesky of a symmetric positive definite matrix; returns
/// the lower factor. Throws std::runtime_error on a non-positive pivot.
DenseMatrix dense_cholesky(DenseMatrix a);

void dense_matvec(const DenseMatrix& a, const double* x, double* y);

}  // namespace sdmac
