#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdmac/vec.hpp"

namespace sdmac {

using index_t = std::int32_t;

/// Compressed sparse rows. Column indices are sorted and unique within each
/// row after finalize(); explicitly stored zeros are removed.
struct CsrMatrix {
  index_t nrows = 0;
  index_t ncols = 0;
  std::vector<index_t> row_ptr;  // size nrows+1
  std::vector<index_t> col_idx;
  std::vector<double> values;

  index_t nnz() const { return static_cast<index_t>(col_idx.size()); }

  double at(index_t r, index_t c) const {
    for (index_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
      if (col_idx[k] == c) return values[k];
    return 0.0;
  }
};

CsrMatrix csr_identity(index_t n, double scale = 1.0);
CsrMatrix csr_transpose(const CsrMatrix& a);
CsrMatrix csr_scale(const CsrMatrix& a, double s);

/// Extracts the sub-matrix rows [r0, r0+nr) x cols [c0, c0+nc).
CsrMatrix csr_block(const CsrMatrix& a, index_t r0, index_t c0, index_t nr, index_t nc);

double csr_maxabs(const CsrMatrix& a);
double csr_frobenius(const CsrMatrix& a);

/// 2-norms of all columns (used by the threshold drop rule).
std::vector<double> csr_column_norms(const CsrMatrix& a);

/// y = A x, OpenMP over rows.
void spmv(const CsrMatrix& a, const double* x, double* y);
/// Serial reference implementation; identical results to spmv().
void spmv_serial(const CsrMatrix& a, const double* x, double* y);

inline Vector spmv(const CsrMatrix& a, const Vector& x) {
  if (static_cast<index_t>(x.size()) != a.ncols)
    throw std::invalid_argument("spmv: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(a.ncols) + " cols)");
  Vector y(a.nrows);
  spmv(a, x.data(), y.data());
  return y;
}

inline Vector spmv_serial(const CsrMatrix& a, const Vector& x) {
  if (static_cast<index_t>(x.size()) != a.ncols)
    throw std::invalid_argument("spmv_serial: dimension mismatch");
  Vector y(a.nrows);
  spmv_serial(a, x.data(), y.data());
  return y;
}

/// Triplet accumulator; duplicate entries are summed on finalize.
class CsrBuilder {
 public:
  CsrBuilder(index_t nrows, index_t ncols) : nrows_(nrows), ncols_(ncols) {}

  void add(index_t r, index_t c, double v) {
    rows_.push_back(r);
    cols_.push_back(c);
    vals_.push_back(v);
  }

  /// Adds `scale * m` with its (0,0) entry placed at (r0, c0).
  void add_block(index_t r0, index_t c0, const CsrMatrix& m, double scale = 1.0);
  /// Adds `scale * m^T` with its (0,0) entry placed at (r0, c0).
  void add_block_transposed(index_t r0, index_t c0, const CsrMatrix& m, double scale = 1.0);

  CsrMatrix build() const;

 private:
  index_t nrows_, ncols_;
  std::vector<index_t> rows_, cols_;
  std::vector<double> vals_;
};

}  // namespace sdmac
