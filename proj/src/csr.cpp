#include "sdmac/csr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sdmac {

void spmv(const CsrMatrix& a, const double* x, double* y) {
#pragma omp parallel for schedule(static)
  for (index_t r = 0; r < a.nrows; ++r) {
    double s = 0.0;
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[a.col_idx[k]];
    y[r] = s;
  }
}

void spmv_serial(const CsrMatrix& a, const double* x, double* y) {
  for (index_t r = 0; r < a.nrows; ++r) {
    double s = 0.0;
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.values[k] * x[a.col_idx[k]];
    y[r] = s;
  }
}

CsrMatrix csr_identity(index_t n, double scale) {
  CsrMatrix m;
  m.nrows = m.ncols = n;
  m.row_ptr.resize(n + 1);
  m.col_idx.resize(n);
  m.values.assign(n, scale);
  for (index_t i = 0; i <= n; ++i) m.row_ptr[i] = i;
  std::iota(m.col_idx.begin(), m.col_idx.end(), 0);
  return m;
}

CsrMatrix csr_transpose(const CsrMatrix& a) {
  CsrMatrix t;
  t.nrows = a.ncols;
  t.ncols = a.nrows;
  t.row_ptr.assign(t.nrows + 1, 0);
  t.col_idx.resize(a.nnz());
  t.values.resize(a.nnz());
  for (index_t k = 0; k < a.nnz(); ++k) t.row_ptr[a.col_idx[k] + 1]++;
  for (index_t r = 0; r < t.nrows; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
  std::vector<index_t> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (index_t r = 0; r < a.nrows; ++r)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      index_t pos = next[a.col_idx[k]]++;
      t.col_idx[pos] = r;
      t.values[pos] = a.values[k];
    }
  return t;
}

CsrMatrix csr_scale(const CsrMatrix& a, double s) {
  CsrMatrix m = a;
  for (double& v : m.values) v *= s;
  return m;
}

CsrMatrix csr_block(const CsrMatrix& a, index_t r0, index_t c0, index_t nr, index_t nc) {
  CsrBuilder b(nr, nc);
  for (index_t r = r0; r < r0 + nr; ++r)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      index_t c = a.col_idx[k];
      if (c >= c0 && c < c0 + nc) b.add(r - r0, c - c0, a.values[k]);
    }
  return b.build();
}

double csr_maxabs(const CsrMatrix& a) {
  double m = 0.0;
  for (double v : a.values) m = std::max(m, std::fabs(v));
  return m;
}

double csr_frobenius(const CsrMatrix& a) {
  double s = 0.0;
  for (double v : a.values) s += v * v;
  return std::sqrt(s);
}

std::vector<double> csr_column_norms(const CsrMatrix& a) {
  std::vector<double> s(a.ncols, 0.0);
  for (index_t k = 0; k < a.nnz(); ++k) s[a.col_idx[k]] += a.values[k] * a.values[k];
  for (double& v : s) v = std::sqrt(v);
  return s;
}

void CsrBuilder::add_block(index_t r0, index_t c0, const CsrMatrix& m, double scale) {
  for (index_t r = 0; r < m.nrows; ++r)
    for (index_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      add(r0 + r, c0 + m.col_idx[k], scale * m.values[k]);
}

void CsrBuilder::add_block_transposed(index_t r0, index_t c0, const CsrMatrix& m, double scale) {
  for (index_t r = 0; r < m.nrows; ++r)
    for (index_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      add(r0 + m.col_idx[k], c0 + r, scale * m.values[k]);
}

CsrMatrix CsrBuilder::build() const {
  const std::size_t nz = rows_.size();
  std::vector<std::size_t> perm(nz);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return rows_[a] != rows_[b] ? rows_[a] < rows_[b] : cols_[a] < cols_[b];
  });

  CsrMatrix m;
  m.nrows = nrows_;
  m.ncols = ncols_;
  m.row_ptr.assign(nrows_ + 1, 0);
  m.col_idx.reserve(nz);
  m.values.reserve(nz);
  std::size_t k = 0;
  while (k < nz) {
    index_t r = rows_[perm[k]], c = cols_[perm[k]];
    if (r < 0 || r >= nrows_ || c < 0 || c >= ncols_)
      throw std::invalid_argument("CsrBuilder: entry out of range");
    double v = 0.0;
    while (k < nz && rows_[perm[k]] == r && cols_[perm[k]] == c) v += vals_[perm[k++]];
    if (v != 0.0) {
      m.col_idx.push_back(c);
      m.values.push_back(v);
      m.row_ptr[r + 1]++;
    }
  }
  for (index_t r = 0; r < nrows_; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

}  // namespace sdmac
