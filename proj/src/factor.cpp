#include "sdmac/factor.hpp"

#include <algorithm>
#include <cmath>

namespace sdmac {

std::unique_ptr<Factorization> make_cholmod_cholesky(const CsrMatrix& a);   // factor_suitesparse.cpp
std::unique_ptr<Factorization> make_umfpack_lu(const CsrMatrix& a);

std::unique_ptr<Factorization> factor(const CsrMatrix& a, FactorKind kind, FactorOptions opts) {
  if (a.nrows != a.ncols) throw std::invalid_argument("factor: matrix must be square");
  switch (kind) {
    case FactorKind::Cholesky:
      if (opts.fill_reducing) return make_cholmod_cholesky(a);
      return std::make_unique<NaturalCholesky>(a);
    case FactorKind::Lu:
      return make_umfpack_lu(a);
    case FactorKind::IncompleteCholesky:
      return incomplete_cholesky(a, opts.droptol);
  }
  throw std::invalid_argument("factor: unknown kind");
}

// ---------------------------------------------------------------------------
// NaturalCholesky: up-looking row factorization with the elimination tree.

NaturalCholesky::NaturalCholesky(const CsrMatrix& a) : n_(a.nrows) {
  const index_t n = n_;
  std::vector<index_t> parent(n, -1), ancestor(n, -1);
  // elimination tree from the lower triangle
  for (index_t k = 0; k < n; ++k)
    for (index_t p = a.row_ptr[k]; p < a.row_ptr[k + 1]; ++p) {
      index_t i = a.col_idx[p];
      while (i != -1 && i < k) {
        index_t next = ancestor[i];
        ancestor[i] = k;
        if (next == -1) parent[i] = k;
        i = next;
      }
    }

  l_.nrows = l_.ncols = n;
  l_.row_ptr.assign(n + 1, 0);
  std::vector<double> w(n, 0.0);
  std::vector<char> mark(n, 0);
  std::vector<index_t> pattern;
  for (index_t k = 0; k < n; ++k) {
    pattern.clear();
    double akk = 0.0;
    for (index_t p = a.row_ptr[k]; p < a.row_ptr[k + 1]; ++p) {
      index_t j = a.col_idx[p];
      if (j > k) continue;
      if (j == k) {
        akk = a.values[p];
        continue;
      }
      w[j] = a.values[p];
      // walk up the etree collecting the reach of column j
      index_t i = j;
      while (i < k && i != -1 && !mark[i]) {
        mark[i] = 1;
        pattern.push_back(i);
        i = parent[i];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    double diag = akk;
    for (index_t j : pattern) {
      // sparse dot of L(j,0:j-1) against the row being built
      double s = w[j];
      double ljj = 0.0;
      for (index_t p = l_.row_ptr[j]; p < l_.row_ptr[j + 1]; ++p) {
        index_t i = l_.col_idx[p];
        if (i == j)
          ljj = l_.values[p];
        else
          s -= l_.values[p] * w[i];
      }
      const double lkj = s / ljj;
      w[j] = lkj;
      diag -= lkj * lkj;
    }
    if (diag <= 0.0)
      throw FactorError("cholesky: non-positive pivot at index " + std::to_string(k), k);
    for (index_t j : pattern) {
      l_.col_idx.push_back(j);
      l_.values.push_back(w[j]);
      w[j] = 0.0;
      mark[j] = 0;
    }
    l_.col_idx.push_back(k);
    l_.values.push_back(std::sqrt(diag));
    l_.row_ptr[k + 1] = static_cast<index_t>(l_.col_idx.size());
  }
}

void NaturalCholesky::solve(const double* b, double* x) const {
  const index_t n = n_;
  // L y = b (row-oriented; diagonal is the last entry of each row)
  for (index_t k = 0; k < n; ++k) {
    double s = b[k];
    index_t end = l_.row_ptr[k + 1] - 1;
    for (index_t p = l_.row_ptr[k]; p < end; ++p) s -= l_.values[p] * x[l_.col_idx[p]];
    x[k] = s / l_.values[end];
  }
  // L^T x = y (column-oriented over rows of L)
  for (index_t k = n - 1; k >= 0; --k) {
    index_t end = l_.row_ptr[k + 1] - 1;
    x[k] /= l_.values[end];
    const double xk = x[k];
    for (index_t p = l_.row_ptr[k]; p < end; ++p) x[l_.col_idx[p]] -= l_.values[p] * xk;
  }
}

DenseMatrix NaturalCholesky::trailing_lower(index_t m) const {
  DenseMatrix f(m, m);
  const index_t off = n_ - m;
  for (index_t r = off; r < n_; ++r)
    for (index_t p = l_.row_ptr[r]; p < l_.row_ptr[r + 1]; ++p) {
      index_t c = l_.col_idx[p];
      if (c >= off) f(r - off, c - off) = l_.values[p];
    }
  return f;
}

// ---------------------------------------------------------------------------
// IncompleteCholesky: left-looking column ICT.

IncompleteCholesky::IncompleteCholesky(const CsrMatrix& a, double droptol)
    : n_(a.nrows), droptol_(droptol) {
  index_t bad = -1;
  if (try_factor(a, &bad)) return;
  for (double sigma : {1e-3, 1e-2, 1e-1}) {
    CsrMatrix shifted = a;
    for (index_t r = 0; r < a.nrows; ++r)
      for (index_t p = shifted.row_ptr[r]; p < shifted.row_ptr[r + 1]; ++p)
        if (shifted.col_idx[p] == r) shifted.values[p] *= (1.0 + sigma);
    col_ptr_.clear();
    row_idx_.clear();
    vals_.clear();
    if (try_factor(shifted, &bad)) {
      shift_ = sigma;
      return;
    }
  }
  throw FactorError("incomplete cholesky: breakdown at pivot " + std::to_string(bad) +
                        " persists under diagonal shifts",
                    bad);
}

bool IncompleteCholesky::try_factor(const CsrMatrix& a, index_t* bad_pivot) {
  const index_t n = n_;
  const std::vector<double> colnorm = csr_column_norms(a);

  std::vector<std::vector<index_t>> rows(n);
  std::vector<std::vector<double>> cvals(n);
  // list[r]: columns whose next unconsumed entry sits in row r
  std::vector<index_t> list_head(n, -1), list_next(n, -1), cptr(n, 0);

  std::vector<double> w(n, 0.0);
  std::vector<index_t> pat;
  std::vector<char> inpat(n, 0);

  for (index_t k = 0; k < n; ++k) {
    pat.clear();
    for (index_t p = a.row_ptr[k]; p < a.row_ptr[k + 1]; ++p) {
      index_t c = a.col_idx[p];
      if (c < k) continue;  // lower triangle of column k == row k entries with col >= k
      w[c] = a.values[p];
      if (!inpat[c]) {
        inpat[c] = 1;
        pat.push_back(c);
      }
    }
    // updates from columns j with L(k,j) != 0
    index_t j = list_head[k];
    while (j != -1) {
      const index_t jnext = list_next[j];
      const double lkj = cvals[j][cptr[j]];
      for (std::size_t q = cptr[j]; q < rows[j].size(); ++q) {
        const index_t r = rows[j][q];
        w[r] -= lkj * cvals[j][q];
        if (!inpat[r]) {
          inpat[r] = 1;
          pat.push_back(r);
        }
      }
      if (++cptr[j] < static_cast<index_t>(rows[j].size())) {
        const index_t r = rows[j][cptr[j]];
        list_next[j] = list_head[r];
        list_head[r] = j;
      }
      j = jnext;
    }

    const double d = w[k];
    if (d <= 0.0) {
      *bad_pivot = k;
      for (index_t r : pat) {
        w[r] = 0.0;
        inpat[r] = 0;
      }
      return false;
    }
    const double piv = std::sqrt(d);
    // the drop test applies to entries of the factor itself
    const double thresh = droptol_ * colnorm[k] * piv;

    std::sort(pat.begin(), pat.end());
    rows[k].push_back(k);
    cvals[k].push_back(piv);
    for (index_t r : pat) {
      if (r != k && std::fabs(w[r]) >= thresh) {
        rows[k].push_back(r);
        cvals[k].push_back(w[r] / piv);
      }
      w[r] = 0.0;
      inpat[r] = 0;
    }
    cptr[k] = 1;  // skip diagonal for future updates
    if (rows[k].size() > 1) {
      const index_t r = rows[k][1];
      list_next[k] = list_head[r];
      list_head[r] = k;
    }
  }

  col_ptr_.assign(n + 1, 0);
  for (index_t c = 0; c < n; ++c) col_ptr_[c + 1] = col_ptr_[c] + static_cast<index_t>(rows[c].size());
  row_idx_.reserve(col_ptr_[n]);
  vals_.reserve(col_ptr_[n]);
  for (index_t c = 0; c < n; ++c) {
    row_idx_.insert(row_idx_.end(), rows[c].begin(), rows[c].end());
    vals_.insert(vals_.end(), cvals[c].begin(), cvals[c].end());
  }
  return true;
}

void IncompleteCholesky::solve(const double* b, double* x) const {
  const index_t n = n_;
  std::copy(b, b + n, x);
  // L y = b, column-oriented (diagonal first in each column)
  for (index_t k = 0; k < n; ++k) {
    const index_t p0 = col_ptr_[k], p1 = col_ptr_[k + 1];
    x[k] /= vals_[p0];
    const double xk = x[k];
    for (index_t p = p0 + 1; p < p1; ++p) x[row_idx_[p]] -= vals_[p] * xk;
  }
  // L^T x = y
  for (index_t k = n - 1; k >= 0; --k) {
    const index_t p0 = col_ptr_[k], p1 = col_ptr_[k + 1];
    double s = x[k];
    for (index_t p = p0 + 1; p < p1; ++p) s -= vals_[p] * x[row_idx_[p]];
    x[k] = s / vals_[p0];
  }
}

DenseMatrix IncompleteCholesky::trailing_lower(index_t m) const {
  DenseMatrix f(m, m);
  const index_t off = n_ - m;
  for (index_t c = off; c < n_; ++c)
    for (index_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p)
      f(row_idx_[p] - off, c - off) = vals_[p];
  return f;
}

CsrMatrix IncompleteCholesky::lower_csr() const {
  CsrBuilder b(n_, n_);
  for (index_t c = 0; c < n_; ++c)
    for (index_t p = col_ptr_[c]; p < col_ptr_[c + 1]; ++p) b.add(row_idx_[p], c, vals_[p]);
  return b.build();
}

std::unique_ptr<IncompleteCholesky> incomplete_cholesky(const CsrMatrix& a, double droptol) {
  if (a.nrows != a.ncols) throw std::invalid_argument("incomplete_cholesky: matrix must be square");
  if (droptol < 0.0) throw std::invalid_argument("incomplete_cholesky: droptol must be >= 0");
  return std::make_unique<IncompleteCholesky>(a, droptol);
}

}  // namespace sdmac
