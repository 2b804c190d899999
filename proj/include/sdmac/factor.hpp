#pragma once
#include <memory>
#include <stdexcept>
#include <string>

#include "sdmac/csr.hpp"
#include "sdmac/dense.hpp"

namespace sdmac {

enum class FactorKind { Cholesky, Lu, IncompleteCholesky };

struct FactorOptions {
  // Cholesky only: false keeps the layout-given ordering (in-house kernel),
  // true delegates to CHOLMOD with a fill-reducing permutation.
  bool fill_reducing = false;
  double droptol = 1e-2;  // incomplete Cholesky
};

struct FactorError : std::runtime_error {
  FactorError(const std::string& what, index_t pivot) : std::runtime_error(what), pivot_index(pivot) {}
  index_t pivot_index;
};

class Factorization {
 public:
  virtual ~Factorization() = default;
  virtual void solve(const double* b, double* x) const = 0;
  virtual FactorKind kind() const = 0;
  virtual index_t dim() const = 0;

  Vector solve(const Vector& b) const {
    if (static_cast<index_t>(b.size()) != dim())
      throw std::invalid_argument("Factorization::solve: dimension mismatch");
    Vector x(b.size());
    solve(b.data(), x.data());
    return x;
  }

  /// X = A^{-1} B for `nrhs` column-major right-hand sides.
  virtual void solve_many(index_t nrhs, const double* b, double* x) const {
    const index_t n = dim();
    for (index_t j = 0; j < nrhs; ++j) solve(b + std::size_t(j) * n, x + std::size_t(j) * n);
  }
};

std::unique_ptr<Factorization> factor(const CsrMatrix& a, FactorKind kind, FactorOptions opts = {});

/// Sparse Cholesky in the given ordering (no permutation); factor rows stay
/// aligned with the layout, so trailing sub-blocks of L match trailing
/// sub-blocks of A.
class NaturalCholesky final : public Factorization {
 public:
  explicit NaturalCholesky(const CsrMatrix& a);
  using Factorization::solve;
  void solve(const double* b, double* x) const override;
  FactorKind kind() const override { return FactorKind::Cholesky; }
  index_t dim() const override { return n_; }
  const CsrMatrix& lower() const { return l_; }
  /// Trailing m x m block of the lower factor, densified.
  DenseMatrix trailing_lower(index_t m) const;

 private:
  index_t n_;
  CsrMatrix l_;  // lower triangle, diagonal last in each row
};

/// Threshold incomplete Cholesky in the given ordering. An off-diagonal
/// candidate in column k is dropped when |entry| < droptol * ||A(:,k)||_2.
/// On breakdown the factorization retries with A + sigma*diag(A),
/// sigma in {1e-3, 1e-2, 1e-1}; the shift actually used is reported.
class IncompleteCholesky final : public Factorization {
 public:
  IncompleteCholesky(const CsrMatrix& a, double droptol);
  using Factorization::solve;
  void solve(const double* b, double* x) const override;
  FactorKind kind() const override { return FactorKind::IncompleteCholesky; }
  index_t dim() const override { return n_; }
  double droptol() const { return droptol_; }
  double shift_used() const { return shift_; }
  index_t factor_nnz() const { return static_cast<index_t>(vals_.size()); }
  DenseMatrix trailing_lower(index_t m) const;
  CsrMatrix lower_csr() const;

 private:
  bool try_factor(const CsrMatrix& a, index_t* bad_pivot);
  index_t n_;
  double droptol_;
  double shift_ = 0.0;
  // column-major (CSC) lower factor, diagonal first in each column
  std::vector<index_t> col_ptr_, row_idx_;
  std::vector<double> vals_;
};

std::unique_ptr<IncompleteCholesky> incomplete_cholesky(const CsrMatrix& a, double droptol);

}  // namespace sdmac
