// CHOLMOD / UMFPACK backed factorizations behind the Factorization contract.
#include <suitesparse/cholmod.h>
#include <suitesparse/umfpack.h>

#include <algorithm>
#include <cstring>
#include <memory>

#include "sdmac/factor.hpp"

namespace sdmac {

namespace {

// CSC arrays of a CSR matrix (CSC(A) == CSR(A^T)).
struct CscArrays {
  std::vector<index_t> p, i;
  std::vector<double> x;
};

CscArrays to_csc(const CsrMatrix& a, bool lower_only) {
  CsrMatrix t = csr_transpose(a);
  CscArrays c;
  if (!lower_only) {
    c.p.assign(t.row_ptr.begin(), t.row_ptr.end());
    c.i.assign(t.col_idx.begin(), t.col_idx.end());
    c.x.assign(t.values.begin(), t.values.end());
    return c;
  }
  c.p.assign(a.nrows + 1, 0);
  for (index_t col = 0; col < t.nrows; ++col) {
    for (index_t q = t.row_ptr[col]; q < t.row_ptr[col + 1]; ++q)
      if (t.col_idx[q] >= col) {
        c.i.push_back(t.col_idx[q]);
        c.x.push_back(t.values[q]);
      }
    c.p[col + 1] = static_cast<index_t>(c.i.size());
  }
  return c;
}

class CholmodCholesky final : public Factorization {
 public:
  explicit CholmodCholesky(const CsrMatrix& a) : n_(a.nrows), csc_(to_csc(a, true)) {
    cholmod_start(&cm_);
    cm_.print = 0;
    cholmod_sparse s{};
    s.nrow = s.ncol = static_cast<size_t>(n_);
    s.nzmax = csc_.i.size();
    s.p = csc_.p.data();
    s.i = csc_.i.data();
    s.x = csc_.x.data();
    s.stype = -1;
    s.itype = CHOLMOD_INT;
    s.xtype = CHOLMOD_REAL;
    s.dtype = CHOLMOD_DOUBLE;
    s.sorted = 1;
    s.packed = 1;
    factor_ = cholmod_analyze(&s, &cm_);
    if (factor_) cholmod_factorize(&s, factor_, &cm_);
    if (!factor_ || cm_.status == CHOLMOD_NOT_POSDEF)
      throw FactorError("cholesky (cholmod): matrix not positive definite",
                        factor_ ? static_cast<index_t>(factor_->minor) : -1);
    if (cm_.status != CHOLMOD_OK) throw std::runtime_error("cholesky (cholmod): factorization failed");
  }

  ~CholmodCholesky() override {
    if (factor_) cholmod_free_factor(&factor_, &cm_);
    cholmod_finish(&cm_);
  }

  void solve(const double* b, double* x) const override { solve_many(1, b, x); }

  void solve_many(index_t nrhs, const double* b, double* x) const override {
    cholmod_dense rhs{};
    rhs.nrow = static_cast<size_t>(n_);
    rhs.ncol = static_cast<size_t>(nrhs);
    rhs.nzmax = rhs.nrow * rhs.ncol;
    rhs.d = rhs.nrow;
    rhs.x = const_cast<double*>(b);
    rhs.xtype = CHOLMOD_REAL;
    rhs.dtype = CHOLMOD_DOUBLE;
    auto* cm = const_cast<cholmod_common*>(&cm_);
    cholmod_dense* sol = cholmod_solve(CHOLMOD_A, factor_, &rhs, cm);
    if (!sol) throw std::runtime_error("cholesky (cholmod): solve failed");
    std::memcpy(x, sol->x, sizeof(double) * static_cast<size_t>(n_) * nrhs);
    cholmod_free_dense(&sol, cm);
  }

  FactorKind kind() const override { return FactorKind::Cholesky; }
  index_t dim() const override { return n_; }

 private:
  index_t n_;
  CscArrays csc_;
  mutable cholmod_common cm_{};
  cholmod_factor* factor_ = nullptr;
};

class UmfpackLu final : public Factorization {
 public:
  explicit UmfpackLu(const CsrMatrix& a) : n_(a.nrows), csc_(to_csc(a, false)) {
    umfpack_di_defaults(control_);
    void* symbolic = nullptr;
    double info[UMFPACK_INFO];
    int st = umfpack_di_symbolic(n_, n_, csc_.p.data(), csc_.i.data(), csc_.x.data(), &symbolic,
                                 control_, info);
    if (st == UMFPACK_OK)
      st = umfpack_di_numeric(csc_.p.data(), csc_.i.data(), csc_.x.data(), symbolic, &numeric_,
                              control_, info);
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    if (st == UMFPACK_WARNING_singular_matrix)
      throw FactorError("lu: singular matrix", -1);
    if (st != UMFPACK_OK)
      throw std::runtime_error("lu (umfpack): factorization failed, status " + std::to_string(st));
  }

  ~UmfpackLu() override {
    if (numeric_) umfpack_di_free_numeric(&numeric_);
  }

  void solve(const double* b, double* x) const override {
    double info[UMFPACK_INFO];
    int st = umfpack_di_solve(UMFPACK_A, csc_.p.data(), csc_.i.data(), csc_.x.data(), x,
                              const_cast<double*>(b), numeric_, control_, info);
    if (st != UMFPACK_OK) throw std::runtime_error("lu (umfpack): solve failed");
  }

  FactorKind kind() const override { return FactorKind::Lu; }
  index_t dim() const override { return n_; }

 private:
  index_t n_;
  CscArrays csc_;
  double control_[UMFPACK_CONTROL];
  void* numeric_ = nullptr;
};

}  // namespace

std::unique_ptr<Factorization> make_cholmod_cholesky(const CsrMatrix& a) {
  return std::make_unique<CholmodCholesky>(a);
}

std::unique_ptr<Factorization> make_umfpack_lu(const CsrMatrix& a) {
  return std::make_unique<UmfpackLu>(a);
}

}  // namespace sdmac
