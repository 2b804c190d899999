#pragma once
#include <functional>
#include <vector>

#include "sdmac/csr.hpp"

namespace sdmac {

struct LinearOp {
  index_t size = 0;
  std::function<void(const double*, double*)> apply;

  static LinearOp from_csr(const CsrMatrix& a) {
    return {a.nrows, [&a](const double* x, double* y) { spmv(a, x, y); }};
  }
};

struct GmresConfig {
  int restart = 20;
  double rtol = 1e-8;
  int max_iters = 500;  // cumulative inner iterations across restarts
  // second Gram-Schmidt pass; off by default, needed only when iterating to
  // near round-off tolerances
  bool reorthogonalize = false;
};

struct GmresReport {
  bool converged = false;
  int iterations = 0;  // cumulative inner iterations
  int cycles = 0;
  std::vector<double> history;      // preconditioned relative residual per inner step
  double final_residual = 0.0;      // preconditioned, relative
  double final_true_residual = 0.0; // ||b - A x|| / ||b||, unpreconditioned
};

/// Restarted GMRES on the left-preconditioned system M^{-1} A x = M^{-1} b,
/// zero initial guess, modified Gram-Schmidt Arnoldi with Givens rotations.
/// Stops when ||M^{-1}(b - A x)|| / ||M^{-1} b|| <= rtol or the cumulative
/// iteration budget is exhausted. Pass precond = nullptr for M = I.
GmresReport gmres(const LinearOp& a, const LinearOp* precond, const Vector& b, Vector& x,
                  const GmresConfig& cfg = {});

}  // namespace sdmac
