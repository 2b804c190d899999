#include "sdmac/solve_direct.hpp"

#include <cmath>

#include "sdmac/schur.hpp"

namespace sdmac {

namespace {

// Exact interface block from n solves against an existing A_d factorization.
DenseMatrix exact_T_from(const Factorization& ad, index_t n, double h) {
  const index_t m = ad.dim();
  const double ih2 = 1.0 / (h * h);
  std::vector<double> rhs(static_cast<std::size_t>(m) * n, 0.0);
  for (index_t j = 0; j < n; ++j) rhs[static_cast<std::size_t>(j) * m + (m - n + j)] = 1.0;
  std::vector<double> sol(rhs.size());
  ad.solve_many(n, rhs.data(), sol.data());
  DenseMatrix t(n, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < n; ++i) t(i, j) = ih2 * sol[static_cast<std::size_t>(j) * m + (m - n + i)];
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < i; ++j) {
      const double v = 0.5 * (t(i, j) + t(j, i));
      t(i, j) = t(j, i) = v;
    }
  return t;
}

}  // namespace

Vector solve_coupled_direct(const BlockSystem& sys, DirectSolveReport* report) {
  const DofLayout& d = sys.dofs;
  const index_t n = sys.grid.n;
  const bool big = n > 64;

  auto ad = factor(sys.ad, FactorKind::Cholesky, {.fill_reducing = big});
  const DenseMatrix t = exact_T_from(*ad, n, sys.grid.h);
  auto s1 = std::make_shared<StructuredS1>(sys, t, big);
  S2ExactHandle s2(s1, sys.b, build_S2_hat(sys.params, sys.grid));

  const CsrMatrix gt = csr_transpose(sys.g);
  const CsrMatrix bt = csr_transpose(sys.b);

  // One pass of the exact block factorization applied to the sign-flipped form.
  auto ldu_solve = [&](const Vector& rhs) {
    Vector y(d.total);
    const double* b1 = rhs.data();
    const double* b2 = rhs.data() + d.off_u;
    const double* b3 = rhs.data() + d.off_p;

    Vector w1(d.n_phi), w2(d.stokes_total), w3(d.n_p);
    ad->solve(b1, w1.data());
    Vector rs(b2, b2 + d.stokes_total);
    {
      Vector gw(d.stokes_total);
      spmv(sys.g, w1.data(), gw.data());
      for (index_t i = 0; i < d.stokes_total; ++i) rs[i] = -(rs[i] - gw[i]);
    }
    s1->solve(rs.data(), w2.data());
    Vector rp(b3, b3 + d.n_p);
    {
      Vector bw(d.n_p);
      spmv(sys.b, w2.data(), bw.data());
      for (index_t i = 0; i < d.n_p; ++i) rp[i] -= bw[i];
    }
    s2.apply_inverse(rp.data(), w3.data());

    // back substitution through the unit upper factor
    std::copy(w3.begin(), w3.end(), y.begin() + d.off_p);
    Vector btp(d.stokes_total), s1btp(d.stokes_total);
    spmv(bt, w3.data(), btp.data());
    s1->solve(btp.data(), s1btp.data());
    for (index_t i = 0; i < d.stokes_total; ++i) y[d.off_u + i] = w2[i] + s1btp[i];
    Vector gty(d.n_phi), adg(d.n_phi);
    spmv(gt, y.data() + d.off_u, gty.data());
    ad->solve(gty.data(), adg.data());
    for (index_t i = 0; i < d.n_phi; ++i) y[i] = w1[i] - adg[i];
    return y;
  };

  const CsrMatrix k = sys.coupled_sym();
  const Vector b = sys.rhs_sym();
  const double bnorm = std::max(norm2(b), 1e-300);

  Vector y = ldu_solve(b);
  Vector r(d.total);
  double rel = 0.0;
  int passes = 0;
  for (; passes < 4; ++passes) {
    spmv(k, y.data(), r.data());
    for (index_t i = 0; i < d.total; ++i) r[i] = b[i] - r[i];
    rel = norm2(r) / bnorm;
    if (rel <= 1e-11) break;
    Vector dy = ldu_solve(r);
    axpy(1.0, dy, y);
  }

  if (report) {
    report->refinement_passes = passes;
    report->rel_residual = rel;
    report->s2_inner_iterations = s2.total_inner_iterations();
  }
  return sys.from_sym(y);
}

}  // namespace sdmac
