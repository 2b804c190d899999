#include "sdmac/schur.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace sdmac {

namespace {

// Z = F^{-1} for a dense lower-triangular F, column-parallel.
DenseMatrix dense_lower_inverse(const DenseMatrix& f) {
  const std::size_t n = f.rows;
  DenseMatrix z(n, n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
    for (std::size_t i = j; i < n; ++i) {
      double s = (static_cast<std::ptrdiff_t>(i) == j) ? 1.0 : 0.0;
      for (std::size_t k = j; k < i; ++k) s -= f(i, k) * z(k, j);
      z(i, j) = s / f(i, i);
    }
  }
  return z;
}

void symmetrize(DenseMatrix& t) {
  for (std::size_t i = 0; i < t.rows; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (t(i, j) + t(j, i));
      t(i, j) = t(j, i) = v;
    }
}

}  // namespace

InterfaceBlockT build_T(TMode mode, const CsrMatrix& ad, const MacGrid& grid,
                        const PhysicalParams& params, double droptol, double tau) {
  const index_t n = grid.n;
  const double ih2 = 1.0 / (grid.h * grid.h);
  InterfaceBlockT out;
  out.provenance = mode;
  out.tau = tau;

  switch (mode) {
    case TMode::Identity: {
      out.t = DenseMatrix(n, n);
      for (index_t i = 0; i < n; ++i) out.t(i, i) = tau / params.kappa;
      return out;
    }
    case TMode::Ic: {
      auto ic = incomplete_cholesky(ad, droptol);
      out.ic_shift = ic->shift_used();
      const DenseMatrix f22 = ic->trailing_lower(n);
      const DenseMatrix z = dense_lower_inverse(f22);
      out.t = dense_ata(z, ih2);  // (F22^{-T} F22^{-1}) / h^2
      symmetrize(out.t);
      return out;
    }
    case TMode::Exact: {
      auto chol = factor(ad, FactorKind::Cholesky, {.fill_reducing = ad.nrows > 4096});
      const index_t m = ad.nrows;
      std::vector<double> rhs(static_cast<std::size_t>(m) * n, 0.0);
      for (index_t j = 0; j < n; ++j) rhs[static_cast<std::size_t>(j) * m + (m - n + j)] = 1.0;
      std::vector<double> sol(rhs.size());
      chol->solve_many(n, rhs.data(), sol.data());
      out.t = DenseMatrix(n, n);
      for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i < n; ++i)
          out.t(i, j) = ih2 * sol[static_cast<std::size_t>(j) * m + (m - n + i)];
      symmetrize(out.t);
      return out;
    }
  }
  throw std::invalid_argument("build_T: unknown mode");
}

// ---------------------------------------------------------------------------

AssembledS1::AssembledS1(const DofLayout& dofs, const StokesBlocks& s, const DenseMatrix& t) {
  const index_t n = dofs.n_v_gamma;
  CsrBuilder b(dofs.stokes_total, dofs.stokes_total);
  const index_t ou = 0, ovg = dofs.n_u, ovi = dofs.n_u + n;
  b.add_block(ou, ou, s.a11);
  b.add_block(ou, ovg, s.a12);
  for (index_t i = 0; i < n; ++i) {
    b.add(ovg + i, ovg + i, s.a22);
    for (index_t j = 0; j < n; ++j)
      if (t(i, j) != 0.0) b.add(ovg + i, ovg + j, t(i, j));
  }
  b.add_block(ovg, ovi, s.a23);
  b.add_block(ovi, ovg, s.a32);
  b.add_block(ovi, ovi, s.a33);
  matrix_ = b.build();
  try {
    lu_ = factor(matrix_, FactorKind::Lu);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("build_S1_approx: LU of the S1 approximation failed: ") +
                             e.what());
  }
}

void AssembledS1::solve(const double* r, double* z) const { lu_->solve(r, z); }

std::unique_ptr<AssembledS1> build_S1_approx(const DofLayout& dofs, const StokesBlocks& s,
                                             const InterfaceBlockT& t) {
  return std::make_unique<AssembledS1>(dofs, s, t.t);
}

StructuredS1::StructuredS1(const BlockSystem& sys, const DenseMatrix& t_exact, bool fill_reducing) {
  const DofLayout& d = sys.dofs;
  n_u_ = d.n_u;
  n_gamma_ = d.n_v_gamma;
  n_tail_ = d.n_v_gamma + d.n_v_int;
  a12_ = sys.stokes.a12;

  a11_ = factor(sys.stokes.a11, FactorKind::Cholesky, {.fill_reducing = fill_reducing});

  const double s2 = std::sqrt(2.0);
  CsrBuilder e(n_tail_, n_tail_);
  for (index_t i = 0; i < n_gamma_; ++i) e.add(i, i, sys.stokes.a22);
  for (index_t i = 0; i < n_gamma_; ++i)
    for (index_t j = 0; j < n_gamma_; ++j)
      if (t_exact(i, j) != 0.0) e.add(i, j, t_exact(i, j));
  e.add_block(n_gamma_, 0, sys.stokes.a32, s2);
  e.add_block_transposed(0, n_gamma_, sys.stokes.a32, s2);
  e.add_block(n_gamma_, n_gamma_, sys.stokes.a33);
  tail_ = factor(e.build(), FactorKind::Cholesky, {.fill_reducing = fill_reducing});
}

void StructuredS1::solve(const double* r, double* z) const {
  const double s2 = std::sqrt(2.0);
  Vector rt(n_tail_), zt(n_tail_);
  for (index_t i = 0; i < n_tail_; ++i) rt[i] = (i < n_gamma_) ? r[n_u_ + i] : s2 * r[n_u_ + i];
  tail_->solve(rt.data(), zt.data());
  for (index_t i = 0; i < n_tail_; ++i) z[n_u_ + i] = (i < n_gamma_) ? zt[i] : zt[i] / s2;

  Vector ru(r, r + n_u_);
  // r_u - A12 * v_gamma
  for (index_t row = 0; row < a12_.nrows; ++row)
    for (index_t k = a12_.row_ptr[row]; k < a12_.row_ptr[row + 1]; ++k)
      ru[row] -= a12_.values[k] * z[n_u_ + a12_.col_idx[k]];
  a11_->solve(ru.data(), z);
}

std::unique_ptr<StructuredS1> build_S1_exact(const BlockSystem& sys) {
  InterfaceBlockT t = build_T(TMode::Exact, sys.ad, sys.grid, sys.params);
  return std::make_unique<StructuredS1>(sys, t.t, sys.grid.n > 64);
}

// ---------------------------------------------------------------------------

Vector build_S2_hat(const PhysicalParams& params, const MacGrid& grid, double tau) {
  const index_t n = grid.n;
  const double h2 = grid.h * grid.h;
  const double iface =
      (3.0 * params.nu * params.kappa + h2 * tau) /
      (params.nu * (2.0 * params.nu * params.kappa + h2 * tau));
  Vector d(static_cast<std::size_t>(n) * n, 1.0 / params.nu);
  for (index_t i = 0; i < n; ++i) d[i] = iface;
  return d;
}

S2ExactHandle::S2ExactHandle(std::shared_ptr<const S1Operator> s1, const CsrMatrix& b,
                             std::optional<Vector> diag_precond)
    : s1_(std::move(s1)), b_(b), bt_(csr_transpose(b)) {
  if (diag_precond) {
    inv_diag_ = Vector(diag_precond->size());
    for (std::size_t i = 0; i < diag_precond->size(); ++i) (*inv_diag_)[i] = 1.0 / (*diag_precond)[i];
  }
}

void S2ExactHandle::apply(const double* v, double* y) const {
  Vector t1(bt_.nrows), t2(bt_.nrows);
  spmv(bt_, v, t1.data());
  s1_->solve(t1.data(), t2.data());
  spmv(b_, t2.data(), y);
}

void S2ExactHandle::apply_inverse(const double* r, double* z) const {
  const index_t n = b_.nrows;
  LinearOp op{n, [this](const double* v, double* y) { apply(v, y); }};
  LinearOp pre{n, [this](const double* v, double* y) {
                 for (index_t i = 0; i < static_cast<index_t>(inv_diag_->size()); ++i)
                   y[i] = (*inv_diag_)[i] * v[i];
               }};
  Vector rhs(r, r + n), x;
  GmresConfig cfg;
  cfg.restart = 2000;  // unrestarted within the iteration budget
  cfg.max_iters = 2000;
  cfg.rtol = 1e-12;
  cfg.reorthogonalize = true;  // the tight tolerance needs clean Arnoldi vectors
  GmresReport rep = gmres(op, inv_diag_ ? &pre : nullptr, rhs, x, cfg);
  last_iters_ = rep.iterations;
  total_iters_ += rep.iterations;
  if (!rep.converged)
    throw std::runtime_error("S2 exact handle: inner GMRES did not reach 1e-12 within 2000 iterations");
  std::copy(x.begin(), x.end(), z);
}

// ---------------------------------------------------------------------------

PrecondVariant precond_variant_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(c));
  if (s == "m1hat") return PrecondVariant::M1Hat;
  if (s == "m2hat") return PrecondVariant::M2Hat;
  if (s == "m3hat") return PrecondVariant::M3Hat;
  if (s == "m1" || s == "m1ideal") return PrecondVariant::M1Ideal;
  if (s == "m2" || s == "m2ideal") return PrecondVariant::M2Ideal;
  if (s == "m3" || s == "m3ideal") return PrecondVariant::M3Ideal;
  if (s == "m2t" || s == "m2tilde") return PrecondVariant::M2Tilde;
  if (s == "m3t" || s == "m3tilde") return PrecondVariant::M3Tilde;
  if (s == "m1in") return PrecondVariant::M1In;
  if (s == "m2in") return PrecondVariant::M2In;
  throw std::invalid_argument("unknown preconditioner variant: " + name);
}

std::string to_string(PrecondVariant v) {
  switch (v) {
    case PrecondVariant::M1Hat: return "m1hat";
    case PrecondVariant::M2Hat: return "m2hat";
    case PrecondVariant::M3Hat: return "m3hat";
    case PrecondVariant::M1Ideal: return "m1ideal";
    case PrecondVariant::M2Ideal: return "m2ideal";
    case PrecondVariant::M3Ideal: return "m3ideal";
    case PrecondVariant::M2Tilde: return "m2tilde";
    case PrecondVariant::M3Tilde: return "m3tilde";
    case PrecondVariant::M1In: return "m1in";
    case PrecondVariant::M2In: return "m2in";
  }
  return "?";
}

bool variant_uses_exact_schur(PrecondVariant v) {
  switch (v) {
    case PrecondVariant::M1Hat:
    case PrecondVariant::M2Hat:
    case PrecondVariant::M3Hat:
      return false;
    default:
      return true;
  }
}

PreconditionerInstance PreconditionerInstance::build(const BlockSystem& sys,
                                                     const PrecondConfig& cfg) {
  if (variant_uses_exact_schur(cfg.variant) && sys.grid.n > cfg.exact_size_guard &&
      !cfg.override_guard)
    throw std::invalid_argument("preconditioner " + to_string(cfg.variant) + ": n = " +
                                std::to_string(sys.grid.n) +
                                " exceeds the exact-Schur size guard (override to proceed)");

  PreconditionerInstance m;
  m.cfg_ = cfg;
  m.dofs_ = sys.dofs;
  m.g_ = sys.g;
  m.b_ = sys.b;
  m.ad_ = factor(sys.ad, FactorKind::Cholesky, {.fill_reducing = sys.grid.n > 128});

  const bool hat = !variant_uses_exact_schur(cfg.variant);
  const bool in_hybrid =
      cfg.variant == PrecondVariant::M1In || cfg.variant == PrecondVariant::M2In;

  if (hat || in_hybrid) {
    InterfaceBlockT t = build_T(cfg.t_mode, sys.ad, sys.grid, sys.params, cfg.droptol, cfg.tau);
    m.ic_shift_ = t.ic_shift;
    m.s1_assembled_ = build_S1_approx(sys.dofs, sys.stokes, t);
    m.t_ = std::move(t);
  }
  if (!hat && !in_hybrid) m.s1_exact_ = build_S1_exact(sys);

  if (hat) {
    m.s2_hat_ = build_S2_hat(sys.params, sys.grid, cfg.tau);
  } else {
    std::shared_ptr<const S1Operator> s1_for_s2 =
        in_hybrid ? std::static_pointer_cast<const S1Operator>(
                        std::shared_ptr<StructuredS1>(build_S1_exact(sys)))
                  : std::static_pointer_cast<const S1Operator>(m.s1_exact_);
    // the diagonal accelerates the inner solve; the handle still iterates the
    // exact operator to 1e-12 and is treated as exact by the outer method
    m.s2_exact_ = std::make_unique<S2ExactHandle>(s1_for_s2, sys.b,
                                                  build_S2_hat(sys.params, sys.grid, cfg.tau));
  }
  return m;
}

const S1Operator& PreconditionerInstance::s1() const {
  if (s1_assembled_) return *s1_assembled_;
  return *s1_exact_;
}

void PreconditionerInstance::solve_s2(const double* r, double* z) const {
  if (s2_hat_) {
    for (std::size_t i = 0; i < s2_hat_->size(); ++i) z[i] = r[i] / (*s2_hat_)[i];
  } else {
    s2_exact_->apply_inverse(r, z);
  }
}

void PreconditionerInstance::apply(const double* r, double* z) const {
  const DofLayout& d = dofs_;
  const double* r1 = r;
  const double* r2 = r + d.off_u;
  const double* r3 = r + d.off_p;
  double* z1 = z;
  double* z2 = z + d.off_u;
  double* z3 = z + d.off_p;

  ad_->solve(r1, z1);

  // sign of the S1 block and presence of the G, B couplings per variant
  double s1_sign = 0.0;
  bool use_g = false, use_b = false;
  switch (cfg_.variant) {
    case PrecondVariant::M1Hat: s1_sign = -1.0; break;
    case PrecondVariant::M2Hat: s1_sign = -1.0; use_g = true; break;
    case PrecondVariant::M3Hat: s1_sign = -1.0; use_g = true; use_b = true; break;
    case PrecondVariant::M1Ideal: s1_sign = 1.0; break;
    case PrecondVariant::M2Ideal: s1_sign = 1.0; use_g = true; break;
    case PrecondVariant::M3Ideal: s1_sign = -1.0; use_g = true; use_b = true; break;
    case PrecondVariant::M2Tilde: s1_sign = -1.0; use_g = true; break;
    case PrecondVariant::M3Tilde: s1_sign = 1.0; use_g = true; use_b = true; break;
    case PrecondVariant::M1In: s1_sign = 1.0; break;
    case PrecondVariant::M2In: s1_sign = 1.0; use_g = true; break;
  }

  Vector rs(r2, r2 + d.stokes_total);
  if (use_g) {
    Vector gz1(d.stokes_total);
    spmv(g_, z1, gz1.data());
    for (index_t i = 0; i < d.stokes_total; ++i) rs[i] -= gz1[i];
  }
  s1().solve(rs.data(), z2);
  if (s1_sign < 0)
    for (index_t i = 0; i < d.stokes_total; ++i) z2[i] = -z2[i];

  Vector rp(r3, r3 + d.n_p);
  if (use_b) {
    Vector bz2(d.n_p);
    spmv(b_, z2, bz2.data());
    for (index_t i = 0; i < d.n_p; ++i) rp[i] -= bz2[i];
  }
  solve_s2(rp.data(), z3);
}

}  // namespace sdmac
