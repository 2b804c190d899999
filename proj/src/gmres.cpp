#include "sdmac/gmres.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdmac {

namespace {

void check_finite(double v, int iter) {
  if (!std::isfinite(v))
    throw std::runtime_error("gmres: non-finite value at iteration " + std::to_string(iter));
}

}  // namespace

GmresReport gmres(const LinearOp& a, const LinearOp* precond, const Vector& b, Vector& x,
                  const GmresConfig& cfg) {
  if (cfg.restart < 1 || cfg.rtol <= 0) throw std::invalid_argument("gmres: bad config");
  const index_t n = a.size;
  if (static_cast<index_t>(b.size()) != n) throw std::invalid_argument("gmres: size mismatch");

  const int m = cfg.restart;
  GmresReport rep;
  x.assign(n, 0.0);

  Vector w(n), t(n), z(n);
  auto apply_m = [&](const Vector& in, Vector& out) {
    if (precond)
      precond->apply(in.data(), out.data());
    else
      out = in;
  };

  apply_m(b, z);
  const double bnorm = norm2(z);
  check_finite(bnorm, 0);
  if (bnorm == 0.0) {  // zero preconditioned right-hand side
    rep.converged = true;
    return rep;
  }

  std::vector<Vector> v(m + 1);
  std::vector<double> hcol(m + 2);
  std::vector<std::vector<double>> r_cols(m);  // Givens-reduced Hessenberg columns
  Vector gs(m + 1), cs(m), sn(m);

  while (rep.iterations < cfg.max_iters) {
    a.apply(x.data(), t.data());
    for (index_t i = 0; i < n; ++i) t[i] = b[i] - t[i];
    apply_m(t, z);
    const double beta = norm2(z);
    check_finite(beta, rep.iterations);
    if (beta / bnorm <= cfg.rtol) {
      rep.converged = true;
      break;
    }
    ++rep.cycles;
    v[0] = z;
    scale(1.0 / beta, v[0]);
    std::fill(gs.begin(), gs.end(), 0.0);
    gs[0] = beta;

    int steps = 0;
    bool cycle_converged = false;
    for (int j = 0; j < m && rep.iterations < cfg.max_iters; ++j) {
      a.apply(v[j].data(), t.data());
      apply_m(t, w);
      ++rep.iterations;
      ++steps;

      for (int i = 0; i <= j; ++i) {
        hcol[i] = dot(v[i], w);
        axpy(-hcol[i], v[i], w);
      }
      if (cfg.reorthogonalize)
        for (int i = 0; i <= j; ++i) {
          const double c = dot(v[i], w);
          hcol[i] += c;
          axpy(-c, v[i], w);
        }
      const double subdiag = norm2(w);
      check_finite(subdiag, rep.iterations);
      hcol[j + 1] = subdiag;

      for (int i = 0; i < j; ++i) {
        const double tmp = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
        hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
        hcol[i] = tmp;
      }
      const double denom = std::hypot(hcol[j], hcol[j + 1]);
      check_finite(denom, rep.iterations);
      cs[j] = hcol[j] / denom;
      sn[j] = hcol[j + 1] / denom;
      hcol[j] = denom;
      gs[j + 1] = -sn[j] * gs[j];
      gs[j] *= cs[j];

      r_cols[j].assign(hcol.begin(), hcol.begin() + j + 1);

      const double relres = std::fabs(gs[j + 1]) / bnorm;
      check_finite(relres, rep.iterations);
      rep.history.push_back(relres);

      if (relres <= cfg.rtol || subdiag == 0.0) {  // converged or happy breakdown
        cycle_converged = true;
        break;
      }
      if (j + 1 < m) {
        v[j + 1] = w;
        scale(1.0 / subdiag, v[j + 1]);
      }
    }

    // y = R^{-1} g, x += V y
    Vector y(steps);
    for (int i = steps - 1; i >= 0; --i) {
      double s = gs[i];
      for (int k = i + 1; k < steps; ++k) s -= r_cols[k][i] * y[k];
      y[i] = s / r_cols[i][i];
    }
    for (int i = 0; i < steps; ++i) axpy(y[i], v[i], x);

    if (cycle_converged) {
      rep.converged = true;
      break;
    }
  }

  a.apply(x.data(), t.data());
  for (index_t i = 0; i < n; ++i) t[i] = b[i] - t[i];
  rep.final_true_residual = norm2(t) / std::max(norm2(b), 1e-300);
  apply_m(t, z);
  rep.final_residual = norm2(z) / bnorm;
  return rep;
}

}  // namespace sdmac
