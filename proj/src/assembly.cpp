#include "sdmac/assembly.hpp"

#include <cmath>

namespace sdmac {

namespace {

// Darcy pressure rows. Interior stencil is the 5-point Laplacian scaled by
// kappa/h^2. Dirichlet walls eliminate the ghost through the boundary average
// (diagonal +kappa/h^2, RHS +2 kappa g_D/h^2). At the interface the ghost cell
// above is eliminated through the discrete mass-conservation relation, which
// lowers the diagonal to 3 kappa/h^2 and routes the v coupling into -G^T.
CsrMatrix darcy_impl(const MacGrid& grid, const PhysicalParams& params,
                     const ManufacturedCase* mcase, Vector* g1) {
  const int n = grid.n;
  const DofLayout d = dof_layout(grid);
  const double k_h2 = params.kappa / (grid.h * grid.h);
  CsrBuilder a(d.n_phi, d.n_phi);
  if (g1) g1->assign(d.n_phi, 0.0);

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const index_t row = d.phi(i, j);
      const double xc = grid.x_at(2 * i + 1);
      const double yc = grid.y_darcy(2 * j + 1);
      double diag = 4.0 * k_h2;
      double rhs = mcase ? mcase->f_darcy(xc, yc) : 0.0;

      if (i > 0)
        a.add(row, d.phi(i - 1, j), -k_h2);
      else {
        diag += k_h2;
        if (mcase) rhs += 2.0 * k_h2 * mcase->phi(grid.darcy.x_min, yc);
      }
      if (i < n - 1)
        a.add(row, d.phi(i + 1, j), -k_h2);
      else {
        diag += k_h2;
        if (mcase) rhs += 2.0 * k_h2 * mcase->phi(grid.darcy.x_max, yc);
      }
      if (j > 0)
        a.add(row, d.phi(i, j - 1), -k_h2);
      else {
        diag += k_h2;
        if (mcase) rhs += 2.0 * k_h2 * mcase->phi(xc, grid.darcy.y_min);
      }
      if (j < n - 1)
        a.add(row, d.phi(i, j + 1), -k_h2);
      else
        diag -= k_h2;  // interface ghost eliminated via mass conservation

      a.add(row, row, diag);
      if (g1) (*g1)[row] = rhs;
    }
  return a.build();
}

StokesBlocks stokes_impl(const MacGrid& grid, const PhysicalParams& params,
                         const ManufacturedCase* mcase, Vector* g2) {
  const int n = grid.n;
  const DofLayout d = dof_layout(grid);
  const double h = grid.h;
  const double nu_h2 = params.nu / (h * h);
  StokesBlocks s;
  s.a22 = 2.0 * params.nu / (h * h);
  CsrBuilder a11(d.n_u, d.n_u), a12(d.n_u, d.n_v_gamma);
  CsrBuilder a23(d.n_v_gamma, d.n_v_int);
  CsrBuilder a32(d.n_v_int, d.n_v_gamma), a33(d.n_v_int, d.n_v_int);
  if (g2) g2->assign(d.stokes_total, 0.0);

  // u momentum at (x_i, y_{j+1/2}); the interface layer j = 0 eliminates the
  // ghost u below through the discrete BJS relation.
  const double bjs_den = 2.0 * params.nu + h * params.alpha;
  const double bjs_a = (2.0 * params.nu - h * params.alpha) / bjs_den;
  const double bjs_c = 2.0 * params.nu * params.nu / (h * h * bjs_den);
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i) {
      const index_t row = d.u(i, j);
      const double x = grid.x_at(2 * i);
      const double y = grid.y_stokes(2 * j + 1);
      double diag = 4.0 * nu_h2;
      double rhs = mcase ? mcase->f_stokes_x(x, y) : 0.0;

      if (i + 1 < n)
        a11.add(row, d.u(i + 1, j), -nu_h2);
      else if (mcase)
        rhs += nu_h2 * mcase->u(grid.stokes.x_max, y);
      if (i - 1 > 0)
        a11.add(row, d.u(i - 1, j), -nu_h2);
      else if (mcase)
        rhs += nu_h2 * mcase->u(grid.stokes.x_min, y);
      if (j + 1 < n)
        a11.add(row, d.u(i, j + 1), -nu_h2);
      else {
        diag += nu_h2;
        if (mcase) rhs += 2.0 * nu_h2 * mcase->u(x, grid.stokes.y_max);
      }
      if (j - 1 >= 0)
        a11.add(row, d.u(i, j - 1), -nu_h2);
      else {
        // ghost u_{i,-1/2} = bjs_a * u_{i,1/2} + (2nu/den)(v_{i+1/2,0} - v_{i-1/2,0})
        diag -= nu_h2 * bjs_a;
        a12.add(row, d.v_gamma(i), -bjs_c);
        a12.add(row, d.v_gamma(i - 1), bjs_c);
      }
      a11.add(row, row, diag);
      if (g2) (*g2)[row] = rhs;
    }

  // interface v rows: the balance of normal forces scaled by -1/h, so the
  // diagonal block is (2nu/h^2) I_n and the first interior layer enters with
  // the opposite sign. RHS is zero; phi and p couplings live in G and B^T.
  for (int i = 0; i < n; ++i) a23.add(i, d.v_int(i, 1), -s.a22);

  // interior v momentum at (x_{i+1/2}, y_j)
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const index_t row = d.v_int(i, j);
      const double x = grid.x_at(2 * i + 1);
      const double y = grid.y_stokes(2 * j);
      double diag = 4.0 * nu_h2;
      double rhs = mcase ? mcase->f_stokes_y(x, y) : 0.0;

      if (j + 1 < n)
        a33.add(row, d.v_int(i, j + 1), -nu_h2);
      else if (mcase)
        rhs += nu_h2 * mcase->v(x, grid.stokes.y_max);
      if (j - 1 >= 1)
        a33.add(row, d.v_int(i, j - 1), -nu_h2);
      else
        a32.add(row, d.v_gamma(i), -nu_h2);
      if (i + 1 < n)
        a33.add(row, d.v_int(i + 1, j), -nu_h2);
      else {
        diag += nu_h2;
        if (mcase) rhs += 2.0 * nu_h2 * mcase->v(grid.stokes.x_max, y);
      }
      if (i - 1 >= 0)
        a33.add(row, d.v_int(i - 1, j), -nu_h2);
      else {
        diag += nu_h2;
        if (mcase) rhs += 2.0 * nu_h2 * mcase->v(grid.stokes.x_min, y);
      }
      a33.add(row, row, diag);
      if (g2) (*g2)[d.n_u + d.n_v_gamma + row] = rhs;
    }

  s.a11 = a11.build();
  s.a12 = a12.build();
  s.a23 = a23.build();
  s.a32 = a32.build();
  s.a33 = a33.build();
  return s;
}

// Negated discrete divergence rows, one per pressure cell.
CsrMatrix divergence_impl(const MacGrid& grid, const ManufacturedCase* mcase, Vector* g3) {
  const int n = grid.n;
  const DofLayout d = dof_layout(grid);
  const double ih = 1.0 / grid.h;
  CsrBuilder b(d.n_p, d.stokes_total);
  if (g3) g3->assign(d.n_p, 0.0);

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const index_t row = d.p(i, j);
      const double yu = grid.y_stokes(2 * j + 1);
      const double xv = grid.x_at(2 * i + 1);
      double rhs = 0.0;

      if (i + 1 < n)
        b.add(row, d.u(i + 1, j), -ih);
      else if (mcase)
        rhs += ih * mcase->u(grid.stokes.x_max, yu);
      if (i >= 1)
        b.add(row, d.u(i, j), ih);
      else if (mcase)
        rhs -= ih * mcase->u(grid.stokes.x_min, yu);
      if (j + 1 < n)
        b.add(row, d.n_u + d.n_v_gamma + d.v_int(i, j + 1), -ih);
      else if (mcase)
        rhs += ih * mcase->v(xv, grid.stokes.y_max);
      if (j >= 1)
        b.add(row, d.n_u + d.n_v_gamma + d.v_int(i, j), ih);
      else
        b.add(row, d.n_u + d.v_gamma(i), ih);

      if (g3) (*g3)[row] = rhs;
    }
  return b.build();
}

}  // namespace

CsrMatrix assemble_darcy(const MacGrid& grid, const PhysicalParams& params) {
  params.validate();
  return darcy_impl(grid, params, nullptr, nullptr);
}

StokesBlocks assemble_stokes(const MacGrid& grid, const PhysicalParams& params) {
  params.validate();
  return stokes_impl(grid, params, nullptr, nullptr);
}

CsrMatrix assemble_divergence(const MacGrid& grid) { return divergence_impl(grid, nullptr, nullptr); }

CsrMatrix assemble_coupling(const MacGrid& grid) {
  const int n = grid.n;
  const DofLayout d = dof_layout(grid);
  CsrBuilder g(d.stokes_total, d.n_phi);
  for (int i = 0; i < n; ++i) g.add(d.n_u + d.v_gamma(i), d.phi(i, n - 1), -1.0 / grid.h);
  return g.build();
}

RightHandSide assemble_rhs(const MacGrid& grid, const PhysicalParams& params,
                           const ManufacturedCase& mcase) {
  params.validate();
  RightHandSide r;
  darcy_impl(grid, params, &mcase, &r.g1);
  stokes_impl(grid, params, &mcase, &r.g2);
  divergence_impl(grid, &mcase, &r.g3);
  return r;
}

CsrMatrix assemble_As(const DofLayout& dofs, const StokesBlocks& s) {
  CsrBuilder b(dofs.stokes_total, dofs.stokes_total);
  const index_t ou = 0, ovg = dofs.n_u, ovi = dofs.n_u + dofs.n_v_gamma;
  b.add_block(ou, ou, s.a11);
  b.add_block(ou, ovg, s.a12);
  for (index_t i = 0; i < dofs.n_v_gamma; ++i) b.add(ovg + i, ovg + i, s.a22);
  b.add_block(ovg, ovi, s.a23);
  b.add_block(ovi, ovg, s.a32);
  b.add_block(ovi, ovi, s.a33);
  return b.build();
}

BlockSystem assemble_system(const MacGrid& grid, const PhysicalParams& params,
                            const ManufacturedCase& mcase) {
  BlockSystem sys;
  sys.grid = grid;
  sys.dofs = dof_layout(grid);
  sys.params = params;
  sys.ad = darcy_impl(grid, params, &mcase, &sys.g1);
  sys.stokes = stokes_impl(grid, params, &mcase, &sys.g2);
  sys.as = assemble_As(sys.dofs, sys.stokes);
  sys.g = assemble_coupling(grid);
  sys.b = divergence_impl(grid, &mcase, &sys.g3);
  return sys;
}

BlockSystem assemble_system(const ManufacturedCase& mcase, int n) {
  const MacGrid grid = build_grid(n, mcase.stokes_domain(), mcase.darcy_domain());
  return assemble_system(grid, mcase.params(), mcase);
}

CsrMatrix BlockSystem::coupled() const {
  CsrBuilder k(dofs.total, dofs.total);
  k.add_block(0, 0, ad);
  k.add_block_transposed(0, dofs.off_u, g, -1.0);
  k.add_block(dofs.off_u, 0, g);
  k.add_block(dofs.off_u, dofs.off_u, as);
  k.add_block_transposed(dofs.off_u, dofs.off_p, b);
  k.add_block(dofs.off_p, dofs.off_u, b);
  return k.build();
}

CsrMatrix BlockSystem::coupled_sym() const {
  CsrBuilder k(dofs.total, dofs.total);
  k.add_block(0, 0, ad);
  k.add_block_transposed(0, dofs.off_u, g);
  k.add_block(dofs.off_u, 0, g);
  k.add_block(dofs.off_u, dofs.off_u, as, -1.0);
  k.add_block_transposed(dofs.off_u, dofs.off_p, b);
  k.add_block(dofs.off_p, dofs.off_u, b);
  return k.build();
}

Vector BlockSystem::rhs() const {
  Vector r;
  r.reserve(dofs.total);
  r.insert(r.end(), g1.begin(), g1.end());
  r.insert(r.end(), g2.begin(), g2.end());
  r.insert(r.end(), g3.begin(), g3.end());
  return r;
}

Vector BlockSystem::rhs_sym() const {
  Vector r = rhs();
  for (index_t i = dofs.off_p; i < dofs.total; ++i) r[i] = -r[i];
  return r;
}

Vector BlockSystem::from_sym(const Vector& x_sym) const {
  Vector x = x_sym;
  for (index_t i = dofs.off_u; i < dofs.off_p; ++i) x[i] = -x[i];
  return x;
}

CsrMatrix BlockSystem::stokes_tail_symmetrized() const {
  const index_t m = dofs.n_v_gamma + dofs.n_v_int;
  const double s2 = std::sqrt(2.0);
  CsrBuilder e(m, m);
  for (index_t i = 0; i < dofs.n_v_gamma; ++i) e.add(i, i, stokes.a22);
  e.add_block(dofs.n_v_gamma, 0, stokes.a32, s2);
  e.add_block_transposed(0, dofs.n_v_gamma, stokes.a32, s2);
  e.add_block(dofs.n_v_gamma, dofs.n_v_gamma, stokes.a33);
  return e.build();
}

FieldSplit split_fields(const DofLayout& d, const Vector& x) {
  FieldSplit f;
  f.phi.assign(x.begin(), x.begin() + d.n_phi);
  f.u.assign(x.begin() + d.off_u, x.begin() + d.off_u + d.n_u);
  f.v_gamma.assign(x.begin() + d.off_v_gamma, x.begin() + d.off_v_gamma + d.n_v_gamma);
  f.v_int.assign(x.begin() + d.off_v_int, x.begin() + d.off_v_int + d.n_v_int);
  f.p.assign(x.begin() + d.off_p, x.begin() + d.off_p + d.n_p);
  return f;
}

Vector exact_interpolant(const MacGrid& grid, const DofLayout& d, const ManufacturedCase& mcase) {
  const int n = grid.n;
  Vector x(d.total, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      x[d.off_phi + d.phi(i, j)] = mcase.phi(grid.x_at(2 * i + 1), grid.y_darcy(2 * j + 1));
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i)
      x[d.off_u + d.u(i, j)] = mcase.u(grid.x_at(2 * i), grid.y_stokes(2 * j + 1));
  for (int i = 0; i < n; ++i)
    x[d.off_v_gamma + d.v_gamma(i)] = mcase.v(grid.x_at(2 * i + 1), grid.interface_y);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < n; ++i)
      x[d.off_v_int + d.v_int(i, j)] = mcase.v(grid.x_at(2 * i + 1), grid.y_stokes(2 * j));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      x[d.off_p + d.p(i, j)] = mcase.p(grid.x_at(2 * i + 1), grid.y_stokes(2 * j + 1));
  return x;
}

FieldErrors field_errors(const MacGrid& grid, const DofLayout& d, const ManufacturedCase& mcase,
                         const Vector& x) {
  const Vector exact = exact_interpolant(grid, d, mcase);
  auto block_sq = [&](index_t begin, index_t count) {
    double s = 0.0;
    for (index_t k = begin; k < begin + count; ++k) {
      const double e = x[k] - exact[k];
      s += e * e;
    }
    return s;
  };
  const double h2 = grid.h * grid.h;
  FieldErrors e;
  e.phi = std::sqrt(h2 * block_sq(d.off_phi, d.n_phi));
  e.u = std::sqrt(h2 * block_sq(d.off_u, d.n_u));
  e.v = std::sqrt(h2 * (block_sq(d.off_v_gamma, d.n_v_gamma) + block_sq(d.off_v_int, d.n_v_int)));
  e.p = std::sqrt(h2 * block_sq(d.off_p, d.n_p));
  return e;
}

}  // namespace sdmac
