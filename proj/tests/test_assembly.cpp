#include <doctest.h>

#include <cmath>
#include <random>

#include "sdmac/assembly.hpp"
#include "sdmac/factor.hpp"

using namespace sdmac;

namespace {

BlockSystem make_system(Example ex, int n, PhysicalParams p) {
  auto mcase = ManufacturedCase::make(ex, p);
  return assemble_system(mcase, n);
}

DenseMatrix to_dense(const CsrMatrix& a) {
  DenseMatrix d(a.nrows, a.ncols);
  for (index_t r = 0; r < a.nrows; ++r)
    for (index_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) d(r, a.col_idx[k]) = a.values[k];
  return d;
}

}  // namespace

TEST_CASE("Darcy stencil entries") {
  PhysicalParams p{1.0, 0.7, 1.0};
  MacGrid g = build_grid(6, {0, 1, 0, 1}, {0, 1, -1, 0});
  CsrMatrix ad = assemble_darcy(g, p);
  DofLayout d = dof_layout(g);
  const double kh2 = p.kappa / (g.h * g.h);
  CHECK(ad.at(d.phi(2, 2), d.phi(2, 2)) == doctest::Approx(4 * kh2));
  CHECK(ad.at(d.phi(2, 2), d.phi(1, 2)) == doctest::Approx(-kh2));
  CHECK(ad.at(d.phi(2, 2), d.phi(2, 3)) == doctest::Approx(-kh2));
  // interface-adjacent, interior column
  CHECK(ad.at(d.phi(2, 5), d.phi(2, 5)) == doctest::Approx(3 * kh2));
  // symmetry
  CsrMatrix adt = csr_transpose(ad);
  for (index_t r = 0; r < ad.nrows; ++r)
    for (index_t k = ad.row_ptr[r]; k < ad.row_ptr[r + 1]; ++k)
      CHECK(ad.values[k] == doctest::Approx(adt.at(r, ad.col_idx[k])).epsilon(1e-15));
}

TEST_CASE("A_d trailing block row is -(kappa/h^2)(0 I)") {
  PhysicalParams p{1.0, 2.0, 1.0};
  MacGrid g = build_grid(5, {0, 1, 0, 1}, {0, 1, -1, 0});
  CsrMatrix ad = assemble_darcy(g, p);
  DofLayout d = dof_layout(g);
  const int n = g.n;
  const double kh2 = p.kappa / (g.h * g.h);
  // rows phi(i, n-1), columns in the first n^2-n: only phi(i, n-2) is hit
  for (int i = 0; i < n; ++i) {
    const index_t r = d.phi(i, n - 1);
    for (index_t k = ad.row_ptr[r]; k < ad.row_ptr[r + 1]; ++k) {
      const index_t c = ad.col_idx[k];
      if (c < d.n_phi - n) {
        CHECK(c == d.phi(i, n - 2));
        CHECK(ad.values[k] == doctest::Approx(-kh2));
      }
    }
  }
}

TEST_CASE("Stokes block invariants") {
  PhysicalParams p{0.01, 1.0, 0.01};
  MacGrid g = build_grid(4, {0, 1, 0, 1}, {0, 1, -1, 0});
  StokesBlocks s = assemble_stokes(g, p);
  const double h = g.h;

  SUBCASE("A22 is the scaled identity") {
    // 2 nu / h^2; with nu = 0.01 and h = 0.25 this is 0.32
    CHECK(g.h == doctest::Approx(0.25));
    CHECK(s.a22 == doctest::Approx(0.32));
  }

  SUBCASE("A23 = (-A22, 0) and A32 = A23^T / 2") {
    DofLayout d = dof_layout(g);
    for (int i = 0; i < g.n; ++i) {
      CHECK(s.a23.at(i, d.v_int(i, 1)) == doctest::Approx(-s.a22));
      CHECK(s.a32.at(d.v_int(i, 1), i) == doctest::Approx(-s.a22 / 2));
    }
    CHECK(s.a23.nnz() == g.n);
    CHECK(s.a32.nnz() == g.n);
  }

  SUBCASE("A12 bidiagonal block") {
    const double c = 2 * p.nu * p.nu / (h * h * (2 * p.nu + h * p.alpha));
    DofLayout d = dof_layout(g);
    for (int i = 1; i < g.n; ++i) {
      CHECK(s.a12.at(d.u(i, 0), i - 1) == doctest::Approx(c));
      CHECK(s.a12.at(d.u(i, 0), i) == doctest::Approx(-c));
    }
    CHECK(s.a12.nnz() == 2 * (g.n - 1));  // zero outside the interface layer
  }
}

TEST_CASE("A12 coefficient magnitude closed form") {
  // c = 2 nu^2 / (h^2 (2 nu + h alpha)); nu = alpha = 1, h = 0.5 -> 3.2
  PhysicalParams p{1.0, 1.0, 1.0};
  MacGrid g = build_grid(2, {0, 1, 0, 1}, {0, 1, -1, 0});
  StokesBlocks s = assemble_stokes(g, p);
  DofLayout d = dof_layout(g);
  CHECK(s.a12.at(d.u(1, 0), 0) == doctest::Approx(3.2));
  CHECK(s.a12.at(d.u(1, 0), 1) == doctest::Approx(-3.2));
}

TEST_CASE("BJS ghost elimination satisfies the discrete slip relation") {
  // u_ghost = [(2nu - h a) u_in + 2 nu (v_e - v_w)] / (2nu + h a); substituting
  // back into the discrete condition must close it to round-off.
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> un(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    const double nu = 0.3 + std::fabs(un(rng)), alpha = 0.2 + std::fabs(un(rng)), h = 0.125;
    const double u_in = un(rng), v_e = un(rng), v_w = un(rng);
    const double den = 2 * nu + h * alpha;
    const double u_ghost = ((2 * nu - h * alpha) * u_in + 2 * nu * (v_e - v_w)) / den;
    const double lhs = 0.5 * (u_in + u_ghost);
    const double rhs = (nu / alpha) * ((u_in - u_ghost) / h + (v_e - v_w) / h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("v-momentum wall row: diagonal bump and RHS fold") {
  // row at (h/2, h) with a Dirichlet left wall: diagonal 5 nu/h^2 and the RHS
  // gains 2 nu v_D(0, h)/h^2
  PhysicalParams p{1.0, 1.0, 1.0};
  auto mcase = ManufacturedCase::make(Example::Three, p);
  const int n = 8;
  MacGrid g = build_grid(n, mcase.stokes_domain(), mcase.darcy_domain());
  BlockSystem sys = assemble_system(g, p, mcase);
  DofLayout d = dof_layout(g);
  const double nh2 = p.nu / (g.h * g.h);
  const index_t row = d.v_int(0, 1);
  CHECK(sys.stokes.a33.at(row, row) == doctest::Approx(5 * nh2));
  const double expected_rhs =
      mcase.f_stokes_y(g.x_at(1), g.y_stokes(2)) + 2 * nh2 * mcase.v(0.0, g.y_stokes(2));
  CHECK(sys.g2[d.n_u + d.n_v_gamma + row] == doctest::Approx(expected_rhs));
}

TEST_CASE("B block structure") {
  PhysicalParams p{1.0, 1.0, 1.0};
  MacGrid g = build_grid(4, {0, 1, 0, 1}, {0, 1, -1, 0});
  CsrMatrix b = assemble_divergence(g);
  DofLayout d = dof_layout(g);
  // B0 block: rows of the interface-adjacent pressure row hit v_gamma with 1/h
  for (int i = 0; i < g.n; ++i)
    CHECK(b.at(d.p(i, 0), d.n_u + d.v_gamma(i)) == doctest::Approx(1.0 / g.h));
  for (int i = 0; i < g.n; ++i)
    for (int j = 1; j < g.n; ++j)
      for (index_t k = b.row_ptr[d.p(i, j)]; k < b.row_ptr[d.p(i, j) + 1]; ++k) {
        const bool hits_v_gamma =
            b.col_idx[k] >= d.n_u && b.col_idx[k] < d.n_u + d.n_v_gamma;
        CHECK(!hits_v_gamma);  // interface-v coupling only from the first pressure row
      }
}

TEST_CASE("rank(B) and nullity of (Bx By)") {
  PhysicalParams p{1.0, 1.0, 1.0};
  for (int n = 2; n <= 8; ++n) {
    MacGrid g = build_grid(n, {0, 1, 0, 1}, {0, 1, -1, 0});
    DofLayout d = dof_layout(g);
    CsrMatrix b = assemble_divergence(g);
    CHECK(dense_rank(to_dense(b), 1e-10) == static_cast<std::size_t>(n * n));
    // strip the v_gamma columns
    CsrBuilder bb(d.n_p, d.n_u + d.n_v_int);
    for (index_t r = 0; r < b.nrows; ++r)
      for (index_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k) {
        const index_t c = b.col_idx[k];
        if (c < d.n_u)
          bb.add(r, c, b.values[k]);
        else if (c >= d.n_u + d.n_v_gamma)
          bb.add(r, c - d.n_v_gamma, b.values[k]);
      }
    CHECK(dense_nullity(to_dense(bb.build()), 1e-10) ==
          static_cast<std::size_t>((n - 1) * (n - 1)));
  }
}

TEST_CASE("(G B^T) annihilates the paired all-ones vector") {
  PhysicalParams p{1.0, 0.01, 1.0};
  auto mcase = ManufacturedCase::make(Example::Three, p);
  BlockSystem sys = assemble_system(mcase, 8);
  const DofLayout& d = sys.dofs;
  Vector e_phi(d.n_phi, 1.0), e_p(d.n_p, 1.0);
  Vector gphi(d.stokes_total), btp(d.stokes_total);
  spmv(sys.g, e_phi.data(), gphi.data());
  CsrMatrix bt = csr_transpose(sys.b);
  spmv(bt, e_p.data(), btp.data());
  double norm = 0, scale = csr_maxabs(sys.g) + csr_maxabs(sys.b);
  for (index_t i = 0; i < d.stokes_total; ++i) norm += std::pow(gphi[i] + btp[i], 2);
  CHECK(std::sqrt(norm) <= 1e-12 * scale);
}

TEST_CASE("A_d and the symmetrized Stokes blocks admit Cholesky") {
  PhysicalParams p{1.0, 1.0, 1.0};
  for (int n : {2, 4, 8, 16, 32}) {
    BlockSystem sys = make_system(Example::Three, n, p);
    CHECK_NOTHROW(NaturalCholesky{sys.ad});
    CHECK_NOTHROW(NaturalCholesky{sys.stokes.a11});
    CHECK_NOTHROW(NaturalCholesky{sys.stokes_tail_symmetrized()});
  }
  // positivity survives rough parameters
  for (double kappa : {1e-4, 1e2}) {
    BlockSystem sys = make_system(Example::Three, 8, {0.01, kappa, 0.01});
    CHECK_NOTHROW(NaturalCholesky{sys.ad});
    CHECK_NOTHROW(NaturalCholesky{sys.stokes.a11});
    CHECK_NOTHROW(NaturalCholesky{sys.stokes_tail_symmetrized()});
  }
}

TEST_CASE("coupled operator dimension at n = 32") {
  PhysicalParams p{1.0, 1.0, 1.0};
  BlockSystem sys = make_system(Example::Three, 32, p);
  CHECK(sys.coupled().nrows == 4064);
  CHECK(sys.coupled_sym().nrows == 4064);
}

TEST_CASE("the two coupled forms solve to the same fields") {
  PhysicalParams p{1.0, 0.1, 1.0};
  BlockSystem sys = make_system(Example::Three, 8, p);
  auto f1 = factor(sys.coupled(), FactorKind::Lu);
  auto f2 = factor(sys.coupled_sym(), FactorKind::Lu);
  const Vector x = f1->solve(sys.rhs());
  const Vector y = sys.from_sym(f2->solve(sys.rhs_sym()));
  for (index_t i = 0; i < sys.dofs.total; ++i)
    CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-9).scale(std::max(1.0, std::fabs(x[i]))));
}

TEST_CASE("manufactured case parameter constraints") {
  CHECK_THROWS_AS(ManufacturedCase::make(Example::One, PhysicalParams{2.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ManufacturedCase::make(Example::Two, PhysicalParams{1.0, 0.5, 1.0}),
                  std::invalid_argument);
  CHECK_NOTHROW(ManufacturedCase::make(Example::One, PhysicalParams{1.0, 0.5, 1.0}));
  CHECK_NOTHROW(ManufacturedCase::make(Example::Three, PhysicalParams{1e-4, 1e-8, 1e-4}));
  CHECK_THROWS_AS(ManufacturedCase::make(Example::Three, PhysicalParams{0.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("example 3 profile function") {
  PhysicalParams p{1.0, 1.0, 1.0};
  // eta(y) = -1 - y/2 + y^2/4 at these parameters
  for (double y : {-1.0, -0.5, 0.0, 0.25}) {
    CHECK(example3_eta(p, y) == doctest::Approx(-1 - 0.5 * y + 0.25 * y * y));
  }
  // p = 0 for example 3: the forcing carries no pressure-gradient part
  auto mcase = ManufacturedCase::make(Example::Three, p);
  CHECK(mcase.p(0.3, 0.7) == 0.0);
  CHECK(mcase.f_stokes_x(0.3, 0.7) ==
        doctest::Approx(-p.nu * mcase.lap_u(0.3, 0.7)).epsilon(1e-15));
}

TEST_CASE("interface conditions hold analytically on the interface") {
  struct CaseParams {
    Example ex;
    PhysicalParams p;
  };
  for (const auto& cp : {CaseParams{Example::One, {1, 1, 1}}, CaseParams{Example::Two, {1, 1, 1}},
                         CaseParams{Example::Three, {0.3, 2.0, 0.45}}}) {
    auto mc = ManufacturedCase::make(cp.ex, cp.p);
    const double yg = mc.stokes_domain().y_min;
    const double eps = 1e-6;
    for (double x : {0.17, 0.52, 0.93}) {
      // mass conservation: v = -kappa dphi/dy
      const double dphidy = (mc.phi(x, yg + eps) - mc.phi(x, yg - eps)) / (2 * eps);
      CHECK(mc.v(x, yg) == doctest::Approx(-cp.p.kappa * dphidy).epsilon(1e-6));
      // balance of normal forces: p - phi = 2 nu dv/dy
      const double dvdy = (mc.v(x, yg + eps) - mc.v(x, yg - eps)) / (2 * eps);
      CHECK(mc.p(x, yg) - mc.phi(x, yg) == doctest::Approx(2 * cp.p.nu * dvdy).epsilon(1e-6));
      // BJS: u = (nu/alpha)(du/dy + dv/dx)
      const double dudy = (mc.u(x, yg + eps) - mc.u(x, yg - eps)) / (2 * eps);
      const double dvdx = (mc.v(x + eps, yg) - mc.v(x - eps, yg)) / (2 * eps);
      CHECK(mc.u(x, yg) ==
            doctest::Approx((cp.p.nu / cp.p.alpha) * (dudy + dvdx)).epsilon(1e-6));
    }
  }
}

TEST_CASE("truncation residual of the exact interpolant, by row block") {
  // Interface rows are first-order consistent (ratio ~2 between grids); plain
  // interior rows are second order; rows whose wall ghost was eliminated keep
  // a bounded tangential-curvature term, which is the usual MAC situation and
  // does not impede convergence of the solution itself.
  PhysicalParams p{1.0, 1.0, 1.0};
  auto mcase = ManufacturedCase::make(Example::Three, p);
  double prev_iface = 0, prev_int = 0;
  int step = 0;
  for (int n : {32, 64}) {
    BlockSystem sys = assemble_system(mcase, n);
    const DofLayout& d = sys.dofs;
    Vector r = spmv(sys.coupled(), exact_interpolant(sys.grid, d, mcase));
    const Vector b = sys.rhs();
    auto res = [&](index_t idx) { return std::fabs(r[idx] - b[idx]); };

    double m_iface = 0;
    for (int i = 1; i < n - 1; ++i) m_iface = std::max(m_iface, res(d.phi(i, n - 1)));
    for (int i = 2; i < n - 1; ++i) m_iface = std::max(m_iface, res(d.off_u + d.u(i, 0)));
    for (int i = 1; i < n - 1; ++i) m_iface = std::max(m_iface, res(d.off_v_gamma + i));
    double m_int = 0;
    for (int j = 1; j < n - 1; ++j)
      for (int i = 2; i < n - 1; ++i) m_int = std::max(m_int, res(d.off_u + d.u(i, j)));
    double m_wall = 0;
    for (int j = 1; j < n; ++j)
      m_wall = std::max({m_wall, res(d.off_v_int + d.v_int(0, j)),
                         res(d.off_v_int + d.v_int(n - 1, j))});
    CHECK(m_wall < 0.5);

    if (step++ > 0) {
      CHECK(prev_iface / m_iface == doctest::Approx(2.0).epsilon(0.2));   // O(h)
      CHECK(prev_int / m_int == doctest::Approx(4.0).epsilon(0.2));       // O(h^2)
    }
    prev_iface = m_iface;
    prev_int = m_int;
  }
}
