#include "sdmac/grid.hpp"

#include <cmath>

namespace sdmac {

namespace {
constexpr double kGeomTol = 1e-12;

bool is_square(const Square& s) {
  return s.width() > 0 && std::fabs(s.width() - s.height()) <= kGeomTol * std::fabs(s.width());
}
}  // namespace

MacGrid build_grid(int n, const Square& stokes_domain, const Square& darcy_domain) {
  if (n < 2) throw std::invalid_argument("build_grid: n must be >= 2");
  if (!is_square(stokes_domain) || !is_square(darcy_domain))
    throw std::invalid_argument("build_grid: subdomains must be squares");
  const double L = stokes_domain.width();
  if (std::fabs(darcy_domain.width() - L) > kGeomTol * L)
    throw std::invalid_argument("build_grid: subdomains must have equal side length");
  if (std::fabs(stokes_domain.x_min - darcy_domain.x_min) > kGeomTol * L ||
      std::fabs(stokes_domain.x_max - darcy_domain.x_max) > kGeomTol * L)
    throw std::invalid_argument("build_grid: subdomains must share vertical edges");
  if (std::fabs(stokes_domain.y_min - darcy_domain.y_max) > kGeomTol * L)
    throw std::invalid_argument("build_grid: Darcy domain must sit directly below the Stokes domain");

  MacGrid g;
  g.n = n;
  g.side = L;
  g.h = L / n;
  g.stokes = stokes_domain;
  g.darcy = darcy_domain;
  g.interface_y = stokes_domain.y_min;
  return g;
}

DofLayout dof_layout(const MacGrid& grid) {
  DofLayout d;
  const index_t n = grid.n;
  d.n = grid.n;
  d.n_phi = n * n;
  d.n_u = n * (n - 1);
  d.n_v_gamma = n;
  d.n_v_int = n * (n - 1);
  d.n_p = n * n;
  d.off_phi = 0;
  d.off_u = d.n_phi;
  d.off_v_gamma = d.off_u + d.n_u;
  d.off_v_int = d.off_v_gamma + d.n_v_gamma;
  d.off_p = d.off_v_int + d.n_v_int;
  d.stokes_total = d.n_u + d.n_v_gamma + d.n_v_int;
  d.total = d.off_p + d.n_p;
  return d;
}

}  // namespace sdmac
