#pragma once
#include <stdexcept>

#include "sdmac/csr.hpp"

namespace sdmac {

struct Square {
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

/// Staggered MAC grid over two equal squares stacked vertically, Stokes above
/// Darcy, sharing the horizontal interface edge. Immutable after construction.
///
/// Index convention: a doubled integer index (i2, j2) addresses the point
/// (x_min + i2*h/2, y_ref + j2*h/2), so whole indices land on grid lines and
/// odd indices on cell centers/faces, with no floating-point keys anywhere.
struct MacGrid {
  int n = 0;
  double h = 0;
  double side = 0;
  Square stokes, darcy;
  double interface_y = 0;

  double x_at(int i2) const { return stokes.x_min + 0.5 * i2 * h; }
  /// y measured upward from the interface (Stokes side for j2 > 0).
  double y_stokes(int j2) const { return interface_y + 0.5 * j2 * h; }
  /// y measured upward from the Darcy bottom wall.
  double y_darcy(int j2) const { return darcy.y_min + 0.5 * j2 * h; }
};

MacGrid build_grid(int n, const Square& stokes_domain, const Square& darcy_domain);

/// Unknown counts, global offsets and (i,j) <-> flat index maps for the
/// ordering (phi, u, v_interface, v_interior, p).
///
/// Within each field the ordering is lexicographic, x fastest, y ascending.
/// For phi (y from the Darcy bottom up) this puts the interface-adjacent
/// layer last, so the trailing n x n of A_d is the interface block. For the
/// Stokes fields (y from the interface up) the interface-adjacent layers come
/// first, matching the documented block structure of A_s and B.
struct DofLayout {
  int n = 0;
  index_t n_phi = 0, n_u = 0, n_v_gamma = 0, n_v_int = 0, n_p = 0;
  index_t off_phi = 0, off_u = 0, off_v_gamma = 0, off_v_int = 0, off_p = 0;
  index_t total = 0;        // 4n^2 - n
  index_t stokes_total = 0; // 2n^2 - n (u + v blocks)

  // phi cell (i, j): i in [0,n), j in [0,n) counted from the bottom wall.
  index_t phi(int i, int j) const { return static_cast<index_t>(j) * n + i; }
  // u point (i, j+1/2): i in [1,n), j in [0,n) counted from the interface.
  index_t u(int i, int j) const { return static_cast<index_t>(j) * (n - 1) + (i - 1); }
  // interface v point (i+1/2, 0): i in [0,n).
  index_t v_gamma(int i) const { return static_cast<index_t>(i); }
  // interior v point (i+1/2, j): i in [0,n), j in [1,n).
  index_t v_int(int i, int j) const { return static_cast<index_t>(j - 1) * n + i; }
  // pressure cell (i, j): i in [0,n), j in [0,n) counted from the interface.
  index_t p(int i, int j) const { return static_cast<index_t>(j) * n + i; }

  struct IJ {
    int i, j;
  };
  IJ phi_inv(index_t k) const { return {static_cast<int>(k % n), static_cast<int>(k / n)}; }
  IJ u_inv(index_t k) const {
    return {static_cast<int>(k % (n - 1)) + 1, static_cast<int>(k / (n - 1))};
  }
  IJ v_int_inv(index_t k) const { return {static_cast<int>(k % n), static_cast<int>(k / n) + 1}; }
  IJ p_inv(index_t k) const { return {static_cast<int>(k % n), static_cast<int>(k / n)}; }
};

DofLayout dof_layout(const MacGrid& grid);

}  // namespace sdmac
