#pragma once
#include "sdmac/csr.hpp"
#include "sdmac/grid.hpp"
#include "sdmac/manufactured.hpp"

namespace sdmac {

/// The six named sub-blocks of the Stokes operator over (u, v_gamma, v_int).
/// A22 is the scaled identity (2 nu / h^2) I_n and is carried as a scalar.
struct StokesBlocks {
  CsrMatrix a11, a12, a23, a32, a33;
  double a22 = 0;
};

/// All blocks of the coupled double saddle-point system plus right-hand
/// sides. Immutable once assembled.
struct BlockSystem {
  MacGrid grid;
  DofLayout dofs;
  PhysicalParams params;

  CsrMatrix ad;  // n^2 x n^2, SPD under Dirichlet Darcy conditions
  StokesBlocks stokes;
  CsrMatrix as;  // (2n^2-n)^2, assembled from the six blocks
  CsrMatrix g;   // (2n^2-n) x n^2 coupling
  CsrMatrix b;   // n^2 x (2n^2-n) negated discrete divergence

  Vector g1, g2, g3;

  /// [A_d, -G^T, 0; G, A_s, B^T; 0, B, 0] acting on (phi, u, p).
  CsrMatrix coupled() const;
  /// Sign-flipped form [A_d, G^T, 0; G, -A_s, B^T; 0, B, 0] acting on
  /// (phi, -u, p); used by the preconditioning and spectral paths.
  CsrMatrix coupled_sym() const;
  Vector rhs() const;      // (g1, g2, g3)
  Vector rhs_sym() const;  // (g1, g2, -g3)

  /// Similarity-symmetrized trailing 2x2 of A_s:
  /// [A22, sqrt(2) A32^T; sqrt(2) A32, A33]; SPD when A_s has positive spectrum.
  CsrMatrix stokes_tail_symmetrized() const;

  /// Maps a solution of the sign-flipped system back to (phi, u, p) layout.
  Vector from_sym(const Vector& x_sym) const;
};

CsrMatrix assemble_darcy(const MacGrid& grid, const PhysicalParams& params);
StokesBlocks assemble_stokes(const MacGrid& grid, const PhysicalParams& params);
CsrMatrix assemble_divergence(const MacGrid& grid);
CsrMatrix assemble_coupling(const MacGrid& grid);

struct RightHandSide {
  Vector g1, g2, g3;
};
RightHandSide assemble_rhs(const MacGrid& grid, const PhysicalParams& params,
                           const ManufacturedCase& mcase);

BlockSystem assemble_system(const MacGrid& grid, const PhysicalParams& params,
                            const ManufacturedCase& mcase);
/// Convenience: grid taken from the case's canonical domains.
BlockSystem assemble_system(const ManufacturedCase& mcase, int n);

CsrMatrix assemble_As(const DofLayout& dofs, const StokesBlocks& s);

/// Per-field views into a coupled solution vector in (phi, u, p) layout.
struct FieldSplit {
  Vector phi, u, v_gamma, v_int, p;
};
FieldSplit split_fields(const DofLayout& dofs, const Vector& x);

/// Exact staggered samples of the manufactured fields, coupled layout.
Vector exact_interpolant(const MacGrid& grid, const DofLayout& dofs, const ManufacturedCase& mcase);

/// Discrete L2 norms (h^2 sum e^2)^(1/2) of the per-field errors; the v norm
/// covers interface and interior v together.
struct FieldErrors {
  double u = 0, v = 0, p = 0, phi = 0;
};
FieldErrors field_errors(const MacGrid& grid, const DofLayout& dofs, const ManufacturedCase& mcase,
                         const Vector& x);

}  // namespace sdmac
