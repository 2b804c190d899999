#pragma once
#include "sdmac/assembly.hpp"

namespace sdmac {

struct DirectSolveReport {
  int refinement_passes = 0;
  double rel_residual = 0.0;  // ||b - K x|| / ||b|| in the (phi, u, p) form
  long s2_inner_iterations = 0;
};

/// Solves the coupled system exactly through its block factorization: A_d and
/// the symmetrized exact-S1 blocks are factored with Cholesky, the S2 block is
/// solved through the exact-S2 handle at 1e-12, and full-system iterative
/// refinement drives the residual to round-off level. Returns the solution in
/// (phi, u, p) layout.
Vector solve_coupled_direct(const BlockSystem& sys, DirectSolveReport* report = nullptr);

}  // namespace sdmac
