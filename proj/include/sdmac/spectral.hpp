#pragma once
#include <complex>
#include <string>
#include <vector>

#include "sdmac/schur.hpp"

namespace sdmac {

struct ClauseResult {
  std::complex<double> lambda;
  std::size_t expected = 0;   // the known algebraic multiplicity
  std::size_t measured = 0;   // what the clause is judged on
  std::size_t geometric = 0;  // nullity of X - lambda I
  // measured - geometric; nonzero flags nontrivial Jordan blocks at lambda
  std::size_t jordan_defect = 0;
  bool pass = false;
};

struct SpectralReport {
  std::string label;
  PrecondVariant variant = PrecondVariant::M1Ideal;
  int n = 0;
  std::vector<ClauseResult> clauses;
  double annihilator_residual = -1.0;  // < 0 when not run
  double annihilator_tol = 1e-8;
  bool annihilator_pass = true;
  // residual of the shorter annihilator that would hold were the operator
  // diagonalizable; recorded when it fails while multiplicities pass
  double diagonalizable_annihilator_residual = -1.0;
  // counting identity for the partially-located spectrum (block diagonal case)
  bool counting_checked = false;
  std::size_t unlocated = 0;
  std::size_t unlocated_expected = 0;
  bool counting_pass = true;

  bool pass() const {
    if (!annihilator_pass) return false;
    if (counting_checked && !counting_pass) return false;
    for (const auto& c : clauses)
      if (!c.pass) return false;
    return true;
  }
};

/// X = M^{-1} K formed column by column. Guarded to n <= 12 (dimension 560)
/// unless overridden.
DenseMatrix form_preconditioned_dense(const BlockSystem& sys, const LinearOp& minv,
                                      bool override_guard = false);

/// Geometric multiplicity of lambda as the nullity of X - lambda I, with the
/// pivot threshold 1e-8 * max|X|.
std::size_t measured_multiplicity(const DenseMatrix& x, std::complex<double> lambda);

/// Algebraic multiplicity of a real lambda: nullity of (X - lambda I)^s,
/// raised until the count stabilizes (s <= 4).
std::size_t measured_multiplicity_algebraic(const DenseMatrix& x, double lambda);

/// max over random unit v of || prod_i (X - lambda_i I) v ||.
double annihilator_residual(const DenseMatrix& x, const std::vector<std::complex<double>>& roots,
                            int trials, unsigned seed);
/// Matrix-free variant for real root sets.
double annihilator_residual(const LinearOp& x_op, const std::vector<double>& roots, int trials,
                            unsigned seed);

/// Runs the multiplicity/annihilator clause set appropriate to the variant;
/// each exact-Schur preconditioner has a fully characterized spectrum.
SpectralReport verify_spectrum(const BlockSystem& sys, PrecondVariant variant,
                               bool override_guard = false);

std::vector<std::complex<double>> expected_roots(PrecondVariant variant);

}  // namespace sdmac
