#pragma once
#include <array>
#include <string>
#include <vector>

#include "sdmac/gmres.hpp"
#include "sdmac/schur.hpp"
#include "sdmac/spectral.hpp"
#include "sdmac/solve_direct.hpp"

namespace sdmac {

/// Labeled cell grid with preformatted values; '-' marks a GMRES run that did
/// not converge within the iteration budget.
struct ResultTable {
  std::string title;
  std::string corner;  // label of the row-header column
  std::vector<std::string> col_labels;
  std::vector<std::string> row_labels;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::string to_csv() const;
  std::string to_markdown() const;
};

std::string format_double(double v, int precision = 4);

// -- convergence-order study -------------------------------------------------

struct ConvergenceResult {
  std::vector<int> n_list;
  // discrete L2 errors per field, indexed [field][grid]; fields u, v, p, phi
  std::array<std::vector<double>, 4> errors;
  // rates log2(e_n / e_2n), indexed [field][pair]
  std::array<std::vector<double>, 4> rates;
  ResultTable table;
};

/// Direct solves on consecutive grids; rates are log2 ratios of the discrete
/// L2 error norms between grid pairs (n, 2n).
ConvergenceResult run_convergence(Example example, const PhysicalParams& params,
                                  const std::vector<int>& n_list);

// -- preconditioned GMRES sweeps ----------------------------------------------

struct SweepOptions {
  Example example = Example::Three;
  PhysicalParams params;  // kappa ignored (taken from kappa_list)
  std::vector<double> kappa_list;
  std::vector<int> n_list;
  std::vector<PrecondVariant> variants;
  TMode t_mode = TMode::Ic;
  double droptol = 1e-2;
  double tau = 1.0 / 3.0;
  GmresConfig gmres;
  bool override_guard = false;
  int large_threshold = 256;  // cells with n above this need `large`
  bool large = false;
};

struct SweepCell {
  PrecondVariant variant;
  double kappa = 0;
  int n = 0;
  int iterations = -1;  // -1: no convergence within budget
  bool converged = false;
  double true_residual = 0;
  double wall_seconds = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<ResultTable> tables;  // one per variant, n rows x kappa columns
  const SweepCell* find(PrecondVariant v, double kappa, int n) const;
};

/// One GMRES(restart) solve per (variant, kappa, n) cell; cells run in an
/// OpenMP worker pool and results are position-stable.
SweepResult run_sweep(const SweepOptions& opts);

/// Single solve described by explicit flags; returns the report and the
/// discretization errors of the computed solution.
struct SolveOutcome {
  GmresReport report;
  FieldErrors errors;
};
SolveOutcome run_single_solve(Example example, const PhysicalParams& params, int n,
                              const PrecondConfig& pcfg, const GmresConfig& gcfg);

// -- spectral suites -----------------------------------------------------------

std::vector<SpectralReport> run_spectra(const std::vector<int>& n_list,
                                        const std::vector<PrecondVariant>& variants,
                                        Example example, const PhysicalParams& params,
                                        bool override_guard = false);
ResultTable spectra_table(const std::vector<SpectralReport>& reports);

}  // namespace sdmac
