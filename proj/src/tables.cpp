#include "sdmac/tables.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace sdmac {

std::string format_double(double v, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << std::fixed << v;
  return os.str();
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
  os << corner;
  for (const auto& c : col_labels) os << "," << c;
  os << "\n";
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    os << row_labels[r];
    for (const auto& c : cells[r]) os << "," << c;
    os << "\n";
  }
  return os.str();
}

std::string ResultTable::to_markdown() const {
  std::vector<std::size_t> widths;
  widths.push_back(corner.size());
  for (const auto& r : row_labels) widths[0] = std::max(widths[0], r.size());
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    std::size_t w = col_labels[c].size();
    for (const auto& row : cells) w = std::max(w, row[c].size());
    widths.push_back(w);
  }
  auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  std::ostringstream os;
  if (!title.empty()) os << "**" << title << "**\n\n";
  for (const auto& [k, v] : metadata) os << "_" << k << " = " << v << "_  \n";
  if (!metadata.empty()) os << "\n";
  os << "| " << pad(corner, widths[0]);
  for (std::size_t c = 0; c < col_labels.size(); ++c) os << " | " << pad(col_labels[c], widths[c + 1]);
  os << " |\n|";
  for (std::size_t c = 0; c < widths.size(); ++c) os << std::string(widths[c] + 2, '-') << "|";
  os << "\n";
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    os << "| " << pad(row_labels[r], widths[0]);
    for (std::size_t c = 0; c < col_labels.size(); ++c) os << " | " << pad(cells[r][c], widths[c + 1]);
    os << " |\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

ConvergenceResult run_convergence(Example example, const PhysicalParams& params,
                                  const std::vector<int>& n_list) {
  const ManufacturedCase mcase = ManufacturedCase::make(example, params);
  ConvergenceResult res;
  res.n_list = n_list;
  for (int n : n_list) {
    const BlockSystem sys = assemble_system(mcase, n);
    const Vector x = solve_coupled_direct(sys);
    const FieldErrors e = field_errors(sys.grid, sys.dofs, mcase, x);
    res.errors[0].push_back(e.u);
    res.errors[1].push_back(e.v);
    res.errors[2].push_back(e.p);
    res.errors[3].push_back(e.phi);
  }
  for (std::size_t f = 0; f < 4; ++f)
    for (std::size_t k = 0; k + 1 < n_list.size(); ++k)
      res.rates[f].push_back(std::log2(res.errors[f][k] / res.errors[f][k + 1]));

  ResultTable& t = res.table;
  t.title = "Convergence rates (direct solves)";
  t.corner = "field";
  t.metadata = {{"example", std::to_string(static_cast<int>(example))},
                {"nu", format_double(params.nu, 6)},
                {"kappa", format_double(params.kappa, 6)},
                {"alpha", format_double(params.alpha, 6)}};
  for (std::size_t k = 0; k + 1 < n_list.size(); ++k)
    t.col_labels.push_back(std::to_string(n_list[k]) + "/" + std::to_string(n_list[k + 1]));
  const char* names[4] = {"u", "v", "p", "phi"};
  for (std::size_t f = 0; f < 4; ++f) {
    t.row_labels.push_back(names[f]);
    std::vector<std::string> row;
    for (double r : res.rates[f]) row.push_back(format_double(r));
    t.cells.push_back(row);
  }
  return res;
}

// ---------------------------------------------------------------------------

const SweepCell* SweepResult::find(PrecondVariant v, double kappa, int n) const {
  for (const auto& c : cells)
    if (c.variant == v && c.n == n && std::fabs(c.kappa - kappa) <= 1e-14 * std::fabs(kappa))
      return &c;
  return nullptr;
}

SweepResult run_sweep(const SweepOptions& opts) {
  for (int n : opts.n_list)
    if (n > opts.large_threshold && !opts.large)
      throw std::invalid_argument("run_sweep: n = " + std::to_string(n) +
                                  " requires the large-run flag");

  SweepResult res;
  for (PrecondVariant v : opts.variants)
    for (double kappa : opts.kappa_list)
      for (int n : opts.n_list) {
        SweepCell c;
        c.variant = v;
        c.kappa = kappa;
        c.n = n;
        res.cells.push_back(c);
      }

  const auto ncells = static_cast<std::ptrdiff_t>(res.cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < ncells; ++i) {
    SweepCell& c = res.cells[i];
    const auto t0 = std::chrono::steady_clock::now();
    PhysicalParams p = opts.params;
    p.kappa = c.kappa;
    const ManufacturedCase mcase = ManufacturedCase::make(opts.example, p);
    const BlockSystem sys = assemble_system(mcase, c.n);

    PrecondConfig pcfg;
    pcfg.variant = c.variant;
    pcfg.t_mode = opts.t_mode;
    pcfg.droptol = opts.droptol;
    pcfg.tau = opts.tau;
    pcfg.override_guard = opts.override_guard;
    const PreconditionerInstance m = PreconditionerInstance::build(sys, pcfg);

    const CsrMatrix k = sys.coupled_sym();
    const Vector b = sys.rhs_sym();
    Vector x;
    const LinearOp kop = LinearOp::from_csr(k);
    const LinearOp mop = m.as_op();
    const GmresReport rep = gmres(kop, &mop, b, x, opts.gmres);
    c.converged = rep.converged;
    c.iterations = rep.converged ? rep.iterations : -1;
    c.true_residual = rep.final_true_residual;
    c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  for (PrecondVariant v : opts.variants) {
    ResultTable t;
    t.title = "GMRES(" + std::to_string(opts.gmres.restart) + ") iterations, " + to_string(v);
    t.corner = "n\\kappa";
    t.metadata = {{"precond", to_string(v)},
                  {"example", std::to_string(static_cast<int>(opts.example))},
                  {"nu", format_double(opts.params.nu, 6)},
                  {"alpha", format_double(opts.params.alpha, 6)},
                  {"t_mode", opts.t_mode == TMode::Identity ? "identity"
                             : opts.t_mode == TMode::Ic     ? "ic"
                                                            : "exact"},
                  {"droptol", format_double(opts.droptol, 4)},
                  {"tau", format_double(opts.tau, 4)},
                  {"rtol", format_double(opts.gmres.rtol, 12)},
                  {"maxit", std::to_string(opts.gmres.max_iters)}};
    for (double kappa : opts.kappa_list) {
      std::ostringstream os;
      os << kappa;
      t.col_labels.push_back(os.str());
    }
    for (int n : opts.n_list) {
      t.row_labels.push_back(std::to_string(n));
      std::vector<std::string> row;
      for (double kappa : opts.kappa_list) {
        const SweepCell* c = res.find(v, kappa, n);
        row.push_back(c->converged ? std::to_string(c->iterations) : "-");
      }
      t.cells.push_back(row);
    }
    res.tables.push_back(t);
  }
  return res;
}

SolveOutcome run_single_solve(Example example, const PhysicalParams& params, int n,
                              const PrecondConfig& pcfg, const GmresConfig& gcfg) {
  const ManufacturedCase mcase = ManufacturedCase::make(example, params);
  const BlockSystem sys = assemble_system(mcase, n);
  const PreconditionerInstance m = PreconditionerInstance::build(sys, pcfg);
  const CsrMatrix k = sys.coupled_sym();
  const Vector b = sys.rhs_sym();
  Vector x;
  const LinearOp kop = LinearOp::from_csr(k);
  const LinearOp mop = m.as_op();
  SolveOutcome out;
  out.report = gmres(kop, &mop, b, x, gcfg);
  out.errors = field_errors(sys.grid, sys.dofs, mcase, sys.from_sym(x));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SpectralReport> run_spectra(const std::vector<int>& n_list,
                                        const std::vector<PrecondVariant>& variants,
                                        Example example, const PhysicalParams& params,
                                        bool override_guard) {
  std::vector<SpectralReport> reports;
  for (int n : n_list) {
    const ManufacturedCase mcase = ManufacturedCase::make(example, params);
    const BlockSystem sys = assemble_system(mcase, n);
    for (PrecondVariant v : variants) reports.push_back(verify_spectrum(sys, v, override_guard));
  }
  return reports;
}

ResultTable spectra_table(const std::vector<SpectralReport>& reports) {
  ResultTable t;
  t.title = "Spectral verification";
  t.corner = "check";
  t.metadata = {{"random_seed", "20240"}};
  t.col_labels = {"n", "lambda", "expected", "measured", "pass"};
  auto fmt_lambda = [](std::complex<double> l) {
    std::ostringstream os;
    os.precision(6);
    os << l.real();
    if (l.imag() != 0.0) os << (l.imag() > 0 ? "+" : "") << l.imag() << "i";
    return os.str();
  };
  for (const auto& r : reports) {
    for (const auto& c : r.clauses) {
      t.row_labels.push_back(to_string(r.variant));
      std::string measured = std::to_string(c.measured);
      if (c.jordan_defect > 0)
        measured += " (geometric " + std::to_string(c.geometric) + ")";
      t.cells.push_back({std::to_string(r.n), fmt_lambda(c.lambda), std::to_string(c.expected),
                         measured, c.pass ? "yes" : "NO"});
    }
    if (r.annihilator_residual >= 0) {
      t.row_labels.push_back(to_string(r.variant) + " annihilator");
      std::ostringstream os;
      os.precision(3);
      os << std::scientific << r.annihilator_residual;
      t.cells.push_back({std::to_string(r.n), "-", "<=1e-08", os.str(),
                         r.annihilator_pass ? "yes" : "NO"});
    }
    if (r.counting_checked) {
      t.row_labels.push_back(to_string(r.variant) + " unlocated");
      t.cells.push_back({std::to_string(r.n), "-", std::to_string(r.unlocated_expected),
                         std::to_string(r.unlocated), r.counting_pass ? "yes" : "NO"});
    }
  }
  return t;
}

}  // namespace sdmac
