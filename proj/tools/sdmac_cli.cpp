// Command-line driver: assembly, single solves, convergence studies,
// preconditioned GMRES sweeps, spectral verification, and Matrix Market export.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sdmac/mmio.hpp"
#include "sdmac/tables.hpp"

using namespace sdmac;

namespace {

struct CommonFlags {
  int example = 3;
  double nu = 1.0;
  double alpha = -1.0;  // <0: example default (nu for example 3, 1 otherwise)
  std::string kappa = "1";
  std::string n = "32";
  std::string precond = "m3hat";
  std::string t_mode = "ic";
  double droptol = 1e-2;
  double tau = 1.0 / 3.0;
  double rtol = 1e-8;
  int restart = 20;
  int maxit = 500;
  std::string format = "md";
  std::string out;
  bool large = false;
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  return v;
}

PhysicalParams make_params(const CommonFlags& f, double kappa) {
  PhysicalParams p;
  p.nu = f.nu;
  p.kappa = kappa;
  if (f.alpha > 0)
    p.alpha = f.alpha;
  else
    p.alpha = f.example == 3 ? f.nu : 1.0;
  return p;
}

TMode parse_tmode(const std::string& s) {
  if (s == "identity") return TMode::Identity;
  if (s == "ic") return TMode::Ic;
  if (s == "exact") return TMode::Exact;
  throw CLI::ValidationError("--t-mode must be identity|ic|exact");
}

void emit(const ResultTable& t, const std::string& format, const std::string& out) {
  const std::string payload = format == "csv" ? t.to_csv() : t.to_markdown();
  if (out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open " + out);
    f << payload;
    std::cout << "wrote " << out << "\n";
  }
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_solver) {
  cmd->add_option("--example", f.example, "manufactured case (1|2|3)")
      ->check(CLI::IsMember({1, 2, 3}));
  cmd->add_option("--n", f.n, "cells per direction (single value or comma list)");
  cmd->add_option("--nu", f.nu, "fluid viscosity");
  cmd->add_option("--kappa", f.kappa, "permeability (single value or comma list)");
  cmd->add_option("--alpha", f.alpha, "slip coefficient (default: nu for example 3, 1 otherwise)");
  cmd->add_option("--format", f.format, "output format (csv|md)")
      ->check(CLI::IsMember({"csv", "md"}));
  cmd->add_option("--out", f.out, "output path (stdout when absent)");
  if (with_solver) {
    cmd->add_option("--precond", f.precond,
                    "preconditioner variant "
                    "(m1hat|m2hat|m3hat|m1ideal|m2ideal|m3ideal|m2tilde|m3tilde|m1in|m2in)");
    cmd->add_option("--t-mode", f.t_mode, "interface block mode (identity|ic|exact)");
    cmd->add_option("--droptol", f.droptol, "incomplete Cholesky drop tolerance");
    cmd->add_option("--tau", f.tau, "scaled-identity parameter");
    cmd->add_option("--rtol", f.rtol, "GMRES relative tolerance");
    cmd->add_option("--restart", f.restart, "GMRES restart length");
    cmd->add_option("--maxit", f.maxit, "total GMRES iteration budget");
    cmd->add_flag("--large", f.large, "allow cells beyond the desk-scale guard");
  }
}

int run_assemble(const CommonFlags& f) {
  const int n = parse_ints(f.n).at(0);
  const double kappa = parse_doubles(f.kappa).at(0);
  const auto mcase = ManufacturedCase::make(static_cast<Example>(f.example), make_params(f, kappa));
  const BlockSystem sys = assemble_system(mcase, n);
  ResultTable t;
  t.title = "Assembled system";
  t.corner = "block";
  t.col_labels = {"rows", "cols", "nnz"};
  auto row = [&](const std::string& name, const CsrMatrix& m) {
    t.row_labels.push_back(name);
    t.cells.push_back({std::to_string(m.nrows), std::to_string(m.ncols), std::to_string(m.nnz())});
  };
  row("A_d", sys.ad);
  row("A_s", sys.as);
  row("G", sys.g);
  row("B", sys.b);
  row("coupled", sys.coupled());
  t.metadata = {{"n", std::to_string(n)},
                {"total unknowns", std::to_string(sys.dofs.total)},
                {"h", format_double(sys.grid.h, 6)}};
  emit(t, f.format, f.out);
  return 0;
}

int run_solve_cmd(const CommonFlags& f) {
  const int n = parse_ints(f.n).at(0);
  const double kappa = parse_doubles(f.kappa).at(0);
  PrecondConfig pcfg;
  pcfg.variant = precond_variant_from_string(f.precond);
  pcfg.t_mode = parse_tmode(f.t_mode);
  pcfg.droptol = f.droptol;
  pcfg.tau = f.tau;
  pcfg.override_guard = f.large;
  GmresConfig gcfg;
  gcfg.restart = f.restart;
  gcfg.rtol = f.rtol;
  gcfg.max_iters = f.maxit;
  const SolveOutcome out =
      run_single_solve(static_cast<Example>(f.example), make_params(f, kappa), n, pcfg, gcfg);
  ResultTable t;
  t.title = "Single solve";
  t.corner = "quantity";
  t.col_labels = {"value"};
  auto row = [&](const std::string& k, const std::string& v) {
    t.row_labels.push_back(k);
    t.cells.push_back({v});
  };
  row("converged", out.report.converged ? "yes" : "no");
  row("iterations", out.report.converged ? std::to_string(out.report.iterations) : "-");
  row("cycles", std::to_string(out.report.cycles));
  row("final residual (preconditioned)", format_double(out.report.final_residual, 12));
  row("final residual (true)", format_double(out.report.final_true_residual, 12));
  row("error u", format_double(out.errors.u, 8));
  row("error v", format_double(out.errors.v, 8));
  row("error p", format_double(out.errors.p, 8));
  row("error phi", format_double(out.errors.phi, 8));
  t.metadata = {{"example", std::to_string(f.example)}, {"n", std::to_string(n)},
                {"nu", format_double(f.nu, 6)},         {"kappa", format_double(kappa, 8)},
                {"precond", f.precond},                 {"t_mode", f.t_mode},
                {"droptol", format_double(f.droptol, 4)}, {"restart", std::to_string(f.restart)}};
  emit(t, f.format, f.out);
  return 0;
}

int run_convergence_cmd(const CommonFlags& f) {
  const double kappa = parse_doubles(f.kappa).at(0);
  const ConvergenceResult r = run_convergence(static_cast<Example>(f.example),
                                              make_params(f, kappa), parse_ints(f.n));
  emit(r.table, f.format, f.out);
  return 0;
}

int run_sweep_cmd(const CommonFlags& f) {
  SweepOptions o;
  o.example = static_cast<Example>(f.example);
  o.params = make_params(f, 1.0);
  o.kappa_list = parse_doubles(f.kappa);
  o.n_list = parse_ints(f.n);
  std::stringstream ss(f.precond);
  std::string item;
  while (std::getline(ss, item, ',')) o.variants.push_back(precond_variant_from_string(item));
  o.t_mode = parse_tmode(f.t_mode);
  o.droptol = f.droptol;
  o.tau = f.tau;
  o.gmres.restart = f.restart;
  o.gmres.rtol = f.rtol;
  o.gmres.max_iters = f.maxit;
  o.large = f.large;
  o.override_guard = f.large;
  const SweepResult r = run_sweep(o);
  std::string payload;
  for (const auto& t : r.tables)
    payload += (f.format == "csv" ? t.to_csv() : t.to_markdown()) + "\n";
  if (f.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream file(f.out);
    if (!file) throw std::runtime_error("cannot open " + f.out);
    file << payload;
    std::cout << "wrote " << f.out << "\n";
  }
  return 0;
}

int run_spectra_cmd(const CommonFlags& f, const std::string& variants_csv) {
  std::vector<PrecondVariant> variants;
  std::stringstream ss(variants_csv);
  std::string item;
  while (std::getline(ss, item, ',')) variants.push_back(precond_variant_from_string(item));
  const double kappa = parse_doubles(f.kappa).at(0);
  const auto reports = run_spectra(parse_ints(f.n), variants, static_cast<Example>(f.example),
                                   make_params(f, kappa), f.large);
  emit(spectra_table(reports), f.format, f.out);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.pass();
  return ok ? 0 : 1;
}

int run_export_cmd(const CommonFlags& f, const std::string& matrix) {
  if (f.out.empty()) throw CLI::ValidationError("export requires --out");
  const int n = parse_ints(f.n).at(0);
  const double kappa = parse_doubles(f.kappa).at(0);
  const auto mcase = ManufacturedCase::make(static_cast<Example>(f.example), make_params(f, kappa));
  const BlockSystem sys = assemble_system(mcase, n);
  CsrMatrix m;
  MmKind kind = MmKind::General;
  if (matrix == "K") {
    m = sys.coupled_sym();
  } else if (matrix == "K12") {
    m = sys.coupled();
  } else if (matrix == "Ad") {
    m = sys.ad;
    kind = MmKind::Symmetric;
  } else if (matrix == "As") {
    m = sys.as;
  } else if (matrix == "G") {
    m = sys.g;
  } else if (matrix == "B") {
    m = sys.b;
  } else if (matrix == "S1hat" || matrix == "T") {
    InterfaceBlockT t =
        build_T(parse_tmode(f.t_mode), sys.ad, sys.grid, sys.params, f.droptol, f.tau);
    if (matrix == "T") {
      CsrBuilder tb(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (t.t(i, j) != 0.0) tb.add(i, j, t.t(i, j));
      m = tb.build();
    } else {
      auto s1 = build_S1_approx(sys.dofs, sys.stokes, t);
      m = s1->matrix();
    }
  } else {
    throw CLI::ValidationError("--matrix must be K|K12|Ad|As|G|B|S1hat|T");
  }
  mm_write_file(f.out, m, kind);
  std::cout << "wrote " << f.out << " (" << m.nrows << " x " << m.ncols << ", " << m.nnz()
            << " entries)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes-Darcy MAC discretization, block preconditioners, and GMRES experiments"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string variants = "m1ideal,m2ideal,m3ideal,m2tilde,m3tilde";
  std::string matrix = "K";

  CLI::App* assemble = app.add_subcommand("assemble", "assemble and report block dimensions");
  add_common(assemble, f, false);
  CLI::App* solve = app.add_subcommand("solve", "one preconditioned GMRES solve");
  add_common(solve, f, true);
  CLI::App* conv = app.add_subcommand("convergence", "discretization-order study (direct solves)");
  add_common(conv, f, false);
  CLI::App* sweep = app.add_subcommand("sweep", "iteration-count tables over kappa and n");
  add_common(sweep, f, true);
  CLI::App* spectra = app.add_subcommand("spectra", "verify the spectral structure at small n");
  add_common(spectra, f, true);
  spectra->add_option("--variants", variants, "comma list of exact-Schur variants");
  CLI::App* exportc = app.add_subcommand("export", "write a matrix in Matrix Market format");
  add_common(exportc, f, true);
  exportc->add_option("--matrix", matrix, "K|K12|Ad|As|G|B|S1hat|T");

  CLI11_PARSE(app, argc, argv);

  try {
    if (assemble->parsed()) return run_assemble(f);
    if (solve->parsed()) return run_solve_cmd(f);
    if (conv->parsed()) return run_convergence_cmd(f);
    if (sweep->parsed()) return run_sweep_cmd(f);
    if (spectra->parsed()) return run_spectra_cmd(f, variants);
    if (exportc->parsed()) return run_export_cmd(f, matrix);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
