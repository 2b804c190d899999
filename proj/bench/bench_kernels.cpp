// Timing harness comparing the OpenMP kernels against their serial reference
// implementations: sparse matrix-vector products on the assembled coupled
// operator, the Gram matrix used for the interface block, and the complete
// pivoting elimination behind the rank/nullity checks.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "sdmac/assembly.hpp"
#include "sdmac/dense.hpp"

using namespace sdmac;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 192;
  printf("threads: %d\n\n", omp_get_max_threads());

  PhysicalParams p{1.0, 1e-2, 1.0};
  const auto mcase = ManufacturedCase::make(Example::Three, p);
  const BlockSystem sys = assemble_system(mcase, n);
  const CsrMatrix k = sys.coupled_sym();
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector x(k.ncols), y1(k.nrows), y2(k.nrows);
  for (auto& v : x) v = u(rng);

  const double t_par = time_best_of(5, [&] { spmv(k, x.data(), y1.data()); });
  const double t_ser = time_best_of(5, [&] { spmv_serial(k, x.data(), y2.data()); });
  double diff = 0;
  for (std::size_t i = 0; i < y1.size(); ++i) diff = std::max(diff, std::fabs(y1[i] - y2[i]));
  printf("spmv (dim %d, nnz %d):   parallel %8.3f ms   serial %8.3f ms   speedup %.2fx   maxdiff %.1e\n",
         k.nrows, k.nnz(), 1e3 * t_par, 1e3 * t_ser, t_ser / t_par, diff);

  const std::size_t m = 512;
  DenseMatrix z(m, m / 2);
  for (auto& v : z.data) v = u(rng);
  DenseMatrix g1, g2;
  const double g_par = time_best_of(3, [&] { g1 = dense_ata(z, 1.0); });
  const double g_ser = time_best_of(3, [&] { g2 = dense_ata_serial(z, 1.0); });
  diff = 0;
  for (std::size_t i = 0; i < g1.data.size(); ++i)
    diff = std::max(diff, std::fabs(g1.data[i] - g2.data[i]));
  printf("gram %zux%zu:             parallel %8.3f ms   serial %8.3f ms   speedup %.2fx   maxdiff %.1e\n",
         m, m / 2, 1e3 * g_par, 1e3 * g_ser, g_ser / g_par, diff);

  DenseMatrix e(1200, 1200);
  for (auto& v : e.data) v = u(rng);
  DenseMatrix e1 = e, e2 = e;
  std::size_t r1 = 0, r2 = 0;
  const double e_par = time_best_of(2, [&] {
    e1 = e;
    r1 = eliminate_complete_pivot(e1, 1e-12, true);
  });
  const double e_ser = time_best_of(2, [&] {
    e2 = e;
    r2 = eliminate_complete_pivot(e2, 1e-12, false);
  });
  printf("elimination 1200x1200:       parallel %8.3f ms   serial %8.3f ms   speedup %.2fx   rank %zu/%zu\n",
         1e3 * e_par, 1e3 * e_ser, e_ser / e_par, r1, r2);
  return 0;
}
