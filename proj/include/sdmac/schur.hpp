#pragma once
#include <memory>
#include <optional>
#include <string>

#include "sdmac/assembly.hpp"
#include "sdmac/factor.hpp"
#include "sdmac/gmres.hpp"

namespace sdmac {

enum class TMode { Identity, Ic, Exact };

/// Dense n x n approximation of the nonzero block of G A_d^{-1} G^T.
struct InterfaceBlockT {
  DenseMatrix t;
  TMode provenance = TMode::Identity;
  double tau = 1.0 / 3.0;
  double ic_shift = 0.0;  // diagonal shift the incomplete factor needed, 0 if none
};

/// identity: (tau/kappa) I.
/// ic:       (F22^{-T} F22^{-1}) / h^2 from the trailing n x n of the
///           incomplete Cholesky factor of A_d in the layout ordering.
/// exact:    trailing n x n of A_d^{-1} scaled by 1/h^2, formed by n solves.
InterfaceBlockT build_T(TMode mode, const CsrMatrix& ad, const MacGrid& grid,
                        const PhysicalParams& params, double droptol = 1e-2,
                        double tau = 1.0 / 3.0);

/// Application contract for S1-like operators: z = S1^{-1} r.
class S1Operator {
 public:
  virtual ~S1Operator() = default;
  virtual void solve(const double* r, double* z) const = 0;
  virtual index_t dim() const = 0;
  Vector solve(const Vector& r) const {
    Vector z(r.size());
    solve(r.data(), z.data());
    return z;
  }
};

/// Assembles [A11, A12, 0; 0, A22+T, A23; 0, A32, A33] as one sparse matrix
/// (T embedded densely) and factors it with a general sparse LU. This is the
/// form the practical preconditioners solve against.
class AssembledS1 final : public S1Operator {
 public:
  AssembledS1(const DofLayout& dofs, const StokesBlocks& s, const DenseMatrix& t);
  void solve(const double* r, double* z) const override;
  index_t dim() const override { return matrix_.nrows; }
  const CsrMatrix& matrix() const { return matrix_; }

 private:
  CsrMatrix matrix_;
  std::unique_ptr<Factorization> lu_;
};

std::unique_ptr<AssembledS1> build_S1_approx(const DofLayout& dofs, const StokesBlocks& s,
                                             const InterfaceBlockT& t);

/// Exact S1 = A_s + G A_d^{-1} G^T solved through its block structure: the
/// trailing (v) block is symmetrized by diag(I, sqrt(2) I) and factored with
/// Cholesky, then A11 closes the u part. Exactness holds because the exact T
/// equals the interface block of G A_d^{-1} G^T.
class StructuredS1 final : public S1Operator {
 public:
  StructuredS1(const BlockSystem& sys, const DenseMatrix& t_exact, bool fill_reducing);
  void solve(const double* r, double* z) const override;
  index_t dim() const override { return n_u_ + n_tail_; }

 private:
  index_t n_u_, n_gamma_, n_tail_;
  CsrMatrix a12_;
  std::unique_ptr<Factorization> a11_;
  std::unique_ptr<Factorization> tail_;  // Cholesky of [A22+T, s2 A32^T; s2 A32, A33]
};

std::unique_ptr<StructuredS1> build_S1_exact(const BlockSystem& sys);

/// Closed-form diagonal approximation of S2: first n pressure entries
/// (3 nu kappa + h^2 tau) / (nu (2 nu kappa + h^2 tau)), the rest 1/nu.
Vector build_S2_hat(const PhysicalParams& params, const MacGrid& grid, double tau = 1.0 / 3.0);

/// Inner-solve handle for the exact S2 = B S1^{-1} B^T: applying the inverse
/// runs an unrestarted GMRES on v -> B S1^{-1} (B^T v) to rtol 1e-12 and is
/// treated as exact by the caller. Hard error if 2000 iterations do not
/// converge. An optional diagonal preconditioner accelerates the inner solve
/// without changing what the handle computes.
class S2ExactHandle {
 public:
  S2ExactHandle(std::shared_ptr<const S1Operator> s1, const CsrMatrix& b,
                std::optional<Vector> diag_precond = std::nullopt);
  void apply(const double* v, double* y) const;          // y = S2 v
  void apply_inverse(const double* r, double* z) const;  // solve S2 z = r
  index_t dim() const { return bt_.ncols; }
  int last_inner_iterations() const { return last_iters_; }
  long total_inner_iterations() const { return total_iters_; }

 private:
  std::shared_ptr<const S1Operator> s1_;
  CsrMatrix b_, bt_;
  std::optional<Vector> inv_diag_;
  mutable int last_iters_ = 0;
  mutable long total_iters_ = 0;
};

enum class PrecondVariant {
  M1Hat,
  M2Hat,
  M3Hat,
  M1Ideal,
  M2Ideal,
  M3Ideal,
  M2Tilde,
  M3Tilde,
  M1In,  // approximate S1 with exact S2
  M2In
};

PrecondVariant precond_variant_from_string(const std::string& name);
std::string to_string(PrecondVariant v);
bool variant_uses_exact_schur(PrecondVariant v);

struct PrecondConfig {
  PrecondVariant variant = PrecondVariant::M3Hat;
  TMode t_mode = TMode::Ic;
  double droptol = 1e-2;
  double tau = 1.0 / 3.0;
  int exact_size_guard = 64;  // max n for variants holding exact Schur pieces
  bool override_guard = false;
};

/// A ready-to-apply block preconditioner for the sign-flipped coupled form.
/// Application is a fixed linear operator: block forward substitution through
/// A_d, the (approximate or exact) S1, and the S2 block.
class PreconditionerInstance {
 public:
  static PreconditionerInstance build(const BlockSystem& sys, const PrecondConfig& cfg);

  void apply(const double* r, double* z) const;
  LinearOp as_op() const {
    return {dofs_.total, [this](const double* r, double* z) { apply(r, z); }};
  }

  PrecondVariant variant() const { return cfg_.variant; }
  const PrecondConfig& config() const { return cfg_; }
  double ic_shift() const { return ic_shift_; }
  const AssembledS1* assembled_s1() const { return s1_assembled_.get(); }
  const InterfaceBlockT* interface_block() const { return t_ ? &*t_ : nullptr; }

 private:
  PrecondConfig cfg_;
  DofLayout dofs_;
  CsrMatrix g_, b_;
  std::unique_ptr<Factorization> ad_;
  std::shared_ptr<AssembledS1> s1_assembled_;
  std::shared_ptr<StructuredS1> s1_exact_;
  std::optional<Vector> s2_hat_;            // diagonal
  std::unique_ptr<S2ExactHandle> s2_exact_;
  std::optional<InterfaceBlockT> t_;
  double ic_shift_ = 0.0;

  const S1Operator& s1() const;
  void solve_s2(const double* r, double* z) const;
};

}  // namespace sdmac
