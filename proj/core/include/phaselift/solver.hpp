#pragma once

#include "phaselift/linalg.hpp"
#include "phaselift/sample_set.hpp"

#include <Eigen/Cholesky>

#include <cstddef>
#include <iosfwd>
#include <mutex>
#include <string>

namespace phaselift {

struct SolverConfig {
  int max_iters = 5000;
  double primal_tol = 1e-7;
  double dual_tol = 1e-7;
  double penalty = 1.0;
  /// Residual balancing: rescale the penalty when one residual exceeds the
  /// other by this factor.
  double balance_ratio = 10.0;
  bool verbose = false;

  /// Defaults with tolerances 1e-7·m.
  static SolverConfig for_measurements(std::size_t m);
  void validate() const;
  std::string descriptor() const;
};

struct LiftedSolution {
  SymMatrix x_hat;
  Vector signal;  // √λ₁ v₁ of x_hat
  double objective = 0.0;
  int iters = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Operator-splitting solver for the two lifted convex programs over a
/// fixed measurement matrix:
///
///   noiseless:  min Tr(X)            s.t. A(X) = y, X ⪰ 0
///   noisy:      min ‖A(X) − y‖₁      s.t. X ⪰ 0
///
/// Both share one core on the splitting
///   min f(r) + γ·Tr(X) + 1_psd(Z)  s.t.  D(A(X) − y) = r,  X − Z = 0
/// with f(r) = Σ|r_i|/d_i (noisy, γ = 0) or the indicator of {0} (noiseless,
/// γ = 1). For the noisy program D = diag(d_i) normalizes each lifted row
/// svec(a_i a_iᵀ) to unit norm; the noiseless program uses D = I. Symmetric matrices are handled in the orthonormal svec coordinates,
/// so the X-update is the fixed SPD system (MᵀM + I) x = rhs with M = D·A,
/// factored once per instance.
///
/// Stops when ‖A(Z) − y − D⁻¹r‖₁ + ‖X − Z‖_F ≤ primal_tol and the dual
/// residual ≤ dual_tol.
class PhaseLiftSolver {
 public:
  explicit PhaseLiftSolver(RowMatrix a);

  LiftedSolution solve_noiseless(const Vector& y, const SolverConfig& cfg, std::ostream* log = nullptr) const;
  LiftedSolution solve_noisy(const Vector& y, const SolverConfig& cfg, std::ostream* log = nullptr) const;

  std::size_t m() const { return static_cast<std::size_t>(a_.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(a_.cols()); }

 private:
  enum class Program { Noiseless, Noisy };
  LiftedSolution run(const Vector& y, const SolverConfig& cfg, Program prog, std::ostream* log) const;

  struct Operator {
    Eigen::MatrixXd lifted;  // m × n(n+1)/2, row i = d_i·svec(a_i a_iᵀ)
    Eigen::LLT<Eigen::MatrixXd> gram;
    Vector row_scale;
  };
  const Operator& op(Program prog) const;

  RowMatrix a_;
  Eigen::MatrixXd raw_lifted_;
  mutable std::once_flag once_[2];
  mutable Operator ops_[2];
};

LiftedSolution solve_noiseless(const SampleSet& s, const SolverConfig& cfg, std::ostream* log = nullptr);
LiftedSolution solve_noisy(const SampleSet& s, const SolverConfig& cfg, std::ostream* log = nullptr);

/// √max(λ₁, 0) · v₁ with v₁'s largest-magnitude entry made positive
/// (lowest index among ties).
Vector extract_signal(const SymMatrix& x_hat);

/// min(‖x̂ − x0‖₂, ‖x̂ + x0‖₂)
double sign_invariant_error(const Vector& x_hat, const Vector& x0);

/// ‖X̂ − x0x0ᵀ‖_F / ‖x0x0ᵀ‖_F
double relative_lift_error(const SymMatrix& x_hat, const Vector& x0);

/// Orthonormal half-vectorization (off-diagonals scaled by √2) and inverse.
Vector svec(const SymMatrix& x);
SymMatrix smat(const Vector& v, std::size_t n);

}  // namespace phaselift
