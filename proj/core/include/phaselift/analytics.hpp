#pragma once

#include "phaselift/ensemble.hpp"
#include "phaselift/expectation.hpp"
#include "phaselift/linalg.hpp"
#include "phaselift/record.hpp"
#include "phaselift/signals.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace phaselift {

enum class KappaMode { Auto, Exact, MonteCarlo };
KappaMode parse_kappa_mode(std::string_view s);

using KappaEstimate = Estimate;

/// κ(v, w) = E|⟨a, v⟩⟨a, w⟩| for unit v, w. Auto resolves to Exact for the
/// gaussian ensemble (closed form) and for discrete ensembles whose support^n
/// fits the enumeration cap.
KappaEstimate kappa(const Ensemble& e, const Vector& v, const Vector& w, KappaMode mode = KappaMode::Auto,
                    std::uint64_t samples = 1'000'000, std::uint64_t seed = 0);

/// Gaussian κ for unit v, w with c = ⟨v, w⟩: (2/π)(√(1 − c²) + c·asin c).
double gaussian_kappa(double c);

/// ‖⟨a,v⟩⟨a,w⟩‖²_{L2} written as
/// 1 + 2⟨v,w⟩² − 2Σ vᵢ²wᵢ² + Σ (C4 − 1) vᵢ²wᵢ²  (unit v, w).
double kappa_l2_identity(double c4, const Vector& v, const Vector& w);

/// Pair ((s − t)/‖s − t‖, (s + t)/‖s + t‖); nullopt when s = ±t numerically.
std::optional<std::pair<Vector, Vector>> difference_sum_pair(const Vector& s, const Vector& t);

struct KappaInfimumConfig {
  std::size_t pairs = 200;
  /// Local refinement steps per run after the random starts (0 disables).
  std::size_t refine_steps = 0;
  KappaMode mode = KappaMode::Auto;
  std::uint64_t samples = 200'000;  // Monte-Carlo only
};

struct KappaInfimum {
  double mu = 0.0;
  double min_kappa = 0.0;
  double std_error = 0.0;  // of the minimizing estimate
  bool exact = false;
  std::size_t pairs_evaluated = 0;
  Vector v, w;
  /// (1 − 8μ²)^{1/2}, NaN when μ ≥ 1/(2√2).
  double bound_shape = 0.0;

  Record to_record() const;
};

/// Seeded random search for inf κ over difference/sum pairs of μ-flat s, t.
/// Throws std::invalid_argument if the flat class is empty at this n.
KappaInfimum kappa_infimum_flat(const Ensemble& e, double mu, std::size_t n, const KappaInfimumConfig& cfg,
                                std::uint64_t seed);

/// ‖φ(As) − φ(At)‖₁ / (‖s − t‖₂‖s + t‖₂); nullopt for excluded pairs whose
/// denominator is below 1e-10.
std::optional<double> stability_ratio(const RowMatrix& a, const Vector& s, const Vector& t);

struct StabilityReport {
  double min_ratio = 0.0;
  std::size_t trials = 0;
  std::size_t excluded = 0;
  std::pair<Vector, Vector> worst_pair;
  double mu = 0.0;
  double bound_prediction = 0.0;  // (1 − 8μ²)^{1/2}, NaN outside the regime
  double rho = 0.0;               // √(d/m) + d/m with d = n or k log(en/k); display only

  Record to_record() const;
};

/// Empirical stability constant of φ(A·) on a signal class: the minimum
/// ratio over `trials` sampled pairs. A is drawn from (e, m, n, seed).
StabilityReport stability_constant(const Ensemble& e, const SignalSpec& sampler, std::size_t m, std::size_t trials,
                                   std::uint64_t seed);

/// Same minimum over explicit pairs on a given A. Throws if all pairs are
/// excluded.
StabilityReport stability_constant(const RowMatrix& a, const std::vector<std::pair<Vector, Vector>>& pairs);

/// (1/m)‖A(X)‖₁ / ‖X‖ for X = x x0ᵀ + x0 xᵀ, computed through the
/// per-row product (2/m) Σ |a_iᵀx||a_iᵀx0| and ‖X‖ = |xᵀx0| + ‖x‖‖x0‖.
double injectivity_ratio(const RowMatrix& a, const Vector& x0, const Vector& x);

struct InjectivityReport {
  double margin = 0.0;
  std::size_t trials = 0;
  std::size_t cross_checked = 0;
  double max_cross_check_gap = 0.0;  // relative, product form vs direct apply_A

  Record to_record() const;
};

/// Minimum injectivity ratio over trials with x0 ~ flat(μ) and x uniform on
/// the sphere. Every `cross_check_every`-th trial is recomputed through
/// apply_A and op_norm; a disagreement above 1e-9 throws std::logic_error.
InjectivityReport injectivity_margin(const RowMatrix& a, double mu, std::size_t trials, std::uint64_t seed,
                                     std::size_t cross_check_every = 10);

/// Γ_A(v, w) = (1/m) Σ |⟨a_i, v⟩⟨a_i, w⟩|
double empirical_gamma(const RowMatrix& a, const Vector& v, const Vector& w);

/// max over sampled flat difference/sum pairs of |Γ_A − κ|: an empirical
/// lower bound on the supremum of the corresponding empirical process.
double empirical_process_gap(const RowMatrix& a, const Ensemble& e, double mu, std::size_t pairs,
                             std::uint64_t seed, KappaMode mode = KappaMode::Auto);

}  // namespace phaselift
