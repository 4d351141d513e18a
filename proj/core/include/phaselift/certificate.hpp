#pragma once

#include "phaselift/ensemble.hpp"
#include "phaselift/expectation.hpp"
#include "phaselift/linalg.hpp"
#include "phaselift/record.hpp"

#include <cstdint>
#include <string_view>

namespace phaselift {

enum class Beta0Mode { Auto, ExactEnumeration, MonteCarlo, GaussianClosedForm };

Beta0Mode parse_beta0_mode(std::string_view s);
std::string_view to_string(Beta0Mode m);

struct CertificateConfig {
  /// Tail probability for the truncation radius: Pr[|aᵀx| ≥ R_ct] ≤ δ_ct.
  double delta_ct = 1e-4;
  Beta0Mode beta0_mode = Beta0Mode::Auto;
  std::uint64_t beta0_samples = 1'000'000;
  std::uint64_t cutoff_samples = 100'000;
  double eps_t = 0.5;
  double eps_t_perp = 1.0;

  void validate() const;
};

/// Truncation radius R_ct with Pr[|aᵀx| ≥ R_ct] ≤ δ for unit x.
///
/// Gaussian: the exact two-sided normal quantile Φ⁻¹(1 − δ/2), since aᵀx is
/// standard normal for every unit x. Discrete ensembles: calibrated as the
/// empirical (1 − δ)-quantile of |aᵀx| over `samples` independent draws,
/// each pairing a fresh a with a fresh uniformly random unit x; the value
/// returned is the smallest float above which at most ⌊δ·samples⌋ draws lie.
double cutoff_radius(const Ensemble& e, double delta, std::size_t n, std::uint64_t samples, std::uint64_t seed);

/// β0 = E[(aᵀx0)⁴ · 1{|aᵀx0| ≤ R_ct}].
Estimate beta0(const Ensemble& e, const Vector& x0, double r_ct, Beta0Mode mode, std::uint64_t samples = 1'000'000,
               std::uint64_t seed = 0);

/// ∫_{−R}^{R} g⁴ φ(g) dg = 3(2Φ(R) − 1) − 2φ(R)(R³ + 3R)
double gaussian_truncated_fourth_moment(double r);

struct CertificateReport {
  Vector lambda;
  SymMatrix y;
  double norm_yt = 0.0;               // ‖Y_T‖_F
  double norm_yt_perp_plus_2i = 0.0;  // ‖Y_T⊥ + 2 I_T⊥‖
  double linf_lambda = 0.0;
  double lambda_bound = 0.0;  // (R_ct² + β0) / m
  double x0_y_x0 = 0.0;
  double beta0 = 0.0;
  double beta0_std_error = 0.0;
  double r_ct = 0.0;
  double eps_t = 0.0;
  double eps_t_perp = 0.0;
  bool passed = false;

  Record to_record() const;
};

/// Y = Σ λ_i a_i a_iᵀ with λ_i = ((a_iᵀx0)² 1{|a_iᵀx0| ≤ R_ct} − β0) / m.
/// x0 must be a unit vector. `seed` drives the Monte-Carlo calibrations.
CertificateReport build_certificate(const RowMatrix& a, const Ensemble& e, const Vector& x0,
                                    const CertificateConfig& cfg, std::uint64_t seed);

struct FourthMoments {
  double m4x;  // E[(aᵀx0)⁴]
  double m22;  // E[(aᵀx0)²(aᵀv)²]
  double m31;  // E[(aᵀx0)³(aᵀv)]
};

/// Closed forms for unit x0 and unit v ⊥ x0:
///   m4x = (C4 − 3) Σ x0ⱼ⁴ + 3
///   m22 = (C4 − 3) Σ x0ⱼ² vⱼ² + 1
///   m31 = (C4 − 3) Σ x0ⱼ³ vⱼ
FourthMoments fourth_moment_identities(const Ensemble& e, const Vector& x0, const Vector& v);

/// Closed forms valid for arbitrary unit v, w (no orthogonality):
///   E[(aᵀv)²(aᵀw)²] = (C4 − 3) Σ vⱼ² wⱼ² + 1 + 2 (vᵀw)²
///   E[(aᵀv)³(aᵀw)]  = (C4 − 3) Σ vⱼ³ wⱼ + 3 (vᵀw)
double mixed_moment_22(double c4, const Vector& v, const Vector& w);
double mixed_moment_31(double c4, const Vector& v, const Vector& w);

}  // namespace phaselift
