#include "phaselift/certificate.hpp"

#include "phaselift/sampling.hpp"
#include "phaselift/signals.hpp"
#include "phaselift/tolerances.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace phaselift {

namespace {

void require_unit(const Vector& x, const char* what) {
  if (x.size() == 0 || std::abs(x.norm() - 1.0) > tol::kStandard)
    throw std::invalid_argument(std::string(what) + ": expected a unit vector");
}

}  // namespace

Beta0Mode parse_beta0_mode(std::string_view s) {
  if (s == "auto") return Beta0Mode::Auto;
  if (s == "exact" || s == "exact_enumeration") return Beta0Mode::ExactEnumeration;
  if (s == "mc" || s == "monte_carlo") return Beta0Mode::MonteCarlo;
  if (s == "gaussian" || s == "gaussian_closed_form") return Beta0Mode::GaussianClosedForm;
  throw std::invalid_argument("unknown beta0 mode '" + std::string(s) + "'");
}

std::string_view to_string(Beta0Mode m) {
  switch (m) {
    case Beta0Mode::Auto: return "auto";
    case Beta0Mode::ExactEnumeration: return "exact_enumeration";
    case Beta0Mode::MonteCarlo: return "monte_carlo";
    case Beta0Mode::GaussianClosedForm: return "gaussian_closed_form";
  }
  return "?";
}

void CertificateConfig::validate() const {
  if (!(delta_ct > 0.0 && delta_ct < 1.0)) throw std::invalid_argument("certificate: delta_ct must lie in (0, 1)");
  if (!(eps_t > 0.0 && eps_t <= 1.0) || !(eps_t_perp > 0.0 && eps_t_perp <= 1.0))
    throw std::invalid_argument("certificate: eps_T and eps_Tperp must lie in (0, 1]");
  if (beta0_samples < 2 || cutoff_samples < 1) throw std::invalid_argument("certificate: sample counts too small");
}

double cutoff_radius(const Ensemble& e, double delta, std::size_t n, std::uint64_t samples, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("cutoff_radius: delta must lie in (0, 1)");
  if (e.kind() == Ensemble::Kind::Gaussian) {
    const boost::math::normal_distribution<double> normal;
    return boost::math::quantile(boost::math::complement(normal, delta / 2.0));
  }
  if (n == 0 || samples == 0) throw std::invalid_argument("cutoff_radius: n and samples must be >= 1");
  Rng rng(seed);
  std::vector<double> draws(samples);
  Vector x(static_cast<Eigen::Index>(n));
  for (auto& d : draws) {
    for (auto& v : x) v = rng.gaussian();
    x.normalize();
    double dot = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) dot += e.draw(rng) * x[j];
    d = std::abs(dot);
  }
  std::sort(draws.begin(), draws.end());
  const auto allowed = static_cast<std::uint64_t>(std::floor(delta * static_cast<double>(samples)));
  if (allowed >= samples) return 0.0;
  // At most `allowed` draws are >= the next float above this order statistic.
  return std::nextafter(draws[samples - allowed - 1], std::numeric_limits<double>::infinity());
}

double gaussian_truncated_fourth_moment(double r) {
  if (std::isinf(r)) return 3.0;
  if (r <= 0.0) return 0.0;
  const boost::math::normal_distribution<double> normal;
  const double pdf = boost::math::pdf(normal, r);
  const double mass = 1.0 - 2.0 * boost::math::cdf(boost::math::complement(normal, r));
  return 3.0 * mass - 2.0 * pdf * (r * r * r + 3.0 * r);
}

Estimate beta0(const Ensemble& e, const Vector& x0, double r_ct, Beta0Mode mode, std::uint64_t samples,
               std::uint64_t seed) {
  require_unit(x0, "beta0");
  const std::size_t n = static_cast<std::size_t>(x0.size());
  if (mode == Beta0Mode::Auto) {
    if (e.kind() == Ensemble::Kind::Gaussian)
      mode = Beta0Mode::GaussianClosedForm;
    else if (enumeration_states(e, n) <= kMaxEnumerationStates)
      mode = Beta0Mode::ExactEnumeration;
    else
      mode = Beta0Mode::MonteCarlo;
  }
  auto truncated = [&x0, r_ct](const Vector& a) {
    const double s = a.dot(x0);
    if (std::abs(s) > r_ct) return 0.0;
    const double s2 = s * s;
    return s2 * s2;
  };
  switch (mode) {
    case Beta0Mode::GaussianClosedForm:
      if (e.kind() != Ensemble::Kind::Gaussian)
        throw std::invalid_argument("beta0: closed form applies to the gaussian ensemble only");
      return {gaussian_truncated_fourth_moment(r_ct), 0.0, 0, true};
    case Beta0Mode::ExactEnumeration:
      return expect_exact(e, n, truncated);
    case Beta0Mode::MonteCarlo:
      return expect_monte_carlo(e, n, samples, seed, truncated);
    case Beta0Mode::Auto: break;
  }
  throw std::logic_error("beta0: unresolved mode");
}

CertificateReport build_certificate(const RowMatrix& a, const Ensemble& e, const Vector& x0,
                                    const CertificateConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  require_unit(x0, "build_certificate");
  if (a.cols() != x0.size()) throw std::invalid_argument("build_certificate: dimension mismatch");
  const std::size_t n = static_cast<std::size_t>(x0.size());
  const double m = static_cast<double>(a.rows());

  CertificateReport rep;
  rep.eps_t = cfg.eps_t;
  rep.eps_t_perp = cfg.eps_t_perp;
  rep.r_ct = cutoff_radius(e, cfg.delta_ct, n, cfg.cutoff_samples, derive_seed(seed, {0}));
  const Estimate b0 = beta0(e, x0, rep.r_ct, cfg.beta0_mode, cfg.beta0_samples, derive_seed(seed, {1}));
  rep.beta0 = b0.value;
  rep.beta0_std_error = b0.std_error;

  const Vector proj = a * x0;
  rep.lambda.resize(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double s = proj[i];
    const double kept = std::abs(s) <= rep.r_ct ? s * s : 0.0;
    rep.lambda[i] = (kept - rep.beta0) / m;
  }
  rep.y = apply_A_adjoint(a, rep.lambda);
  rep.linf_lambda = linf_norm(rep.lambda);
  rep.lambda_bound = (rep.r_ct * rep.r_ct + rep.beta0) / m;
  rep.x0_y_x0 = x0.dot(rep.y.dense() * x0);

  const TangentSpace t(x0.normalized());
  rep.norm_yt = tangent_frob_norm(rep.y, t);
  // Π0 (Y + 2I) Π0: its extra zero eigenvalue along x0 never raises the
  // max-|eigenvalue|, so op_norm equals the norm of the restriction to T⊥.
  const SymMatrix shifted = rep.y + 2.0 * SymMatrix::identity(n);
  rep.norm_yt_perp_plus_2i = op_norm(project_tangent(shifted, t).in_t_perp);
  rep.passed = rep.norm_yt <= cfg.eps_t && rep.norm_yt_perp_plus_2i <= cfg.eps_t_perp;
  return rep;
}

Record CertificateReport::to_record() const {
  Record r("certificate");
  r.add("n", static_cast<std::uint64_t>(y.dim()))
      .add("m", static_cast<std::uint64_t>(lambda.size()))
      .add("R_ct", r_ct)
      .add("beta0", beta0)
      .add("beta0_std_error", beta0_std_error)
      .add("norm_YT", norm_yt)
      .add("norm_YTperp_plus_2I", norm_yt_perp_plus_2i)
      .add("linf_lambda", linf_lambda)
      .add("linf_lambda_times_m", linf_lambda * static_cast<double>(lambda.size()))
      .add("lambda_bound", lambda_bound)
      .add("x0_Y_x0", x0_y_x0)
      .add("eps_T", eps_t)
      .add("eps_Tperp", eps_t_perp)
      .add("passed", passed);
  return r;
}

FourthMoments fourth_moment_identities(const Ensemble& e, const Vector& x0, const Vector& v) {
  require_unit(x0, "fourth_moment_identities");
  require_unit(v, "fourth_moment_identities");
  if (x0.size() != v.size()) throw std::invalid_argument("fourth_moment_identities: dimension mismatch");
  if (std::abs(x0.dot(v)) > tol::kStandard)
    throw std::invalid_argument("fourth_moment_identities: v must be orthogonal to x0");
  const double excess = e.c4() - 3.0;
  const Eigen::ArrayXd x = x0.array(), w = v.array();
  return {excess * x.pow(4).sum() + 3.0, excess * (x.square() * w.square()).sum() + 1.0,
          excess * (x.cube() * w).sum()};
}

double mixed_moment_22(double c4, const Vector& v, const Vector& w) {
  const double c = v.dot(w);
  return (c4 - 3.0) * (v.array().square() * w.array().square()).sum() + v.squaredNorm() * w.squaredNorm() +
         2.0 * c * c;
}

double mixed_moment_31(double c4, const Vector& v, const Vector& w) {
  return (c4 - 3.0) * (v.array().cube() * w.array()).sum() + 3.0 * v.squaredNorm() * v.dot(w);
}

}  // namespace phaselift
