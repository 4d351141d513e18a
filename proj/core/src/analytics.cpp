#include "phaselift/analytics.hpp"

#include "phaselift/rng.hpp"
#include "phaselift/sampling.hpp"
#include "phaselift/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace phaselift {

namespace {

void require_unit(const Vector& x, const char* what) {
  if (x.size() == 0 || std::abs(x.norm() - 1.0) > tol::kStandard)
    throw std::invalid_argument(std::string(what) + ": expected a unit vector");
}

double prop1_shape(double mu) {
  const double s = 1.0 - 8.0 * mu * mu;
  return s > 0.0 ? std::sqrt(s) : std::numeric_limits<double>::quiet_NaN();
}

KappaMode resolve(KappaMode mode, const Ensemble& e, std::size_t n) {
  if (mode != KappaMode::Auto) return mode;
  if (e.kind() == Ensemble::Kind::Gaussian) return KappaMode::Exact;
  return enumeration_states(e, n) <= kMaxEnumerationStates ? KappaMode::Exact : KappaMode::MonteCarlo;
}

}  // namespace

KappaMode parse_kappa_mode(std::string_view s) {
  if (s == "auto") return KappaMode::Auto;
  if (s == "exact") return KappaMode::Exact;
  if (s == "mc" || s == "monte_carlo") return KappaMode::MonteCarlo;
  throw std::invalid_argument("unknown kappa mode '" + std::string(s) + "'");
}

KappaEstimate kappa(const Ensemble& e, const Vector& v, const Vector& w, KappaMode mode, std::uint64_t samples,
                    std::uint64_t seed) {
  require_unit(v, "kappa");
  require_unit(w, "kappa");
  if (v.size() != w.size()) throw std::invalid_argument("kappa: dimension mismatch");
  const std::size_t n = static_cast<std::size_t>(v.size());
  auto integrand = [&v, &w](const Vector& a) { return std::abs(a.dot(v) * a.dot(w)); };
  if (resolve(mode, e, n) == KappaMode::Exact) {
    if (e.kind() == Ensemble::Kind::Gaussian) return {gaussian_kappa(v.dot(w)), 0.0, 0, true};
    return expect_exact(e, n, integrand);
  }
  return expect_monte_carlo(e, n, samples, seed, integrand);
}

double gaussian_kappa(double c) {
  c = std::clamp(c, -1.0, 1.0);
  return 2.0 / std::numbers::pi * (std::sqrt(1.0 - c * c) + c * std::asin(c));
}

double kappa_l2_identity(double c4, const Vector& v, const Vector& w) {
  const double c = v.dot(w);
  const double cross = (v.array().square() * w.array().square()).sum();
  return 1.0 + 2.0 * c * c - 2.0 * cross + (c4 - 1.0) * cross;
}

std::optional<std::pair<Vector, Vector>> difference_sum_pair(const Vector& s, const Vector& t) {
  const Vector d = s - t, p = s + t;
  const double nd = d.norm(), np = p.norm();
  if (nd < tol::kDegeneratePair || np < tol::kDegeneratePair) return std::nullopt;
  return std::make_pair(Vector(d / nd), Vector(p / np));
}

Record KappaInfimum::to_record() const {
  Record r("kappa_infimum");
  r.add("mu", mu)
      .add("min_kappa", min_kappa)
      .add("std_error", std_error)
      .add("exact", exact)
      .add("pairs", static_cast<std::uint64_t>(pairs_evaluated))
      .add("bound_shape", bound_shape)
      .add("v", v)
      .add("w", w);
  return r;
}

KappaInfimum kappa_infimum_flat(const Ensemble& e, double mu, std::size_t n, const KappaInfimumConfig& cfg,
                                std::uint64_t seed) {
  const SignalSpec spec = SignalSpec::flat(mu, n);
  spec.validate();
  if (cfg.pairs == 0) throw std::invalid_argument("kappa_infimum_flat: pairs must be >= 1");
  const KappaMode mode = resolve(cfg.mode, e, n);
  // One Monte-Carlo stream for every evaluation so comparisons share noise.
  const std::uint64_t mc_seed = derive_seed(seed, {0xC0FFEE});
  auto eval = [&](const Vector& v, const Vector& w) { return kappa(e, v, w, mode, cfg.samples, mc_seed); };

  KappaInfimum out;
  out.mu = mu;
  out.bound_shape = prop1_shape(mu);
  out.min_kappa = std::numeric_limits<double>::infinity();
  Vector best_s, best_t;
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    const Vector s = generate_signal(spec, derive_seed(seed, {1, p, 0}));
    const Vector t = generate_signal(spec, derive_seed(seed, {1, p, 1}));
    const auto pair = difference_sum_pair(s, t);
    if (!pair) continue;
    const Estimate k = eval(pair->first, pair->second);
    ++out.pairs_evaluated;
    if (k.value < out.min_kappa) {
      out.min_kappa = k.value;
      out.std_error = k.std_error;
      out.exact = k.exact;
      out.v = pair->first;
      out.w = pair->second;
      best_s = s;
      best_t = t;
    }
  }
  if (out.pairs_evaluated == 0) throw std::invalid_argument("kappa_infimum_flat: every sampled pair was degenerate");

  // Local refinement: perturb the best (s, t) inside the flat class.
  Rng rng(derive_seed(seed, {2}));
  double step = 0.3;
  const auto dim = static_cast<Eigen::Index>(n);
  for (std::size_t it = 0; it < cfg.refine_steps; ++it) {
    Vector s = best_s, t = best_t;
    for (Eigen::Index j = 0; j < dim; ++j) {
      s[j] += step * rng.gaussian() / std::sqrt(static_cast<double>(n));
      t[j] += step * rng.gaussian() / std::sqrt(static_cast<double>(n));
    }
    s.normalize();
    t.normalize();
    bool improved = false;
    if (flatness(s) <= mu && flatness(t) <= mu) {
      if (const auto pair = difference_sum_pair(s, t)) {
        const Estimate k = eval(pair->first, pair->second);
        ++out.pairs_evaluated;
        if (k.value < out.min_kappa) {
          out.min_kappa = k.value;
          out.std_error = k.std_error;
          out.v = pair->first;
          out.w = pair->second;
          best_s = s;
          best_t = t;
          improved = true;
        }
      }
    }
    step = improved ? std::min(step * 1.5, 1.0) : std::max(step * 0.9, 1e-3);
  }
  return out;
}

std::optional<double> stability_ratio(const RowMatrix& a, const Vector& s, const Vector& t) {
  if (s.size() != a.cols() || t.size() != a.cols()) throw std::invalid_argument("stability_ratio: dimension mismatch");
  const double denom = (s - t).norm() * (s + t).norm();
  if (denom < tol::kDegeneratePair) return std::nullopt;
  const Vector as = a * s, at = a * t;
  return (phi(as) - phi(at)).lpNorm<1>() / denom;
}

Record StabilityReport::to_record() const {
  Record r("stability");
  r.add("min_ratio", min_ratio)
      .add("trials", static_cast<std::uint64_t>(trials))
      .add("excluded", static_cast<std::uint64_t>(excluded))
      .add("mu", mu)
      .add("bound_prediction", bound_prediction)
      .add("rho", rho)
      .add("worst_s", worst_pair.first)
      .add("worst_t", worst_pair.second);
  return r;
}

StabilityReport stability_constant(const RowMatrix& a, const std::vector<std::pair<Vector, Vector>>& pairs) {
  StabilityReport rep;
  rep.trials = pairs.size();
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.mu = std::numeric_limits<double>::quiet_NaN();
  rep.bound_prediction = std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(a.cols()), m = static_cast<double>(a.rows());
  rep.rho = std::sqrt(n / m) + n / m;
  for (const auto& [s, t] : pairs) {
    const auto ratio = stability_ratio(a, s, t);
    if (!ratio) {
      ++rep.excluded;
      continue;
    }
    if (*ratio < rep.min_ratio) {
      rep.min_ratio = *ratio;
      rep.worst_pair = {s, t};
    }
  }
  if (rep.excluded == rep.trials) throw std::invalid_argument("stability_constant: every sampled pair was degenerate");
  return rep;
}

StabilityReport stability_constant(const Ensemble& e, const SignalSpec& sampler, std::size_t m, std::size_t trials,
                                   std::uint64_t seed) {
  sampler.validate();
  if (m == 0 || trials == 0) throw std::invalid_argument("stability_constant: m and trials must be >= 1");
  const RowMatrix a = sample_matrix(e, m, sampler.n, derive_seed(seed, {0}));
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i)
    pairs.emplace_back(generate_signal(sampler, derive_seed(seed, {1, i, 0})),
                       generate_signal(sampler, derive_seed(seed, {1, i, 1})));
  StabilityReport rep = stability_constant(a, pairs);
  const bool flat_class =
      sampler.kind == SignalSpec::Kind::Flat || sampler.kind == SignalSpec::Kind::SparseFlat;
  if (flat_class) {
    rep.mu = sampler.mu;
    rep.bound_prediction = prop1_shape(sampler.mu);
  }
  if (sampler.kind == SignalSpec::Kind::SparseFlat) {
    const double k = static_cast<double>(sampler.k), n = static_cast<double>(sampler.n);
    const double d = k * std::log(std::numbers::e * n / k);
    rep.rho = std::sqrt(d / static_cast<double>(m)) + d / static_cast<double>(m);
  }
  return rep;
}

double injectivity_ratio(const RowMatrix& a, const Vector& x0, const Vector& x) {
  if (x0.size() != a.cols() || x.size() != a.cols()) throw std::invalid_argument("injectivity_ratio: dimension mismatch");
  const Vector p = a * x, q = a * x0;
  const double l1 = 2.0 * p.cwiseProduct(q).lpNorm<1>() / static_cast<double>(a.rows());
  const double op = std::abs(x.dot(x0)) + x.norm() * x0.norm();
  if (op == 0.0) throw std::invalid_argument("injectivity_ratio: X = 0");
  return l1 / op;
}

Record InjectivityReport::to_record() const {
  Record r("injectivity");
  r.add("margin", margin)
      .add("trials", static_cast<std::uint64_t>(trials))
      .add("cross_checked", static_cast<std::uint64_t>(cross_checked))
      .add("max_cross_check_gap", max_cross_check_gap);
  return r;
}

InjectivityReport injectivity_margin(const RowMatrix& a, double mu, std::size_t trials, std::uint64_t seed,
                                     std::size_t cross_check_every) {
  if (trials == 0) throw std::invalid_argument("injectivity_margin: trials must be >= 1");
  const std::size_t n = static_cast<std::size_t>(a.cols());
  const SignalSpec spec = SignalSpec::flat(mu, n);
  InjectivityReport rep;
  rep.trials = trials;
  rep.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    const Vector x0 = generate_signal(spec, derive_seed(seed, {i, 0}));
    const Vector x = random_unit(n, derive_seed(seed, {i, 1}));
    const double ratio = injectivity_ratio(a, x0, x);
    rep.margin = std::min(rep.margin, ratio);
    if (cross_check_every != 0 && i % cross_check_every == 0) {
      const SymMatrix lifted = SymMatrix::sym_outer(x, x0);
      const double direct = apply_A(a, lifted).lpNorm<1>() / static_cast<double>(a.rows()) / op_norm(lifted);
      const double gap = std::abs(direct - ratio) / std::max(1.0, std::abs(ratio));
      rep.max_cross_check_gap = std::max(rep.max_cross_check_gap, gap);
      ++rep.cross_checked;
      if (gap > tol::kAdjoint) throw std::logic_error("injectivity_margin: product form disagrees with apply_A");
    }
  }
  return rep;
}

double empirical_gamma(const RowMatrix& a, const Vector& v, const Vector& w) {
  if (v.size() != a.cols() || w.size() != a.cols()) throw std::invalid_argument("empirical_gamma: dimension mismatch");
  const Vector p = a * v, q = a * w;
  return p.cwiseProduct(q).lpNorm<1>() / static_cast<double>(a.rows());
}

double empirical_process_gap(const RowMatrix& a, const Ensemble& e, double mu, std::size_t pairs,
                             std::uint64_t seed, KappaMode mode) {
  const std::size_t n = static_cast<std::size_t>(a.cols());
  const SignalSpec spec = SignalSpec::flat(mu, n);
  double gap = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto pair = difference_sum_pair(generate_signal(spec, derive_seed(seed, {p, 0})),
                                          generate_signal(spec, derive_seed(seed, {p, 1})));
    if (!pair) continue;
    const double k = kappa(e, pair->first, pair->second, mode, 200'000, derive_seed(seed, {p, 2})).value;
    gap = std::max(gap, std::abs(empirical_gamma(a, pair->first, pair->second) - k));
  }
  return gap;
}

}  // namespace phaselift
