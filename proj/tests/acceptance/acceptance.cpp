// Acceptance checks. Prints one PASS/FAIL line per criterion; pass criterion
// numbers as arguments to run a subset.

#include "phaselift/analytics.hpp"
#include "phaselift/certificate.hpp"
#include "phaselift/expectation.hpp"
#include "phaselift/experiment.hpp"
#include "phaselift/linalg.hpp"
#include "phaselift/rng.hpp"
#include "phaselift/sampling.hpp"
#include "phaselift/signals.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace phaselift;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string run_config(const std::string& name) {
  const ExperimentSpec spec = load_experiment_spec(std::string(PHASELIFT_CONFIG_DIR) + "/" + name + ".cfg");
  std::ostringstream out;
  run_experiment(spec, out, {threads(), nullptr});
  return out.str();
}

ResultFile parse(const std::string& body) {
  std::istringstream in(body);
  return read_results(in);
}

double success_rate(const ResultFile& rf, double threshold) {
  std::size_t ok = 0;
  for (const Record& t : rf.trials) ok += t.has("rel_frob") && t.get_double("rel_frob") <= threshold;
  return rf.trials.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(rf.trials.size());
}

Vector random_unit_vec(std::size_t n, Rng& rng) {
  Vector g(static_cast<Eigen::Index>(n));
  for (auto& v : g) v = rng.gaussian();
  return g.normalized();
}

Outcome moment_oracles() {
  constexpr double tol = 1e-10;
  double worst = 0.0;
  std::size_t checks = 0;
  for (const Ensemble& e : {Ensemble::rademacher(), Ensemble::erasure_preset()}) {
    for (std::size_t n = 2; n <= 10; ++n) {
      Rng rng(derive_seed(1, {n, static_cast<std::uint64_t>(e.kind())}));
      for (int k = 0; k < 50; ++k) {
        const Vector x0 = random_unit_vec(n, rng);
        Vector v = random_unit_vec(n, rng);
        v = (v - v.dot(x0) * x0).normalized();
        const FourthMoments f = fourth_moment_identities(e, x0, v);
        auto moment = [&](int p, int q) {
          return expect_exact(e, n, [&](const Vector& a) {
                   return std::pow(a.dot(x0), p) * std::pow(a.dot(v), q);
                 }).value;
        };
        const double w4 = moment(4, 0), w22 = moment(2, 2), w31 = moment(3, 1);
        worst = std::max({worst, std::abs(w4 - f.m4x), std::abs(w22 - f.m22), std::abs(w31 - f.m31),
                          std::abs(w22 - kappa_l2_identity(e.c4(), x0, v))});
        checks += 4;
      }
    }
  }
  return {worst <= tol, fmt("%zu comparisons, max |enumerated - closed form| = %.3g (tol %.0e)", checks, worst, tol)};
}

Outcome ambiguity_exactness() {
  bool bitwise = true;
  double tangent_l1 = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed % 15, m = 10 * n;
    const RowMatrix a = sample_matrix(Ensemble::rademacher(), m, n, seed);
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(m));
    Vector e1 = Vector::Zero(static_cast<Eigen::Index>(n)), e2 = e1;
    e1[0] = 1.0;
    e2[1] = 1.0;
    const Vector y1 = measure(a, e1, zero), y2 = measure(a, e2, zero);
    bitwise = bitwise && std::equal(y1.begin(), y1.end(), y2.begin());
    // x x0ᵀ + x0 xᵀ with x0 = (e1+e2)/√2, x = e1−e2 lies in T and is invisible to ±1 rows.
    const Vector x0 = (e1 + e2) / std::sqrt(2.0), x = e1 - e2;
    tangent_l1 = std::max(tangent_l1, l1_norm(apply_A(a, SymMatrix::sym_outer(x, x0))));
  }
  return {bitwise && tangent_l1 == 0.0,
          fmt("measure(A,e1) == measure(A,e2) bitwise: %s; max ||A(x x0'+x0 x')||_1 = %.3g over 20 draws",
              bitwise ? "yes" : "no", tangent_l1)};
}

Outcome kappa_degenerate() {
  Vector v = Vector::Zero(4), w = Vector::Zero(4);
  v[0] = v[1] = w[0] = 1.0 / std::sqrt(2.0);
  w[1] = -w[0];
  const double degenerate = kappa(Ensemble::rademacher(), v, w, KappaMode::Exact).value;
  double worst = 0.0;
  Rng rng(3);
  for (const Ensemble& e : {Ensemble::gaussian(), Ensemble::rademacher(), Ensemble::erasure_preset(),
                            Ensemble::erasure(0.25), Ensemble::discrete({-1.0 / std::sqrt(2.0), std::sqrt(2.0)}, {2.0 / 3.0, 1.0 / 3.0})}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const Vector u = random_unit_vec(n, rng);
      worst = std::max(worst, std::abs(kappa(e, u, u).value - 1.0));
    }
  }
  return {degenerate == 0.0 && worst <= 1e-10,
          fmt("kappa(degenerate pair) = %.17g; max |kappa(v,v) - 1| = %.3g", degenerate, worst)};
}

Outcome gaussian_noiseless() {
  const ResultFile rf = parse(run_config("gaussian_noiseless"));
  std::size_t ok = 0;
  for (const Record& t : rf.trials) ok += t.has("rel_frob") && t.get_double("rel_frob") <= 1e-3;
  return {rf.trials.size() == 20 && ok >= 19, fmt("%zu/%zu trials with relative error <= 1e-3", ok, rf.trials.size())};
}

const std::string& flat_body() {
  static const std::string body = run_config("flat_rademacher");
  return body;
}

Outcome flat_rademacher() {
  const ResultFile rf = parse(flat_body());
  const double rate = success_rate(rf, 1e-3);
  return {rf.trials.size() == 20 && rate >= 0.9, fmt("success rate %.2f over %zu trials", rate, rf.trials.size())};
}

Outcome peaky_contrast() {
  const double erasure = success_rate(parse(run_config("peaky_erasure")), 1e-3);
  const double rademacher = success_rate(parse(run_config("peaky_rademacher")), 1e-3);
  return {erasure >= 0.9 && rademacher <= 0.1,
          fmt("erasure(2/3) success %.2f (need >= 0.9); rademacher success %.2f (need <= 0.1)", erasure, rademacher)};
}

Outcome noise_scaling() {
  const ResultFile rf = parse(run_config("noise_scaling"));
  if (rf.fits.size() != 1) return {false, "expected one fit row"};
  const Record& f = rf.fits.front();
  const double r2 = f.get_double("r2");
  return {r2 >= 0.9, fmt("through-origin fit slope %.4g, R^2 %.4f over %lld noise levels", f.get_double("slope"), r2,
                         static_cast<long long>(f.get_int("points")))};
}

Outcome certificates() {
  constexpr std::size_t n = 64, m = 20 * n, trials = 50;
  bool pass = true;
  std::string detail;
  std::uint64_t idx = 0;
  for (const Ensemble& e : {Ensemble::gaussian(), Ensemble::erasure_preset()}) {
    std::size_t passed = 0;
    double sum = 0.0, sum_sq = 0.0, worst_t = 0.0, worst_perp = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const Vector x0 = generate_signal(SignalSpec::flat(0.3, n), derive_seed(8, {idx, t, 1}));
      const RowMatrix a = sample_matrix(e, m, n, derive_seed(8, {idx, t, 0}));
      const CertificateReport rep = build_certificate(a, e, x0.normalized(), CertificateConfig{}, derive_seed(8, {idx, t, 2}));
      passed += rep.passed;
      sum += rep.x0_y_x0;
      sum_sq += rep.x0_y_x0 * rep.x0_y_x0;
      worst_t = std::max(worst_t, rep.norm_yt);
      worst_perp = std::max(worst_perp, rep.norm_yt_perp_plus_2i);
    }
    const double rate = static_cast<double>(passed) / trials;
    const double mean = sum / trials;
    const double se = std::sqrt(std::max(0.0, sum_sq / trials - mean * mean) / (trials - 1));
    const bool mean_ok = std::abs(mean) <= 3 * se;
    pass = pass && rate >= 0.9 && mean_ok;
    detail += fmt("%s%s: pass rate %.2f, max ||Y_T||_F %.3f, max ||Y_Tperp+2I|| %.3f, mean x0'Yx0 %.3g (3 se %.3g)",
                  idx ? "; " : "", e.descriptor().c_str(), rate, worst_t, worst_perp, mean, 3 * se);
    ++idx;
  }
  return {pass, detail};
}

Outcome kappa_trend() {
  constexpr std::size_t n = 16;
  KappaInfimumConfig cfg;
  cfg.pairs = 200;
  bool pass = true;
  std::string detail;
  std::vector<KappaInfimum> evaluated;
  for (double mu : {0.10, 0.20, 0.30, 0.34}) {
    if (!detail.empty()) detail += "; ";
    try {
      const KappaInfimum r = kappa_infimum_flat(Ensemble::rademacher(), mu, n, cfg, 9);
      pass = pass && r.min_kappa > 0.0;
      detail += fmt("mu=%.2f min kappa %.4f (shape %.4f)", mu, r.min_kappa, r.bound_shape);
      if (!evaluated.empty()) {
        const KappaInfimum& prev = evaluated.back();
        if (r.min_kappa > prev.min_kappa + 3 * (r.std_error + prev.std_error)) {
          pass = false;
          detail += " above the previous mu";
        }
      }
      evaluated.push_back(r);
    } catch (const std::invalid_argument&) {
      pass = false;
      detail += fmt("mu=%.2f infeasible at n=%zu (mu^2 n = %.2f < 1)", mu, n, mu * mu * n);
    }
  }
  return {pass, detail};
}

Outcome determinism() {
  const std::string second = run_config("flat_rademacher");
  const bool same = flat_body() == second;
  return {same, fmt("two runs of flat_rademacher: %s (%zu bytes)", same ? "identical" : "differ", second.size())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
      {1, {"moment oracles", moment_oracles}},
      {2, {"ambiguity exactness", ambiguity_exactness}},
      {3, {"kappa degenerate pair", kappa_degenerate}},
      {4, {"noiseless gaussian recovery", gaussian_noiseless}},
      {5, {"flat rademacher recovery", flat_rademacher}},
      {6, {"peaky erasure vs rademacher", peaky_contrast}},
      {7, {"noise scaling", noise_scaling}},
      {8, {"certificate construction", certificates}},
      {9, {"kappa infimum trend", kappa_trend}},
      {10, {"determinism", determinism}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty())
    for (const auto& [k, _] : criteria) selected.push_back(k);

  int failures = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s %s: %s [%.1fs]\n", k, o.pass ? "PASS" : "FAIL", it->second.first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures ? 1 : 0;
}
