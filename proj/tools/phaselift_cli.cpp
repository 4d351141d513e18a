#include "phaselift/analytics.hpp"
#include "phaselift/certificate.hpp"
#include "phaselift/experiment.hpp"
#include "phaselift/rng.hpp"
#include "phaselift/sample_set.hpp"
#include "phaselift/sampling.hpp"
#include "phaselift/signals.hpp"
#include "phaselift/solver.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace phaselift;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitIncomplete = 4;

// Relative output paths land in $PHASELIFT_OUTDIR when it is set.
std::string output_path(const std::string& path) {
  const char* dir = std::getenv("PHASELIFT_OUTDIR");
  if (!dir || !*dir || fs::path(path).is_absolute()) return path;
  fs::create_directories(dir);
  return (fs::path(dir) / path).string();
}

unsigned thread_count(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PHASELIFT_THREADS"); env && *env) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
    throw std::invalid_argument("PHASELIFT_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void emit(const Record& r, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << r.to_line() << '\n';
    return;
  }
  const std::string path = output_path(out);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << r.to_line() << '\n';
}

Vector unit_signal(const std::string& text, std::size_t n, std::uint64_t seed) {
  if (text.empty() || text == "random") return random_unit(n, seed);
  Vector x = generate_signal(SignalSpec::parse(text, n), seed);
  return x / x.norm();
}

struct GenerateArgs {
  std::string ensemble = "gaussian", signal = "random", out = "samples.bin";
  std::size_t n = 16, m = 0;
  std::uint64_t seed = 0;
  double noise = 0.0;
};

int cmd_generate(const GenerateArgs& g) {
  const Ensemble e = Ensemble::parse(g.ensemble);
  InstanceFile inst;
  inst.samples.ensemble = e;
  inst.samples.seed = g.seed;
  inst.samples.a = sample_matrix(e, g.m, g.n, derive_seed(g.seed, {0}));
  const Vector x = g.signal == "random" ? random_unit(g.n, derive_seed(g.seed, {1}))
                                        : generate_signal(SignalSpec::parse(g.signal, g.n), derive_seed(g.seed, {1}));
  inst.samples.w = noise_with_level(g.m, g.noise, derive_seed(g.seed, {2}));
  inst.samples.y = measure(inst.samples.a, x, inst.samples.w);
  inst.truth = x;
  const std::string path = output_path(g.out);
  save_instance(path, inst);
  std::cout << "wrote " << path << " ensemble:" << e.descriptor() << " m:" << g.m << " n:" << g.n << '\n';
  return 0;
}

struct SolveArgs {
  std::string input, program = "noisy", out;
  int max_iters = 5000;
  double tol = 0.0, penalty = 1.0;
  bool verbose = false;
};

int cmd_solve(const SolveArgs& s) {
  const InstanceFile inst = load_instance(s.input);
  SolverConfig cfg = SolverConfig::for_measurements(inst.samples.m());
  cfg.max_iters = s.max_iters;
  cfg.penalty = s.penalty;
  cfg.verbose = s.verbose;
  if (s.tol > 0.0) cfg.primal_tol = cfg.dual_tol = s.tol;
  std::ostream* log = s.verbose ? &std::cerr : nullptr;
  LiftedSolution sol;
  if (s.program == "noisy") sol = solve_noisy(inst.samples, cfg, log);
  else if (s.program == "noiseless") sol = solve_noiseless(inst.samples, cfg, log);
  else throw std::invalid_argument("--program must be noisy or noiseless");

  Record r("solution");
  r.add("program", s.program)
      .add("m", static_cast<std::uint64_t>(inst.samples.m()))
      .add("n", static_cast<std::uint64_t>(inst.samples.n()))
      .add("solver", cfg.descriptor())
      .add("objective", sol.objective)
      .add("iters", sol.iters)
      .add("converged", sol.converged)
      .add("primal_residual", sol.primal_residual)
      .add("dual_residual", sol.dual_residual)
      .add("x_hat", sol.signal);
  if (inst.truth) {
    r.add("rel_frob", relative_lift_error(sol.x_hat, *inst.truth))
        .add("l2_err", sign_invariant_error(sol.signal, *inst.truth));
  }
  emit(r, s.out);
  return 0;
}

struct CertifyArgs {
  std::string input, x0, beta0_mode = "auto", out;
  std::uint64_t seed = 0, beta0_samples = 1'000'000;
  double delta = 1e-4;
};

int cmd_certify(const CertifyArgs& c) {
  const InstanceFile inst = load_instance(c.input);
  CertificateConfig cfg;
  cfg.delta_ct = c.delta;
  cfg.beta0_mode = parse_beta0_mode(c.beta0_mode);
  cfg.beta0_samples = c.beta0_samples;
  const std::string x0_spec = c.x0.empty() ? (inst.truth ? "truth" : "flat:0.3") : c.x0;
  if (x0_spec == "truth" && !inst.truth) throw std::invalid_argument("--x0 truth: input stores no signal");
  const Vector x0 = x0_spec == "truth" ? inst.truth->normalized()
                                       : unit_signal(x0_spec, inst.samples.n(), derive_seed(c.seed, {0}));
  const CertificateReport rep = build_certificate(inst.samples.a, inst.samples.ensemble, x0, cfg, derive_seed(c.seed, {1}));
  Record r = rep.to_record();
  r.add("ensemble", inst.samples.ensemble.descriptor()).add("x0", x0_spec).add("delta_ct", c.delta);
  emit(r, c.out);
  return 0;
}

struct KappaArgs {
  std::string ensemble = "rademacher", v, w, mode = "auto", out;
  double mu = 0.0;
  std::size_t n = 16, pairs = 200, refine = 0;
  std::uint64_t samples = 1'000'000, seed = 0;
};

Vector parse_vector(const std::string& text) {
  SignalSpec s = SignalSpec::parse("explicit:" + text, 0);
  Vector v = Eigen::Map<const Vector>(s.values.data(), static_cast<Eigen::Index>(s.values.size()));
  if (v.norm() == 0.0) throw std::invalid_argument("zero vector given to kappa");
  return v / v.norm();
}

int cmd_kappa(const KappaArgs& k) {
  const Ensemble e = Ensemble::parse(k.ensemble);
  const KappaMode mode = parse_kappa_mode(k.mode);
  if (!k.v.empty() || !k.w.empty()) {
    if (k.v.empty() || k.w.empty()) throw std::invalid_argument("kappa: give both --v and --w");
    const Vector v = parse_vector(k.v), w = parse_vector(k.w);
    const KappaEstimate est = kappa(e, v, w, mode, k.samples, k.seed);
    Record r("kappa");
    r.add("ensemble", e.descriptor())
        .add("kappa", est.value)
        .add("std_error", est.std_error)
        .add("exact", est.exact)
        .add("samples", est.samples)
        .add("l2_norm", std::sqrt(kappa_l2_identity(e.c4(), v, w)));
    emit(r, k.out);
    return 0;
  }
  KappaInfimumConfig cfg;
  cfg.pairs = k.pairs;
  cfg.refine_steps = k.refine;
  cfg.mode = mode;
  cfg.samples = k.samples;
  Record r = kappa_infimum_flat(e, k.mu, k.n, cfg, k.seed).to_record();
  r.add("ensemble", e.descriptor());
  emit(r, k.out);
  return 0;
}

struct StabilityArgs {
  std::string ensemble = "rademacher", signal = "flat:0.3", out;
  std::size_t n = 16, m = 160, trials = 1000;
  std::uint64_t seed = 0;
  double injectivity_mu = 0.0;
};

int cmd_stability(const StabilityArgs& s) {
  const Ensemble e = Ensemble::parse(s.ensemble);
  Record r = stability_constant(e, SignalSpec::parse(s.signal, s.n), s.m, s.trials, s.seed).to_record();
  r.add("ensemble", e.descriptor()).add("signal", s.signal).add("m", static_cast<std::uint64_t>(s.m));
  emit(r, s.out);
  if (s.injectivity_mu > 0.0) {
    const RowMatrix a = sample_matrix(e, s.m, s.n, derive_seed(s.seed, {0}));
    Record inj = injectivity_margin(a, s.injectivity_mu, s.trials, derive_seed(s.seed, {3})).to_record();
    inj.add("mu", s.injectivity_mu);
    std::cout << inj.to_line() << '\n';
  }
  return 0;
}

struct SweepArgs {
  std::string spec, out;
  unsigned threads = 0;
  bool verbose = false;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int cmd_sweep(const SweepArgs& s) {
  const ExperimentSpec spec = load_experiment_spec(s.spec);
  const std::string path = output_path(s.out.empty() ? spec.name + ".results" : s.out);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  RunOptions opts;
  opts.threads = thread_count(s.threads);
  opts.progress = s.verbose ? &std::cerr : nullptr;
  const std::string started = utc_now();
  const RunSummary sum = run_experiment(spec, out, opts);
  out.close();
  std::ofstream meta(path + ".meta");
  meta << "started:" << started << " finished:" << utc_now() << " threads:" << opts.threads
       << " fingerprint:" << spec.fingerprint() << '\n';
  std::cout << "wrote " << path << " cells:" << sum.cells << " trials:" << sum.trials
            << " nonconverged:" << sum.nonconverged_trials << " failed:" << sum.failed_trials << '\n';
  return sum.failed_trials == 0 ? 0 : kExitIncomplete;
}

struct ReportArgs {
  std::string input, csv, svg;
  bool check = false;
};

int cmd_report(const ReportArgs& r) {
  const ResultFile rf = load_results(r.input);
  const double threshold = rf.header.get_double("success_threshold");
  const std::vector<Record> cells = aggregate_cells(rf.trials, threshold);
  if (r.check) {
    bool same = cells.size() == rf.cells.size();
    for (std::size_t i = 0; same && i < cells.size(); ++i) same = cells[i].to_line() == rf.cells[i].to_line();
    const std::vector<Record> fits = fit_rows(cells);
    same = same && fits.size() == rf.fits.size();
    for (std::size_t i = 0; same && i < fits.size(); ++i) same = fits[i].to_line() == rf.fits[i].to_line();
    std::cerr << "aggregates " << (same ? "match" : "DIFFER from") << " recomputation from trial rows\n";
    if (!same) return kExitFailure;
  }
  if (r.csv.empty() || r.csv == "-") {
    write_csv(cells, std::cout);
  } else {
    std::ofstream f(output_path(r.csv));
    write_csv(cells, f);
  }
  for (const Record& fit : fit_rows(cells)) std::cerr << fit.to_line() << '\n';
  if (!r.svg.empty()) {
    std::ofstream f(output_path(r.svg));
    if (!f) throw std::runtime_error("cannot write '" + r.svg + "'");
    write_svg(cells, f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PhaseLift phase retrieval toolkit"};
  app.require_subcommand(1);
  int code = 0;

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "Draw a measurement instance and write a SampleSet file");
  gen->add_option("--ensemble", g.ensemble, "gaussian | rademacher | erasure[:p] | discrete:v,..;p,..");
  gen->add_option("--n", g.n, "Signal dimension")->check(CLI::PositiveNumber);
  gen->add_option("--m", g.m, "Number of measurements")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "Seed");
  gen->add_option("--signal", g.signal, "random | flat:mu | sparse_flat:mu:k | peaky:i | explicit:v,..");
  gen->add_option("--noise", g.noise, "Noise level |w|_1/m")->check(CLI::NonNegativeNumber);
  gen->add_option("-o,--out", g.out, "Output file");
  gen->callback([&] { code = cmd_generate(g); });

  SolveArgs s;
  auto* solve = app.add_subcommand("solve", "Run PhaseLift on a SampleSet file");
  solve->add_option("--input", s.input, "SampleSet file")->required();
  solve->add_option("--program", s.program, "noisy | noiseless");
  solve->add_option("--max-iters", s.max_iters)->check(CLI::PositiveNumber);
  solve->add_option("--tol", s.tol, "Primal and dual tolerance (default 1e-7*m)");
  solve->add_option("--penalty", s.penalty)->check(CLI::PositiveNumber);
  solve->add_flag("-v,--verbose", s.verbose, "Stream solver diagnostics to stderr");
  solve->add_option("-o,--out", s.out, "Record output (default stdout)");
  solve->callback([&] { code = cmd_solve(s); });

  CertifyArgs c;
  auto* cert = app.add_subcommand("certify", "Build the dual certificate for x0 on a SampleSet's matrix");
  cert->add_option("--input", c.input, "SampleSet file")->required();
  cert->add_option("--x0", c.x0, "Signal spec for x0, or truth; defaults to the stored signal (normalized to unit norm)");
  cert->add_option("--seed", c.seed);
  cert->add_option("--delta", c.delta, "Truncation tail probability");
  cert->add_option("--beta0-mode", c.beta0_mode, "auto | exact | mc | gaussian");
  cert->add_option("--beta0-samples", c.beta0_samples);
  cert->add_option("-o,--out", c.out);
  cert->callback([&] { code = cmd_certify(c); });

  KappaArgs k;
  auto* kap = app.add_subcommand("kappa", "Evaluate kappa(v, w), or its infimum over flat pairs with --mu");
  kap->add_option("--ensemble", k.ensemble);
  kap->add_option("--v", k.v, "Comma list, normalized");
  kap->add_option("--w", k.w, "Comma list, normalized");
  kap->add_option("--mu", k.mu, "Flatness level for the infimum search");
  kap->add_option("--n", k.n);
  kap->add_option("--pairs", k.pairs);
  kap->add_option("--refine", k.refine, "Local refinement steps");
  kap->add_option("--mode", k.mode, "auto | exact | mc");
  kap->add_option("--samples", k.samples);
  kap->add_option("--seed", k.seed);
  kap->add_option("-o,--out", k.out);
  kap->callback([&] { code = cmd_kappa(k); });

  StabilityArgs st;
  auto* stab = app.add_subcommand("stability", "Empirical stability constant of the measurement map");
  stab->add_option("--ensemble", st.ensemble);
  stab->add_option("--signal", st.signal, "Signal class sampler");
  stab->add_option("--n", st.n);
  stab->add_option("--m", st.m);
  stab->add_option("--trials", st.trials);
  stab->add_option("--seed", st.seed);
  stab->add_option("--injectivity-mu", st.injectivity_mu, "Also report the tangent injectivity margin");
  stab->add_option("-o,--out", st.out);
  stab->callback([&] { code = cmd_stability(st); });

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment spec and write a result file");
  sweep->add_option("--spec", sw.spec, "key=value experiment file")->required();
  sweep->add_option("-o,--out", sw.out, "Result file (default <name>.results)");
  sweep->add_option("--threads", sw.threads, "Worker threads (env PHASELIFT_THREADS)");
  sweep->add_flag("-v,--verbose", sw.verbose);
  sweep->callback([&] { code = cmd_sweep(sw); });

  ReportArgs rp;
  auto* rep = app.add_subcommand("report", "Aggregate a result file into CSV and an optional SVG plot");
  rep->add_option("--input", rp.input, "Result file")->required();
  rep->add_option("--csv", rp.csv, "CSV output (default stdout)");
  rep->add_option("--svg", rp.svg, "SVG plot output");
  rep->add_flag("--check", rp.check, "Verify stored aggregates against the trial rows");
  rep->callback([&] { code = cmd_report(rp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "phaselift: malformed input: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "phaselift: " << e.what() << '\n';
    return kExitFailure;
  }
  return code;
}
