#include "phaselift/experiment.hpp"

#include "phaselift/rng.hpp"
#include "phaselift/sample_set.hpp"
#include "phaselift/sampling.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace phaselift {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_grid(std::string_view s) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_double_exact(trim(s.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') c = '_';
  return s.empty() ? "_" : s;
}

struct Job {
  std::size_t cell, ratio_idx, noise_idx, trial;
};

Record run_trial(const ExperimentSpec& spec, const Job& job, std::ostream* progress) {
  const double ratio = spec.m_over_n[job.ratio_idx];
  const double level = spec.noise[job.noise_idx];
  const std::size_t m = spec.m_for(ratio);
  const std::size_t n = spec.n;

  const std::uint64_t instance_seed = spec.instance == InstanceMode::Fixed
                                          ? derive_seed(spec.master_seed, {job.ratio_idx})
                                          : derive_seed(spec.master_seed, {job.ratio_idx, job.trial});
  const std::uint64_t noise_seed = derive_seed(spec.master_seed, {job.ratio_idx, job.noise_idx, job.trial, 2});

  Record r("trial");
  r.add("cell", static_cast<std::uint64_t>(job.cell))
      .add("m_over_n", ratio)
      .add("m", static_cast<std::uint64_t>(m))
      .add("noise", level)
      .add("index", static_cast<std::uint64_t>(job.trial))
      .add("seed", instance_seed);
  try {
    const Vector x0 = generate_signal(spec.signal, derive_seed(instance_seed, {1}));
    const RowMatrix a = sample_matrix(spec.ensemble, m, n, derive_seed(instance_seed, {0}));
    const Vector w = noise_with_level(m, level, noise_seed);
    const Vector y = measure(a, x0, w);

    const PhaseLiftSolver solver(a);
    const SolverConfig cfg = spec.solver_for(m);
    const LiftedSolution sol = spec.program == Program::Noisy ? solver.solve_noisy(y, cfg, progress)
                                                              : solver.solve_noiseless(y, cfg, progress);
    const Eigen::MatrixXd lift = x0 * x0.transpose();
    r.add("rel_frob", relative_lift_error(sol.x_hat, x0))
        .add("frob_err", (sol.x_hat.dense() - lift).norm())
        .add("l2_err", sign_invariant_error(sol.signal, x0))
        .add("objective", sol.objective)
        .add("iters", static_cast<std::int64_t>(sol.iters))
        .add("converged", sol.converged);
    if (spec.signal.kind == SignalSpec::Kind::Peaky && n > 1) {
      // A different coordinate vector with the same norm.
      Vector partner = Vector::Zero(static_cast<Eigen::Index>(n));
      partner[static_cast<Eigen::Index>((spec.signal.index + 1) % n)] = x0.norm();
      const Vector zero = Vector::Zero(static_cast<Eigen::Index>(m));
      const Vector y0 = measure(a, x0, zero), y1 = measure(a, partner, zero);
      r.add("ambiguous", std::equal(y0.begin(), y0.end(), y1.begin()));
    }
  } catch (const std::exception& e) {
    r.add("error", sanitize(e.what()));
  }
  return r;
}

}  // namespace

std::string_view to_string(Program p) { return p == Program::Noisy ? "noisy" : "noiseless"; }
std::string_view to_string(InstanceMode m) { return m == InstanceMode::Fixed ? "fixed" : "per_trial"; }

void ExperimentSpec::validate() const {
  if (n == 0) throw std::invalid_argument("experiment: n must be >= 1");
  if (m_over_n.empty() || noise.empty()) throw std::invalid_argument("experiment: grids must be non-empty");
  if (trials == 0) throw std::invalid_argument("experiment: trials must be >= 1");
  for (double r : m_over_n)
    if (!(r > 0.0) || m_for(r) == 0) throw std::invalid_argument("experiment: m_over_n entries must give m >= 1");
  for (double l : noise)
    if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("experiment: noise levels must be >= 0");
  if (!(success_threshold > 0.0)) throw std::invalid_argument("experiment: success_threshold must be > 0");
  if (signal.n != n) throw std::invalid_argument("experiment: signal dimension differs from n");
  signal.validate();
  solver_for(m_for(m_over_n.front())).validate();
}

std::size_t ExperimentSpec::m_for(double ratio) const {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
}

SolverConfig ExperimentSpec::solver_for(std::size_t m) const {
  SolverConfig c = SolverConfig::for_measurements(m);
  c.max_iters = max_iters;
  if (primal_tol) c.primal_tol = *primal_tol;
  if (dual_tol) c.dual_tol = *dual_tol;
  c.penalty = penalty;
  c.balance_ratio = balance_ratio;
  return c;
}

std::string ExperimentSpec::canonical() const {
  std::ostringstream os;
  os << "name=" << name << '\n'
     << "ensemble=" << ensemble.descriptor() << '\n'
     << "signal=" << signal.descriptor() << '\n'
     << "n=" << n << '\n'
     << "m_over_n=" << join(m_over_n) << '\n'
     << "noise=" << join(noise) << '\n'
     << "trials=" << trials << '\n'
     << "master_seed=" << master_seed << '\n'
     << "program=" << to_string(program) << '\n'
     << "instance=" << to_string(instance) << '\n'
     << "success_threshold=" << format_double(success_threshold) << '\n'
     << "solver.max_iters=" << max_iters << '\n'
     << "solver.primal_tol=" << (primal_tol ? format_double(*primal_tol) : "auto") << '\n'
     << "solver.dual_tol=" << (dual_tol ? format_double(*dual_tol) : "auto") << '\n'
     << "solver.penalty=" << format_double(penalty) << '\n'
     << "solver.balance_ratio=" << format_double(balance_ratio) << '\n';
  return os.str();
}

std::string git_blob_sha1(std::string_view content) {
  const std::string framed = "blob " + std::to_string(content.size()) + std::string(1, '\0') + std::string(content);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(framed.data(), framed.size(), digest, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

std::string ExperimentSpec::fingerprint() const { return git_blob_sha1(canonical()); }

ExperimentSpec parse_experiment_spec(std::string_view text) {
  ExperimentSpec spec;
  std::string signal_text = "flat:0.3";
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw FormatError("experiment spec: expected key=value on line " + std::to_string(line_no), line_no);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      if (key == "name") spec.name = sanitize(value);
      else if (key == "ensemble") spec.ensemble = Ensemble::parse(value);
      else if (key == "signal") signal_text = value;
      else if (key == "n") spec.n = parse_u64(value);
      else if (key == "m_over_n") spec.m_over_n = parse_grid(value);
      else if (key == "noise") spec.noise = parse_grid(value);
      else if (key == "trials") spec.trials = parse_u64(value);
      else if (key == "master_seed") spec.master_seed = parse_u64(value);
      else if (key == "program") {
        if (value == "noisy") spec.program = Program::Noisy;
        else if (value == "noiseless") spec.program = Program::Noiseless;
        else throw std::invalid_argument("program must be noisy or noiseless");
      } else if (key == "instance") {
        if (value == "per_trial") spec.instance = InstanceMode::PerTrial;
        else if (value == "fixed") spec.instance = InstanceMode::Fixed;
        else throw std::invalid_argument("instance must be per_trial or fixed");
      } else if (key == "success_threshold") spec.success_threshold = parse_double_exact(value);
      else if (key == "solver.max_iters") spec.max_iters = static_cast<int>(parse_u64(value));
      else if (key == "solver.primal_tol") spec.primal_tol = value == "auto" ? std::nullopt : std::optional(parse_double_exact(value));
      else if (key == "solver.dual_tol") spec.dual_tol = value == "auto" ? std::nullopt : std::optional(parse_double_exact(value));
      else if (key == "solver.penalty") spec.penalty = parse_double_exact(value);
      else if (key == "solver.balance_ratio") spec.balance_ratio = parse_double_exact(value);
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError("experiment spec line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  spec.signal = SignalSpec::parse(signal_text, spec.n);
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_spec(ss.str());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ThroughOriginFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("fit_through_origin: need matching, non-empty data");
  double sxx = 0.0, sxy = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    mean += y[i];
  }
  mean /= static_cast<double>(y.size());
  ThroughOriginFit f;
  f.points = x.size();
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_res += (y[i] - f.slope * x[i]) * (y[i] - f.slope * x[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return f;
}

std::vector<Record> aggregate_cells(const std::vector<Record>& trials, double success_threshold) {
  std::vector<std::uint64_t> order;
  std::map<std::uint64_t, std::vector<const Record*>> by_cell;
  for (const Record& t : trials) {
    const std::uint64_t c = t.get_uint("cell");
    if (!by_cell.contains(c)) order.push_back(c);
    by_cell[c].push_back(&t);
  }
  std::vector<Record> cells;
  for (std::uint64_t c : order) {
    const auto& rows = by_cell[c];
    std::vector<double> rel, frob, l2;
    std::size_t success = 0, converged = 0, failed = 0, ambiguous = 0, with_ambiguity = 0;
    for (const Record* t : rows) {
      if (t->has("error")) {
        ++failed;
        continue;
      }
      const double e = t->get_double("rel_frob");
      rel.push_back(e);
      frob.push_back(t->get_double("frob_err"));
      l2.push_back(t->get_double("l2_err"));
      if (e <= success_threshold) ++success;
      if (t->get_bool("converged")) ++converged;
      if (t->has("ambiguous")) {
        ++with_ambiguity;
        if (t->get_bool("ambiguous")) ++ambiguous;
      }
    }
    const double total = static_cast<double>(rows.size());
    Record r("cell");
    r.add("cell", c)
        .add("m_over_n", rows.front()->get("m_over_n"))
        .add("m", rows.front()->get("m"))
        .add("noise", rows.front()->get("noise"))
        .add("trials", static_cast<std::uint64_t>(rows.size()))
        .add("failed", static_cast<std::uint64_t>(failed))
        .add("success_rate", static_cast<double>(success) / total)
        .add("median_rel_frob", median(rel))
        .add("median_frob_err", median(frob))
        .add("median_l2_err", median(l2))
        .add("converged_rate", static_cast<double>(converged) / total);
    if (with_ambiguity > 0) r.add("ill_posed", ambiguous == with_ambiguity);
    cells.push_back(std::move(r));
  }
  return cells;
}

std::vector<Record> fit_rows(const std::vector<Record>& cells) {
  std::vector<std::string> ratios;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> pts;
  for (const Record& c : cells) {
    const std::string& key = c.get("m_over_n");
    if (!pts.contains(key)) ratios.push_back(key);
    pts[key].first.push_back(c.get_double("noise"));
    pts[key].second.push_back(c.get_double("median_frob_err"));
  }
  std::vector<Record> out;
  for (const std::string& key : ratios) {
    const auto& [x, y] = pts[key];
    if (x.size() < 2) continue;
    const ThroughOriginFit f = fit_through_origin(x, y);
    Record r("fit");
    r.add("m_over_n", key).add("slope", f.slope).add("r2", f.r2).add("points", static_cast<std::uint64_t>(f.points));
    out.push_back(std::move(r));
  }
  return out;
}

RunSummary run_experiment(const ExperimentSpec& spec, std::ostream& out, const RunOptions& opts) {
  spec.validate();
  std::vector<Job> jobs;
  std::size_t cell = 0;
  for (std::size_t i = 0; i < spec.m_over_n.size(); ++i)
    for (std::size_t j = 0; j < spec.noise.size(); ++j, ++cell)
      for (std::size_t t = 0; t < spec.trials; ++t) jobs.push_back({cell, i, j, t});

  Record header("spec");
  header.add("name", spec.name)
      .add("fingerprint", spec.fingerprint())
      .add("ensemble", spec.ensemble.descriptor())
      .add("signal", spec.signal.descriptor())
      .add("n", static_cast<std::uint64_t>(spec.n))
      .add("m_over_n", join(spec.m_over_n))
      .add("noise", join(spec.noise))
      .add("trials", static_cast<std::uint64_t>(spec.trials))
      .add("master_seed", spec.master_seed)
      .add("program", std::string(to_string(spec.program)))
      .add("instance", std::string(to_string(spec.instance)))
      .add("prng", std::string(Rng::kName))
      .add("solver", spec.solver_for(spec.m_for(spec.m_over_n.front())).descriptor())
      .add("tol_rule", spec.primal_tol ? "fixed" : "1e-7*m")
      .add("success_threshold", spec.success_threshold);
  out << kResultsMagic << '\n' << header.to_line() << '\n';
  out.flush();

  std::vector<std::optional<Record>> done(jobs.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(jobs.size())));
  std::ostream* progress = threads == 1 ? opts.progress : nullptr;

  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < jobs.size(); k = next.fetch_add(1)) {
      Record r = run_trial(spec, jobs[k], progress);
      {
        std::lock_guard lock(mu);
        done[k] = std::move(r);
      }
      cv.notify_all();
    }
  };

  RunSummary summary;
  summary.cells = cell;
  summary.trials = jobs.size();
  std::vector<Record> cell_rows, pending;
  {
    std::vector<std::jthread> pool;
    if (threads > 1)
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (threads == 1) {
        done[k] = run_trial(spec, jobs[k], progress);
      } else {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done[k].has_value(); });
      }
      const Record& r = *done[k];
      if (r.has("error")) ++summary.failed_trials;
      else if (!r.get_bool("converged")) ++summary.nonconverged_trials;
      out << r.to_line() << '\n';
      pending.push_back(r);
      if (jobs[k].trial + 1 == spec.trials) {
        Record agg = aggregate_cells(pending, spec.success_threshold).front();
        out << agg.to_line() << '\n';
        cell_rows.push_back(std::move(agg));
        pending.clear();
      }
      out.flush();
    }
  }
  for (const Record& f : fit_rows(cell_rows)) out << f.to_line() << '\n';
  out.flush();
  return summary;
}

ResultFile read_results(std::istream& in) {
  ResultFile rf;
  std::string line;
  std::uint64_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != kResultsMagic)
    throw FormatError("results: missing or unsupported version line (expected '" + std::string(kResultsMagic) + "')", 1);
  ++line_no;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    Record r;
    try {
      r = Record::parse(line);
    } catch (const std::exception& e) {
      throw FormatError(std::string("results line ") + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    if (r.kind() == "spec") {
      rf.header = std::move(r);
      have_header = true;
    } else if (r.kind() == "trial") rf.trials.push_back(std::move(r));
    else if (r.kind() == "cell") rf.cells.push_back(std::move(r));
    else if (r.kind() == "fit") rf.fits.push_back(std::move(r));
    else throw FormatError("results line " + std::to_string(line_no) + ": unknown record '" + r.kind() + "'", line_no);
  }
  if (!have_header) throw FormatError("results: no spec header", line_no);
  return rf;
}

ResultFile load_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_results(in);
}

void write_csv(const std::vector<Record>& cells, std::ostream& out) {
  out << "cell,m_over_n,m,noise,trials,failed,success_rate,median_rel_frob,median_frob_err,median_l2_err,converged_rate\n";
  for (const Record& c : cells) {
    out << c.get("cell") << ',' << c.get("m_over_n") << ',' << c.get("m") << ',' << c.get("noise") << ','
        << c.get("trials") << ',' << c.get("failed") << ',' << c.get("success_rate") << ','
        << c.get("median_rel_frob") << ',' << c.get("median_frob_err") << ',' << c.get("median_l2_err") << ','
        << c.get("converged_rate") << '\n';
  }
}

void write_svg(const std::vector<Record>& cells, std::ostream& out) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> ratios, noises;
  for (const Record& c : cells) {
    if (std::find(ratios.begin(), ratios.end(), c.get("m_over_n")) == ratios.end()) ratios.push_back(c.get("m_over_n"));
    if (std::find(noises.begin(), noises.end(), c.get("noise")) == noises.end()) noises.push_back(c.get("noise"));
  }
  const bool by_ratio = ratios.size() >= noises.size();
  std::string x_label = by_ratio ? "m/n" : "noise level |w|_1/m";
  std::string y_label = by_ratio ? "success rate" : "median |X - x0x0^T|_F";
  for (const Record& c : cells) {
    const std::string key = by_ratio ? "noise=" + c.get("noise") : "m/n=" + c.get("m_over_n");
    const double x = c.get_double(by_ratio ? "m_over_n" : "noise");
    const double y = c.get_double(by_ratio ? "success_rate" : "median_frob_err");
    series[key].emplace_back(x, y);
  }
  double xmin = INFINITY, xmax = -INFINITY, ymin = 0.0, ymax = by_ratio ? 1.0 : 0.0;
  for (const auto& [k, pts] : series)
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      if (std::isfinite(y)) ymax = std::max(ymax, y);
    }
  if (!(xmax > xmin)) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 20, B = 50;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (W + L) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"15\" y=\"" << (H - B + T) / 2 << "\" font-size=\"13\" transform=\"rotate(-90 15 " << (H - B + T) / 2
      << ")\" text-anchor=\"middle\">" << y_label << "</text>\n"
      << "<text x=\"" << L - 5 << "\" y=\"" << sy(ymin) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ymin) << "</text>\n"
      << "<text x=\"" << L - 5 << "\" y=\"" << sy(ymax) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ymax) << "</text>\n"
      << "<text x=\"" << sx(xmin) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xmin) << "</text>\n"
      << "<text x=\"" << sx(xmax) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xmax) << "</text>\n";
  std::size_t idx = 0;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = kColors[idx % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) out << sx(x) << ',' << sy(std::isfinite(y) ? y : 0.0) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : pts)
      out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(std::isfinite(y) ? y : 0.0) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << W - R - 5 << "\" y=\"" << T + 15 + 15 * static_cast<double>(idx)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << key << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
}

}  // namespace phaselift
