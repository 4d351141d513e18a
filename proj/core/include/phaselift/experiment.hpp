#pragma once

#include "phaselift/ensemble.hpp"
#include "phaselift/record.hpp"
#include "phaselift/signals.hpp"
#include "phaselift/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phaselift {

enum class Program { Noisy, Noiseless };
enum class InstanceMode {
  PerTrial,  // fresh A and x0 for every trial
  Fixed,     // one A and x0 per m/n value, shared by all noise levels and trials
};

/// A sweep over (m/n, noise level) cells. Parsed from flat `key=value`
/// text; see `parse_experiment_spec` for the keys.
struct ExperimentSpec {
  std::string name = "experiment";
  Ensemble ensemble = Ensemble::gaussian();
  SignalSpec signal = SignalSpec::flat(0.3, 16);
  std::size_t n = 16;
  std::vector<double> m_over_n{12.0};
  std::vector<double> noise{0.0};  // ‖w‖₁ / m per cell
  std::size_t trials = 20;
  std::uint64_t master_seed = 1;
  Program program = Program::Noisy;
  InstanceMode instance = InstanceMode::PerTrial;
  double success_threshold = 1e-3;

  int max_iters = 5000;
  std::optional<double> primal_tol;  // default 1e-7·m
  std::optional<double> dual_tol;    // default 1e-7·m
  double penalty = 1.0;
  double balance_ratio = 10.0;

  void validate() const;
  std::size_t m_for(double ratio) const;
  SolverConfig solver_for(std::size_t m) const;

  /// Normalized `key=value` lines in fixed key order.
  std::string canonical() const;
  /// git blob SHA-1 of `canonical()`, hex encoded.
  std::string fingerprint() const;
};

/// Keys: name, ensemble, signal, n, m_over_n (comma list), noise (comma
/// list), trials, master_seed, program (noisy|noiseless), instance
/// (per_trial|fixed), success_threshold, solver.max_iters,
/// solver.primal_tol, solver.dual_tol, solver.penalty, solver.balance_ratio.
/// Blank lines and `#` comments are ignored. Errors name the line.
ExperimentSpec parse_experiment_spec(std::string_view text);
ExperimentSpec load_experiment_spec(const std::string& path);

/// git-style blob hash: SHA-1 over "blob <len>\0" + content.
std::string git_blob_sha1(std::string_view content);

struct RunOptions {
  unsigned threads = 1;
  /// Receives solver diagnostics lines when non-null (single-threaded use).
  std::ostream* progress = nullptr;
};

struct RunSummary {
  std::size_t cells = 0;
  std::size_t trials = 0;
  std::size_t failed_trials = 0;
  std::size_t nonconverged_trials = 0;
};

/// Runs every trial of every cell and streams records to `out` in
/// canonical (cell, trial) order as they complete: a `spec` header, the
/// `trial` rows of each cell followed by its `cell` aggregate, then one
/// `fit` row per m/n value when the noise grid has two or more levels.
/// The body depends only on the spec, never on thread scheduling.
RunSummary run_experiment(const ExperimentSpec& spec, std::ostream& out, const RunOptions& opts = {});

struct ThroughOriginFit {
  double slope = 0.0;
  double r2 = 0.0;  // 1 − SS_res / SS_tot with SS_tot centered at the mean
  std::size_t points = 0;
};

ThroughOriginFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

struct ResultFile {
  Record header;
  std::vector<Record> trials;
  std::vector<Record> cells;
  std::vector<Record> fits;
};

/// Throws FormatError (line number as offset) on malformed input or a
/// version mismatch.
ResultFile read_results(std::istream& in);
ResultFile load_results(const std::string& path);

/// Cell aggregates recomputed from trial rows, in first-appearance order.
std::vector<Record> aggregate_cells(const std::vector<Record>& trials, double success_threshold);

/// Fit rows recomputed from cell aggregates.
std::vector<Record> fit_rows(const std::vector<Record>& cells);

void write_csv(const std::vector<Record>& cells, std::ostream& out);
/// Static SVG line chart: success rate against m/n when the ratio grid has
/// several points, otherwise median Frobenius error against noise level.
void write_svg(const std::vector<Record>& cells, std::ostream& out);

std::string_view to_string(Program p);
std::string_view to_string(InstanceMode m);

inline constexpr std::string_view kResultsMagic = "# phaselift-results v1";

}  // namespace phaselift
