#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace phaselift {

/// Seedable generator pinned for reproducibility. The engine is the standard
/// mt19937_64, whose output sequence is fixed by the C++ standard; all
/// distribution transforms are done here rather than through <random>'s
/// distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_open0();
  /// Standard normal via Box–Muller; pairs are produced cos-first, then sin.
  double gaussian();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// +1 or -1 from one raw draw's top bit.
  double sign();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for a sub-stream identified by a path of indices, e.g.
/// derive_seed(master, {cell, trial}). Independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace phaselift
