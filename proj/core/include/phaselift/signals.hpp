#pragma once

#include "phaselift/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phaselift {

struct SignalSpec {
  enum class Kind { Flat, SparseFlat, Peaky, Explicit };

  Kind kind = Kind::Flat;
  std::size_t n = 0;
  double mu = 0.3;
  std::size_t k = 0;      // SparseFlat only
  std::size_t index = 0;  // Peaky only
  std::vector<double> values;  // Explicit only
  double norm = 1.0;

  static SignalSpec flat(double mu, std::size_t n, double norm = 1.0);
  static SignalSpec sparse_flat(double mu, std::size_t k, std::size_t n, double norm = 1.0);
  static SignalSpec peaky(std::size_t index, std::size_t n, double norm = 1.0);
  static SignalSpec explicit_vector(std::vector<double> values);

  /// `flat:<mu>`, `sparse_flat:<mu>:<k>`, `peaky:<index>`, `explicit:<v1>,<v2>,...`.
  /// For explicit vectors `n` must match the value count (or be 0).
  static SignalSpec parse(std::string_view text, std::size_t n);
  std::string descriptor() const;

  /// Throws std::invalid_argument with the reason when infeasible.
  void validate() const;
};

/// ‖x‖_∞ / ‖x‖₂: the smallest μ for which x is μ-flat.
double flatness(const Vector& x);

/// Draws a signal of the requested class. Flat directions come from
/// rejection-sampled gaussian vectors; after 10⁴ rejections the sampler
/// falls back to equal magnitudes with random signs.
Vector generate_signal(const SignalSpec& spec, std::uint64_t seed);

/// Uniformly random unit vector.
Vector random_unit(std::size_t n, std::uint64_t seed);

}  // namespace phaselift
