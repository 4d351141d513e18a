#pragma once

#include "phaselift/ensemble.hpp"
#include "phaselift/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace phaselift {

/// A realized measurement instance: y[i] = (a_iᵀx)² + w[i].
struct SampleSet {
  Ensemble ensemble = Ensemble::gaussian();
  std::uint64_t seed = 0;
  RowMatrix a;
  Vector y;
  Vector w;

  std::size_t m() const { return static_cast<std::size_t>(a.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(a.cols()); }
  /// Throws std::invalid_argument on inconsistent shapes.
  void validate() const;
};

/// What the `generate` command writes: the sample set plus, when known, the
/// signal that produced it.
struct InstanceFile {
  SampleSet samples;
  std::optional<Vector> truth;
};

/// Thrown by the readers; `offset()` is the byte (binary) or line (text)
/// position at which decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

inline constexpr std::uint32_t kSampleSetVersion = 1;

/// Binary layout, all integers and floats little-endian:
///   magic "PLIFTSS\0" (8 bytes) | u32 version | u32 len + ensemble descriptor
///   | u32 len + PRNG name | u64 seed | u64 m | u64 n | f64 A[m*n] row-major
///   | f64 y[m] | f64 w[m] | u8 has_truth | f64 x[n] if has_truth
void write_instance(std::ostream& out, const InstanceFile& inst);
InstanceFile read_instance(std::istream& in);

void save_instance(const std::string& path, const InstanceFile& inst);
InstanceFile load_instance(const std::string& path);

}  // namespace phaselift
