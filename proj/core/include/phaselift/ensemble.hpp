#pragma once

#include "phaselift/rng.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phaselift {

/// Finite support of a discrete entry distribution.
struct Support {
  std::vector<double> values;
  std::vector<double> probs;

  friend bool operator==(const Support&, const Support&) = default;
};

/// Distribution of the i.i.d. entries a_ij of each measurement vector.
/// Every ensemble is centered with unit variance.
class Ensemble {
 public:
  enum class Kind { Gaussian, Rademacher, Erasure, Discrete };

  static Ensemble gaussian();
  static Ensemble rademacher();
  /// Entries ±1/√(1−p) with probability (1−p)/2 each, 0 with probability p.
  static Ensemble erasure(double p);
  /// p = 2/3, the erasure rate whose first four moments match the gaussian's.
  static Ensemble erasure_preset();
  /// Throws std::invalid_argument unless probs sum to 1 and the induced
  /// mean and variance are 0 and 1.
  static Ensemble discrete(std::vector<double> values, std::vector<double> probs);

  /// Accepts the descriptor grammar written by `descriptor()`:
  /// `gaussian`, `rademacher`, `erasure:<p>` (p may be a fraction like 2/3),
  /// `discrete:<v1>,<v2>,...;<p1>,<p2>,...`.
  static Ensemble parse(std::string_view text);
  std::string descriptor() const;

  Kind kind() const { return kind_; }
  double erasure_p() const { return p_; }

  double variance() const { return 1.0; }
  /// E a⁴
  double c4() const { return c4_; }
  /// ψ2 scale under the convention gaussian → 1, bounded → max |value|.
  double psi2_scale() const { return psi2_; }
  bool is_discrete() const { return kind_ != Kind::Gaussian; }
  /// Throws std::logic_error for the gaussian ensemble.
  const Support& support() const;
  /// max |value| over the support; nullopt when unbounded.
  std::optional<double> bound() const;

  double draw(Rng& rng) const;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;

 private:
  Ensemble() = default;
  void finalize();

  Kind kind_ = Kind::Gaussian;
  double p_ = 0.0;
  Support support_;
  std::vector<double> cumulative_;
  double c4_ = 3.0;
  double psi2_ = 1.0;
};

}  // namespace phaselift
