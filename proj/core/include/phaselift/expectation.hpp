#pragma once

#include "phaselift/ensemble.hpp"
#include "phaselift/linalg.hpp"
#include "phaselift/rng.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phaselift {

/// Exact enumeration is refused beyond this many support^n outcomes.
inline constexpr std::uint64_t kMaxEnumerationStates = 1ULL << 20;

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  bool exact = false;
};

/// Number of outcomes with positive probability, saturating at cap + 1.
std::uint64_t enumeration_states(const Ensemble& e, std::size_t n);

/// Throws std::invalid_argument (suggesting Monte Carlo) when the ensemble
/// is continuous or the state count exceeds kMaxEnumerationStates.
void require_enumerable(const Ensemble& e, std::size_t n, const char* what);

/// E f(a) over every outcome a ∈ support^n, weighted by its probability.
template <typename F>
Estimate expect_exact(const Ensemble& e, std::size_t n, F&& f) {
  require_enumerable(e, n, "exact expectation");
  std::vector<double> vals, probs;
  const Support& s = e.support();
  for (std::size_t i = 0; i < s.values.size(); ++i)
    if (s.probs[i] > 0.0) {
      vals.push_back(s.values[i]);
      probs.push_back(s.probs[i]);
    }
  const std::size_t k = vals.size();
  std::vector<std::size_t> digit(n, 0);
  Vector a(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) a[static_cast<Eigen::Index>(j)] = vals[0];
  // prefix[j] = Π_{i>=j} probs[digit[i]]
  std::vector<double> prefix(n + 1, 1.0);
  for (std::size_t j = n; j-- > 0;) prefix[j] = probs[0] * prefix[j + 1];

  // Neumaier-compensated accumulation.
  double sum = 0.0, comp = 0.0;
  std::uint64_t count = 0;
  while (true) {
    const double term = prefix[0] * f(static_cast<const Vector&>(a));
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    ++count;
    std::size_t j = 0;
    while (j < n && digit[j] + 1 == k) {
      digit[j] = 0;
      a[static_cast<Eigen::Index>(j)] = vals[0];
      ++j;
    }
    if (j == n) break;
    ++digit[j];
    a[static_cast<Eigen::Index>(j)] = vals[digit[j]];
    for (std::size_t i = j + 1; i-- > 0;) prefix[i] = probs[digit[i]] * prefix[i + 1];
  }
  return {sum + comp, 0.0, count, true};
}

/// Seeded Monte-Carlo mean of f(a) with its standard error.
template <typename F>
Estimate expect_monte_carlo(const Ensemble& e, std::size_t n, std::uint64_t samples, std::uint64_t seed, F&& f) {
  if (samples < 2) throw std::invalid_argument("Monte-Carlo expectation needs at least 2 samples");
  Rng rng(seed);
  Vector a(static_cast<Eigen::Index>(n));
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (auto& v : a) v = e.draw(rng);
    const double x = f(static_cast<const Vector&>(a));
    const double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples, false};
}

}  // namespace phaselift
