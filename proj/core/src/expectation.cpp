#include "phaselift/expectation.hpp"

namespace phaselift {

std::uint64_t enumeration_states(const Ensemble& e, std::size_t n) {
  if (!e.is_discrete()) return kMaxEnumerationStates + 1;
  std::uint64_t k = 0;
  for (double p : e.support().probs)
    if (p > 0.0) ++k;
  std::uint64_t states = 1;
  for (std::size_t i = 0; i < n; ++i) {
    states *= k;
    if (states > kMaxEnumerationStates) return kMaxEnumerationStates + 1;
  }
  return states;
}

void require_enumerable(const Ensemble& e, std::size_t n, const char* what) {
  if (!e.is_discrete())
    throw std::invalid_argument(std::string(what) + ": the " + e.descriptor() +
                                " ensemble has no finite support; use monte_carlo mode");
  if (enumeration_states(e, n) > kMaxEnumerationStates)
    throw std::invalid_argument(std::string(what) + ": support^n exceeds 2^20 states at n=" + std::to_string(n) +
                                "; use monte_carlo mode");
}

}  // namespace phaselift
