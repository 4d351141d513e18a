#pragma once

#include "phaselift/ensemble.hpp"
#include "phaselift/linalg.hpp"

#include <cstddef>
#include <cstdint>

namespace phaselift {

/// m×n matrix with i.i.d. entries from `e`, filled row by row from a single
/// stream seeded by `seed`. Identical arguments give bit-identical output.
RowMatrix sample_matrix(const Ensemble& e, std::size_t m, std::size_t n, std::uint64_t seed);

/// Entrywise square.
Vector phi(const Vector& s);

/// y = φ(Ax) + w.
Vector measure(const RowMatrix& a, const Vector& x, const Vector& w);

/// Sampling operator: output[i] = a_iᵀ X a_i.
Vector apply_A(const RowMatrix& a, const SymMatrix& x);

/// Adjoint: Σ_i λ_i a_i a_iᵀ.
SymMatrix apply_A_adjoint(const RowMatrix& a, const Vector& lambda);

/// Noise vector with ‖w‖₁ / m == level: a seeded gaussian direction
/// rescaled in ℓ1. level == 0 gives the zero vector.
Vector noise_with_level(std::size_t m, double level, std::uint64_t seed);

}  // namespace phaselift
