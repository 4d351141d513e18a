#pragma once

// Float comparison constants shared across the library and its tests.
namespace phaselift::tol {

inline constexpr double kTight = 1e-12;      // exact-arithmetic identities
inline constexpr double kStandard = 1e-10;   // factorizations, enumerated expectations
inline constexpr double kAdjoint = 1e-9;     // relative, adjoint pairing
inline constexpr double kPsd = 1e-8;         // solver PSD feasibility, relative to op norm
inline constexpr double kDegeneratePair = 1e-10;

}  // namespace phaselift::tol
