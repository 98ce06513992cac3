#pragma once

namespace qmesh::tol {

inline constexpr double kNorm = 1e-10;
inline constexpr double kUnitarity = 1e-9;
inline constexpr double kInputNorm = 1e-9;
inline constexpr double kFidelity = 1e-9;

// Branches lighter than this are treated as impossible.
inline constexpr double kZeroProbability = 1e-24;

}  // namespace qmesh::tol
