#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace qmesh {

enum class BitOutcome : std::uint8_t { Zero = 0, One = 1 };

// Bell basis: Phi± = (|00> ± |11>)/√2, Psi± = (|01> ± |10>)/√2.
enum class BellOutcome : std::uint8_t { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

/// Single-qubit Pauli up to global phase. ZX means X first, then Z.
enum class PauliOp : std::uint8_t { Identity = 0, X = 1, Z = 2, ZX = 3 };

inline constexpr std::array<BitOutcome, 2> kBitOutcomes{BitOutcome::Zero, BitOutcome::One};
inline constexpr std::array<BellOutcome, 4> kBellOutcomes{
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus, BellOutcome::PsiMinus};

constexpr int bit_value(BitOutcome b) { return static_cast<int>(b); }
constexpr BitOutcome to_bit(int v) { return v ? BitOutcome::One : BitOutcome::Zero; }

constexpr bool is_phi(BellOutcome b) { return b == BellOutcome::PhiPlus || b == BellOutcome::PhiMinus; }
constexpr bool is_minus(BellOutcome b) { return b == BellOutcome::PhiMinus || b == BellOutcome::PsiMinus; }

constexpr bool has_x(PauliOp p) { return p == PauliOp::X || p == PauliOp::ZX; }
constexpr bool has_z(PauliOp p) { return p == PauliOp::Z || p == PauliOp::ZX; }

constexpr PauliOp pauli_from_bits(bool x, bool z) {
  if (x && z) return PauliOp::ZX;
  if (x) return PauliOp::X;
  if (z) return PauliOp::Z;
  return PauliOp::Identity;
}

/// Product of two Paulis modulo global phase.
constexpr PauliOp compose(PauliOp first, PauliOp then) {
  return pauli_from_bits(has_x(first) != has_x(then), has_z(first) != has_z(then));
}

constexpr std::string_view to_string(BitOutcome b) { return b == BitOutcome::Zero ? "0" : "1"; }

constexpr std::string_view to_string(BellOutcome b) {
  switch (b) {
    case BellOutcome::PhiPlus: return "PHI+";
    case BellOutcome::PhiMinus: return "PHI-";
    case BellOutcome::PsiPlus: return "PSI+";
    case BellOutcome::PsiMinus: return "PSI-";
  }
  return "?";
}

constexpr std::string_view to_string(PauliOp p) {
  switch (p) {
    case PauliOp::Identity: return "I";
    case PauliOp::X: return "X";
    case PauliOp::Z: return "Z";
    case PauliOp::ZX: return "ZX";
  }
  return "?";
}

}  // namespace qmesh
