#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmesh/core/errors.hpp"
#include "qmesh/core/tolerances.hpp"

namespace qmesh {

using QubitLabel = int;

inline constexpr int kMaxQubits = 16;

/*
 * Pure state of a small qubit register.
 *
 * Qubits are addressed by stable labels. Slot 0 is the most significant bit
 * of the basis index, so tensor(|0>, |1>) has its amplitude at index 0b01.
 * Measuring a qubit removes its slot; the remaining labels keep their
 * meaning. A zero-qubit register holds a single amplitude and represents the
 * scalar left over once every qubit has been measured.
 *
 * A state produced by projecting onto a zero-probability branch is marked
 * invalid and carries no amplitudes.
 */
template <typename Scalar_>
class BasicStateVector {
 public:
  using Scalar = Scalar_;
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  BasicStateVector() : BasicStateVector(scalar()) {}

  BasicStateVector(std::vector<QubitLabel> labels, Amplitudes amplitudes, QubitLabel label_bound)
      : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)), label_bound_(label_bound) {
    if (static_cast<int>(labels_.size()) > kMaxQubits) {
      throw CapacityError("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    if (amplitudes_.size() != (Eigen::Index{1} << labels_.size())) {
      throw ParameterError("amplitude count does not match qubit count");
    }
  }

  static BasicStateVector scalar() {
    Amplitudes a(1);
    a(0) = Complex(1);
    return BasicStateVector({}, std::move(a), 0);
  }

  static BasicStateVector invalid() {
    BasicStateVector s = scalar();
    s.valid_ = false;
    s.amplitudes_ = Amplitudes::Zero(1);
    return s;
  }

  /// Computational basis state over labels 0..n-1.
  static BasicStateVector basis(int num_qubits, std::uint64_t index) {
    if (num_qubits < 0 || num_qubits > kMaxQubits) {
      throw CapacityError("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    std::vector<QubitLabel> labels(num_qubits);
    for (int i = 0; i < num_qubits; ++i) labels[i] = i;
    Amplitudes a = Amplitudes::Zero(Eigen::Index{1} << num_qubits);
    a(static_cast<Eigen::Index>(index)) = Complex(1);
    return BasicStateVector(std::move(labels), std::move(a), num_qubits);
  }

  int num_qubits() const { return static_cast<int>(labels_.size()); }
  bool valid() const { return valid_; }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::uint64_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  const std::vector<QubitLabel>& labels() const { return labels_; }

  /// One past the largest label this register has ever issued.
  QubitLabel label_bound() const { return label_bound_; }

  bool contains(QubitLabel q) const { return std::find(labels_.begin(), labels_.end(), q) != labels_.end(); }

  int slot_of(QubitLabel q) const {
    auto it = std::find(labels_.begin(), labels_.end(), q);
    if (it == labels_.end()) throw IndexError("qubit label " + std::to_string(q) + " not in register");
    return static_cast<int>(it - labels_.begin());
  }

  /// Bit position of a label inside the basis index.
  int bit_of(QubitLabel q) const { return num_qubits() - 1 - slot_of(q); }

  Scalar norm_squared() const { return amplitudes_.squaredNorm(); }

  void require_valid() const {
    if (!valid_) throw ParameterError("operation on an invalid (zero-probability) state");
  }

 private:
  std::vector<QubitLabel> labels_;
  Amplitudes amplitudes_;
  QubitLabel label_bound_ = 0;
  bool valid_ = true;
};

using StateVector = BasicStateVector<double>;
using Complex = std::complex<double>;

/// Single qubit alpha|0> + beta|1>; throws NormalizationError off the unit sphere.
template <typename Scalar>
BasicStateVector<Scalar> new_qubit(std::complex<Scalar> alpha, std::complex<Scalar> beta) {
  using std::isfinite;
  if (!isfinite(alpha.real()) || !isfinite(alpha.imag()) || !isfinite(beta.real()) || !isfinite(beta.imag())) {
    throw NormalizationError("qubit amplitudes must be finite");
  }
  const Scalar norm = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm - Scalar(1)) > Scalar(tol::kInputNorm)) {
    throw NormalizationError("|alpha|^2 + |beta|^2 = " + std::to_string(static_cast<double>(norm)) + ", expected 1");
  }
  typename BasicStateVector<Scalar>::Amplitudes a(2);
  a << alpha, beta;
  return BasicStateVector<Scalar>({0}, std::move(a), 1);
}

inline StateVector new_qubit(Complex alpha, Complex beta) { return new_qubit<double>(alpha, beta); }

/// (|000> + n|111>) / sqrt(1 + n^2), 0 < n <= 1.
template <typename Scalar = double>
BasicStateVector<Scalar> ghz_triple(Scalar n) {
  if (!(n > Scalar(0) && n <= Scalar(1))) {
    throw ParameterError("GHZ entanglement degree must satisfy 0 < n <= 1");
  }
  using Complex = std::complex<Scalar>;
  typename BasicStateVector<Scalar>::Amplitudes a = BasicStateVector<Scalar>::Amplitudes::Zero(8);
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(1) + n * n);
  a(0) = Complex(scale);
  a(7) = Complex(n * scale);
  return BasicStateVector<Scalar>({0, 1, 2}, std::move(a), 3);
}

/// Kronecker product; labels of b are shifted past a.label_bound().
template <typename Scalar>
BasicStateVector<Scalar> tensor(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b) {
  a.require_valid();
  b.require_valid();
  if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
    throw CapacityError("tensor product exceeds " + std::to_string(kMaxQubits) + " qubits");
  }
  std::vector<QubitLabel> labels = a.labels();
  for (QubitLabel q : b.labels()) labels.push_back(q + a.label_bound());

  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  typename BasicStateVector<Scalar>::Amplitudes out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out.segment(i * y.size(), y.size()) = x(i) * y;
  }
  return BasicStateVector<Scalar>(std::move(labels), std::move(out), a.label_bound() + b.label_bound());
}

/// |<a|b>|^2 over slot order; insensitive to global phase.
template <typename Scalar>
Scalar fidelity(const BasicStateVector<Scalar>& a, const BasicStateVector<Scalar>& b) {
  a.require_valid();
  b.require_valid();
  if (a.num_qubits() != b.num_qubits()) throw ParameterError("fidelity of registers with different sizes");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace qmesh
