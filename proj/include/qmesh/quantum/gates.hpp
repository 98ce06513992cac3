#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "qmesh/quantum/outcomes.hpp"
#include "qmesh/quantum/state_vector.hpp"

namespace qmesh {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

template <typename Scalar = double>
Matrix2c<Scalar> hadamard_matrix() {
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2c<Scalar> m;
  m << h, h, h, -h;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> pauli_matrix(PauliOp op) {
  Matrix2c<Scalar> x, z;
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  switch (op) {
    case PauliOp::Identity: return Matrix2c<Scalar>::Identity();
    case PauliOp::X: return x;
    case PauliOp::Z: return z;
    case PauliOp::ZX: return z * x;
  }
  return Matrix2c<Scalar>::Identity();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tolerance = tol::kUnitarity) {
  if (u.rows() != u.cols()) return false;
  const auto product = (u.adjoint() * u).eval();
  return (product - decltype(product)::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

/// Applies a 2x2 matrix to one qubit. No unitarity check.
template <typename Scalar>
BasicStateVector<Scalar> apply_single(const BasicStateVector<Scalar>& s, QubitLabel q, const Matrix2c<Scalar>& m) {
  s.require_valid();
  const int bit = s.bit_of(q);
  auto out = s.amplitudes();
  const Eigen::Index stride = Eigen::Index{1} << bit;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (i & stride) continue;
    const auto a0 = out(i);
    const auto a1 = out(i | stride);
    out(i) = m(0, 0) * a0 + m(0, 1) * a1;
    out(i | stride) = m(1, 0) * a0 + m(1, 1) * a1;
  }
  return BasicStateVector<Scalar>(s.labels(), std::move(out), s.label_bound());
}

template <typename Scalar>
BasicStateVector<Scalar> apply_hadamard(const BasicStateVector<Scalar>& s, QubitLabel q) {
  return apply_single(s, q, hadamard_matrix<Scalar>());
}

template <typename Scalar>
BasicStateVector<Scalar> apply_pauli(const BasicStateVector<Scalar>& s, QubitLabel q, PauliOp op) {
  if (op == PauliOp::Identity) {
    s.bit_of(q);
    return s;
  }
  return apply_single(s, q, pauli_matrix<Scalar>(op));
}

/*
 * Applies u to the ordered pair (q1, q2). Rows and columns of u are indexed
 * by the two-bit value 2*b(q1) + b(q2).
 */
template <typename Scalar>
BasicStateVector<Scalar> apply_two_qubit_unitary(const BasicStateVector<Scalar>& s, QubitLabel q1, QubitLabel q2,
                                                 const Matrix4c<Scalar>& u) {
  s.require_valid();
  if (q1 == q2) throw ParameterError("two-qubit unitary needs distinct qubits");
  if (!is_unitary(u)) throw ParameterError("matrix is not unitary within tolerance");
  const Eigen::Index hi = Eigen::Index{1} << s.bit_of(q1);
  const Eigen::Index lo = Eigen::Index{1} << s.bit_of(q2);
  auto out = s.amplitudes();
  Eigen::Matrix<std::complex<Scalar>, 4, 1> v;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (i & (hi | lo)) continue;
    const Eigen::Index idx[4] = {i, i | lo, i | hi, i | hi | lo};
    for (int r = 0; r < 4; ++r) v(r) = out(idx[r]);
    v = u * v;
    for (int r = 0; r < 4; ++r) out(idx[r]) = v(r);
  }
  return BasicStateVector<Scalar>(s.labels(), std::move(out), s.label_bound());
}

}  // namespace qmesh
