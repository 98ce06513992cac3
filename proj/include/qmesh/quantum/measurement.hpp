#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qmesh/core/random.hpp"
#include "qmesh/quantum/outcomes.hpp"
#include "qmesh/quantum/state_vector.hpp"

namespace qmesh {

template <typename Scalar>
struct BasicProjection {
  Scalar probability;
  BasicStateVector<Scalar> state;  // measured qubits removed, renormalized
};

template <typename Outcome, typename Scalar>
struct BasicSample {
  Outcome outcome;
  Scalar probability;
  BasicStateVector<Scalar> state;
};

using Projection = BasicProjection<double>;

namespace detail {

// Drops the given bit positions from idx (positions sorted descending).
inline std::uint64_t squeeze_bits(std::uint64_t idx, const std::vector<int>& bits_desc) {
  for (int b : bits_desc) {
    const std::uint64_t low = idx & ((std::uint64_t{1} << b) - 1);
    idx = ((idx >> (b + 1)) << b) | low;
  }
  return idx;
}

template <typename Scalar>
BasicProjection<Scalar> finish_projection(std::vector<QubitLabel> labels,
                                          typename BasicStateVector<Scalar>::Amplitudes amps, QubitLabel bound) {
  const Scalar p = amps.squaredNorm();
  if (p <= Scalar(tol::kZeroProbability)) return {Scalar(0), BasicStateVector<Scalar>::invalid()};
  amps /= std::sqrt(p);
  return {p, BasicStateVector<Scalar>(std::move(labels), std::move(amps), bound)};
}

template <typename Scalar>
std::vector<QubitLabel> labels_without(const BasicStateVector<Scalar>& s, std::initializer_list<QubitLabel> drop) {
  std::vector<QubitLabel> out;
  for (QubitLabel q : s.labels()) {
    bool keep = true;
    for (QubitLabel d : drop) keep = keep && q != d;
    if (keep) out.push_back(q);
  }
  return out;
}

template <typename Scalar>
std::array<std::complex<Scalar>, 4> bell_vector(BellOutcome b) {
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  switch (b) {
    case BellOutcome::PhiPlus: return {h, 0, 0, h};
    case BellOutcome::PhiMinus: return {h, 0, 0, -h};
    case BellOutcome::PsiPlus: return {0, h, h, 0};
    case BellOutcome::PsiMinus: return {0, h, -h, 0};
  }
  return {};
}

}  // namespace detail

/// Projects q onto |outcome>; q leaves the register.
template <typename Scalar>
BasicProjection<Scalar> project_computational(const BasicStateVector<Scalar>& s, QubitLabel q, BitOutcome outcome) {
  s.require_valid();
  const int bit = s.bit_of(q);
  const std::uint64_t mask = std::uint64_t{1} << bit;
  const std::uint64_t want = bit_value(outcome) ? mask : 0;
  typename BasicStateVector<Scalar>::Amplitudes out(s.amplitudes().size() / 2);
  const std::vector<int> drop{bit};
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(s.amplitudes().size()); ++i) {
    if ((i & mask) == want) out(static_cast<Eigen::Index>(detail::squeeze_bits(i, drop))) = s.amplitude(i);
  }
  return detail::finish_projection<Scalar>(detail::labels_without(s, {q}), std::move(out), s.label_bound());
}

/// Projects (q1, q2) onto a Bell vector; both qubits leave the register.
template <typename Scalar>
BasicProjection<Scalar> project_bell(const BasicStateVector<Scalar>& s, QubitLabel q1, QubitLabel q2,
                                     BellOutcome outcome) {
  s.require_valid();
  if (q1 == q2) throw ParameterError("Bell measurement needs distinct qubits");
  const int b1 = s.bit_of(q1);
  const int b2 = s.bit_of(q2);
  const std::uint64_t m1 = std::uint64_t{1} << b1;
  const std::uint64_t m2 = std::uint64_t{1} << b2;
  const auto bell = detail::bell_vector<Scalar>(outcome);
  const std::vector<int> drop = b1 > b2 ? std::vector<int>{b1, b2} : std::vector<int>{b2, b1};

  typename BasicStateVector<Scalar>::Amplitudes out =
      BasicStateVector<Scalar>::Amplitudes::Zero(s.amplitudes().size() / 4);
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(s.amplitudes().size()); ++i) {
    const int pair = ((i & m1) ? 2 : 0) + ((i & m2) ? 1 : 0);
    const auto c = bell[pair];
    if (c == std::complex<Scalar>(0)) continue;
    out(static_cast<Eigen::Index>(detail::squeeze_bits(i, drop))) += std::conj(c) * s.amplitude(i);
  }
  return detail::finish_projection<Scalar>(detail::labels_without(s, {q1, q2}), std::move(out), s.label_bound());
}

namespace detail {

template <typename Outcome, typename Scalar, std::size_t N, typename Project>
BasicSample<Outcome, Scalar> sample_from(const std::array<Outcome, N>& outcomes, Rng& rng, Project&& project) {
  const double u = uniform01(rng);
  double acc = 0;
  // Last nonzero branch absorbs rounding so a draw near 1 cannot fall off the end.
  std::size_t fallback = N;
  for (std::size_t i = 0; i < N; ++i) {
    auto branch = project(outcomes[i]);
    if (branch.probability <= Scalar(0)) continue;
    fallback = i;
    acc += static_cast<double>(branch.probability);
    if (u < acc) return {outcomes[i], branch.probability, std::move(branch.state)};
  }
  if (fallback == N) throw ParameterError("no measurement branch has nonzero probability");
  auto branch = project(outcomes[fallback]);
  return {outcomes[fallback], branch.probability, std::move(branch.state)};
}

}  // namespace detail

template <typename Scalar>
BasicSample<BitOutcome, Scalar> sample_computational(const BasicStateVector<Scalar>& s, QubitLabel q, Rng& rng) {
  return detail::sample_from<BitOutcome, Scalar>(kBitOutcomes, rng,
                                                 [&](BitOutcome o) { return project_computational(s, q, o); });
}

template <typename Scalar>
BasicSample<BellOutcome, Scalar> sample_bell(const BasicStateVector<Scalar>& s, QubitLabel q1, QubitLabel q2,
                                             Rng& rng) {
  return detail::sample_from<BellOutcome, Scalar>(kBellOutcomes, rng,
                                                  [&](BellOutcome o) { return project_bell(s, q1, q2, o); });
}

}  // namespace qmesh
