#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

#include "qmesh/core/random.hpp"
#include "qmesh/quantum/quantum.hpp"

namespace qmesh {

/// Degree n of the partially entangled GHZ resource; 0 < n <= 1.
class EntanglementDegree {
 public:
  explicit EntanglementDegree(double n);
  double value() const { return n_; }

 private:
  double n_;
};

/*
 * End-to-end channel m|0..0> + k|1..1> (unnormalized) between the node
 * holding the current upstream tail and the destination's two particles.
 */
struct ChannelCoeffs {
  double m = 1;
  double k = 1;
  bool operator==(const ChannelCoeffs&) const = default;
};

struct HopMeasurement {
  BellOutcome bell = BellOutcome::PhiPlus;
  BitOutcome had = BitOutcome::Zero;
  bool operator==(const HopMeasurement&) const = default;
};

/// Swap pairs in QRF order (destination side first), then (source Bell, destination Hadamard).
using MeasurementLog = std::vector<HopMeasurement>;

/// Correction lookup indexed by 2 * bell + had.
using PauliTable = std::array<PauliOp, 8>;

const PauliTable& correction_table();

ChannelCoeffs initial_coeffs(EntanglementDegree n);

/// Coefficients after a swap node reports `bell`, in the frame where the
/// destination applies the composed correction.
ChannelCoeffs swap_update(ChannelCoeffs c, BellOutcome bell, EntanglementDegree n);

/// Amplitude pair (M, K) left on the destination qubit as M*alpha|0> + K*beta|1>
/// after the source's Bell result and the Pauli correction.
ChannelCoeffs teleport_coeffs(ChannelCoeffs c, BellOutcome source_bell);

/// Replays swap_update over every swap pair of a complete log (all but the last).
ChannelCoeffs replay_swaps(const MeasurementLog& log, EntanglementDegree n);

PauliOp pauli_for(HopMeasurement h, const PauliTable& table = correction_table());

PauliOp compose_corrections(const MeasurementLog& log, const PauliTable& table = correction_table());

struct AmplitudeCorrection {
  Eigen::Matrix4cd unitary;  // acts on (target, auxiliary)
  BitOutcome success_outcome = BitOutcome::Zero;
  double ratio = 1;  // min(m, k) / max(m, k)
};

/// Probabilistic auxiliary-qubit unitary that undoes the m/k amplitude skew.
AmplitudeCorrection correction_unitary(ChannelCoeffs c);

/// Success probability of correction_unitary on M*alpha|0> + K*beta|1> with |alpha|^2 = p0.
double correction_success_probability(ChannelCoeffs c, double p0);

/// Closed-form end-to-end success probability over `hops` GHZ triples.
double analytic_success(int hops, EntanglementDegree n);

inline constexpr int kMaxOracleHops = 6;

struct ChainOracleReport {
  double success_probability = 0;
  double branch_probability_sum = 0;
  double min_fidelity = 1;  // over branches whose correction can succeed
  std::size_t leaves = 0;
};

/// Exhaustive branch enumeration of the full swap/teleport/correct procedure.
ChainOracleReport enumerate_chain(int hops, EntanglementDegree n, const StateVector& input,
                                  const PauliTable& table = correction_table());

double exact_chain_success(int hops, EntanglementDegree n, Complex alpha, Complex beta);

struct ChainResult {
  bool success = false;
  std::optional<StateVector> output;
  MeasurementLog log;
  ChannelCoeffs coeffs;  // after all swaps, before the source's Bell measurement
  double attempt_prob = 0;
};

ChainResult simulate_chain(const StateVector& input, int hops, EntanglementDegree n, Rng& rng);

struct TrackedChain {
  MeasurementLog log;
  ChannelCoeffs coeffs;  // after all swaps, before the source's Bell measurement
};

/// Samples the same outcome distribution as simulate_chain without a state vector.
/// input_p0 = |alpha|^2 of the teleported qubit (only the source's Bell class depends on it).
TrackedChain track_chain(int hops, EntanglementDegree n, Rng& rng, double input_p0 = 0.5);

}  // namespace qmesh
