#pragma once

#include <memory>
#include <optional>

#include "qmesh/chain/ghz_chain.hpp"

namespace qmesh {

struct Recovery {
  bool success = false;
  std::optional<StateVector> output;  // exact model only
  double attempt_prob = 0;
};

/*
 * Quantum side of one route. Calls must follow the protocol order: swap()
 * once per swap node from the destination side outward, then
 * measure_source(), measure_destination(), recover().
 */
class ChannelModel {
 public:
  virtual ~ChannelModel() = default;

  virtual HopMeasurement swap(Rng& rng) = 0;
  virtual BellOutcome measure_source(Rng& rng) = 0;
  virtual BitOutcome measure_destination(Rng& rng) = 0;
  virtual Recovery recover(const MeasurementLog& log, Rng& rng) = 0;

  virtual ChannelCoeffs coeffs() const = 0;
};

/// Full state-vector model; the input qubit is teleported for real.
std::unique_ptr<ChannelModel> make_exact_channel(EntanglementDegree n, const StateVector& input,
                                                 const PauliTable& table = correction_table());

/// Coefficient-recurrence model; input_p0 = |alpha|^2.
std::unique_ptr<ChannelModel> make_tracked_channel(EntanglementDegree n, double input_p0);

}  // namespace qmesh
