#include "qmesh/chain/channel_model.hpp"

#include <cmath>

namespace qmesh {
namespace {

class ExactChannel final : public ChannelModel {
 public:
  ExactChannel(EntanglementDegree n, const StateVector& input, const PauliTable& table)
      : n_(n), input_(input), table_(table), state_(ghz_triple(n.value())), coeffs_(initial_coeffs(n)) {
    input_.require_valid();
    if (input_.num_qubits() != 1) throw ParameterError("teleported input must be a single qubit");
  }

  HopMeasurement swap(Rng& rng) override {
    expect(Stage::Swapping);
    const StateVector joined = tensor(state_, ghz_triple(n_.value()));
    const QubitLabel up_tail = state_.label_bound();
    const QubitLabel head1 = up_tail + 1;
    const QubitLabel head2 = up_tail + 2;
    auto bell = sample_bell(joined, head2, tail_, rng);
    auto had = sample_computational(apply_hadamard(bell.state, head1), head1, rng);
    state_ = std::move(had.state);
    tail_ = up_tail;
    coeffs_ = swap_update(coeffs_, bell.outcome, n_);
    return {bell.outcome, had.outcome};
  }

  BellOutcome measure_source(Rng& rng) override {
    expect(Stage::Swapping);
    const StateVector joined = tensor(state_, input_);
    const QubitLabel data = state_.label_bound();
    auto bell = sample_bell(joined, data, tail_, rng);
    state_ = std::move(bell.state);
    stage_ = Stage::SourceMeasured;
    return bell.outcome;
  }

  BitOutcome measure_destination(Rng& rng) override {
    expect(Stage::SourceMeasured);
    auto had = sample_computational(apply_hadamard(state_, h1_), h1_, rng);
    state_ = std::move(had.state);
    stage_ = Stage::DestinationMeasured;
    return had.outcome;
  }

  Recovery recover(const MeasurementLog& log, Rng& rng) override {
    expect(Stage::DestinationMeasured);
    stage_ = Stage::Done;
    if (log.empty()) throw ProtocolError("recovery needs at least the source measurement");
    const StateVector corrected = apply_pauli(state_, h2_, compose_corrections(log, table_));
    const AmplitudeCorrection fix = correction_unitary(teleport_coeffs(replay_swaps(log, n_), log.back().bell));
    const QubitLabel aux = corrected.label_bound();
    const StateVector mixed =
        apply_two_qubit_unitary(tensor(corrected, StateVector::basis(1, 0)), h2_, aux, fix.unitary);
    Projection ok = project_computational(mixed, aux, fix.success_outcome);
    Recovery out;
    out.attempt_prob = ok.probability;
    out.success = ok.probability > 0 && uniform01(rng) < ok.probability;
    if (out.success) out.output = std::move(ok.state);
    return out;
  }

  ChannelCoeffs coeffs() const override { return coeffs_; }

 private:
  enum class Stage { Swapping, SourceMeasured, DestinationMeasured, Done };

  void expect(Stage s) const {
    if (stage_ != s) throw ProtocolError("channel operations called out of protocol order");
  }

  EntanglementDegree n_;
  StateVector input_;
  PauliTable table_;
  StateVector state_;
  QubitLabel tail_ = 0;
  QubitLabel h1_ = 1;
  QubitLabel h2_ = 2;
  ChannelCoeffs coeffs_;
  Stage stage_ = Stage::Swapping;
};

class TrackedChannel final : public ChannelModel {
 public:
  TrackedChannel(EntanglementDegree n, double input_p0) : n_(n), p0_(input_p0), coeffs_(initial_coeffs(n)) {
    if (!(input_p0 >= 0.0 && input_p0 <= 1.0)) throw ParameterError("|alpha|^2 must lie in [0, 1]");
  }

  HopMeasurement swap(Rng& rng) override {
    const double n = n_.value();
    const double m2 = coeffs_.m * coeffs_.m;
    const double k2 = coeffs_.k * coeffs_.k;
    const double phi = (m2 + n * n * k2) / ((m2 + k2) * (1.0 + n * n));
    const HopMeasurement h = draw(rng, phi);
    coeffs_ = swap_update(coeffs_, h.bell, n_);
    return h;
  }

  BellOutcome measure_source(Rng& rng) override {
    const double m2 = coeffs_.m * coeffs_.m;
    const double k2 = coeffs_.k * coeffs_.k;
    const double phi = (m2 * p0_ + k2 * (1.0 - p0_)) / (m2 + k2);
    return draw(rng, phi).bell;
  }

  BitOutcome measure_destination(Rng& rng) override { return to_bit(uniform01(rng) < 0.5 ? 0 : 1); }

  Recovery recover(const MeasurementLog& log, Rng& rng) override {
    if (log.empty()) throw ProtocolError("recovery needs at least the source measurement");
    Recovery out;
    out.attempt_prob =
        correction_success_probability(teleport_coeffs(replay_swaps(log, n_), log.back().bell), p0_);
    out.success = uniform01(rng) < out.attempt_prob;
    return out;
  }

  ChannelCoeffs coeffs() const override { return coeffs_; }

 private:
  // Class drawn with weight phi; sign and Hadamard bit are uniform within a class.
  static HopMeasurement draw(Rng& rng, double phi) {
    const bool is_phi_class = uniform01(rng) < phi;
    const bool minus = uniform01(rng) < 0.5;
    const bool one = uniform01(rng) < 0.5;
    BellOutcome bell = is_phi_class ? (minus ? BellOutcome::PhiMinus : BellOutcome::PhiPlus)
                                    : (minus ? BellOutcome::PsiMinus : BellOutcome::PsiPlus);
    return {bell, to_bit(one ? 1 : 0)};
  }

  EntanglementDegree n_;
  double p0_;
  ChannelCoeffs coeffs_;
};

}  // namespace

std::unique_ptr<ChannelModel> make_exact_channel(EntanglementDegree n, const StateVector& input,
                                                 const PauliTable& table) {
  return std::make_unique<ExactChannel>(n, input, table);
}

std::unique_ptr<ChannelModel> make_tracked_channel(EntanglementDegree n, double input_p0) {
  return std::make_unique<TrackedChannel>(n, input_p0);
}

}  // namespace qmesh
