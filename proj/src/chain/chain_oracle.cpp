// Exhaustive branch enumeration used to certify the closed-form success
// probability. Every Bell and Hadamard outcome is followed by projection; no
// sampling is involved.

#include <algorithm>
#include <cmath>
#include <string>

#include "qmesh/chain/ghz_chain.hpp"

namespace qmesh {
namespace {

// Neumaier summation; the leaf count reaches 2^18.
struct CompensatedSum {
  double sum = 0;
  double carry = 0;

  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct Walk {
  int hops;
  EntanglementDegree n;
  const StateVector& input;
  const PauliTable& table;
  ChainOracleReport report;
  CompensatedSum branches;
  CompensatedSum successes;
};

// Destination: Hadamard-measure h1, correct h2, run the auxiliary step.
void finish(Walk& w, const StateVector& state, QubitLabel h1, QubitLabel h2, MeasurementLog& log,
            ChannelCoeffs coeffs, BellOutcome source_bell, double weight) {
  const StateVector rotated = apply_hadamard(state, h1);
  for (BitOutcome had : kBitOutcomes) {
    const Projection leaf = project_computational(rotated, h1, had);
    if (leaf.probability <= 0) continue;
    const double branch = weight * leaf.probability;
    ++w.report.leaves;
    w.branches.add(branch);

    log.push_back({source_bell, had});
    const StateVector corrected = apply_pauli(leaf.state, h2, compose_corrections(log, w.table));
    log.pop_back();

    const AmplitudeCorrection fix = correction_unitary(teleport_coeffs(coeffs, source_bell));
    const StateVector with_aux = tensor(corrected, StateVector::basis(1, 0));
    const QubitLabel aux = corrected.label_bound();
    const StateVector mixed = apply_two_qubit_unitary(with_aux, h2, aux, fix.unitary);
    const Projection ok = project_computational(mixed, aux, fix.success_outcome);
    if (ok.probability <= 0) continue;
    w.successes.add(branch * ok.probability);
    w.report.min_fidelity = std::min(w.report.min_fidelity, fidelity(ok.state, w.input));
  }
}

void source_step(Walk& w, const StateVector& state, QubitLabel tail, QubitLabel h1, QubitLabel h2,
                 MeasurementLog& log, ChannelCoeffs coeffs, double weight) {
  const StateVector joined = tensor(state, w.input);
  const QubitLabel data = state.label_bound();
  for (BellOutcome bell : kBellOutcomes) {
    const Projection p = project_bell(joined, data, tail, bell);
    if (p.probability <= 0) continue;
    finish(w, p.state, h1, h2, log, coeffs, bell, weight * p.probability);
  }
}

void swap_step(Walk& w, const StateVector& state, QubitLabel tail, QubitLabel h1, QubitLabel h2, int swaps_done,
               MeasurementLog& log, ChannelCoeffs coeffs, double weight) {
  if (swaps_done == w.hops - 1) {
    source_step(w, state, tail, h1, h2, log, coeffs, weight);
    return;
  }
  const StateVector joined = tensor(state, ghz_triple(w.n.value()));
  const QubitLabel up_tail = state.label_bound();
  const QubitLabel head1 = up_tail + 1;
  const QubitLabel head2 = up_tail + 2;
  for (BellOutcome bell : kBellOutcomes) {
    const Projection swapped = project_bell(joined, head2, tail, bell);
    if (swapped.probability <= 0) continue;
    const StateVector rotated = apply_hadamard(swapped.state, head1);
    for (BitOutcome had : kBitOutcomes) {
      const Projection p = project_computational(rotated, head1, had);
      if (p.probability <= 0) continue;
      log.push_back({bell, had});
      swap_step(w, p.state, up_tail, h1, h2, swaps_done + 1, log, swap_update(coeffs, bell, w.n),
                weight * swapped.probability * p.probability);
      log.pop_back();
    }
  }
}

}  // namespace

ChainOracleReport enumerate_chain(int hops, EntanglementDegree n, const StateVector& input,
                                  const PauliTable& table) {
  if (hops < 1) throw ParameterError("hop count must be at least 1");
  if (hops > kMaxOracleHops) {
    throw CapacityError("oracle enumeration supports at most " + std::to_string(kMaxOracleHops) + " hops");
  }
  if (input.num_qubits() != 1) throw ParameterError("teleported input must be a single qubit");
  Walk w{hops, n, input, table, {}, {}, {}};
  // Destination-side triple: tail at the last swap node, heads h1 h2 at the destination.
  const StateVector start = ghz_triple(n.value());
  MeasurementLog log;
  swap_step(w, start, 0, 1, 2, 0, log, initial_coeffs(n), 1.0);
  w.report.branch_probability_sum = w.branches.value();
  w.report.success_probability = w.successes.value();
  return w.report;
}

double exact_chain_success(int hops, EntanglementDegree n, Complex alpha, Complex beta) {
  return enumerate_chain(hops, n, new_qubit(alpha, beta)).success_probability;
}

}  // namespace qmesh
