#include "qmesh/chain/ghz_chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "qmesh/chain/channel_model.hpp"

namespace qmesh {

EntanglementDegree::EntanglementDegree(double n) : n_(n) {
  if (!(n > 0.0 && n <= 1.0)) {
    throw ParameterError("entanglement degree must satisfy 0 < n <= 1, got " + std::to_string(n));
  }
}

const PauliTable& correction_table() {
  // (bell, had): PHI+ 0/1, PHI- 0/1, PSI+ 0/1, PSI- 0/1
  static const PauliTable table{PauliOp::Identity, PauliOp::Z, PauliOp::Z, PauliOp::Identity,
                                PauliOp::X,        PauliOp::ZX, PauliOp::ZX, PauliOp::X};
  return table;
}

ChannelCoeffs initial_coeffs(EntanglementDegree n) { return {1.0, n.value()}; }

ChannelCoeffs swap_update(ChannelCoeffs c, BellOutcome bell, EntanglementDegree n) {
  // A Psi result anti-correlates the new tail with the destination; the X in
  // the correction flips the destination back, so the roles of m and k swap.
  if (is_phi(bell)) return {c.m, n.value() * c.k};
  return {c.k, n.value() * c.m};
}

ChannelCoeffs teleport_coeffs(ChannelCoeffs c, BellOutcome source_bell) {
  if (is_phi(source_bell)) return c;
  return {c.k, c.m};
}

ChannelCoeffs replay_swaps(const MeasurementLog& log, EntanglementDegree n) {
  ChannelCoeffs c = initial_coeffs(n);
  for (std::size_t i = 0; i + 1 < log.size(); ++i) c = swap_update(c, log[i].bell, n);
  return c;
}

PauliOp pauli_for(HopMeasurement h, const PauliTable& table) {
  return table[2 * static_cast<std::size_t>(h.bell) + static_cast<std::size_t>(h.had)];
}

PauliOp compose_corrections(const MeasurementLog& log, const PauliTable& table) {
  PauliOp total = PauliOp::Identity;
  for (const auto& h : log) total = compose(total, pauli_for(h, table));
  return total;
}

AmplitudeCorrection correction_unitary(ChannelCoeffs c) {
  if (!(c.m > 0.0 && c.k > 0.0)) throw ParameterError("channel coefficients must be positive");
  AmplitudeCorrection out;
  const double hi = std::max(c.m, c.k);
  const double lo = std::min(c.m, c.k);
  out.ratio = lo / hi;
  if (hi - lo <= 1e-15 * hi) {
    out.ratio = 1.0;
    out.unitary = Eigen::Matrix4cd::Identity();
    return out;
  }
  const double r = out.ratio;
  const double s = std::sqrt(1.0 - r * r);
  // Basis order |target aux>: 00, 01, 10, 11.
  if (c.m > c.k) {
    // |00> -> r|00> + s|11>, |10> -> |10>: shrinks the |0> component.
    out.unitary << r, s, 0, 0,
                   0, 0, 0, 1,
                   0, 0, 1, 0,
                   s, -r, 0, 0;
  } else {
    // |00> -> |00>, |10> -> r|10> + s|11>: shrinks the |1> component.
    out.unitary << 1, 0, 0, 0,
                   0, 0, 0, 1,
                   0, s, r, 0,
                   0, -r, s, 0;
  }
  return out;
}

double correction_success_probability(ChannelCoeffs c, double p0) {
  const double lo = std::min(c.m, c.k);
  const double weight = c.m * c.m * p0 + c.k * c.k * (1.0 - p0);
  return lo * lo / weight;
}

namespace {

// Exact in uint64 for n <= 60.
std::uint64_t binomial_exact(int n, int k) {
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int j = 0; j < k; ++j) c = c * static_cast<std::uint64_t>(n - j) / static_cast<std::uint64_t>(j + 1);
  return c;
}

// C(i, j) * n^power / (1 + n^2)^i
double success_term(int i, int j, int power, double n) {
  if (i <= 60) {
    return static_cast<double>(binomial_exact(i, j)) * std::pow(n, power) / std::pow(1.0 + n * n, i);
  }
  const double log_binom = std::lgamma(i + 1.0) - std::lgamma(j + 1.0) - std::lgamma(i - j + 1.0);
  return std::exp(log_binom + power * std::log(n) - i * std::log1p(n * n));
}

}  // namespace

double analytic_success(int hops, EntanglementDegree degree) {
  if (hops < 1) throw ParameterError("hop count must be at least 1");
  const int i = hops;
  const double n = degree.value();
  double total = 0;
  if (i % 2 == 1) {
    for (int j = 0; j <= (i - 1) / 2; ++j) total += 2.0 * success_term(i, j, 2 * (i - j), n);
  } else {
    total = success_term(i, i / 2, i, n);
    for (int j = 1; j <= i / 2; ++j) total += 2.0 * success_term(i, i / 2 - j, i + 2 * j, n);
  }
  return total;
}

ChainResult simulate_chain(const StateVector& input, int hops, EntanglementDegree n, Rng& rng) {
  if (hops < 1) throw ParameterError("hop count must be at least 1");
  if (input.num_qubits() != 1) throw ParameterError("teleported input must be a single qubit");
  auto channel = make_exact_channel(n, input);
  ChainResult result;
  for (int j = 1; j < hops; ++j) result.log.push_back(channel->swap(rng));
  result.coeffs = channel->coeffs();
  const BellOutcome bell = channel->measure_source(rng);
  const BitOutcome had = channel->measure_destination(rng);
  result.log.push_back({bell, had});
  Recovery rec = channel->recover(result.log, rng);
  result.success = rec.success;
  result.output = std::move(rec.output);
  result.attempt_prob = rec.attempt_prob;
  return result;
}

TrackedChain track_chain(int hops, EntanglementDegree n, Rng& rng, double input_p0) {
  if (hops < 1) throw ParameterError("hop count must be at least 1");
  auto channel = make_tracked_channel(n, input_p0);
  TrackedChain out;
  for (int j = 1; j < hops; ++j) out.log.push_back(channel->swap(rng));
  out.coeffs = channel->coeffs();
  const BellOutcome bell = channel->measure_source(rng);
  const BitOutcome had = channel->measure_destination(rng);
  out.log.push_back({bell, had});
  return out;
}

}  // namespace qmesh
