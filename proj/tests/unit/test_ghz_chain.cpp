#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "qmesh/chain/channel_model.hpp"
#include "qmesh/chain/ghz_chain.hpp"
#include "test_support.hpp"

using namespace qmesh;
using qmesh::testing::binomial_z;
using qmesh::testing::random_qubit;

namespace {
const double kRt = 1.0 / std::sqrt(2.0);
const EntanglementDegree kHalf{0.5};

// Target state proportional to m*alpha|0> + k*beta|1>.
StateVector skewed(ChannelCoeffs c, Complex alpha, Complex beta) {
  const Complex a = c.m * alpha;
  const Complex b = c.k * beta;
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return new_qubit(a / norm, b / norm);
}

// Runs correction_unitary on a target through the quantum engine.
Projection run_correction(ChannelCoeffs c, const StateVector& target) {
  const AmplitudeCorrection fix = correction_unitary(c);
  const StateVector wide = tensor(target, StateVector::basis(1, 0));
  const StateVector out = apply_two_qubit_unitary(wide, 0, 1, fix.unitary);
  return project_computational(out, 1, fix.success_outcome);
}

int exponent_of(double value, double n) { return static_cast<int>(std::lround(std::log(value) / std::log(n))); }
}  // namespace

TEST_CASE("entanglement degree range") {
  CHECK_NOTHROW(EntanglementDegree(1.0));
  CHECK_NOTHROW(EntanglementDegree(1e-6));
  CHECK_THROWS_AS(EntanglementDegree(0.0), ParameterError);
  CHECK_THROWS_AS(EntanglementDegree(1.01), ParameterError);
  CHECK_THROWS_AS(EntanglementDegree(-0.5), ParameterError);
}

TEST_CASE("initial_coeffs") {
  CHECK(initial_coeffs(EntanglementDegree(1.0)) == ChannelCoeffs{1, 1});
  CHECK(initial_coeffs(kHalf) == ChannelCoeffs{1, 0.5});
  CHECK(initial_coeffs(EntanglementDegree(0.9)) == ChannelCoeffs{1, 0.9});
}

TEST_CASE("swap_update") {
  CHECK(swap_update({1, 0.5}, BellOutcome::PhiPlus, kHalf) == ChannelCoeffs{1, 0.25});
  CHECK(swap_update({1, 0.5}, BellOutcome::PsiMinus, kHalf) == ChannelCoeffs{0.5, 0.5});
  const EntanglementDegree unit(1.0);
  for (BellOutcome b : kBellOutcomes) {
    CHECK(swap_update({1, 1}, b, unit) == ChannelCoeffs{1, 1});
  }
  // A Psi result hands the n factor to the other component and swaps roles.
  CHECK(swap_update({1, 0.25}, BellOutcome::PsiPlus, kHalf) == ChannelCoeffs{0.25, 0.5});
}

TEST_CASE("pauli_for follows the correction table") {
  using B = BellOutcome;
  using P = PauliOp;
  const std::map<std::pair<B, BitOutcome>, P> expected{
      {{B::PhiPlus, BitOutcome::Zero}, P::Identity}, {{B::PhiPlus, BitOutcome::One}, P::Z},
      {{B::PhiMinus, BitOutcome::Zero}, P::Z},       {{B::PhiMinus, BitOutcome::One}, P::Identity},
      {{B::PsiPlus, BitOutcome::Zero}, P::X},        {{B::PsiPlus, BitOutcome::One}, P::ZX},
      {{B::PsiMinus, BitOutcome::Zero}, P::ZX},      {{B::PsiMinus, BitOutcome::One}, P::X},
  };
  for (const auto& [key, op] : expected) CHECK(pauli_for({key.first, key.second}) == op);
}

TEST_CASE("compose_corrections") {
  const MeasurementLog quiet(5, {BellOutcome::PhiPlus, BitOutcome::Zero});
  CHECK(compose_corrections(quiet) == PauliOp::Identity);

  const MeasurementLog twice{{BellOutcome::PsiPlus, BitOutcome::Zero}, {BellOutcome::PsiPlus, BitOutcome::Zero}};
  CHECK(compose_corrections(twice) == PauliOp::Identity);

  const MeasurementLog mixed{{BellOutcome::PhiMinus, BitOutcome::Zero}, {BellOutcome::PsiPlus, BitOutcome::One}};
  CHECK(compose_corrections(mixed) == PauliOp::X);

  // Applying the per-hop Paulis one after another matches the composed one.
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    MeasurementLog log;
    const int len = 1 + trial % 6;
    for (int i = 0; i < len; ++i) log.push_back({kBellOutcomes[rng() % 4], kBitOutcomes[rng() % 2]});
    const StateVector s = random_qubit(rng);
    StateVector stepwise = s;
    for (const auto& h : log) stepwise = apply_pauli(stepwise, 0, pauli_for(h));
    const StateVector direct = apply_pauli(s, 0, compose_corrections(log));
    CHECK(fidelity(stepwise, direct) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("correction_unitary") {
  Rng rng(12);
  SUBCASE("balanced coefficients always succeed") {
    for (ChannelCoeffs c : {ChannelCoeffs{1, 1}, ChannelCoeffs{0.5, 0.5}}) {
      const AmplitudeCorrection fix = correction_unitary(c);
      CHECK(fix.unitary.isIdentity(1e-15));
      CHECK(fix.success_outcome == BitOutcome::Zero);
      const StateVector in = random_qubit(rng);
      const Projection out = run_correction(c, skewed(c, in.amplitude(0), in.amplitude(1)));
      CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(fidelity(out.state, in) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("m=1, k=0.25 on the |+> input succeeds with probability 2/17") {
    const ChannelCoeffs c{1, 0.25};
    const Projection out = run_correction(c, skewed(c, kRt, kRt));
    CHECK(out.probability == doctest::Approx(2.0 / 17.0).epsilon(1e-12));
    CHECK(fidelity(out.state, new_qubit(Complex(kRt), Complex(kRt))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correction_success_probability(c, 0.5) == doctest::Approx(2.0 / 17.0).epsilon(1e-12));
  }
  SUBCASE("property: unitary, and the success branch restores the input") {
    for (int trial = 0; trial < 300; ++trial) {
      const double n = 0.05 + 0.95 * uniform01(rng);
      const ChannelCoeffs c{std::pow(n, static_cast<int>(rng() % 5)), std::pow(n, static_cast<int>(rng() % 5))};
      const AmplitudeCorrection fix = correction_unitary(c);
      CHECK(is_unitary(fix.unitary));
      const StateVector in = random_qubit(rng);
      const Projection out = run_correction(c, skewed(c, in.amplitude(0), in.amplitude(1)));
      const double p0 = std::norm(in.amplitude(0));
      CHECK(out.probability == doctest::Approx(correction_success_probability(c, p0)).epsilon(1e-10));
      CHECK(fidelity(out.state, in) >= 1.0 - tol::kFidelity);
    }
  }
  CHECK_THROWS_AS(correction_unitary({0, 1}), ParameterError);
}

TEST_CASE("analytic_success spot values") {
  CHECK(analytic_success(1, EntanglementDegree(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(analytic_success(1, kHalf) - 0.4) < 1e-12);
  CHECK(std::abs(analytic_success(3, kHalf) - 0.208) < 1e-12);
  CHECK_THROWS_AS(analytic_success(0, kHalf), ParameterError);
}

TEST_CASE("exact_chain_success oracle") {
  CHECK(exact_chain_success(1, EntanglementDegree(1.0), 0.6, Complex(0, 0.8)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(exact_chain_success(1, kHalf, 1, 0) - 0.4) < 1e-9);
  CHECK(std::abs(exact_chain_success(3, kHalf, kRt, kRt) - 0.208) < 1e-9);
  CHECK(std::abs(exact_chain_success(2, kHalf, 1, 0) - analytic_success(2, kHalf)) < 1e-9);
  const EntanglementDegree n7(0.7);
  CHECK(std::abs(exact_chain_success(3, n7, kRt, kRt) - exact_chain_success(3, n7, 0.6, 0.8)) < 1e-9);
  CHECK_THROWS_AS(exact_chain_success(kMaxOracleHops + 1, kHalf, 1, 0), CapacityError);
  CHECK_THROWS_AS(exact_chain_success(1, kHalf, 1, 1), NormalizationError);
}

TEST_CASE("property: oracle agrees with the closed form (hops 1..4)") {
  Rng rng(41);
  for (double nv : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    const EntanglementDegree n(nv);
    for (int hops = 1; hops <= 4; ++hops) {
      const StateVector in = random_qubit(rng);
      const ChainOracleReport r = enumerate_chain(hops, n, in);
      CHECK(std::abs(r.branch_probability_sum - 1.0) < 1e-10);
      CHECK(std::abs(r.success_probability - analytic_success(hops, n)) < 1e-9);
      CHECK(r.min_fidelity >= 1.0 - tol::kFidelity);
    }
  }
}

TEST_CASE("property: closed form is unity at n=1, non-increasing, and paired") {
  const EntanglementDegree unit(1.0);
  for (int i = 1; i <= 10; ++i) CHECK(std::abs(analytic_success(i, unit) - 1.0) < 1e-12);
  for (double nv : {0.3, 0.5, 0.7, 0.9}) {
    const EntanglementDegree n(nv);
    for (int i = 1; i < 150; ++i) CHECK(analytic_success(i + 1, n) <= analytic_success(i, n) + 1e-12);
    for (int t = 1; t <= 5; ++t) CHECK(std::abs(analytic_success(2 * t - 1, n) - analytic_success(2 * t, n)) < 1e-12);
    for (int i = 1; i <= 150; ++i) {
      const double p = analytic_success(i, n);
      CHECK(p > 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("property: coefficients stay powers of n with exponents summing to swaps + 1") {
  Rng rng(55);
  const double n = 0.6;
  const EntanglementDegree deg(n);
  for (int trial = 0; trial < 300; ++trial) {
    ChannelCoeffs c = initial_coeffs(deg);
    const int swaps = static_cast<int>(rng() % 8);
    for (int s = 0; s < swaps; ++s) c = swap_update(c, kBellOutcomes[rng() % 4], deg);
    const int a = exponent_of(c.m, n);
    const int b = exponent_of(c.k, n);
    CHECK(a >= 0);
    CHECK(b >= 0);
    CHECK(a + b == swaps + 1);
    CHECK(c.m == doctest::Approx(std::pow(n, a)).epsilon(1e-12));
    CHECK(c.k == doctest::Approx(std::pow(n, b)).epsilon(1e-12));
  }
}

TEST_CASE("simulate_chain") {
  Rng rng(1);
  SUBCASE("maximal entanglement over one hop always succeeds") {
    for (int t = 0; t < 100; ++t) {
      const StateVector in = random_qubit(rng);
      const ChainResult r = simulate_chain(in, 1, EntanglementDegree(1.0), rng);
      REQUIRE(r.success);
      REQUIRE(r.output.has_value());
      CHECK(fidelity(*r.output, in) >= 1.0 - 1e-12);
      CHECK(r.log.size() == 1);
    }
  }
  SUBCASE("fixed seed reproduces the result") {
    const StateVector in = new_qubit(Complex(0.6), Complex(0, 0.8));
    Rng a(77), b(77);
    const ChainResult x = simulate_chain(in, 4, kHalf, a);
    const ChainResult y = simulate_chain(in, 4, kHalf, b);
    CHECK(x.success == y.success);
    CHECK(x.log == y.log);
    CHECK(x.coeffs == y.coeffs);
    CHECK(x.attempt_prob == y.attempt_prob);
    if (x.success) CHECK((x.output->amplitudes() - y.output->amplitudes()).norm() == 0.0);
  }
  SUBCASE("success rate over three hops matches the oracle value 0.208") {
    const long trials = 100000;
    long wins = 0;
    Rng r(314);
    for (long t = 0; t < trials; ++t) {
      const StateVector in = random_qubit(r);
      const ChainResult res = simulate_chain(in, 3, kHalf, r);
      if (res.success) {
        ++wins;
        if (fidelity(*res.output, in) < 1.0 - tol::kFidelity) FAIL("fidelity below tolerance");
      }
      if (res.log.size() != 3) FAIL("log length differs from hop count");
      if (!(replay_swaps(res.log, kHalf) == res.coeffs)) FAIL("coefficients disagree with replay");
    }
    CHECK(std::abs(binomial_z(wins, trials, 0.208)) < 3.0);
  }
  CHECK_THROWS_AS(simulate_chain(StateVector::basis(2, 0), 2, kHalf, rng), ParameterError);
  CHECK_THROWS_AS(simulate_chain(StateVector::basis(1, 0), 0, kHalf, rng), ParameterError);
}

TEST_CASE("track_chain") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const TrackedChain tc = track_chain(1, EntanglementDegree(1.0), rng);
    CHECK(tc.coeffs == ChannelCoeffs{1, 1});
    CHECK(tc.log.size() == 1);
  }
  for (int t = 0; t < 200; ++t) {
    const TrackedChain tc = track_chain(1 + t % 7, kHalf, rng);
    CHECK(replay_swaps(tc.log, kHalf) == tc.coeffs);
    CHECK(tc.log.size() == static_cast<std::size_t>(1 + t % 7));
  }
}

TEST_CASE("track_chain matches the state-vector distribution") {
  // Joint law of (swap Bell classes, coefficients) from both paths.
  const long trials = 10000;
  const StateVector in = new_qubit(Complex(kRt), Complex(kRt));
  std::map<std::pair<double, double>, long> exact_coeffs, tracked_coeffs;
  std::map<int, long> exact_classes, tracked_classes;
  Rng re(1001), rt(2002);
  for (long t = 0; t < trials; ++t) {
    const ChainResult e = simulate_chain(in, 3, kHalf, re);
    const TrackedChain k = track_chain(3, kHalf, rt, 0.5);
    ++exact_coeffs[{e.coeffs.m, e.coeffs.k}];
    ++tracked_coeffs[{k.coeffs.m, k.coeffs.k}];
    auto classes = [](const MeasurementLog& log) {
      int key = 0;
      for (const auto& h : log) key = key * 2 + (is_phi(h.bell) ? 0 : 1);
      return key;
    };
    ++exact_classes[classes(e.log)];
    ++tracked_classes[classes(k.log)];
  }
  std::set<std::pair<double, double>> exact_set, tracked_set;
  for (const auto& [c, n] : exact_coeffs) exact_set.insert(c);
  for (const auto& [c, n] : tracked_coeffs) tracked_set.insert(c);
  CHECK(exact_set == tracked_set);

  // Two-sample comparison per cell.
  auto close = [&](long a, long b) {
    const double pa = static_cast<double>(a) / trials;
    const double pb = static_cast<double>(b) / trials;
    const double pool = (pa + pb) / 2;
    const double se = std::sqrt(2 * pool * (1 - pool) / trials);
    return se == 0 ? a == b : std::abs(pa - pb) < 4 * se;
  };
  for (const auto& [c, n] : exact_coeffs) CHECK(close(n, tracked_coeffs[c]));
  for (const auto& [c, n] : exact_classes) CHECK(close(n, tracked_classes[c]));
}

TEST_CASE("channel models enforce protocol order") {
  Rng rng(4);
  auto ch = make_exact_channel(kHalf, StateVector::basis(1, 0));
  CHECK_THROWS_AS(ch->measure_destination(rng), ProtocolError);
  ch->measure_source(rng);
  CHECK_THROWS_AS(ch->swap(rng), ProtocolError);
  CHECK_THROWS_AS(make_tracked_channel(kHalf, 1.5), ParameterError);
}
