#include "qmesh/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qmesh/core/errors.hpp"
#include "qmesh/core/random.hpp"
#include "qmesh/routing/session.hpp"

namespace qmesh {
namespace {

constexpr double kDegrees[] = {0.3, 0.5, 0.7, 0.9, 1.0};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

StateVector random_input(Rng& rng) {
  const double cos_theta = 2 * uniform01(rng) - 1;
  const double phi = 2 * M_PI * uniform01(rng);
  return new_qubit(Complex(std::sqrt((1 + cos_theta) / 2)), std::polar(std::sqrt((1 - cos_theta) / 2), phi));
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  if (opts.max_hops < 1 || opts.max_hops > kMaxOracleHops) {
    throw ParameterError("max_hops must lie in 1.." + std::to_string(kMaxOracleHops));
  }
  Rng rng(mix_keys(opts.seed, {0x7e51}));
  std::vector<CheckResult> out;

  // Exhaustive enumeration against the closed form.
  double worst_success = 0;
  double worst_fidelity_gap = 0;
  double worst_branch_sum = 0;
  double worst_input_spread = 0;
  for (int i = 1; i <= opts.max_hops; ++i) {
    for (double nv : kDegrees) {
      const EntanglementDegree n(nv);
      const int inputs = i <= 4 ? 3 : 1;
      double lo = 1;
      double hi = 0;
      for (int k = 0; k < inputs; ++k) {
        const ChainOracleReport rep = enumerate_chain(i, n, random_input(rng), opts.table);
        worst_success = std::max(worst_success, std::abs(rep.success_probability - analytic_success(i, n)));
        worst_fidelity_gap = std::max(worst_fidelity_gap, 1 - rep.min_fidelity);
        worst_branch_sum = std::max(worst_branch_sum, std::abs(rep.branch_probability_sum - 1));
        lo = std::min(lo, rep.success_probability);
        hi = std::max(hi, rep.success_probability);
      }
      worst_input_spread = std::max(worst_input_spread, hi - lo);
    }
  }
  out.push_back({"oracle-equivalence", worst_success <= 1e-9, "max deviation " + sci(worst_success)});
  out.push_back({"input-independence", worst_input_spread <= 1e-9, "max spread " + sci(worst_input_spread)});
  out.push_back({"branch-probabilities", worst_branch_sum <= 1e-9, "max deviation " + sci(worst_branch_sum)});
  out.push_back({"oracle-fidelity", worst_fidelity_gap <= 1e-9, "max 1-F " + sci(worst_fidelity_gap)});

  double unity_gap = 0;
  for (int i = 1; i <= 10; ++i) unity_gap = std::max(unity_gap, std::abs(analytic_success(i, EntanglementDegree(1)) - 1));
  out.push_back({"unity", unity_gap <= 1e-12, "max deviation " + sci(unity_gap)});

  double rise = 0;
  for (double nv : {0.3, 0.5, 0.7, 0.9}) {
    for (int i = 2; i <= 150; ++i) {
      rise = std::max(rise, analytic_success(i, EntanglementDegree(nv)) - analytic_success(i - 1, EntanglementDegree(nv)));
    }
  }
  out.push_back({"monotonicity", rise <= 1e-12, "max increase " + sci(rise)});

  double pair_gap = 0;
  for (double nv : kDegrees) {
    const EntanglementDegree n(nv);
    for (int t = 1; t <= 5; ++t) pair_gap = std::max(pair_gap, std::abs(analytic_success(2 * t - 1, n) - analytic_success(2 * t, n)));
    for (int t = 1; 2 * t <= opts.max_hops; ++t) {
      const StateVector in = random_input(rng);
      pair_gap = std::max(pair_gap, std::abs(enumerate_chain(2 * t - 1, n, in, opts.table).success_probability -
                                             enumerate_chain(2 * t, n, in, opts.table).success_probability));
    }
  }
  out.push_back({"pairing", pair_gap <= 1e-12, "max deviation " + sci(pair_gap)});

  const double spot = std::max(std::abs(analytic_success(1, EntanglementDegree(0.5)) - 0.4),
                               std::abs(analytic_success(3, EntanglementDegree(0.5)) - 0.208));
  out.push_back({"spot-values", spot <= 1e-9, "max deviation " + sci(spot)});

  // State-vector sessions over the full protocol.
  int sessions = 0;
  int successes = 0;
  double worst_session = 0;
  for (int hops = 1; hops <= std::min(opts.max_hops, 5); ++hops) {
    const Topology line = make_line(hops);
    for (double nv : kDegrees) {
      SimConfig cfg;
      cfg.n = EntanglementDegree(nv);
      cfg.quantum = QuantumMode::Exact;
      cfg.table = opts.table;
      for (int k = 0; k < 8; ++k) {
        const SessionReport r = run_session(line, node_id(0), node_id(hops), random_input(rng), cfg, rng);
        ++sessions;
        if (r.success && r.fidelity) {
          ++successes;
          worst_session = std::max(worst_session, 1 - *r.fidelity);
        }
      }
    }
  }
  out.push_back({"session-fidelity", worst_session <= 1e-9 && successes > 0,
                 std::to_string(successes) + "/" + std::to_string(sessions) + " succeeded, max 1-F " + sci(worst_session)});
  return out;
}

}  // namespace qmesh
