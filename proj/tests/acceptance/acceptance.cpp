// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>

#include "../unit/test_support.hpp"
#include "qmesh/chain/ghz_chain.hpp"
#include "qmesh/experiments/csv.hpp"
#include "qmesh/experiments/experiments.hpp"
#include "qmesh/routing/golden.hpp"
#include "qmesh/routing/session.hpp"

using namespace qmesh;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kSpotTol = 1e-9;
constexpr double kFidelityFloor = 1 - 1e-9;
constexpr double kBinomialSigmas = 3;
constexpr double kSweepSigmas = 2;
constexpr double kOracleSeconds = 60;
constexpr double kSweepSeconds = 600;

constexpr double kDegrees[] = {0.3, 0.5, 0.7, 0.9, 1.0};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

// 1 -------------------------------------------------------------------------
void oracle_equivalence() {
  Rng rng(101);
  const auto t0 = Clock::now();
  double worst = 0;
  int cases = 0;
  for (int i = 1; i <= 6; ++i) {
    for (double nv : kDegrees) {
      for (int k = 0; k < 5; ++k) {
        const StateVector in = testing::random_qubit(rng);
        const double exact = exact_chain_success(i, EntanglementDegree(nv), in.amplitude(0), in.amplitude(1));
        worst = std::max(worst, std::abs(exact - analytic_success(i, EntanglementDegree(nv))));
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, "oracle-equivalence", worst <= kOracleTol && secs < kOracleSeconds,
         std::to_string(cases) + " cases, max deviation " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s");
}

// 2 -------------------------------------------------------------------------
void unity_monotone_pairing() {
  double unity = 0;
  for (int i = 1; i <= 10; ++i) unity = std::max(unity, std::abs(analytic_success(i, EntanglementDegree(1)) - 1));

  double rise = 0;
  for (double nv : kDegrees)
    for (int i = 2; i <= 150; ++i)
      rise = std::max(rise, analytic_success(i, EntanglementDegree(nv)) - analytic_success(i - 1, EntanglementDegree(nv)));

  double pair = 0;
  for (double nv : kDegrees)
    for (int t = 1; t <= 5; ++t)
      pair = std::max(pair, std::abs(analytic_success(2 * t - 1, EntanglementDegree(nv)) -
                                     analytic_success(2 * t, EntanglementDegree(nv))));

  // Oracle confirmation within its hop budget.
  Rng rng(202);
  double oracle_unity = 0;
  double oracle_rise = 0;
  double oracle_pair = 0;
  for (double nv : kDegrees) {
    const StateVector in = testing::random_qubit(rng);
    std::vector<double> p;
    for (int i = 1; i <= 6; ++i) p.push_back(exact_chain_success(i, EntanglementDegree(nv), in.amplitude(0), in.amplitude(1)));
    for (std::size_t i = 1; i < p.size(); ++i) oracle_rise = std::max(oracle_rise, p[i] - p[i - 1]);
    for (int t = 1; t <= 3; ++t) oracle_pair = std::max(oracle_pair, std::abs(p[2 * t - 2] - p[2 * t - 1]));
    if (nv == 1.0)
      for (double x : p) oracle_unity = std::max(oracle_unity, std::abs(x - 1));
  }
  const bool ok = unity <= kIdentityTol && rise <= kIdentityTol && pair <= kIdentityTol && oracle_unity <= kIdentityTol &&
                  oracle_rise <= kIdentityTol && oracle_pair <= kIdentityTol;
  report(2, "unity-monotonicity-pairing", ok,
         "formula unity " + fmt("%.1e", unity) + " rise " + fmt("%.1e", rise) + " pairing " + fmt("%.1e", pair) +
             "; oracle unity " + fmt("%.1e", oracle_unity) + " rise " + fmt("%.1e", oracle_rise) + " pairing " +
             fmt("%.1e", oracle_pair));
}

// 3 -------------------------------------------------------------------------
void spot_values() {
  const EntanglementDegree half(0.5);
  const double f1 = analytic_success(1, half);
  const double f3 = analytic_success(3, half);
  const double o1 = exact_chain_success(1, half, Complex(0.6), Complex(0.8));
  const double o3 = exact_chain_success(3, half, Complex(0.6), Complex(0.8));
  const double worst = std::max({std::abs(f1 - 0.4), std::abs(o1 - 0.4), std::abs(f3 - 0.208), std::abs(o3 - 0.208)});
  report(3, "spot-values", worst <= kSpotTol,
         "P(1,0.5) formula " + format_real(f1) + " oracle " + format_real(o1) + "; P(3,0.5) formula " + format_real(f3) +
             " oracle " + format_real(o3));
}

// 4 -------------------------------------------------------------------------
void fidelity_and_rate() {
  Rng rng(404);
  int sessions = 0;
  int successes = 0;
  double worst = 1;
  for (int hops = 1; hops <= 5; ++hops) {
    const Topology line = make_line(hops);
    for (double nv : kDegrees) {
      SimConfig cfg;
      cfg.n = EntanglementDegree(nv);
      cfg.quantum = QuantumMode::Exact;
      for (int k = 0; k < 50; ++k) {
        const SessionReport r = run_session(line, node_id(0), node_id(hops), testing::random_qubit(rng), cfg, rng);
        ++sessions;
        if (r.success) {
          ++successes;
          worst = std::min(worst, r.fidelity.value_or(0.0));
        }
      }
    }
  }
  const bool fid_ok = sessions >= 1000 && worst >= kFidelityFloor;

  const long trials = 100000;
  double worst_z = 0;
  std::string worst_cell;
  int cells = 0;
  for (int hops = 1; hops <= 6; ++hops) {
    const Topology line = make_line(hops);
    for (double nv : kDegrees) {
      SimConfig cfg;
      cfg.n = EntanglementDegree(nv);
      Rng cell_rng(mix_keys(405, {static_cast<std::uint64_t>(hops), static_cast<std::uint64_t>(nv * 10)}));
      long wins = 0;
      for (long t = 0; t < trials; ++t) {
        wins += run_session(line, node_id(0), node_id(hops), testing::random_qubit(cell_rng), cfg, cell_rng).success;
      }
      const double p = analytic_success(hops, cfg.n);
      const double z = p >= 1 ? (wins == trials ? 0 : INFINITY) : testing::binomial_z(wins, trials, p);
      if (std::abs(z) > std::abs(worst_z)) {
        worst_z = z;
        worst_cell = "hops " + std::to_string(hops) + " n " + format_real(nv);
      }
      ++cells;
    }
  }
  const bool rate_ok = std::abs(worst_z) <= kBinomialSigmas;
  report(4, "fidelity", fid_ok && rate_ok,
         std::to_string(sessions) + " exact sessions, " + std::to_string(successes) + " successes, min fidelity " +
             fmt("%.15f", worst) + "; " + std::to_string(cells) + " tracked cells x " + std::to_string(trials) +
             ", worst z " + fmt("%+.2f", worst_z) + (worst_cell.empty() ? "" : " (" + worst_cell + ")"));
}

// 5 -------------------------------------------------------------------------
void golden_trace() {
  const Topology t = golden_topology();
  const StateVector in = new_qubit(Complex(0.6), Complex(0.8));
  SimConfig cfg;
  cfg.n = EntanglementDegree(0.5);
  Rng r1(5);
  const SessionReport pig = run_session(t, kGoldenSource, kGoldenDestination, in, cfg, r1);
  cfg.mode = SessionMode::Separate;
  Rng r2(5);
  const SessionReport sep = run_session(t, kGoldenSource, kGoldenDestination, in, cfg, r2);

  const bool route_ok = pig.route && format_route(*pig.route, t) == "A-B-D-G-H";
  const bool reply_ok = format_route(pig.qrf_path, t) == "G-D-B-A";
  const bool counts_ok = pig.packets == PacketCounts{6, 3, 4, 0} && sep.packets.total() == 19;

  bool formula_ok = true;
  for (const PacketRow& row : packet_comparison(1, 6)) {
    formula_ok = formula_ok && row.separate - row.piggyback == row.hops * (row.hops - 1) / 2;
  }
  report(5, "reference-trace", route_ok && reply_ok && counts_ok && formula_ok,
         "route " + (pig.route ? format_route(*pig.route, t) : std::string("none")) + ", reply " +
             format_route(pig.qrf_path, t) + ", packets qrr " + std::to_string(pig.packets.qrr) + " qrf " +
             std::to_string(pig.packets.qrf) + " result " + std::to_string(pig.packets.result) + " total " +
             std::to_string(pig.packets.total()) + ", separate total " + std::to_string(sep.packets.total()) +
             ", hops(hops-1)/2 for hops 1..6 " + (formula_ok ? "holds" : "broken"));
}

// 6 -------------------------------------------------------------------------
std::optional<std::size_t> brute_force_hops(const Topology& t, NodeId src, NodeId dst) {
  std::optional<std::size_t> best;
  std::vector<bool> used(t.size(), false);
  std::function<void(NodeId, std::size_t)> walk = [&](NodeId at, std::size_t depth) {
    if (at == dst) {
      if (!best || depth < *best) best = depth;
      return;
    }
    if (at != src && t.node(at).role == Role::Client) return;
    used[index_of(at)] = true;
    for (NodeId v : t.neighbors(at))
      if (!used[index_of(v)]) walk(v, depth + 1);
    used[index_of(at)] = false;
  };
  walk(src, 0);
  return best;
}

void route_optimality() {
  int found = 0;
  int mismatches = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    TopologyConfig cfg;
    cfg.backbone_count = 1 + static_cast<int>(k % 8);
    cfg.area_side = 350 + 25.0 * static_cast<double>(k % 5);
    cfg.link_prob = 0.4 + 0.1 * static_cast<double>(k % 6);
    cfg.seed = mix_keys(606, {k});
    cfg.fallback_attach = k % 2 == 1;
    const Topology t = generate(cfg);
    Rng rng(k);
    const SessionReport r = run_session(t, generated_source(cfg), generated_destination(cfg),
                                        new_qubit(Complex(1), Complex(0)), SimConfig{}, rng);
    const auto best = brute_force_hops(t, generated_source(cfg), generated_destination(cfg));
    if (r.route) {
      ++found;
      if (!best || static_cast<std::size_t>(r.hops) != *best) ++mismatches;
    } else if (best) {
      ++mismatches;  // a path exists but the protocol found none
    }
  }
  report(6, "route-optimality", mismatches == 0 && found > 0,
         "500 topologies (<= 10 nodes), " + std::to_string(found) + " routes found, " + std::to_string(mismatches) +
             " mismatches against exhaustive search");
}

// 7 -------------------------------------------------------------------------
using Key = std::tuple<int, double, double>;  // node_count, p, n

std::map<Key, RowRecord> index_rows(const std::vector<RowRecord>& rows) {
  std::map<Key, RowRecord> m;
  for (const RowRecord& r : rows) m[{r.node_count, r.p, r.n}] = r;
  return m;
}

// a >= b within the larger stderr of the pair.
bool at_least(const RowRecord& a, const RowRecord& b) {
  return a.mean_p_suc >= b.mean_p_suc - kSweepSigmas * std::max(a.stderr_p_suc, b.stderr_p_suc);
}

struct SaturationTally {
  int pairs = 0;
  int violations = 0;
};

SaturationTally saturation(const std::vector<RowRecord>& rows) {
  SaturationTally s;
  const auto m = index_rows(rows);
  for (const auto& [key, a] : m) {
    const auto [c, p, n] = key;
    const auto next = m.upper_bound({c, INFINITY, INFINITY});
    if (next == m.end()) continue;
    const auto it = m.find({std::get<0>(next->first), p, n});
    if (it == m.end()) continue;
    const RowRecord& b = it->second;
    if (a.route_found_rate <= 0.99 || b.route_found_rate <= 0.99) continue;
    ++s.pairs;
    if (std::abs(a.mean_p_suc - b.mean_p_suc) > kSweepSigmas * std::max(a.stderr_p_suc, b.stderr_p_suc)) ++s.violations;
  }
  return s;
}

SweepConfig density_sweep(double range, std::vector<double> p, bool fallback) {
  SweepConfig cfg;
  for (int c = 10; c <= 200; c += 10) cfg.node_counts.push_back(c);
  cfg.range = range;
  cfg.p_values = std::move(p);
  cfg.n_values = {0.5, 0.7, 0.9, 1.0};
  cfg.runs = 100;
  cfg.master_seed = 7;
  cfg.fallback_attach = fallback;
  cfg.threads = 0;
  return cfg;
}

std::string csv_of(const std::vector<RowRecord>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

std::string range200_csv;  // reused by the determinism check

void sweep_properties() {
  const auto t0 = Clock::now();
  const auto r200 = sweep(density_sweep(200, {0.3, 0.5, 0.8}, false));
  const auto r300 = sweep(density_sweep(300, {0.5}, false));
  const auto r200_fb = sweep(density_sweep(200, {0.3, 0.5, 0.8}, true));
  const auto r300_fb = sweep(density_sweep(300, {0.5}, true));
  const double secs = seconds_since(t0);
  range200_csv = csv_of(r200);

  const auto m200 = index_rows(r200);
  const auto m300 = index_rows(r300);
  int order_checks = 0, order_bad = 0;
  int dom_checks = 0, dom_bad = 0;
  int range_checks = 0, range_bad = 0;
  double max_found = 0;
  for (int c = 10; c <= 200; c += 10) {
    for (double n : {0.5, 0.7, 0.9, 1.0}) {
      const RowRecord& p3 = m200.at({c, 0.3, n});
      const RowRecord& p5 = m200.at({c, 0.5, n});
      const RowRecord& p8 = m200.at({c, 0.8, n});
      order_checks += 2;
      order_bad += !at_least(p8, p5) + !at_least(p5, p3);
      range_checks += 1;
      range_bad += !at_least(m300.at({c, 0.5, n}), p5);
      for (double p : {0.3, 0.5, 0.8}) max_found = std::max(max_found, m200.at({c, p, n}).route_found_rate);
      max_found = std::max(max_found, m300.at({c, 0.5, n}).route_found_rate);
    }
    for (double p : {0.3, 0.5, 0.8}) {
      for (double n : {0.5, 0.7, 0.9}) {
        ++dom_checks;
        dom_bad += !at_least(m200.at({c, p, 1.0}), m200.at({c, p, n}));
      }
    }
    for (double n : {0.5, 0.7, 0.9}) {
      ++dom_checks;
      dom_bad += !at_least(m300.at({c, 0.5, 1.0}), m300.at({c, 0.5, n}));
    }
  }

  SaturationTally sat = saturation(r200);
  const SaturationTally sat300 = saturation(r300);
  sat.pairs += sat300.pairs;
  sat.violations += sat300.violations;
  SaturationTally sat_fb = saturation(r200_fb);
  const SaturationTally sat300_fb = saturation(r300_fb);
  sat_fb.pairs += sat300_fb.pairs;
  sat_fb.violations += sat300_fb.violations;

  const bool ok = order_bad == 0 && dom_bad == 0 && range_bad == 0 && sat.violations == 0 && sat_fb.violations == 0 &&
                  sat_fb.pairs > 0 && secs < kSweepSeconds;
  report(7, "sweep-properties", ok,
         "p ordering " + std::to_string(order_checks - order_bad) + "/" + std::to_string(order_checks) +
             ", n=1 dominance " + std::to_string(dom_checks - dom_bad) + "/" + std::to_string(dom_checks) +
             ", R=300 over R=200 " + std::to_string(range_checks - range_bad) + "/" + std::to_string(range_checks) +
             ", saturation default attach " + std::to_string(sat.pairs) + " qualifying pairs (max found rate " +
             format_real(max_found) + "), fallback attach " + std::to_string(sat_fb.pairs - sat_fb.violations) + "/" +
             std::to_string(sat_fb.pairs) + ", " + fmt("%.1f", secs) + " s for four sweeps");
}

// 8 -------------------------------------------------------------------------
void determinism() {
  SweepConfig cfg = density_sweep(200, {0.3, 0.5, 0.8}, false);
  cfg.threads = 1;
  const std::string serial = csv_of(sweep(cfg));
  cfg.threads = 4;
  const std::string parallel = csv_of(sweep(cfg));
  const bool csv_ok = serial == parallel && serial == range200_csv;

  // Traces: serial versus concurrent sessions with the same seeds.
  const Topology golden = golden_topology();
  auto trace_for = [&](std::uint64_t seed) {
    TopologyConfig tc;
    tc.backbone_count = 80;
    tc.link_prob = 0.7;
    tc.seed = seed;
    const Topology t = seed == 0 ? golden : generate(tc);
    const NodeId src = seed == 0 ? kGoldenSource : generated_source(tc);
    const NodeId dst = seed == 0 ? kGoldenDestination : generated_destination(tc);
    SimConfig sim;
    sim.n = EntanglementDegree(0.7);
    sim.record_trace = true;
    sim.quantum = seed % 2 ? QuantumMode::Exact : QuantumMode::Tracked;
    Rng rng(mix_keys(808, {seed}));
    return format_trace(run_session(t, src, dst, new_qubit(Complex(0.6), Complex(0.8)), sim, rng), t);
  };
  constexpr std::size_t kSeeds = 8;
  std::vector<std::string> serial_traces(kSeeds), threaded(kSeeds);
  for (std::size_t s = 0; s < kSeeds; ++s) serial_traces[s] = trace_for(s);
  std::vector<std::thread> pool;
  for (std::size_t s = 0; s < kSeeds; ++s) pool.emplace_back([&, s] { threaded[s] = trace_for(s); });
  for (auto& th : pool) th.join();
  const bool trace_ok = serial_traces == threaded && !serial_traces[0].empty();
  report(8, "determinism", csv_ok && trace_ok,
         std::string("sweep CSV (") + std::to_string(serial.size()) + " bytes) " +
             (csv_ok ? "identical" : "differs") + " across reruns and 1/4 threads; " + std::to_string(kSeeds) +
             " session traces " + (trace_ok ? "identical" : "differ") + " serial vs threaded");
}

}  // namespace

int main() {
  oracle_equivalence();
  unity_monotone_pairing();
  spot_values();
  fidelity_and_rate();
  golden_trace();
  route_optimality();
  sweep_properties();
  determinism();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
