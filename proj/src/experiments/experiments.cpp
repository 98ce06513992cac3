#include "qmesh/experiments/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <tuple>

#include "qmesh/core/errors.hpp"
#include "qmesh/core/random.hpp"
#include "qmesh/mesh/topology.hpp"
#include "qmesh/routing/session.hpp"

namespace qmesh {
namespace {

enum Stream : std::uint64_t { kTopology = 11, kPackets = 12, kSample = 13 };

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

StateVector random_input(Rng& rng) {
  const double cos_theta = 2 * uniform01(rng) - 1;
  const double phi = 2 * M_PI * uniform01(rng);
  const double a = std::sqrt((1 + cos_theta) / 2);
  const double b = std::sqrt((1 - cos_theta) / 2);
  return new_qubit(Complex(a), std::polar(b, phi));
}

struct Stats {
  double mean = 0;
  double stderr_mean = 0;
};

Stats summarize(const std::vector<double>& xs) {
  Stats s;
  const auto count = static_cast<double>(xs.size());
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_mean = std::sqrt(ss / (count - 1)) / std::sqrt(count);
  }
  return s;
}

// All n values for one (node_count, p) point.
std::vector<RowRecord> sweep_point(const SweepConfig& cfg, int node_count, double p) {
  const std::size_t n_count = cfg.n_values.size();
  std::vector<std::vector<double>> contrib(n_count, std::vector<double>(cfg.runs, 0.0));
  int found = 0;
  long hop_sum = 0;
  long pig_sum = 0;
  long sep_sum = 0;

  for (int r = 0; r < cfg.runs; ++r) {
    TopologyConfig tc;
    tc.backbone_count = node_count;
    tc.range = cfg.range;
    tc.link_prob = p;
    tc.area_side = cfg.area_side;
    tc.seed = mix_keys(cfg.master_seed, {kTopology, static_cast<std::uint64_t>(r)});
    tc.fallback_attach = cfg.fallback_attach;
    tc.client_links_use_p = cfg.client_links_use_p;
    const Topology t = generate(tc);
    const NodeId src = generated_source(tc);
    const NodeId dst = generated_destination(tc);

    const auto path = min_hop_path(t, src, dst);
    const int hops = path ? static_cast<int>(path->size()) - 1 : 0;
    if (path) {
      ++found;
      hop_sum += hops;
    }

    {
      Rng rng(mix_keys(cfg.master_seed, {kPackets, static_cast<std::uint64_t>(node_count), bits(p),
                                         static_cast<std::uint64_t>(r)}));
      SimConfig sim;
      const StateVector input = random_input(rng);
      pig_sum += run_session(t, src, dst, input, sim, rng).packets.total();
      sim.mode = SessionMode::Separate;
      sep_sum += run_session(t, src, dst, input, sim, rng).packets.total();
    }

    for (std::size_t k = 0; k < n_count; ++k) {
      const EntanglementDegree n(cfg.n_values[k]);
      if (cfg.success_mode == SuccessMode::Analytic) {
        contrib[k][r] = path ? analytic_success(hops, n) : 0.0;
      } else {
        Rng rng(mix_keys(cfg.master_seed, {kSample, static_cast<std::uint64_t>(node_count), bits(p),
                                           bits(cfg.n_values[k]), static_cast<std::uint64_t>(r)}));
        SimConfig sim;
        sim.n = n;
        const StateVector input = random_input(rng);
        contrib[k][r] = run_session(t, src, dst, input, sim, rng).success ? 1.0 : 0.0;
      }
    }
  }

  std::vector<RowRecord> rows;
  const double runs = cfg.runs;
  for (std::size_t k = 0; k < n_count; ++k) {
    const Stats s = summarize(contrib[k]);
    RowRecord row;
    row.node_count = node_count;
    row.range = cfg.range;
    row.p = p;
    row.n = cfg.n_values[k];
    row.runs = cfg.runs;
    row.route_found_rate = found / runs;
    row.mean_hops = found ? static_cast<double>(hop_sum) / found : std::numeric_limits<double>::quiet_NaN();
    row.mean_p_suc = s.mean;
    row.stderr_p_suc = s.stderr_mean;
    row.packets_piggyback = static_cast<double>(pig_sum) / runs;
    row.packets_separate = static_cast<double>(sep_sum) / runs;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void SweepConfig::validate() const {
  if (node_counts.empty()) throw ParameterError("at least one node count is required");
  for (int c : node_counts)
    if (c < 1) throw ParameterError("node counts must be at least 1");
  if (!(range > 0)) throw ParameterError("range must be positive");
  if (!(area_side > 0)) throw ParameterError("area side must be positive");
  if (p_values.empty() || n_values.empty()) throw ParameterError("p and n lists must be non-empty");
  for (double p : p_values)
    if (!(p >= 0 && p <= 1)) throw ParameterError("p values must lie in [0, 1]");
  for (double n : n_values) EntanglementDegree{n};
  if (runs < 1) throw ParameterError("runs must be at least 1");
}

std::vector<Fig2Row> fig2_data(const std::vector<double>& n_values, int max_i) {
  if (max_i < 1) throw ParameterError("max_i must be at least 1");
  std::vector<Fig2Row> rows;
  for (double nv : n_values) {
    const EntanglementDegree n(nv);
    for (int i = 1; i <= max_i; ++i) rows.push_back({i, nv, analytic_success(i, n)});
  }
  return rows;
}

std::vector<RowRecord> sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Task {
    int node_count;
    double p;
  };
  std::vector<Task> tasks;
  for (int c : cfg.node_counts)
    for (double p : cfg.p_values) tasks.push_back({c, p});

  std::vector<std::vector<RowRecord>> results(tasks.size());
  unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      if (failed) return;
      try {
        results[i] = sweep_point(cfg, tasks[i].node_count, tasks[i].p);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RowRecord> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  std::stable_sort(rows.begin(), rows.end(), [](const RowRecord& a, const RowRecord& b) {
    return std::tie(a.node_count, a.p, a.n) < std::tie(b.node_count, b.p, b.n);
  });
  return rows;
}

std::vector<PacketRow> packet_comparison(int min_hops, int max_hops) {
  if (min_hops < 1 || max_hops < min_hops) throw ParameterError("hop range must satisfy 1 <= min <= max");
  std::vector<PacketRow> rows;
  const StateVector input = new_qubit(Complex(1), Complex(0));
  for (int h = min_hops; h <= max_hops; ++h) {
    const Topology line = make_line(h);
    SimConfig sim;
    Rng rng(mix_keys(0, {kPackets, static_cast<std::uint64_t>(h)}));
    const PacketCounts pig = run_session(line, node_id(0), node_id(h), input, sim, rng).packets;
    sim.mode = SessionMode::Separate;
    const PacketCounts sep = run_session(line, node_id(0), node_id(h), input, sim, rng).packets;
    rows.push_back({h, pig.total(), sep.total(), pig.total() - pig.qrr, sep.total() - sep.qrr});
  }
  return rows;
}

}  // namespace qmesh
