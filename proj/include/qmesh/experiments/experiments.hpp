#pragma once

#include <cstdint>
#include <vector>

#include "qmesh/chain/ghz_chain.hpp"

namespace qmesh {

enum class SuccessMode { Analytic, Sampled };

struct SweepConfig {
  std::vector<int> node_counts;
  double range = 200;
  std::vector<double> p_values;
  std::vector<double> n_values;
  int runs = 100;
  std::uint64_t master_seed = 0;
  SuccessMode success_mode = SuccessMode::Analytic;
  double area_side = 1000;
  bool fallback_attach = false;
  bool client_links_use_p = true;
  unsigned threads = 1;  // 0 = hardware concurrency

  void validate() const;
};

struct RowRecord {
  int node_count = 0;
  double range = 0;
  double p = 0;
  double n = 0;
  int runs = 0;
  double route_found_rate = 0;
  double mean_hops = 0;  // NaN when no run found a route
  double mean_p_suc = 0;
  double stderr_p_suc = 0;
  double packets_piggyback = 0;
  double packets_separate = 0;
};

struct Fig2Row {
  int i = 0;
  double n = 0;
  double p = 0;
};

struct PacketRow {
  int hops = 0;
  int piggyback = 0;
  int separate = 0;
  int piggyback_non_qrr = 0;
  int separate_non_qrr = 0;
};

/// analytic_success for i = 1..max_i, grouped by n in the given order.
std::vector<Fig2Row> fig2_data(const std::vector<double>& n_values, int max_i);

/*
 * Monte Carlo over random meshes, rows sorted by (node_count, p, n). Run r of
 * every point shares one placement and one set of link draws, so points differ
 * only in the swept parameter.
 */
std::vector<RowRecord> sweep(const SweepConfig& cfg);

/// Both result modes on a straight line of each hop count.
std::vector<PacketRow> packet_comparison(int min_hops, int max_hops);

}  // namespace qmesh
