#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmesh/routing/node_state.hpp"

namespace qmesh {

enum class QuantumMode { Tracked, Exact };

std::string to_string(SessionMode m);
std::string to_string(QuantumMode m);

using LinkDelay = std::function<long(NodeId from, NodeId to)>;

struct SimConfig {
  EntanglementDegree n{1.0};
  SessionMode mode = SessionMode::Piggyback;
  QuantumMode quantum = QuantumMode::Tracked;
  long selection_window = 0;
  std::uint32_t request_id = 1;
  LinkDelay link_delay;  // unset: one tick per hop
  bool record_trace = false;
  PauliTable table = correction_table();  // exact mode only
};

struct TraceEvent {
  long tick = 0;
  std::string type;
  NodeId from{};
  std::optional<NodeId> to;  // none for broadcasts and markers
  std::string summary;
};

struct SessionReport {
  std::optional<Route> route;
  int hops = 0;
  bool success = false;
  std::optional<double> fidelity;  // exact mode, successful sessions
  PacketCounts packets;
  long completion_time = 0;
  SessionMode mode = SessionMode::Piggyback;
  MeasurementLog log;             // as used for recovery
  Route qrf_path;                 // nodes the reply visited, in order
  double attempt_prob = 0;
  std::vector<TraceEvent> trace;
};

/// Simulates one request from client src to client dst.
SessionReport run_session(const Topology& t, NodeId src, NodeId dst, const StateVector& input,
                          const SimConfig& cfg, Rng& rng);

/// Tab-separated lines: tick, type, from, to ("*" for broadcasts, "-" for markers), summary.
std::string format_trace(const SessionReport& r, const Topology& t);

std::string format_route(const Route& route, const Topology& t, const char* sep = "-");
std::string format_log(const MeasurementLog& log);

}  // namespace qmesh
