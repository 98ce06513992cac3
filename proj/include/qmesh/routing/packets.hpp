#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qmesh/chain/ghz_chain.hpp"
#include "qmesh/mesh/topology.hpp"

namespace qmesh {

using Route = std::vector<NodeId>;

/// Route request. The record starts as [source] with cost 0, so cost = record length - 1.
struct QrrPacket {
  NodeId source{};
  NodeId dest{};
  std::uint32_t request_id = 0;
  NodeId prev_node{};
  int cost = 0;
  Route route_record;
};

/// Route reply travelling destination to source; log holds swap results, destination side first.
struct QrfPacket {
  Route route;
  std::uint32_t request_id = 0;
  MeasurementLog log;
};

/// Forward packet from the source. The last pair is the source Bell result with
/// a placeholder Hadamard bit that the destination overwrites.
struct ResultPacket {
  Route route;
  MeasurementLog log;
};

/// One swap node's measurement sent on its own (separate-results mode).
struct ExtraResultPacket {
  Route route;
  NodeId origin{};
  HopMeasurement measurement;
};

using Packet = std::variant<QrrPacket, QrfPacket, ResultPacket, ExtraResultPacket>;

enum class PacketType { Qrr, Qrf, Result, ExtraResult };

PacketType type_of(const Packet& p);
std::string to_string(PacketType t);

struct PacketCounts {
  int qrr = 0;
  int qrf = 0;
  int result = 0;
  int extra_result = 0;

  int total() const { return qrr + qrf + result + extra_result; }
  void add(PacketType t);
  bool operator==(const PacketCounts&) const = default;
};

}  // namespace qmesh
