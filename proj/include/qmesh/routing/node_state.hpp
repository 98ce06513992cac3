#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qmesh/chain/channel_model.hpp"
#include "qmesh/routing/packets.hpp"

namespace qmesh {

struct RouteTableEntry {
  std::optional<NodeId> upward;  // known once the reply passes through
  NodeId downward{};
  std::uint32_t request_id = 0;
  int cost = 0;
  NodeId source{};
  NodeId dest{};
};

using RequestKey = std::pair<NodeId, std::uint32_t>;  // (source, request_id)

struct QrrCandidate {
  QrrPacket packet;
  long arrival = 0;
  std::uint64_t order = 0;  // global arrival sequence
};

struct QrrDecision {
  enum Kind { Discard, Buffer, Rebroadcast } kind = Discard;
  QrrPacket forward;     // Rebroadcast only
  bool first_candidate = false;  // Buffer only: opens the selection window
};

enum class SessionMode { Piggyback, Separate };

struct QrfAction {
  std::optional<std::pair<NodeId, QrfPacket>> reply;          // next hop upstream
  std::optional<std::pair<NodeId, ResultPacket>> result;      // source only
  std::optional<std::pair<NodeId, ExtraResultPacket>> extra;  // separate mode swap nodes
};

class NodeState {
 public:
  explicit NodeState(const Node& node);

  NodeId id() const { return id_; }
  Role role() const { return role_; }
  const std::vector<NodeId>& client_list() const { return client_list_; }
  const std::map<RequestKey, RouteTableEntry>& route_table() const { return route_table_; }
  const std::set<RequestKey>& seen() const { return seen_; }
  const std::vector<QrrCandidate>& pending() const { return pending_; }

  /// Marks a request this node originates so echoes are dropped.
  void originate(const QrrPacket& pkt);

  QrrDecision handle_qrr(const QrrPacket& pkt, long tick, std::uint64_t order);

  /// Minimum cost, then earliest arrival. Appends [self, dest], or only [self]
  /// when this node is the destination. Empty buffer -> nullopt.
  std::optional<Route> select_route() const;

  /*
   * Reply handling on the reverse route. Swap nodes measure and pass the reply
   * upstream; the source measures its data qubit and emits the result packet.
   * `from` must be the next node toward the destination. Throws ProtocolError
   * when this node is not an upstream member of the route.
   */
  QrfAction process_qrf(const QrfPacket& pkt, NodeId from, ChannelModel& channel, SessionMode mode, Rng& rng);

 private:
  bool selects_for(NodeId dest) const;

  NodeId id_;
  Role role_;
  std::vector<NodeId> client_list_;
  std::map<RequestKey, RouteTableEntry> route_table_;
  std::set<RequestKey> seen_;
  std::vector<QrrCandidate> pending_;
};

}  // namespace qmesh
