#include "qmesh/routing/node_state.hpp"

#include <algorithm>

#include "qmesh/core/errors.hpp"

namespace qmesh {

PacketType type_of(const Packet& p) { return static_cast<PacketType>(p.index()); }

std::string to_string(PacketType t) {
  switch (t) {
    case PacketType::Qrr: return "QRR";
    case PacketType::Qrf: return "QRF";
    case PacketType::Result: return "RESULT";
    case PacketType::ExtraResult: return "EXTRA";
  }
  return "?";
}

void PacketCounts::add(PacketType t) {
  switch (t) {
    case PacketType::Qrr: ++qrr; break;
    case PacketType::Qrf: ++qrf; break;
    case PacketType::Result: ++result; break;
    case PacketType::ExtraResult: ++extra_result; break;
  }
}

NodeState::NodeState(const Node& node) : id_(node.id), role_(node.role), client_list_(node.client_list) {}

bool NodeState::selects_for(NodeId dest) const {
  if (dest == id_) return true;
  return role_ == Role::EdgeRoute && std::binary_search(client_list_.begin(), client_list_.end(), dest);
}

void NodeState::originate(const QrrPacket& pkt) { seen_.insert({pkt.source, pkt.request_id}); }

QrrDecision NodeState::handle_qrr(const QrrPacket& pkt, long tick, std::uint64_t order) {
  const RequestKey key{pkt.source, pkt.request_id};
  const bool fresh = seen_.insert(key).second;
  if (fresh) route_table_[key] = {std::nullopt, pkt.prev_node, pkt.request_id, pkt.cost, pkt.source, pkt.dest};

  // The selecting node keeps every copy; the choice among them happens later.
  if (selects_for(pkt.dest)) {
    pending_.push_back({pkt, tick, order});
    QrrDecision d;
    d.kind = QrrDecision::Buffer;
    d.first_candidate = pending_.size() == 1;
    return d;
  }
  if (!fresh || role_ == Role::Client) return {};

  QrrDecision d;
  d.kind = QrrDecision::Rebroadcast;
  d.forward = pkt;
  d.forward.cost += 1;
  d.forward.route_record.push_back(id_);
  d.forward.prev_node = id_;
  return d;
}

std::optional<Route> NodeState::select_route() const {
  if (pending_.empty()) return std::nullopt;
  const auto best = std::min_element(pending_.begin(), pending_.end(), [](const QrrCandidate& a, const QrrCandidate& b) {
    return std::pair{a.packet.cost, a.order} < std::pair{b.packet.cost, b.order};
  });
  Route route = best->packet.route_record;
  route.push_back(id_);
  if (best->packet.dest != id_) route.push_back(best->packet.dest);
  return route;
}

QrfAction NodeState::process_qrf(const QrfPacket& pkt, NodeId from, ChannelModel& channel, SessionMode mode, Rng& rng) {
  const auto it = std::find(pkt.route.begin(), pkt.route.end(), id_);
  if (it == pkt.route.end() || it + 1 == pkt.route.end()) {
    throw ProtocolError("node " + std::to_string(index_of(id_)) + " is not upstream on the reply route");
  }
  if (*(it + 1) != from) throw ProtocolError("reply arrived from a node off the reverse route");
  const auto pos = static_cast<std::size_t>(it - pkt.route.begin());

  if (auto entry = route_table_.find({pkt.route.front(), pkt.request_id}); entry != route_table_.end()) {
    entry->second.upward = from;
  }

  QrfAction action;
  if (pos == 0) {
    const BellOutcome bell = channel.measure_source(rng);
    ResultPacket result{pkt.route, pkt.log};
    result.log.push_back({bell, BitOutcome::Zero});
    action.result.emplace(pkt.route[1], std::move(result));
    return action;
  }

  const HopMeasurement h = channel.swap(rng);
  QrfPacket reply = pkt;
  if (mode == SessionMode::Piggyback) {
    reply.log.push_back(h);
  } else {
    action.extra.emplace(pkt.route[pos + 1], ExtraResultPacket{pkt.route, id_, h});
  }
  action.reply.emplace(pkt.route[pos - 1], std::move(reply));
  return action;
}

}  // namespace qmesh
