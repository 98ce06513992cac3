#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qmesh {

/// Node address; doubles as the protocol address.
enum class NodeId : std::uint32_t {};

constexpr std::size_t index_of(NodeId id) { return static_cast<std::size_t>(id); }
constexpr NodeId node_id(std::size_t index) { return static_cast<NodeId>(index); }

inline std::ostream& operator<<(std::ostream& os, NodeId id) { return os << index_of(id); }

enum class Role { Client, EdgeRoute, RouteNode };

std::string to_string(Role role);
Role role_from_string(const std::string& s);

struct Point {
  double x = 0;
  double y = 0;
};

double distance(Point a, Point b);

struct Node {
  NodeId id{};
  Point pos;
  Role role = Role::RouteNode;
  std::string name;
  std::vector<NodeId> client_list;  // EdgeRoute only
};

/// Unordered in-range pair (a < b); only established links carry traffic.
struct Link {
  NodeId a{};
  NodeId b{};
  bool established = false;
};

class Topology {
 public:
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return index_of(id) < nodes_.size(); }
  const Node& node(NodeId id) const;
  const std::string& name_of(NodeId id) const { return node(id).name; }

  const std::vector<Link>& links() const { return links_; }

  /// Nodes sharing an established link, sorted by id.
  const std::vector<NodeId>& neighbors(NodeId id) const;
  bool linked(NodeId a, NodeId b) const;

  /// Edge node a client is attached to, if its attachment link was established.
  std::optional<NodeId> attachment(NodeId client) const;

  /// Client ids in id order.
  std::vector<NodeId> clients() const;

  double range() const { return range_; }

  /// Looks a node up by name.
  std::optional<NodeId> find(const std::string& name) const;

 private:
  friend class TopologyBuilder;

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::optional<NodeId>> attachment_;
  double range_ = 0;
};

/*
 * Assembles a topology and checks its invariants on build(): established
 * links lie within range, clients link only to the node they attach to,
 * and every attachment target is promoted to EdgeRoute with the client on its
 * list. A client may attach directly to another client; that only occurs in
 * synthetic single-hop lines.
 */
class TopologyBuilder {
 public:
  explicit TopologyBuilder(double range) : range_(range) {}

  NodeId add_node(std::string name, Role role, Point pos);
  TopologyBuilder& link(NodeId a, NodeId b, bool established = true);
  TopologyBuilder& attach(NodeId client, NodeId target, bool established = true);

  Topology build() const;

 private:
  double range_;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::pair<NodeId, NodeId>> attachments_;
};

struct LinkModel {
  double range = 200;
  double link_prob = 1;
  std::uint64_t seed = 0;
  bool fallback_attach = false;     // try the next-nearest backbone node after a failed draw
  bool client_links_use_p = true;   // client attachment links are also Bernoulli(p)
};

struct TopologyConfig {
  int backbone_count = 50;
  double range = 200;
  double link_prob = 1;
  double area_side = 1000;
  std::uint64_t seed = 0;
  bool fallback_attach = false;
  bool client_links_use_p = true;

  LinkModel link_model() const { return {range, link_prob, seed, fallback_attach, client_links_use_p}; }
  void validate() const;
};

/*
 * Backbone nodes get ids 0..B-1, clients follow in the given order. Every
 * random draw is keyed on (seed, purpose, node indices), so the same seed
 * yields nested topologies as nodes are added and monotone link sets as p or
 * the range grow.
 */
Topology connect_layout(const std::vector<Point>& backbone, const std::vector<Point>& clients,
                        const LinkModel& model);

/// Uniform placement of backbone_count route nodes plus a source and a destination client.
Topology generate(const TopologyConfig& cfg);

/// Client ids of a generated topology.
inline NodeId generated_source(const TopologyConfig& cfg) { return node_id(cfg.backbone_count); }
inline NodeId generated_destination(const TopologyConfig& cfg) { return node_id(cfg.backbone_count + 1); }

/// Minimum-hop path over established links; clients never relay. Ties go to
/// the smallest next-hop id at every step.
std::optional<std::vector<NodeId>> min_hop_path(const Topology& t, NodeId src, NodeId dst);

const std::vector<NodeId>& neighbors(const Topology& t, NodeId id);

/// Straight line client - backbone... - client with `hops` links, 150 m apart.
Topology make_line(int hops);

}  // namespace qmesh
