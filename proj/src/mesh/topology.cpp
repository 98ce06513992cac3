#include "qmesh/mesh/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "qmesh/core/errors.hpp"
#include "qmesh/core/random.hpp"

namespace qmesh {
namespace {

enum Purpose : std::uint64_t { kBackbonePos = 1, kClientPos = 2, kBackboneLink = 3, kClientLink = 4 };

double draw(std::uint64_t seed, Purpose purpose, std::uint64_t a, std::uint64_t b) {
  return unit_from_bits(mix_keys(seed, {purpose, a, b}));
}

std::pair<NodeId, NodeId> ordered(NodeId a, NodeId b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

std::string to_string(Role role) {
  switch (role) {
    case Role::Client: return "client";
    case Role::EdgeRoute: return "edge";
    case Role::RouteNode: return "route";
  }
  return "?";
}

Role role_from_string(const std::string& s) {
  if (s == "client") return Role::Client;
  if (s == "edge") return Role::EdgeRoute;
  if (s == "route") return Role::RouteNode;
  throw ParameterError("unknown node role '" + s + "'");
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

const Node& Topology::node(NodeId id) const {
  if (!contains(id)) throw ParameterError("unknown node id " + std::to_string(index_of(id)));
  return nodes_[index_of(id)];
}

const std::vector<NodeId>& Topology::neighbors(NodeId id) const {
  node(id);
  return adjacency_[index_of(id)];
}

bool Topology::linked(NodeId a, NodeId b) const {
  const auto& adj = neighbors(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::optional<NodeId> Topology::attachment(NodeId client) const {
  node(client);
  return attachment_[index_of(client)];
}

std::vector<NodeId> Topology::clients() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.role == Role::Client) out.push_back(n.id);
  return out;
}

std::optional<NodeId> Topology::find(const std::string& name) const {
  for (const auto& n : nodes_)
    if (n.name == name) return n.id;
  return std::nullopt;
}

NodeId TopologyBuilder::add_node(std::string name, Role role, Point pos) {
  const NodeId id = node_id(nodes_.size());
  nodes_.push_back({id, pos, role, std::move(name), {}});
  return id;
}

TopologyBuilder& TopologyBuilder::link(NodeId a, NodeId b, bool established) {
  if (a == b) throw ParameterError("self link");
  if (index_of(a) >= nodes_.size() || index_of(b) >= nodes_.size()) throw ParameterError("link to unknown node");
  auto [lo, hi] = ordered(a, b);
  links_.push_back({lo, hi, established});
  return *this;
}

TopologyBuilder& TopologyBuilder::attach(NodeId client, NodeId target, bool established) {
  link(client, target, established);
  if (established) attachments_.emplace_back(client, target);
  return *this;
}

Topology TopologyBuilder::build() const {
  Topology t;
  t.range_ = range_;
  t.nodes_ = nodes_;
  t.adjacency_.assign(nodes_.size(), {});
  t.attachment_.assign(nodes_.size(), std::nullopt);

  for (const auto& [client, target] : attachments_) {
    if (t.nodes_[index_of(client)].role != Role::Client) throw ParameterError("only clients attach to edge nodes");
    if (t.attachment_[index_of(client)]) throw ParameterError("client attached twice");
    t.attachment_[index_of(client)] = target;
    Node& edge = t.nodes_[index_of(target)];
    if (edge.role == Role::RouteNode) edge.role = Role::EdgeRoute;
    if (edge.role == Role::EdgeRoute) edge.client_list.push_back(client);
  }

  std::vector<Link> links = links_;
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return ordered(x.a, x.b) < ordered(y.a, y.b); });
  for (const Link& l : links) {
    const Node& a = t.nodes_[index_of(l.a)];
    const Node& b = t.nodes_[index_of(l.b)];
    if (distance(a.pos, b.pos) > range_ + 1e-9) {
      throw ParameterError("link " + a.name + "-" + b.name + " exceeds the transmission range");
    }
    if (!l.established) continue;
    auto attached_to = [&](const Node& c, const Node& other) {
      return t.attachment_[index_of(c.id)] == other.id;
    };
    if (a.role == Role::Client && !attached_to(a, b) && !(b.role == Role::Client && attached_to(b, a))) {
      throw ParameterError("client " + a.name + " links to a node it is not attached to");
    }
    if (b.role == Role::Client && !attached_to(b, a) && !(a.role == Role::Client && attached_to(a, b))) {
      throw ParameterError("client " + b.name + " links to a node it is not attached to");
    }
    t.adjacency_[index_of(l.a)].push_back(l.b);
    t.adjacency_[index_of(l.b)].push_back(l.a);
  }
  for (auto& adj : t.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  for (auto& n : t.nodes_) std::sort(n.client_list.begin(), n.client_list.end());
  t.links_ = std::move(links);
  return t;
}

void TopologyConfig::validate() const {
  if (backbone_count < 1) throw ParameterError("backbone_count must be at least 1");
  if (!(range > 0)) throw ParameterError("range must be positive");
  if (!(link_prob >= 0 && link_prob <= 1)) throw ParameterError("link probability must lie in [0, 1]");
  if (!(area_side > 0)) throw ParameterError("area side must be positive");
}

Topology connect_layout(const std::vector<Point>& backbone, const std::vector<Point>& clients,
                        const LinkModel& model) {
  TopologyBuilder b(model.range);
  for (std::size_t i = 0; i < backbone.size(); ++i) b.add_node("n" + std::to_string(i), Role::RouteNode, backbone[i]);
  const char* client_names[] = {"src", "dst"};
  for (std::size_t c = 0; c < clients.size(); ++c) {
    b.add_node(c < 2 ? client_names[c] : "c" + std::to_string(c), Role::Client, clients[c]);
  }

  for (std::size_t i = 0; i < backbone.size(); ++i) {
    for (std::size_t j = i + 1; j < backbone.size(); ++j) {
      if (distance(backbone[i], backbone[j]) > model.range) continue;
      b.link(node_id(i), node_id(j), draw(model.seed, kBackboneLink, i, j) < model.link_prob);
    }
  }

  for (std::size_t c = 0; c < clients.size(); ++c) {
    std::vector<std::pair<double, std::size_t>> candidates;
    for (std::size_t i = 0; i < backbone.size(); ++i) {
      const double d = distance(clients[c], backbone[i]);
      if (d <= model.range) candidates.emplace_back(d, i);
    }
    std::sort(candidates.begin(), candidates.end());
    const NodeId client = node_id(backbone.size() + c);
    for (const auto& [d, i] : candidates) {
      const bool up = !model.client_links_use_p || draw(model.seed, kClientLink, c, i) < model.link_prob;
      b.attach(client, node_id(i), up);
      if (up || !model.fallback_attach) break;
    }
  }
  return b.build();
}

Topology generate(const TopologyConfig& cfg) {
  cfg.validate();
  std::vector<Point> backbone(cfg.backbone_count);
  for (int i = 0; i < cfg.backbone_count; ++i) {
    backbone[i] = {cfg.area_side * draw(cfg.seed, kBackbonePos, i, 0), cfg.area_side * draw(cfg.seed, kBackbonePos, i, 1)};
  }
  std::vector<Point> clients(2);
  for (int c = 0; c < 2; ++c) {
    clients[c] = {cfg.area_side * draw(cfg.seed, kClientPos, c, 0), cfg.area_side * draw(cfg.seed, kClientPos, c, 1)};
  }
  return connect_layout(backbone, clients, cfg.link_model());
}

std::optional<std::vector<NodeId>> min_hop_path(const Topology& t, NodeId src, NodeId dst) {
  t.node(src);
  t.node(dst);
  if (src == dst) throw ParameterError("source and destination must differ");

  // Distances toward dst; clients other than the endpoints are dead ends.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(t.size(), kUnreached);
  std::deque<NodeId> queue{dst};
  dist[index_of(dst)] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (u != dst && t.node(u).role == Role::Client) continue;
    for (NodeId v : t.neighbors(u)) {
      if (dist[index_of(v)] != kUnreached) continue;
      dist[index_of(v)] = dist[index_of(u)] + 1;
      if (v == src) break;
      queue.push_back(v);
    }
  }
  if (dist[index_of(src)] == kUnreached) return std::nullopt;

  std::vector<NodeId> path{src};
  NodeId at = src;
  while (at != dst) {
    const int want = dist[index_of(at)] - 1;
    for (NodeId v : t.neighbors(at)) {  // sorted: first match is the smallest id
      if (dist[index_of(v)] != want) continue;
      if (v != dst && t.node(v).role == Role::Client) continue;
      at = v;
      break;
    }
    path.push_back(at);
  }
  return path;
}

const std::vector<NodeId>& neighbors(const Topology& t, NodeId id) { return t.neighbors(id); }

Topology make_line(int hops) {
  if (hops < 1) throw ParameterError("a line needs at least one hop");
  constexpr double kSpacing = 150;
  TopologyBuilder b(kSpacing);
  const NodeId src = b.add_node("src", Role::Client, {0, 0});
  std::vector<NodeId> backbone;
  for (int i = 1; i < hops; ++i) {
    backbone.push_back(b.add_node("n" + std::to_string(i), Role::RouteNode, {kSpacing * i, 0}));
  }
  const NodeId dst = b.add_node("dst", Role::Client, {kSpacing * hops, 0});
  if (backbone.empty()) {
    b.attach(src, dst);
    return b.build();
  }
  b.attach(src, backbone.front());
  for (std::size_t i = 0; i + 1 < backbone.size(); ++i) b.link(backbone[i], backbone[i + 1]);
  b.attach(dst, backbone.back());
  return b.build();
}

}  // namespace qmesh
