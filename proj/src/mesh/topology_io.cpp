#include "qmesh/mesh/topology_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmesh/core/errors.hpp"

namespace qmesh {

using nlohmann::json;

std::string topology_to_json(const Topology& t) {
  json doc;
  doc["range"] = t.range();
  json nodes = json::array();
  for (const Node& n : t.nodes()) {
    nodes.push_back({{"id", index_of(n.id)}, {"name", n.name}, {"x", n.pos.x}, {"y", n.pos.y}, {"role", to_string(n.role)}});
  }
  doc["nodes"] = std::move(nodes);
  json links = json::array();
  for (const Link& l : t.links()) {
    links.push_back({{"a", index_of(l.a)}, {"b", index_of(l.b)}, {"established", l.established}});
  }
  doc["links"] = std::move(links);
  json attachments = json::array();
  for (NodeId c : t.clients()) {
    if (auto edge = t.attachment(c)) attachments.push_back({{"client", index_of(c)}, {"edge", index_of(*edge)}});
  }
  doc["attachments"] = std::move(attachments);
  return doc.dump(2) + "\n";
}

Topology topology_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    TopologyBuilder b(doc.at("range").get<double>());
    std::size_t expected = 0;
    for (const auto& n : doc.at("nodes")) {
      if (n.at("id").get<std::size_t>() != expected++) throw ParameterError("node ids must be 0..N-1 in order");
      // Promotion to edge happens through attachments.
      Role role = role_from_string(n.at("role").get<std::string>());
      if (role == Role::EdgeRoute) role = Role::RouteNode;
      b.add_node(n.at("name").get<std::string>(), role, {n.at("x").get<double>(), n.at("y").get<double>()});
    }
    std::vector<std::pair<std::size_t, std::size_t>> attached;
    for (const auto& a : doc.value("attachments", json::array())) {
      attached.emplace_back(a.at("client").get<std::size_t>(), a.at("edge").get<std::size_t>());
    }
    auto is_attachment = [&](std::size_t x, std::size_t y) {
      for (auto [c, e] : attached)
        if ((c == x && e == y) || (c == y && e == x)) return true;
      return false;
    };
    for (const auto& l : doc.at("links")) {
      const auto a = l.at("a").get<std::size_t>();
      const auto c = l.at("b").get<std::size_t>();
      const bool up = l.value("established", true);
      if (up && is_attachment(a, c)) continue;
      b.link(node_id(a), node_id(c), up);
    }
    for (auto [c, e] : attached) b.attach(node_id(c), node_id(e));
    return b.build();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed topology: ") + e.what());
  }
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read topology file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return topology_from_json(ss.str());
}

}  // namespace qmesh
