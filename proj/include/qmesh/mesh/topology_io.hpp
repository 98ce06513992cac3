#pragma once

#include <string>
#include <string_view>

#include "qmesh/mesh/topology.hpp"

namespace qmesh {

/// JSON document: range, nodes (id, name, x, y, role), links, attachments.
std::string topology_to_json(const Topology& t);

/// Inverse of topology_to_json; throws ParameterError on malformed input.
Topology topology_from_json(std::string_view text);

Topology load_topology(const std::string& path);

}  // namespace qmesh
