#pragma once

#include "qmesh/mesh/topology.hpp"

namespace qmesh {

/*
 * Eight-node reference mesh used by `route --golden-example`. Ids 0..7 carry
 * names A..H: client A attaches to edge B, client H to edge G, and C, D, E, F
 * form the backbone between them.
 */
Topology golden_topology();

inline constexpr NodeId kGoldenSource = node_id(0);
inline constexpr NodeId kGoldenDestination = node_id(7);

}  // namespace qmesh
