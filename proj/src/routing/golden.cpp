#include "qmesh/routing/golden.hpp"

namespace qmesh {

Topology golden_topology() {
  TopologyBuilder b(200);
  const NodeId a = b.add_node("A", Role::Client, {0, 300});
  const NodeId bb = b.add_node("B", Role::RouteNode, {150, 300});
  const NodeId c = b.add_node("C", Role::RouteNode, {300, 420});
  const NodeId d = b.add_node("D", Role::RouteNode, {300, 300});
  const NodeId e = b.add_node("E", Role::RouteNode, {300, 180});
  const NodeId f = b.add_node("F", Role::RouteNode, {450, 420});
  const NodeId g = b.add_node("G", Role::RouteNode, {450, 250});
  const NodeId h = b.add_node("H", Role::Client, {600, 250});
  b.attach(a, bb).attach(h, g);
  b.link(bb, c).link(bb, d).link(bb, e);
  b.link(c, d).link(d, e).link(c, f).link(d, f);
  b.link(d, g).link(e, g).link(f, g);
  return b.build();
}

}  // namespace qmesh
