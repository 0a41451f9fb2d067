#include <array>

#include "nbl/errors.hpp"
#include "nbl/graph.hpp"

namespace nbl {
namespace {

// Closure of `start` under the successor relation given by `next` masks.
NodeMask closure(NodeId start, const std::array<NodeMask, kMaxMaskNodes>& next) {
  NodeMask seen = bit(start);
  NodeMask frontier = seen;
  while (frontier != 0) {
    NodeMask grow = 0;
    for (NodeMask f = frontier; f != 0; f &= f - 1) grow |= next[std::countr_zero(f)];
    frontier = grow & ~seen;
    seen |= frontier;
  }
  return seen;
}

}  // namespace

SourceDecomposition strongly_connected_components(const MaskGraph& g) {
  if (g.nodes == 0) throw PreconditionError("strongly_connected_components: empty graph");
  if (g.n > kMaxMaskNodes) throw PreconditionError("mask graphs hold at most 32 nodes");

  std::array<NodeMask, kMaxMaskNodes> pred{};
  std::array<NodeMask, kMaxMaskNodes> succ{};
  for (NodeId i : members(g.nodes)) {
    pred[i] = g.in[i] & g.nodes;
    for (NodeMask p = pred[i]; p != 0; p &= p - 1) succ[std::countr_zero(p)] |= bit(i);
  }

  SourceDecomposition out;
  NodeMask unassigned = g.nodes;
  while (unassigned != 0) {
    NodeId v = std::countr_zero(unassigned);
    NodeMask component = closure(v, succ) & closure(v, pred);
    out.components.push_back(component);
    unassigned &= ~component;

    NodeMask entering = 0;
    for (NodeMask c = component; c != 0; c &= c - 1) entering |= pred[std::countr_zero(c)];
    if ((entering & ~component) == 0) out.source_components.push_back(component);
  }
  return out;
}

}  // namespace nbl
