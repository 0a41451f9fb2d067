#include "nbl/reduced_graph.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_set>

#include "nbl/errors.hpp"

namespace nbl {
namespace {

// Subsets of `set` with popcount in [lo, hi], in increasing numeric order.
void collect_subsets(const std::vector<NodeId>& items, std::size_t from, NodeMask chosen, int size,
                     int lo, int hi, std::vector<NodeMask>& out) {
  if (size >= lo) out.push_back(chosen);
  if (size == hi) return;
  for (std::size_t k = from; k < items.size(); ++k)
    collect_subsets(items, k + 1, chosen | bit(items[k]), size + 1, lo, hi, out);
}

std::vector<NodeMask> subsets_of(NodeMask set, int lo, int hi) {
  std::vector<NodeMask> out;
  collect_subsets(members(set), 0, 0, 0, lo, hi, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t saturating_product(const std::vector<std::vector<NodeMask>>& choices) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t product = 1;
  for (const auto& c : choices) {
    if (c.empty()) return 0;
    if (product > kMax / c.size()) return kMax;
    product *= c.size();
  }
  return product;
}

void check_inputs(const DirectedGraph& g, int f) {
  if (f < 0) throw PreconditionError("f must be non-negative");
  if (g.size() > kMaxMaskNodes) {
    throw PreconditionError("reduced-graph enumeration supports at most 32 nodes");
  }
}

// Odometer over per-node removal choices; calls visit(removed) for each combination.
template <typename Visit>
void for_each_removal(const std::vector<std::vector<NodeMask>>& choices, Visit&& visit) {
  const std::size_t n = choices.size();
  std::vector<std::size_t> digit(n, 0);
  std::vector<NodeMask> removed(n);
  for (std::size_t i = 0; i < n; ++i) removed[i] = choices[i][0];
  while (true) {
    if (!visit(removed)) return;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++digit[i] < choices[i].size()) {
        removed[i] = choices[i][digit[i]];
        break;
      }
      digit[i] = 0;
      removed[i] = choices[i][0];
    }
    if (i == n) return;
  }
}

struct MaskGraphHash {
  std::size_t operator()(const MaskGraph& g) const noexcept {
    std::size_t h = std::hash<NodeMask>{}(g.nodes);
    for (NodeMask m : g.in) h = h * 1000003U ^ std::hash<NodeMask>{}(m);
    return h;
  }
};

}  // namespace

std::vector<ReducedGraph> enumerate_reduced_graphs(const DirectedGraph& g, int f,
                                                   const EnumerationLimits& limits) {
  check_inputs(g, f);
  const int n = g.size();
  const MaskGraph base = MaskGraph::from(g);

  std::vector<std::vector<NodeMask>> choices(n);
  for (NodeId i = 0; i < n; ++i) choices[i] = subsets_of(base.in[i], 0, f);
  const std::size_t link_choices = saturating_product(choices);
  if (link_choices > limits.max_candidates) {
    throw BudgetError("reduced-graph enumeration needs " + std::to_string(link_choices) +
                      " link-removal choices (cap " + std::to_string(limits.max_candidates) + ")");
  }

  std::vector<ReducedGraph> out;
  std::unordered_set<MaskGraph, MaskGraphHash> seen;
  std::size_t candidates = 0;

  for_each_removal(choices, [&](const std::vector<NodeMask>& removed) {
    MaskGraph after_links = base;
    for (NodeId i = 0; i < n; ++i) after_links.in[i] &= ~removed[i];

    const NodeMask sinks = after_links.sinks();
    for (NodeMask drop : subsets_of(sinks, 0, f)) {
      if (drop == base.nodes) continue;  // never remove every node
      if (++candidates > limits.max_candidates) {
        throw BudgetError("reduced-graph enumeration exceeded " +
                          std::to_string(limits.max_candidates) + " candidates");
      }
      MaskGraph h = after_links;
      h.nodes &= ~drop;
      for (NodeId i = 0; i < n; ++i) h.in[i] = contains(h.nodes, i) ? (h.in[i] & h.nodes) : 0;
      if (seen.insert(h).second) out.push_back(ReducedGraph{std::move(h), removed, drop});
    }
    return true;
  });
  return out;
}

std::size_t for_each_maximal_link_removal(const DirectedGraph& g, int f,
                                          const EnumerationLimits& limits,
                                          const std::function<bool(const ReducedGraph&)>& visit) {
  check_inputs(g, f);
  const int n = g.size();
  const MaskGraph base = MaskGraph::from(g);

  std::vector<std::vector<NodeMask>> choices(n);
  for (NodeId i = 0; i < n; ++i) {
    const int k = std::min(f, popcount(base.in[i]));
    choices[i] = subsets_of(base.in[i], k, k);
  }
  const std::size_t total = saturating_product(choices);
  if (total > limits.max_candidates) {
    throw BudgetError("maximal link-removal search needs " + std::to_string(total) +
                      " candidates (cap " + std::to_string(limits.max_candidates) + ")");
  }

  std::size_t visited = 0;
  ReducedGraph h{base, std::vector<NodeMask>(n, 0), 0};
  for_each_removal(choices, [&](const std::vector<NodeMask>& removed) {
    ++visited;
    for (NodeId i = 0; i < n; ++i) h.graph.in[i] = base.in[i] & ~removed[i];
    h.removed_in_links = removed;
    return visit(h);
  });
  return visited;
}

ReducedGraphCatalog::ReducedGraphCatalog(const DirectedGraph& g, int f,
                                         const EnumerationLimits& limits)
    : n_(g.size()), f_(f), graphs_(enumerate_reduced_graphs(g, f, limits)) {
  decompositions_.reserve(graphs_.size());
  for (const auto& h : graphs_) decompositions_.push_back(strongly_connected_components(h.graph));
}

}  // namespace nbl
