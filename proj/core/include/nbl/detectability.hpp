#pragma once

#include <cstddef>
#include <optional>

#include "nbl/graph.hpp"
#include "nbl/reduced_graph.hpp"

namespace nbl {

struct Condition1Result {
  bool holds = false;
  std::optional<ReducedGraph> witness;  // a reduced graph with two or more source components
};

// Labelled node partition; left and right are non-empty.
struct Partition {
  NodeMask left = 0;
  NodeMask right = 0;
  NodeMask center = 0;
};

struct Condition2Result {
  bool holds = false;
  std::optional<Partition> witness;  // a partition where neither clause holds
};

// Every reduced graph has exactly one source component.
//
// Removing edges never merges source components and removing a sink never
// creates one, so the search only visits subgraphs with the maximum number
// of in-links removed at every node and no sink removed. Any witness found
// is itself a reduced graph.
Condition1Result check_condition1(const DirectedGraph& g, int f,
                                  const EnumerationLimits& limits = {});

// Same predicate evaluated over the full deduplicated enumeration.
Condition1Result check_condition1_exhaustive(const ReducedGraphCatalog& catalog);

// For every partition (L, R, C) with L, R non-empty, some i in L has at least
// f+1 in-neighbors in R u C, or some j in R has at least f+1 in-neighbors in
// L u C. Throws BudgetError when n exceeds limits.max_partition_nodes.
Condition2Result check_condition2(const DirectedGraph& g, int f,
                                  const EnumerationLimits& limits = {});

struct DetectabilityReport {
  int n = 0;
  int f = 0;
  bool condition1_holds = false;
  bool condition2_holds = false;
  std::size_t chi = 0;  // distinct reduced graphs
  int gamma = 0;        // smallest source component over all reduced graphs
  int xi_denominator = 1;  // xi = 1 / xi_denominator = 1 / (1 + max in-degree)
  std::optional<ReducedGraph> condition1_witness;
  std::optional<Partition> condition2_witness;

  double xi() const { return 1.0 / xi_denominator; }
  // n * chi, the block length of the contraction argument.
  double block_length() const { return static_cast<double>(n) * static_cast<double>(chi); }
  // xi^(n chi); underflows to 0 for large catalogs.
  double xi_power() const;
  double log_xi_power() const;
  // min{1, (1 - xi^(n chi))^(floor(span / (n chi)) - f)}, span = t - r + 1.
  double consensus_bound(long long span) const;
};

// Throws InvariantViolation if the two conditions disagree.
DetectabilityReport detectability_report(const DirectedGraph& g, int f,
                                         const EnumerationLimits& limits = {});
DetectabilityReport detectability_report(const DirectedGraph& g, const ReducedGraphCatalog& catalog,
                                         const EnumerationLimits& limits = {});

}  // namespace nbl
