#include "nbl/detectability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbl/errors.hpp"

namespace nbl {

Condition1Result check_condition1(const DirectedGraph& g, int f, const EnumerationLimits& limits) {
  Condition1Result result{true, std::nullopt};
  for_each_maximal_link_removal(g, f, limits, [&](const ReducedGraph& h) {
    if (strongly_connected_components(h.graph).source_components.size() != 1) {
      result.holds = false;
      result.witness = h;
      return false;
    }
    return true;
  });
  return result;
}

Condition1Result check_condition1_exhaustive(const ReducedGraphCatalog& catalog) {
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    if (catalog.decomposition(k).source_components.size() != 1) {
      return {false, catalog.graph(k)};
    }
  }
  return {true, std::nullopt};
}

Condition2Result check_condition2(const DirectedGraph& g, int f, const EnumerationLimits& limits) {
  if (f < 0) throw PreconditionError("f must be non-negative");
  const int n = g.size();
  if (n > limits.max_partition_nodes || n > kMaxMaskNodes) {
    throw BudgetError("Condition 2 check limited to " + std::to_string(limits.max_partition_nodes) +
                      " nodes (got " + std::to_string(n) + ")");
  }
  std::vector<NodeMask> in(n);
  for (NodeId i = 0; i < n; ++i) in[i] = g.in_mask(i);

  // Each node carries a base-3 digit: 0 = C, 1 = L, 2 = R.
  std::vector<int> digit(n, 0);
  while (true) {
    NodeMask left = 0, right = 0, center = 0;
    for (NodeId i = 0; i < n; ++i) {
      (digit[i] == 1 ? left : digit[i] == 2 ? right : center) |= bit(i);
    }
    if (left != 0 && right != 0) {
      bool satisfied = false;
      for (NodeId i : members(left))
        if (popcount(in[i] & (right | center)) >= f + 1) { satisfied = true; break; }
      if (!satisfied)
        for (NodeId j : members(right))
          if (popcount(in[j] & (left | center)) >= f + 1) { satisfied = true; break; }
      if (!satisfied) return {false, Partition{left, right, center}};
    }
    int i = 0;
    for (; i < n; ++i) {
      if (++digit[i] < 3) break;
      digit[i] = 0;
    }
    if (i == n) break;
  }
  return {true, std::nullopt};
}

double DetectabilityReport::log_xi_power() const {
  return block_length() * std::log(xi());
}

double DetectabilityReport::xi_power() const { return std::exp(log_xi_power()); }

double DetectabilityReport::consensus_bound(long long span) const {
  const double block = block_length();
  if (block <= 0) return 1.0;
  const double exponent = std::floor(static_cast<double>(span) / block) - f;
  if (exponent <= 0) return 1.0;
  const double x = xi_power();
  if (x >= 1.0) return 0.0;
  return std::min(1.0, std::exp(exponent * std::log1p(-x)));
}

DetectabilityReport detectability_report(const DirectedGraph& g, int f,
                                         const EnumerationLimits& limits) {
  ReducedGraphCatalog catalog(g, f, limits);
  return detectability_report(g, catalog, limits);
}

DetectabilityReport detectability_report(const DirectedGraph& g, const ReducedGraphCatalog& catalog,
                                         const EnumerationLimits& limits) {
  DetectabilityReport report;
  report.n = g.size();
  report.f = catalog.f();
  report.chi = catalog.size();
  report.xi_denominator = 1 + g.max_in_degree();

  const Condition1Result c1 = check_condition1_exhaustive(catalog);
  const Condition2Result c2 = check_condition2(g, catalog.f(), limits);
  report.condition1_holds = c1.holds;
  report.condition1_witness = c1.witness;
  report.condition2_holds = c2.holds;
  report.condition2_witness = c2.witness;
  if (report.condition1_holds != report.condition2_holds) {
    throw InvariantViolation("Condition 1 and Condition 2 disagree on a " + std::to_string(g.size()) +
                             "-node graph with f=" + std::to_string(catalog.f()));
  }

  int gamma = std::numeric_limits<int>::max();
  for (std::size_t k = 0; k < catalog.size(); ++k)
    for (NodeMask s : catalog.decomposition(k).source_components) gamma = std::min(gamma, popcount(s));
  report.gamma = catalog.size() == 0 ? 0 : gamma;
  return report;
}

}  // namespace nbl
