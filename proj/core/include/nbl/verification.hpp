#pragma once

#include <optional>
#include <vector>

#include "nbl/check.hpp"
#include "nbl/detectability.hpp"
#include "nbl/reduced_graph.hpp"
#include "nbl/trace.hpp"
#include "nbl/update_matrix.hpp"

namespace nbl {

// Per-iteration outcome of the reduced-graph dominance search.
struct DominanceStep {
  int t = 0;
  std::optional<std::size_t> reduced_graph;  // catalog index of a dominated H
  // Agents that crashed during t after their tag-t message was used by a
  // surviving agent. Such a sender's unit row cannot be matched by any
  // reduced graph once the receiver has spent its link budget.
  std::vector<NodeId> used_crashers;
};

struct Proposition1Result {
  CheckResult check{"prop1"};
  std::vector<DominanceStep> steps;  // one per iteration
};

// For each t, looks for a catalog graph H (self-loops on its nodes) with
// A[t] >= xi H entrywise. The comparison is exact: A_ij is 1/d_i with
// integer d_i, so A_ij >= xi iff d_i <= 1 + max in-degree.
Proposition1Result verify_proposition1(const ExecutionTrace& trace,
                                       const std::vector<UpdateMatrix>& matrices,
                                       const ReducedGraphCatalog& catalog,
                                       const DetectabilityReport& report);

// Exact zeros Phi_ij(t', t) = 0 for i in N[t], j outside N[t], for every
// t <= t' (boolean support propagation, plus the floating-point products on
// sampled t), and sum_{j in N[t]} Phi_ij(t', t) = 1 within `tolerance`.
CheckResult verify_proposition2(const ExecutionTrace& trace,
                                const std::vector<UpdateMatrix>& matrices,
                                double tolerance = 1e-12);

// |Phi_ik(t,r) - Phi_jk(t,r)| <= min{1, (1 - xi^(n chi))^(floor((t-r+1)/(n chi)) - f)}
// for all i, j in N-bar[t] and every k, over sample_products(T). The margin
// is bound - observed.
CheckResult verify_theorem2(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                            const DetectabilityReport& report, double tolerance = 1e-12);

}  // namespace nbl
