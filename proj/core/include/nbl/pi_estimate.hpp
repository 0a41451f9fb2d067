#pragma once

#include <optional>
#include <vector>

#include "nbl/check.hpp"
#include "nbl/detectability.hpp"
#include "nbl/reduced_graph.hpp"
#include "nbl/trace.hpp"
#include "nbl/update_matrix.hpp"

namespace nbl {

// min(T, r + n chi (f + 30)); the consensus bound at that span is at most
// (1 - xi^(n chi))^30.
int default_pi_horizon(const ExecutionTrace& trace, const DetectabilityReport& report, int r);

struct PiEstimate {
  int r = 1;
  int horizon = 1;
  std::vector<double> pi;     // row of Phi(horizon, r) for the lowest agent in N-bar[horizon]
  double residual = 0.0;      // max row disagreement over N-bar[horizon]
  double bound = 1.0;         // consensus bound for span horizon - r + 1
  bool horizon_sufficient = true;  // residual <= bound
  double outside_mass = 0.0;  // max pi_k over k outside N[r]; exactly 0 when the zeros hold
  bool lemma4_holds = false;
  std::optional<std::size_t> lemma4_graph;  // catalog index
  NodeMask lemma4_source = 0;
};

// Throws PreconditionError unless 1 <= r <= horizon <= T.
PiEstimate estimate_pi(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                       const ReducedGraphCatalog& catalog, const DetectabilityReport& report, int r,
                       int horizon);

struct PiChecks {
  CheckResult convergence{"prop3"};  // row agreement within the bound, zeros outside N[r]
  CheckResult source_mass{"lemma4"};  // a source component with pi_j >= xi^(n chi)
};

// Both checks for r in {1, T/4, T/2} with the default horizon.
PiChecks verify_pi(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                      const ReducedGraphCatalog& catalog, const DetectabilityReport& report,
                      double tolerance = 1e-12);

}  // namespace nbl
