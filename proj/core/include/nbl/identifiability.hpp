#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "nbl/graph.hpp"
#include "nbl/likelihood.hpp"
#include "nbl/reduced_graph.hpp"

namespace nbl {

// A KL divergence (or a sum of them) counts as "nonzero" above this value.
inline constexpr double kIdentifiabilityTolerance = 1e-12;

// D(l_i(.|a) || l_i(.|b)) in nats.
double kl_divergence(const LikelihoodModel& model, int agent, int a, int b);

// Ordered hypothesis pair (true, alternative).
struct HypothesisPair {
  int truth = 0;
  int alternative = 0;
  friend bool operator==(const HypothesisPair&, const HypothesisPair&) = default;
};

struct FailureFreeResult {
  bool ok = true;
  std::optional<HypothesisPair> witness;
};

// For every ordered pair some agent has a positive divergence.
FailureFreeResult check_failure_free_identifiability(const LikelihoodModel& model);

struct Assumption1Witness {
  HypothesisPair pair;
  std::size_t reduced_graph = 0;  // index into the catalog
  NodeMask source = 0;
};

struct IdentifiabilityReport {
  bool failure_free_ok = true;
  std::optional<HypothesisPair> failure_free_witness;
  bool assumption1_ok = true;
  std::optional<Assumption1Witness> assumption1_witness;
  double c0 = 0.0;
  double c1 = 0.0;
};

// Throws PreconditionError unless every reduced graph has a unique source
// component, and ConfigError when the model and graph disagree on n.
IdentifiabilityReport check_assumption1(const LikelihoodModel& model, const ReducedGraphCatalog& catalog);
IdentifiabilityReport check_assumption1(const LikelihoodModel& model, const DirectedGraph& g, int f,
                                        const EnumerationLimits& limits = {});

// -min log(l_i(w|a) / l_i(w|b)) over agents, ordered pairs a != b and signals.
double compute_c0(const LikelihoodModel& model);

// min over reduced graphs and ordered pairs of the source-component divergence sum.
double compute_c1(const LikelihoodModel& model, const ReducedGraphCatalog& catalog);

}  // namespace nbl
