#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nbl/check.hpp"
#include "nbl/detectability.hpp"
#include "nbl/graph.hpp"
#include "nbl/trace.hpp"
#include "nbl/update_matrix.hpp"

namespace nbl {

// Restricted to row pairs drawn from `rows`:
//   delta = max_j max_{i,i'} |Phi_ij - Phi_i'j|
//   eta   = min_{i,i'} sum_j min(Phi_ij, Phi_i'j)
struct ErgodicCoefficients {
  double delta = 0.0;
  double eta = 1.0;
};

// Throws PreconditionError when rows is empty.
ErgodicCoefficients ergodic_coefficients(const Eigen::MatrixXd& phi, NodeMask rows);

// Distinct values of N[s] for s = 1..T+1, largest first, with the first s
// at which each appears.
struct RestrictionSet {
  int first = 1;
  NodeMask rows = 0;
};
std::vector<RestrictionSet> restriction_sets(const ExecutionTrace& trace);

// delta <= 1 - eta and the monotonicity of both coefficients in the
// restriction index, over every sampled product Phi(t, r).
CheckResult check_lemma1_monotonicity(const ExecutionTrace& trace,
                                      const std::vector<UpdateMatrix>& matrices,
                                      double tolerance = 1e-12);

// delta_{t1+1}(Phi(t2,t0)) <= (1 - eta_{t1+1}(Phi(t2,t1+1))) delta_{t1+1}(Phi(t1,t0))
// on `triples` random t0 <= t1 < t2; half the triples use short windows.
CheckResult check_lemma2(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                         int triples, std::uint64_t seed, double tolerance = 1e-12);

// eta(Phi(r + B - 1, r)) >= xi^B, B = n chi, on consecutive crash-free blocks.
CheckResult check_block_eta(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                            const DetectabilityReport& report, double tolerance = 1e-12);

}  // namespace nbl
