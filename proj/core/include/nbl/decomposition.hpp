#pragma once

#include <vector>

#include "nbl/check.hpp"
#include "nbl/detectability.hpp"
#include "nbl/identifiability.hpp"
#include "nbl/likelihood.hpp"
#include "nbl/pseudo_belief.hpp"
#include "nbl/trace.hpp"
#include "nbl/update_matrix.hpp"

namespace nbl {

// sum_{r >= 1} min{1, (1 - x)^(floor((t - r)/B) - f)} with x = xi^(n chi),
// B = n chi, summed over s = t - r >= 0: B (f + 1/x). Infinite when x == 0.
double series_constant(const DetectabilityReport& report);

// psi_t^i = [Phi(t,1) psi_0]_i
//         + sum_r sum_k (Phi_ik(t,r+1) - pi_k(r+1)) L_r^k      (consensus error)
//         + sum_r pi(r+1) . (L_r - H)                           (fluctuation)
//         + sum_r pi(r+1) . H                                   (drift)
// with H_k = -D(l_k(.|theta*) || l_k(.|theta)) and pi(r+1) the row of
// Phi(T, r+1) of the lowest agent in N-bar[T].
struct DecompositionPoint {
  int t = 0;
  std::vector<double> psi;              // per agent
  std::vector<double> initial;          // per agent
  std::vector<double> consensus_error;  // per agent
  double fluctuation = 0.0;
  double drift = 0.0;
  double drift_bound = 0.0;  // -C1 xi^(n chi) t
};

struct Theorem3Decomposition {
  int theta = 0;
  int theta_star = 0;
  double c0 = 0.0;
  double c1 = 0.0;
  double xi_power = 0.0;
  double series_c = 0.0;
  std::vector<DecompositionPoint> points;  // ascending t, ending at T
  double identity_residual = 0.0;
  CheckResult drift_check{"drift"};
  CheckResult consensus_check{"consensus_error"};
  std::vector<double> final_rate;  // psi_T^i / T for i in N-bar[T], ascending agent
  double rate_bound = 0.0;         // -C1 xi^(n chi) / 2
  bool rate_ok = false;            // every final rate <= rate_bound
};

// Throws PreconditionError when theta == theta_star, T < 1, or the
// identifiability report does not satisfy the assumption.
Theorem3Decomposition theorem3_decomposition(const ExecutionTrace& trace,
                                             const LikelihoodModel& model,
                                             const std::vector<UpdateMatrix>& matrices,
                                             const PseudoBeliefs& pseudo,
                                             const DetectabilityReport& detect,
                                             const IdentifiabilityReport& ident, int theta,
                                             int theta_star, int points = 20);

}  // namespace nbl
