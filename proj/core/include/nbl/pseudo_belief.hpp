#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nbl/belief.hpp"
#include "nbl/likelihood.hpp"
#include "nbl/trace.hpp"
#include "nbl/update_matrix.hpp"

namespace nbl {

// values[t][i] for t = 0..T; every agent, crashed or not, has an entry.
// Agents in N-bar[t] apply the update to the pseudo-beliefs of their quorum;
// all others carry their previous pseudo-belief forward.
struct PseudoBeliefs {
  std::vector<std::vector<LogBelief>> values;
};

PseudoBeliefs pseudo_belief_evolution(const ExecutionTrace& trace, const LikelihoodModel& model);

// max over t >= 1 and i in N-bar[t] of max_theta |pseudo - real| (probabilities).
double pseudo_belief_identity_residual(const ExecutionTrace& trace, const PseudoBeliefs& pseudo);

// psi_t(theta) = log(pseudo(theta) / pseudo(theta_star)), one entry per agent.
Eigen::VectorXd psi_vector(const PseudoBeliefs& pseudo, int t, int theta, int theta_star);

// L_t(theta): log-likelihood ratio of the iteration-t signal for agents in
// N-bar[t], zero elsewhere.
Eigen::VectorXd likelihood_ratio_vector(const ExecutionTrace& trace, const LikelihoodModel& model,
                                        int t, int theta, int theta_star);

struct PsiCheck {
  double recursion_residual = 0.0;  // psi_t vs A[t] psi_{t-1} + L_t, every t
  double expansion_residual = 0.0;  // psi_t vs Phi(t,1) psi_0 + sum_r Phi(t,r+1) L_r
  int expansion_points = 0;         // iterations at which the expansion was evaluated
};

// The expansion is quadratic in T, so it is evaluated at every t when
// T <= expansion_full_limit and on about that many evenly spaced t otherwise.
PsiCheck psi_recursion_check(const ExecutionTrace& trace, const LikelihoodModel& model,
                             const std::vector<UpdateMatrix>& matrices, const PseudoBeliefs& pseudo,
                             int theta, int theta_star, int expansion_full_limit = 200);

}  // namespace nbl
