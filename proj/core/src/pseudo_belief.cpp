#include "nbl/pseudo_belief.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "nbl/errors.hpp"

namespace nbl {

PseudoBeliefs pseudo_belief_evolution(const ExecutionTrace& trace, const LikelihoodModel& model) {
  const int n = trace.agent_count();
  PseudoBeliefs pb;
  pb.values.assign(trace.iterations + 1, {});
  pb.values[0].assign(n, trace.initial_belief);
  for (int t = 1; t <= trace.iterations; ++t) {
    const auto& prev = pb.values[t - 1];
    auto& cur = pb.values[t];
    cur = prev;
    for (NodeId i = 0; i < n; ++i) {
      if (!trace.in_end_set(i, t)) continue;
      const AgentStep* s = trace.step(t, i);
      if (!s || !s->signal) throw InvariantViolation("surviving agent lacks a signal");
      std::vector<std::span<const double>> nb;
      for (NodeId j : s->quorum) nb.emplace_back(prev[j]);
      cur[i] = update_belief(prev[i], nb, *s->signal, model, i, s->quorum.size());
    }
  }
  return pb;
}

double pseudo_belief_identity_residual(const ExecutionTrace& trace, const PseudoBeliefs& pseudo) {
  double worst = 0.0;
  for (int t = 1; t <= trace.iterations; ++t) {
    for (NodeId i : trace.end_set(t)) {
      const LogBelief* real = trace.belief(t, i);
      const LogBelief& fake = pseudo.values[t][i];
      for (std::size_t h = 0; h < fake.size(); ++h) {
        worst = std::max(worst, std::abs(std::exp(fake[h]) - std::exp((*real)[h])));
      }
    }
  }
  return worst;
}

Eigen::VectorXd psi_vector(const PseudoBeliefs& pseudo, int t, int theta, int theta_star) {
  const auto& row = pseudo.values.at(t);
  Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
  for (std::size_t i = 0; i < row.size(); ++i) v(i) = row[i][theta] - row[i][theta_star];
  return v;
}

Eigen::VectorXd likelihood_ratio_vector(const ExecutionTrace& trace, const LikelihoodModel& model,
                                        int t, int theta, int theta_star) {
  const int n = trace.agent_count();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (NodeId i : trace.end_set(t)) {
    const int s = *trace.step(t, i)->signal;
    v(i) = model.log_likelihood(i, theta, s) - model.log_likelihood(i, theta_star, s);
  }
  return v;
}

PsiCheck psi_recursion_check(const ExecutionTrace& trace, const LikelihoodModel& model,
                             const std::vector<UpdateMatrix>& matrices, const PseudoBeliefs& pseudo,
                             int theta, int theta_star, int expansion_full_limit) {
  if (theta == theta_star) throw PreconditionError("theta must differ from theta_star");
  const int T = trace.iterations;
  PsiCheck out;
  std::vector<Eigen::VectorXd> L(T + 1);
  for (int t = 1; t <= T; ++t) L[t] = likelihood_ratio_vector(trace, model, t, theta, theta_star);

  Eigen::VectorXd prev = psi_vector(pseudo, 0, theta, theta_star);
  const Eigen::VectorXd psi0 = prev;
  for (int t = 1; t <= T; ++t) {
    const Eigen::VectorXd cur = psi_vector(pseudo, t, theta, theta_star);
    const Eigen::VectorXd rec = matrices[t - 1].weights * prev + L[t];
    out.recursion_residual = std::max(out.recursion_residual, (cur - rec).cwiseAbs().maxCoeff());
    prev = cur;
  }

  const int stride = (T <= expansion_full_limit) ? 1 : std::max(1, T / expansion_full_limit);
  for (int t = stride; t <= T; t += stride) {
    // Walk r downwards so that P = Phi(t, r + 1) is extended one factor at a time.
    const auto n = psi0.size();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (int r = t; r >= 1; --r) {
      sum += P * L[r];
      P = P * matrices[r - 1].weights;
    }
    sum += P * psi0;
    const Eigen::VectorXd cur = psi_vector(pseudo, t, theta, theta_star);
    out.expansion_residual = std::max(out.expansion_residual, (cur - sum).cwiseAbs().maxCoeff());
    ++out.expansion_points;
  }
  return out;
}

}  // namespace nbl
