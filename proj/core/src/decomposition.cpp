#include "nbl/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbl/errors.hpp"

namespace nbl {

double series_constant(const DetectabilityReport& report) {
  const double x = report.xi_power();
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  return report.block_length() * (report.f + 1.0 / x);
}

Theorem3Decomposition theorem3_decomposition(const ExecutionTrace& trace,
                                             const LikelihoodModel& model,
                                             const std::vector<UpdateMatrix>& matrices,
                                             const PseudoBeliefs& pseudo,
                                             const DetectabilityReport& detect,
                                             const IdentifiabilityReport& ident, int theta,
                                             int theta_star, int points) {
  if (theta == theta_star) throw PreconditionError("theta must differ from theta_star");
  if (!ident.assumption1_ok) throw PreconditionError("global identifiability does not hold");
  const int T = trace.iterations;
  if (T < 1) throw PreconditionError("decomposition needs at least one iteration");
  const auto survivors = trace.end_set(T);
  if (survivors.empty()) throw PreconditionError("no agent survives");
  const int n = trace.agent_count();

  Theorem3Decomposition out;
  out.theta = theta;
  out.theta_star = theta_star;
  out.c0 = ident.c0;
  out.c1 = ident.c1;
  out.xi_power = detect.xi_power();
  out.series_c = series_constant(detect);
  out.rate_bound = -out.c1 * out.xi_power / 2.0;

  Eigen::VectorXd H(n);
  for (NodeId k = 0; k < n; ++k) H(k) = -kl_divergence(model, k, theta_star, theta);

  std::vector<Eigen::VectorXd> L(T + 1);
  for (int r = 1; r <= T; ++r) L[r] = likelihood_ratio_vector(trace, model, r, theta, theta_star);

  // pi[r] approximates pi(r + 1) by a row of Phi(T, r + 1).
  std::vector<Eigen::RowVectorXd> pi(T + 1);
  {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (int r = T; r >= 1; --r) {
      pi[r] = P.row(survivors.front());
      P = P * matrices[r - 1].weights;
    }
  }
  std::vector<double> drift(T + 1, 0.0), fluct(T + 1, 0.0);
  for (int r = 1; r <= T; ++r) {
    drift[r] = drift[r - 1] + pi[r].dot(H);
    fluct[r] = fluct[r - 1] + pi[r].dot(L[r] - H);
  }

  std::vector<int> ts;
  const int count = std::max(1, std::min(points, T));
  for (int k = 1; k <= count; ++k) {
    const int t = static_cast<int>((static_cast<long long>(T) * k) / count);
    if (t >= 1 && (ts.empty() || ts.back() != t)) ts.push_back(t);
  }

  const Eigen::VectorXd psi0 = psi_vector(pseudo, 0, theta, theta_star);
  const double consensus_cap = n * out.series_c * out.c0;
  for (int t : ts) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);  // Phi(t, r + 1)
    Eigen::VectorXd cons = Eigen::VectorXd::Zero(n);
    for (int r = t; r >= 1; --r) {
      cons += P * L[r] - Eigen::VectorXd::Constant(n, pi[r].dot(L[r]));
      P = P * matrices[r - 1].weights;
    }
    const Eigen::VectorXd init = P * psi0;
    const Eigen::VectorXd psi = psi_vector(pseudo, t, theta, theta_star);

    DecompositionPoint pt;
    pt.t = t;
    pt.fluctuation = fluct[t];
    pt.drift = drift[t];
    pt.drift_bound = -out.c1 * out.xi_power * t;
    for (NodeId i = 0; i < n; ++i) {
      pt.psi.push_back(psi(i));
      pt.initial.push_back(init(i));
      pt.consensus_error.push_back(cons(i));
    }
    for (NodeId i : trace.end_set(t)) {
      const double rebuilt = init(i) + cons(i) + fluct[t] + drift[t];
      out.identity_residual = std::max(out.identity_residual, std::abs(psi(i) - rebuilt));
      out.consensus_check.observe(consensus_cap - std::abs(cons(i)), 1e-9, [&] {
        return "t=" + std::to_string(t) + " agent " + std::to_string(i + 1) + ": |consensus error| " +
               std::to_string(std::abs(cons(i))) + " > n C C0 = " + std::to_string(consensus_cap);
      });
    }
    out.drift_check.observe(pt.drift_bound - pt.drift, 1e-9, [&] {
      return "t=" + std::to_string(t) + ": drift " + std::to_string(pt.drift) + " > " +
             std::to_string(pt.drift_bound);
    });
    out.points.push_back(std::move(pt));
  }

  const Eigen::VectorXd psiT = psi_vector(pseudo, T, theta, theta_star);
  out.rate_ok = true;
  for (NodeId i : survivors) {
    const double rate = psiT(i) / T;
    out.final_rate.push_back(rate);
    if (!(rate <= out.rate_bound)) out.rate_ok = false;
  }
  return out;
}

}  // namespace nbl
