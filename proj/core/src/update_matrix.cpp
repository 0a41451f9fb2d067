#include "nbl/update_matrix.hpp"

#include <algorithm>
#include <string>

#include "nbl/errors.hpp"

namespace nbl {

UpdateMatrix build_update_matrix(const ExecutionTrace& trace, int t) {
  const int n = trace.agent_count();
  if (t < 1 || t > trace.iterations) throw PreconditionError("iteration " + std::to_string(t) + " is out of range");
  if (n > kMaxMaskNodes) throw PreconditionError("matrix analysis supports at most 32 agents");
  UpdateMatrix a;
  a.t = t;
  a.weights = Eigen::MatrixXd::Identity(n, n);
  a.row_denominator.assign(n, 1);
  a.support.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    a.support[i] = bit(i);
    if (!trace.in_end_set(i, t)) continue;
    const AgentStep* s = trace.step(t, i);
    if (!s) throw InvariantViolation("surviving agent has no step record");
    const int den = static_cast<int>(s->quorum.size()) + 1;
    a.row_denominator[i] = den;
    a.weights(i, i) = 1.0 / den;
    for (NodeId j : s->quorum) {
      a.weights(i, j) = 1.0 / den;
      a.support[i] |= bit(j);
    }
  }
  return a;
}

std::vector<UpdateMatrix> build_update_matrices(const ExecutionTrace& trace) {
  std::vector<UpdateMatrix> out;
  out.reserve(trace.iterations);
  for (int t = 1; t <= trace.iterations; ++t) out.push_back(build_update_matrix(trace, t));
  return out;
}

Eigen::MatrixXd backward_product(const std::vector<UpdateMatrix>& matrices, int t, int r) {
  if (r < 1 || r > t + 1 || t > static_cast<int>(matrices.size())) {
    throw PreconditionError("backward product bounds out of range");
  }
  if (matrices.empty()) throw PreconditionError("no update matrices");
  const auto n = matrices.front().weights.rows();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
  for (int k = r; k <= t; ++k) phi = matrices[k - 1].weights * phi;
  return phi;
}

std::vector<NodeMask> backward_support(const std::vector<UpdateMatrix>& matrices, int t, int r) {
  if (r < 1 || r > t + 1 || t > static_cast<int>(matrices.size()) || matrices.empty()) {
    throw PreconditionError("backward product bounds out of range");
  }
  const int n = static_cast<int>(matrices.front().support.size());
  std::vector<NodeMask> rows(n);
  for (NodeId i = 0; i < n; ++i) rows[i] = bit(i);
  for (int k = t; k >= r; --k) {
    const auto& sup = matrices[k - 1].support;
    for (NodeId i = 0; i < n; ++i) {
      NodeMask next = 0;
      for (NodeId m : members(rows[i])) next |= sup[m];
      rows[i] = next;
    }
  }
  return rows;
}

std::vector<ProductSample> sample_products(int iterations) {
  std::vector<ProductSample> out;
  if (iterations < 1) return out;
  const int stride = std::max(1, iterations / 100);
  for (int r : {1, iterations / 4, iterations / 2}) {
    if (r < 1) continue;
    if (!out.empty() && out.back().r >= r) continue;
    ProductSample s;
    s.r = r;
    for (int t = r; t <= iterations; t += stride) s.t.push_back(t);
    if (s.t.back() != iterations) s.t.push_back(iterations);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nbl
