#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nbl/graph.hpp"
#include "nbl/trace.hpp"

namespace nbl {

// A[t]: for i in N-bar[t], weight 1/(|I_i| - f + 1) on R_i[t] u {i};
// every other row is the unit row e_i.
struct UpdateMatrix {
  int t = 0;
  Eigen::MatrixXd weights;
  std::vector<int> row_denominator;  // 1 for unit rows
  std::vector<NodeMask> support;     // column support of each row
};

// Requires 1 <= t <= trace.iterations and at most kMaxMaskNodes agents.
UpdateMatrix build_update_matrix(const ExecutionTrace& trace, int t);
// Element k holds A[k + 1].
std::vector<UpdateMatrix> build_update_matrices(const ExecutionTrace& trace);

// Phi(t, r) = A[t] ... A[r] with Phi(t, t + 1) = I. Requires 1 <= r <= t + 1
// and t <= matrices.size().
Eigen::MatrixXd backward_product(const std::vector<UpdateMatrix>& matrices, int t, int r);

// Support pattern of Phi(t, r) computed with boolean arithmetic only.
std::vector<NodeMask> backward_support(const std::vector<UpdateMatrix>& matrices, int t, int r);

// (r, t) pairs at which products are examined: r in {1, T/4, T/2} and
// t = r, r + s, r + 2s, ... plus T, with stride s = max(1, T/100).
struct ProductSample {
  int r = 1;
  std::vector<int> t;
};
std::vector<ProductSample> sample_products(int iterations);

}  // namespace nbl
