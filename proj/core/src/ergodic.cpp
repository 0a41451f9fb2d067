#include "nbl/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbl/errors.hpp"
#include "nbl/rng.hpp"

namespace nbl {

ErgodicCoefficients ergodic_coefficients(const Eigen::MatrixXd& phi, NodeMask rows) {
  if (rows == 0) throw PreconditionError("restriction set is empty");
  const auto idx = members(rows);
  ErgodicCoefficients out;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      double overlap = 0.0;
      for (Eigen::Index j = 0; j < phi.cols(); ++j) {
        const double x = phi(idx[a], j);
        const double y = phi(idx[b], j);
        out.delta = std::max(out.delta, std::abs(x - y));
        overlap += std::min(x, y);
      }
      out.eta = std::min(out.eta, overlap);
    }
  }
  return out;
}

std::vector<RestrictionSet> restriction_sets(const ExecutionTrace& trace) {
  std::vector<RestrictionSet> out;
  for (int s = 1; s <= trace.iterations + 1; ++s) {
    const NodeMask m = trace.start_mask(s);
    if (out.empty() || out.back().rows != m) out.push_back({s, m});
  }
  return out;
}

CheckResult check_lemma1_monotonicity(const ExecutionTrace& trace,
                                      const std::vector<UpdateMatrix>& matrices, double tolerance) {
  CheckResult res("lemma1");
  const auto sets = restriction_sets(trace);
  const int n = trace.agent_count();
  for (const auto& sample : sample_products(trace.iterations)) {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
    int built = sample.r - 1;
    for (int t : sample.t) {
      while (built < t) phi = matrices[built++].weights * phi;
      std::vector<ErgodicCoefficients> coeffs;
      for (const auto& s : sets) {
        if (s.rows == 0) continue;
        coeffs.push_back(ergodic_coefficients(phi, s.rows));
        const auto& c = coeffs.back();
        res.observe(1.0 - c.eta - c.delta, tolerance, [&] {
          return "Phi(" + std::to_string(t) + "," + std::to_string(sample.r) + ") rows " +
                 format_set(s.rows) + ": delta=" + std::to_string(c.delta) +
                 " eta=" + std::to_string(c.eta);
        });
      }
      for (std::size_t k = 1; k < coeffs.size(); ++k) {
        const auto describe = [&] {
          return "monotonicity fails on Phi(" + std::to_string(t) + "," + std::to_string(sample.r) + ")";
        };
        res.observe(coeffs[k - 1].delta - coeffs[k].delta, tolerance, describe);
        res.observe(coeffs[k].eta - coeffs[k - 1].eta, tolerance, describe);
      }
    }
  }
  return res;
}

CheckResult check_lemma2(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                         int triples, std::uint64_t seed, double tolerance) {
  CheckResult res("lemma2");
  const int T = trace.iterations;
  if (T < 2) return res;
  Rng rng(seed, 2, StreamPurpose::analysis);
  for (int k = 0; k < triples; ++k) {
    int t0 = 0, t1 = 0, t2 = 0;
    if (k % 2 == 0) {
      const int window = std::min(T - 1, 16);
      t0 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(T - 1)));
      t1 = std::min(T - 1, t0 + static_cast<int>(rng.below(static_cast<std::uint64_t>(window))));
      t2 = std::min(T, t1 + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(window))));
    } else {
      int a = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(T)));
      int b = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(T)));
      int c = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(T)));
      int v[3] = {a, b, c};
      std::sort(v, v + 3);
      t0 = v[0];
      t1 = std::min(v[1], T - 1);
      t2 = std::max(v[2], t1 + 1);
      t0 = std::min(t0, t1);
    }
    const NodeMask rows = trace.start_mask(t1 + 1);
    if (rows == 0) continue;
    const auto F = ergodic_coefficients(backward_product(matrices, t2, t0), rows);
    const auto P = ergodic_coefficients(backward_product(matrices, t2, t1 + 1), rows);
    const auto G = ergodic_coefficients(backward_product(matrices, t1, t0), rows);
    res.observe((1.0 - P.eta) * G.delta - F.delta, tolerance, [&] {
      return "(t0,t1,t2)=(" + std::to_string(t0) + "," + std::to_string(t1) + "," +
             std::to_string(t2) + "): delta(F)=" + std::to_string(F.delta) +
             " > (1-eta(P)) delta(G)=" + std::to_string((1.0 - P.eta) * G.delta);
    });
  }
  return res;
}

CheckResult check_block_eta(const ExecutionTrace& trace, const std::vector<UpdateMatrix>& matrices,
                            const DetectabilityReport& report, double tolerance) {
  CheckResult res("block_eta");
  const double block = report.block_length();
  if (block > trace.iterations) return res;
  const int B = static_cast<int>(block);
  const double floor_value = report.xi_power();
  for (int r = 1; r + B - 1 <= trace.iterations; r += B) {
    const int t = r + B - 1;
    const NodeMask rows = trace.start_mask(r);
    if (rows != trace.end_mask(t) || rows == 0) continue;  // a crash inside the window
    const auto c = ergodic_coefficients(backward_product(matrices, t, r), rows);
    res.observe(c.eta - floor_value, tolerance, [&] {
      return "block [" + std::to_string(r) + "," + std::to_string(t) + "]: eta=" +
             std::to_string(c.eta) + " < xi^(n chi)=" + std::to_string(floor_value);
    });
  }
  return res;
}

}  // namespace nbl
