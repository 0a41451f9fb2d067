#include <gtest/gtest.h>

#include "nbl/engine.hpp"
#include "nbl/errors.hpp"
#include "nbl/update_matrix.hpp"
#include "oracles.hpp"
#include "suite.hpp"

namespace {

oracle::RationalMatrix exact_matrix(const nbl::ExecutionTrace& trace, int t) {
  const int n = trace.agent_count();
  oracle::RationalMatrix a(n, std::vector<oracle::Rational>(n, oracle::Rational(0)));
  for (int i = 0; i < n; ++i) {
    const auto* s = trace.step(t, i);
    if (!s || !s->completed) {
      a[i][i] = 1;
      continue;
    }
    const oracle::Rational w(1, static_cast<long>(s->quorum.size() + 1));
    a[i][i] = w;
    for (int j : s->quorum) a[i][j] = w;
  }
  return a;
}

TEST(UpdateMatrix, RowsMatchTheTrace) {
  for (const auto& e : fixture::trace_suite(40)) {
    const auto trace = nbl::run_execution(e.config);
    for (int t = 1; t <= trace.iterations; ++t) {
      const auto a = nbl::build_update_matrix(trace, t);
      const auto exact = exact_matrix(trace, t);
      for (int i = 0; i < trace.agent_count(); ++i) {
        EXPECT_NEAR(a.weights.row(i).sum(), 1.0, 1e-15);
        for (int j = 0; j < trace.agent_count(); ++j) {
          EXPECT_EQ(a.weights(i, j), static_cast<double>(exact[i][j])) << e.name << " t=" << t;
          EXPECT_EQ(nbl::contains(a.support[i], j), exact[i][j] != 0);
        }
      }
    }
  }
}

TEST(UpdateMatrix, BackwardProductMatchesExactArithmetic) {
  const auto suite = fixture::trace_suite(30);
  for (const auto& e : suite) {
    const auto trace = nbl::run_execution(e.config);
    const auto matrices = nbl::build_update_matrices(trace);
    const int n = trace.agent_count();
    for (int r = 1; r <= 30; r += 7) {
      oracle::RationalMatrix phi(n, std::vector<oracle::Rational>(n, oracle::Rational(0)));
      for (int i = 0; i < n; ++i) phi[i][i] = 1;
      for (int t = r; t <= 30; ++t) {
        phi = oracle::multiply(exact_matrix(trace, t), phi);
        const auto got = nbl::backward_product(matrices, t, r);
        const auto support = nbl::backward_support(matrices, t, r);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            EXPECT_NEAR(got(i, j), static_cast<double>(phi[i][j]), 1e-13);
            EXPECT_EQ(nbl::contains(support[i], j), phi[i][j] != 0) << e.name;
          }
      }
    }
  }
}

TEST(UpdateMatrix, EmptyProductIsIdentity) {
  const auto trace = nbl::run_execution(fixture::complete4(5, 1));
  const auto matrices = nbl::build_update_matrices(trace);
  EXPECT_TRUE(nbl::backward_product(matrices, 3, 4).isIdentity());
  EXPECT_THROW(nbl::backward_product(matrices, 3, 5), nbl::PreconditionError);
  EXPECT_THROW(nbl::backward_product(matrices, 6, 1), nbl::PreconditionError);
}

TEST(UpdateMatrix, DoubleProductAgreesWithNaiveLoop) {
  const auto trace = nbl::run_execution(fixture::complete4(25, 9));
  const auto matrices = nbl::build_update_matrices(trace);
  oracle::Dense phi(4, std::vector<double>(4, 0.0));
  for (int i = 0; i < 4; ++i) phi[i][i] = 1;
  for (int t = 1; t <= 25; ++t) {
    oracle::Dense a(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a[i][j] = matrices[t - 1].weights(i, j);
    phi = oracle::multiply(a, phi);
  }
  const auto got = nbl::backward_product(matrices, 25, 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(got(i, j), phi[i][j], 1e-15);
}

TEST(UpdateMatrix, ProductSampling) {
  const auto s = nbl::sample_products(400);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].r, 1);
  EXPECT_EQ(s[1].r, 100);
  EXPECT_EQ(s[2].r, 200);
  for (const auto& p : s) {
    EXPECT_EQ(p.t.front(), p.r);
    EXPECT_EQ(p.t.back(), 400);
    EXPECT_TRUE(std::is_sorted(p.t.begin(), p.t.end()));
  }
  const auto tiny = nbl::sample_products(2);
  ASSERT_EQ(tiny.size(), 1u);
  EXPECT_EQ(tiny[0].t, (std::vector<int>{1, 2}));
}

}  // namespace
