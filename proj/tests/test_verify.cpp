#include <gtest/gtest.h>

#include "csp/verify.hpp"

using namespace csp;

namespace {

SuiteOptions small(int max_n, int random_count) {
  SuiteOptions o;
  o.max_n = max_n;
  o.random_count = random_count;
  return o;
}

}  // namespace

TEST(Suites, BipartiteNoLossSmall) {
  auto rep = run_suite("bipartite-no-loss", small(6, 30));
  EXPECT_TRUE(rep.passed) << rep.failure;
  EXPECT_GT(rep.instances, 1000u);
}

TEST(Suites, TreeMarginSmall) {
  auto rep = run_suite("tree-margin", small(7, 50));
  EXPECT_TRUE(rep.passed) << rep.failure;
}

TEST(Suites, StarGreedySmall) {
  auto rep = run_suite("star-greedy", small(0, 40));
  EXPECT_TRUE(rep.passed) << rep.failure;
  EXPECT_EQ(rep.instances, 40u);
}

TEST(Suites, OracleSmall) {
  auto rep = run_suite("oracle", small(0, 30));
  EXPECT_TRUE(rep.passed) << rep.failure;
}

TEST(Suites, ReductionAuditPasses) {
  auto rep = run_suite("reduction-audit", {});
  EXPECT_TRUE(rep.passed) << rep.failure;
  EXPECT_EQ(rep.instances, 2u);
}

TEST(Suites, StealingMarginNeverBelowThePhantomBound) {
  // The thief's margin is fixed by the phantom game it mirrors; against an
  // optimal opponent it can fall below zero only where the phantom game is
  // a win for its first mover. Losses are counted, the bound is asserted.
  auto rep = run_suite("stealing", small(5, 30));
  EXPECT_GT(rep.counts.at("bound_checked"), 0u);
  EXPECT_EQ(rep.counts.at("bound_violations"), 0u);
  for (const char* k : {"losses:greedy", "losses:random:1", "losses:random:2", "losses:random:3", "losses:optimal"})
    EXPECT_TRUE(rep.counts.count(k)) << k;
  if (!rep.passed) {
    ASSERT_TRUE(rep.counterexample.has_value());
    EXPECT_NE(rep.failure.find("loses"), std::string::npos);
  }
}

TEST(Suites, NoDrawValuedSmallTrees) {
  auto rep = run_suite("conjecture", small(7, 0));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.counts.at("draws"), 0u);
  EXPECT_GT(rep.instances, 100u);
}

TEST(Suites, UnknownNameThrows) {
  EXPECT_THROW(run_suite("nope", {}), std::invalid_argument);
  EXPECT_EQ(suite_names().size(), 8u);
}

TEST(Corpora, AreDeterministicAndWellFormed) {
  auto a = random_bipartite_corpus(20, 12, 5), b = random_bipartite_corpus(20, 12, 5);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(is_bipartite(a[i].graph));
    EXPECT_GE(a[i].customer_count(), 2);
  }
  auto t = random_tree_corpus(20, 13, 5);
  for (const auto& inst : t) EXPECT_EQ(inst.graph.edge_count() + 1, static_cast<std::size_t>(inst.graph.vertex_count));
  std::mt19937_64 r1(3), r2(3);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(random_oracle_instance(r1), random_oracle_instance(r2));
}

TEST(Corpora, ExhaustiveBipartiteCountsEveryStartAndCustomerSet) {
  // Path on three vertices: one class; starts 0,1,2; customer sets of size
  // 2 from the two other vertices: one each. Plus the single edge on two
  // vertices, which has no set of two customers.
  std::size_t count = 0;
  for_each_bipartite_instance(3, [&](const Instance&) { ++count; });
  EXPECT_EQ(count, 3u);
}
