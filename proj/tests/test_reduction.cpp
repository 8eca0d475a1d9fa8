#include <gtest/gtest.h>

#include <queue>
#include <set>
#include <sstream>

#include "csp/reduction.hpp"

using namespace csp;

namespace {

QFormula formula(int n, int m) {
  // Clause 1 holds a complementary pair; the rest cycle through literals.
  QFormula f;
  f.n = n;
  for (int v = 1; v <= n; ++v) f.prefix.push_back(expected_quantifier(v));
  f.clauses.push_back({1, -1, 2});
  for (int j = 1; j < m; ++j) f.clauses.push_back({j % n + 1, -((j + 1) % n + 1), (j + 2) % n + 1});
  return f;
}

std::vector<int> bfs(const Graph& g, Vertex from) {
  std::vector<int> d(static_cast<std::size_t>(g.vertex_count), -1);
  std::queue<Vertex> q;
  d[static_cast<std::size_t>(from)] = 0;
  q.push(from);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    for (Vertex v : g.neighbors(u))
      if (d[static_cast<std::size_t>(v)] < 0) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
  }
  return d;
}

bool two_colorable(const Graph& g) {
  auto d = bfs(g, 0);
  for (Vertex u = 0; u < g.vertex_count; ++u)
    for (Vertex v : g.neighbors(u))
      if (d[static_cast<std::size_t>(u)] % 2 == d[static_cast<std::size_t>(v)] % 2) return false;
  return true;
}

}  // namespace

class ReductionSizes : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(ReductionSizes, CustomerCountsAndThreshold) {
  auto [n, m] = GetParam();
  auto art = build_reduction(formula(n, m), false);
  const Instance& inst = art.pre_subdivision;
  int cache = 0;
  for (Vertex c : inst.customers) cache += art.pre_parts[static_cast<std::size_t>(c)] == Part::Cache;
  const int vc = inst.customer_count();
  EXPECT_EQ(vc, 3 * n * n + 10 * m + 3 * n - 5);
  EXPECT_EQ(cache, 5 * m + n - 6);
  EXPECT_EQ(vc / 2 + 1, 3 * n * n / 2 + 5 * m + 3 * n / 2 - 2);
  EXPECT_TRUE(verify_reduction(art).ok()) << format_audit(verify_reduction(art));
}

TEST_P(ReductionSizes, VertexCountExceedsClosedFormByNCubedPlusTwo) {
  auto [n, m] = GetParam();
  auto art = build_reduction(formula(n, m), false);
  const long closed = 2L * n * n * n * n + 3L * m * n * n / 2 + 3L * n * n - 3L * m * n + 12L * m + 3L * n - 4;
  EXPECT_EQ(art.pre_subdivision.graph.vertex_count - closed, static_cast<long>(n) * n * n + 2);
}

TEST_P(ReductionSizes, SubdividedGraphIsBipartiteWithStartsTwoApart) {
  auto [n, m] = GetParam();
  auto art = build_reduction(formula(n, m));
  const Graph& g = art.instance.graph;
  EXPECT_TRUE(two_colorable(g));
  auto d = bfs(g, art.instance.starts_i.front());
  EXPECT_EQ(d[static_cast<std::size_t>(art.instance.starts_ii.front())], 2);
  for (int x : d) EXPECT_GE(x, 0);
  EXPECT_EQ(g.vertex_count, art.pre_subdivision.graph.vertex_count + static_cast<int>(art.pre_subdivision.graph.edges().size()));
  EXPECT_EQ(art.instance.customers, art.pre_subdivision.customers);
  EXPECT_TRUE(verify_reduction(art).ok()) << format_audit(verify_reduction(art));
}

INSTANTIATE_TEST_SUITE_P(Sizes, ReductionSizes, ::testing::Values(std::pair{4, 3}, std::pair{6, 5}, std::pair{4, 1}));

TEST(Reduction, LabelsAreUniqueAndSidecarListsEveryVertex) {
  auto art = build_reduction(formula(4, 3));
  std::set<std::string> seen(art.labels().begin(), art.labels().end());
  EXPECT_EQ(seen.size(), art.labels().size());
  std::istringstream in(label_sidecar(art));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream parts(line);
    int id;
    std::string label, part;
    ASSERT_TRUE(parts >> id >> label >> part) << line;
    EXPECT_EQ(id, rows);
    EXPECT_EQ(label, art.labels()[static_cast<std::size_t>(id)]);
    EXPECT_TRUE(part == "main" || part == "cache");
    ++rows;
  }
  EXPECT_EQ(rows, art.instance.graph.vertex_count);
}

TEST(Reduction, StartsAreLabeled) {
  auto art = build_reduction(formula(4, 3));
  EXPECT_EQ(art.labels()[static_cast<std::size_t>(art.instance.starts_i.front())], "v_I");
  EXPECT_EQ(art.labels()[static_cast<std::size_t>(art.instance.starts_ii.front())], "v_II");
}

TEST(Reduction, WithoutSubdivisionNoSubdivisionVertices) {
  auto art = build_reduction(formula(4, 3), false);
  for (const auto& l : art.labels()) EXPECT_NE(l.rfind("s(", 0), 0u) << l;
  auto d = bfs(art.instance.graph, art.instance.starts_i.front());
  EXPECT_EQ(d[static_cast<std::size_t>(art.instance.starts_ii.front())], 1);
}

TEST(Reduction, RejectsUnpaddedFormula) {
  QFormula f;
  f.n = 3;
  for (int v = 1; v <= 3; ++v) f.prefix.push_back(expected_quantifier(v));
  f.clauses.push_back({1, 2, 3});
  EXPECT_THROW(build_reduction(f), std::invalid_argument);
  EXPECT_NO_THROW(build_reduction(pad_formula(f), false));
}

TEST(Reduction, CacheCustomersFormOneChain) {
  auto art = build_reduction(formula(4, 3), false);
  const Instance& inst = art.pre_subdivision;
  for (Vertex c : inst.customers) {
    if (art.pre_parts[static_cast<std::size_t>(c)] != Part::Cache) continue;
    const std::string& l = inst.graph.labels[static_cast<std::size_t>(c)];
    EXPECT_EQ(l.rfind("d_", 0), 0u) << l;
  }
}
