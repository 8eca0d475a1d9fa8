#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csp/errors.hpp"
#include "csp/outcome.hpp"

namespace csp {

using Vertex = int;

// Adjacency lists are sorted and duplicate-free. Undirected graphs store
// every edge in both directions.
struct Graph {
  int vertex_count = 0;
  bool directed = false;
  std::vector<std::vector<Vertex>> adjacency;
  std::vector<std::string> labels;  // optional, empty or one per vertex

  static Graph empty(int n, bool directed) {
    Graph g;
    g.vertex_count = n;
    g.directed = directed;
    g.adjacency.assign(static_cast<std::size_t>(n), {});
    return g;
  }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency[static_cast<std::size_t>(v)]; }

  // Appends without canonicalizing; call canonicalize() once done.
  void add_edge(Vertex u, Vertex v) {
    adjacency[static_cast<std::size_t>(u)].push_back(v);
    if (!directed) adjacency[static_cast<std::size_t>(v)].push_back(u);
  }

  void canonicalize() {
    for (auto& list : adjacency) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& list = neighbors(u);
    return std::binary_search(list.begin(), list.end(), v);
  }

  std::size_t edge_count() const {
    std::size_t arcs = 0;
    for (const auto& list : adjacency) arcs += list.size();
    return directed ? arcs : arcs / 2;
  }

  // Each edge once; undirected edges as (u, v) with u < v.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (Vertex u = 0; u < vertex_count; ++u)
      for (Vertex v : neighbors(u))
        if (directed || u < v) out.emplace_back(u, v);
    return out;
  }
};

struct Instance {
  Graph graph;
  std::vector<Vertex> customers;  // sorted, duplicate-free
  std::vector<Vertex> starts_i;
  std::vector<Vertex> starts_ii;
  bool passing_allowed = false;
  DrawRank draw_rank = DrawRank::BelowTie;

  int h() const { return static_cast<int>(starts_i.size()); }
  int k() const { return static_cast<int>(starts_ii.size()); }
  int customer_count() const { return static_cast<int>(customers.size()); }

  bool is_customer(Vertex v) const { return std::binary_search(customers.begin(), customers.end(), v); }

  // Position of v in the customer list, or -1.
  int customer_index(Vertex v) const {
    auto it = std::lower_bound(customers.begin(), customers.end(), v);
    if (it == customers.end() || *it != v) return -1;
    return static_cast<int>(it - customers.begin());
  }
};

inline bool operator==(const Graph& a, const Graph& b) {
  return a.vertex_count == b.vertex_count && a.directed == b.directed && a.adjacency == b.adjacency;
}

inline bool operator==(const Instance& a, const Instance& b) {
  return a.graph == b.graph && a.customers == b.customers && a.starts_i == b.starts_i &&
         a.starts_ii == b.starts_ii && a.passing_allowed == b.passing_allowed && a.draw_rank == b.draw_rank;
}

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  const Graph& g = inst.graph;
  const int n = g.vertex_count;
  auto in_range = [n](Vertex v) { return v >= 0 && v < n; };

  if (n <= 0) fail("vertex_count must be positive");
  if (static_cast<int>(g.adjacency.size()) != n) {
    fail("adjacency size " + std::to_string(g.adjacency.size()) + " != vertex_count " + std::to_string(n));
    return report;
  }
  if (!g.labels.empty() && static_cast<int>(g.labels.size()) != n) fail("labels size mismatch");

  for (Vertex u = 0; u < n; ++u) {
    const auto& list = g.neighbors(u);
    for (std::size_t i = 0; i < list.size(); ++i) {
      Vertex v = list[i];
      if (!in_range(v)) {
        fail("neighbor " + std::to_string(v) + " of " + std::to_string(u) + " out of range");
        continue;
      }
      if (v == u) fail("self-loop at " + std::to_string(u));
      if (i > 0 && list[i - 1] >= v) fail("adjacency of " + std::to_string(u) + " not sorted/duplicate-free");
    }
  }
  if (!g.directed) {
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v : g.neighbors(u))
        if (in_range(v) && !g.has_edge(v, u))
          fail("asymmetry: " + std::to_string(u) + "->" + std::to_string(v) + " without reverse");
  }

  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    Vertex c = inst.customers[i];
    if (!in_range(c)) fail("customer " + std::to_string(c) + " out of range");
    if (i > 0 && inst.customers[i - 1] >= c) fail("customers not sorted/duplicate-free");
  }
  if (inst.starts_i.empty()) fail("player I needs at least one piece");
  if (inst.starts_ii.empty()) fail("player II needs at least one piece");
  for (const auto* starts : {&inst.starts_i, &inst.starts_ii}) {
    for (Vertex s : *starts) {
      if (!in_range(s)) {
        fail("start " + std::to_string(s) + " out of range");
      } else if (inst.is_customer(s)) {
        fail("start in V_C: " + std::to_string(s));
      }
    }
  }
  return report;
}

inline void require_valid(const Instance& inst) {
  auto report = validate_instance(inst);
  if (!report.ok()) throw InvalidInstance(report.violations.front());
}

inline constexpr int kUnreachable = -1;

// BFS distances from one vertex along arc directions.
inline std::vector<int> distances_from(const Graph& g, Vertex from) {
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count), kUnreachable);
  std::deque<Vertex> queue{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex v : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] == kUnreachable) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// Distances from every vertex to `to` (BFS on the reversed graph).
inline std::vector<int> distances_to(const Graph& g, Vertex to) {
  if (!g.directed) return distances_from(g, to);
  Graph rev = Graph::empty(g.vertex_count, true);
  for (Vertex u = 0; u < g.vertex_count; ++u)
    for (Vertex v : g.neighbors(u)) rev.adjacency[static_cast<std::size_t>(v)].push_back(u);
  return distances_from(rev, to);
}

inline std::optional<int> shortest_distance(const Instance& inst, Vertex from, Vertex to) {
  int d = distances_from(inst.graph, from)[static_cast<std::size_t>(to)];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

// Proper 2-coloring if one exists (arcs treated as undirected).
inline std::optional<std::vector<int>> two_coloring(const Graph& g) {
  std::vector<std::vector<Vertex>> und(static_cast<std::size_t>(g.vertex_count));
  for (Vertex u = 0; u < g.vertex_count; ++u)
    for (Vertex v : g.neighbors(u)) {
      und[static_cast<std::size_t>(u)].push_back(v);
      und[static_cast<std::size_t>(v)].push_back(u);
    }
  std::vector<int> color(static_cast<std::size_t>(g.vertex_count), -1);
  for (Vertex s = 0; s < g.vertex_count; ++s) {
    if (color[static_cast<std::size_t>(s)] != -1) continue;
    color[static_cast<std::size_t>(s)] = 0;
    std::deque<Vertex> queue{s};
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      for (Vertex v : und[static_cast<std::size_t>(u)]) {
        auto& cv = color[static_cast<std::size_t>(v)];
        if (cv == -1) {
          cv = 1 - color[static_cast<std::size_t>(u)];
          queue.push_back(v);
        } else if (cv == color[static_cast<std::size_t>(u)]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

inline bool is_bipartite(const Graph& g) { return two_coloring(g).has_value(); }

inline bool is_connected(const Graph& g) {
  if (g.vertex_count == 0) return true;
  auto d = distances_from(g, 0);
  if (!g.directed) return std::find(d.begin(), d.end(), kUnreachable) == d.end();
  Graph und = Graph::empty(g.vertex_count, false);
  for (auto [u, v] : g.edges()) und.add_edge(u, v);
  und.canonicalize();
  auto du = distances_from(und, 0);
  return std::find(du.begin(), du.end(), kUnreachable) == du.end();
}

}  // namespace csp
