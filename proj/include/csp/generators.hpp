#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csp/instance.hpp"

namespace csp {

inline Instance same_start_instance(Graph g, std::vector<Vertex> customers, Vertex start) {
  g.canonicalize();
  Instance inst;
  inst.graph = std::move(g);
  std::sort(customers.begin(), customers.end());
  inst.customers = std::move(customers);
  inst.starts_i = {start};
  inst.starts_ii = {start};
  return inst;
}

// Center v0 with arcs to every rim vertex; rim arcs v_j -> v_{j+2} (mod n);
// every rim vertex is a customer.
inline Instance gen_wheel(int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("wheel needs an odd n >= 3");
  Graph g = Graph::empty(n + 1, true);
  std::vector<Vertex> customers;
  for (int j = 1; j <= n; ++j) {
    g.add_edge(0, j);
    g.add_edge(j, (j - 1 + 2) % n + 1);
    customers.push_back(j);
  }
  return same_start_instance(std::move(g), customers, 0);
}

struct Ray {
  int length = 1;
  std::vector<int> customers;  // distances from the center, 1..length
};

// Center 0; ray r occupies consecutive ids, its vertex at distance t is the
// t-th of them.
inline Instance gen_star(const std::vector<Ray>& rays) {
  if (rays.size() < 2) throw std::invalid_argument("a star needs at least two rays");
  int total = 1;
  for (const auto& r : rays) {
    if (r.length < 1) throw std::invalid_argument("ray length must be positive");
    total += r.length;
  }
  Graph g = Graph::empty(total, false);
  std::vector<Vertex> customers;
  Vertex next = 1;
  for (const auto& r : rays) {
    Vertex prev = 0;
    const Vertex first = next;
    for (int t = 1; t <= r.length; ++t) {
      g.add_edge(prev, next);
      prev = next++;
    }
    for (int c : r.customers) {
      if (c < 1 || c > r.length) throw std::invalid_argument("customer position outside its ray");
      customers.push_back(first + c - 1);
    }
  }
  std::sort(customers.begin(), customers.end());
  customers.erase(std::unique(customers.begin(), customers.end()), customers.end());
  return same_start_instance(std::move(g), customers, 0);
}

// Root with k rays of length d (customer at each tip) and one ray of length
// L whose last k+1 vertices, spaced s apart, are customers.
inline Instance gen_trailing_tree(int k, int d, int L, int s = 1) {
  if (k < 1 || d < 1 || s < 1 || L < 1) throw std::invalid_argument("trailing tree parameters must be positive");
  std::vector<Ray> rays;
  for (int i = 0; i < k; ++i) rays.push_back({d, {d}});
  Ray far{L + k * s, {}};
  for (int i = 0; i <= k; ++i) far.customers.push_back(L + i * s);
  rays.push_back(far);
  return gen_star(rays);
}

// Root, three paths of length p to branch vertices, each with three paths
// of length q to customer leaves. Leaves are numbered branch by branch.
inline Instance gen_apriori_tree(int p, int q) {
  if (p < 1 || q < 1) throw std::invalid_argument("apriori tree parameters must be positive");
  const int n = 1 + 3 * p + 9 * q;
  Graph g = Graph::empty(n, false);
  std::vector<Vertex> customers;
  Vertex next = 1;
  auto path = [&](Vertex from, int len) {
    Vertex prev = from;
    for (int t = 0; t < len; ++t) {
      g.add_edge(prev, next);
      prev = next++;
    }
    return prev;
  };
  for (int b = 0; b < 3; ++b) {
    Vertex branch = path(0, p);
    for (int l = 0; l < 3; ++l) customers.push_back(path(branch, q));
  }
  return same_start_instance(std::move(g), customers, 0);
}

// Leaves of gen_apriori_tree grouped by branch: leaves[b][l].
inline std::vector<std::vector<Vertex>> apriori_tree_leaves(const Instance& tree) {
  std::vector<std::vector<Vertex>> out(3);
  for (std::size_t i = 0; i < tree.customers.size(); ++i) out[i / 3].push_back(tree.customers[i]);
  return out;
}

// Orderings of the nine leaves up to the tree's symmetries: a sequence of
// branch labels (each used three times) whose labels first appear in the
// order 0,1,2. There are 9!/(3!^3 * 3!) = 280 of them.
inline std::vector<std::vector<int>> apriori_ordering_classes() {
  std::vector<std::vector<int>> out;
  std::vector<int> seq;
  std::array<int, 3> used{};
  std::function<void(int)> rec = [&](int seen) {
    if (seq.size() == 9) {
      out.push_back(seq);
      return;
    }
    for (int b = 0; b < std::min(3, seen + 1); ++b) {
      if (used[static_cast<std::size_t>(b)] == 3) continue;
      ++used[static_cast<std::size_t>(b)];
      seq.push_back(b);
      rec(std::max(seen, b + 1));
      seq.pop_back();
      --used[static_cast<std::size_t>(b)];
    }
  };
  rec(0);
  return out;
}

// Representative priority list for a class: the r-th occurrence of branch b
// names leaf r of that branch.
inline std::vector<Vertex> apriori_priority(const Instance& tree, const std::vector<int>& labels) {
  auto leaves = apriori_tree_leaves(tree);
  std::array<int, 3> taken{};
  std::vector<Vertex> out;
  for (int b : labels) out.push_back(leaves[static_cast<std::size_t>(b)][static_cast<std::size_t>(taken[static_cast<std::size_t>(b)]++)]);
  return out;
}

// The 9-vertex graph with forced edges v0-v1, v0-v2, v1-v3, v2-v4 plus
// `extra`, customers {v3, v6, v8}, both players on v0.
inline Instance zugzwang_candidate(const std::vector<std::pair<Vertex, Vertex>>& extra) {
  Graph g = Graph::empty(9, false);
  for (auto [u, v] : std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {0, 2}, {1, 3}, {2, 4}}) g.add_edge(u, v);
  for (auto [u, v] : extra) g.add_edge(u, v);
  return same_start_instance(std::move(g), {3, 6, 8}, 0);
}

// Zugzwang graph plus a pendant vertex v0' (id 9) on v0.
inline Instance with_pendant(const Instance& base) {
  Instance inst = base;
  const int n = inst.graph.vertex_count;
  inst.graph.vertex_count = n + 1;
  inst.graph.adjacency.emplace_back();
  if (!inst.graph.labels.empty()) inst.graph.labels.push_back("v0'");
  inst.graph.add_edge(inst.starts_i.front(), n);
  inst.graph.canonicalize();
  return inst;
}

// ---- random families ----

enum class Family { Tree, Star, Bipartite, General };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Tree: return "tree";
    case Family::Star: return "star";
    case Family::Bipartite: return "bipartite";
    case Family::General: return "general";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "tree") return Family::Tree;
  if (s == "star") return Family::Star;
  if (s == "bipartite") return Family::Bipartite;
  if (s == "general") return Family::General;
  throw std::invalid_argument("unknown family '" + s + "'");
}

namespace detail {

inline std::vector<Vertex> pick_customers(std::vector<Vertex> pool, int count, std::mt19937_64& rng) {
  if (count < 0 || count > static_cast<int>(pool.size()))
    throw std::invalid_argument("cannot place " + std::to_string(count) + " customers on " +
                                std::to_string(pool.size()) + " eligible vertices");
  if (count > 64) throw std::invalid_argument("at most 64 customers");
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace detail

// Random tree rooted at 0 (random parent attachment); customers on leaves
// other than the root.
inline Instance random_tree(int vertices, int customers, std::uint64_t seed) {
  if (vertices < 2) throw std::invalid_argument("tree needs at least two vertices");
  std::mt19937_64 rng(seed);
  Graph g = Graph::empty(vertices, false);
  for (Vertex v = 1; v < vertices; ++v) g.add_edge(std::uniform_int_distribution<Vertex>(0, v - 1)(rng), v);
  g.canonicalize();
  std::vector<Vertex> leaves;
  for (Vertex v = 1; v < vertices; ++v)
    if (g.neighbors(v).size() == 1) leaves.push_back(v);
  return same_start_instance(std::move(g), detail::pick_customers(leaves, customers, rng), 0);
}

// Random star: `rays` rays of length 1..max_length; customers on ray tips.
inline Instance random_star(int rays, int max_length, int customers, std::uint64_t seed) {
  if (rays < 2) throw std::invalid_argument("a star needs at least two rays");
  std::mt19937_64 rng(seed);
  std::vector<Ray> spec;
  std::uniform_int_distribution<int> len(1, max_length);
  for (int r = 0; r < rays; ++r) spec.push_back({len(rng), {}});
  std::vector<int> idx(static_cast<std::size_t>(rays));
  std::iota(idx.begin(), idx.end(), 0);
  if (customers > rays) throw std::invalid_argument("leaf-only star needs customers <= rays");
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int i = 0; i < customers; ++i) {
    auto& r = spec[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    r.customers = {r.length};
  }
  return gen_star(spec);
}

// Connected bipartite graph: random 2-coloring, a spanning tree across the
// classes, then each remaining cross pair with probability `density`.
inline Instance random_bipartite(int vertices, int customers, std::uint64_t seed, double density = 0.3) {
  if (vertices < 2) throw std::invalid_argument("bipartite graph needs at least two vertices");
  std::mt19937_64 rng(seed);
  std::vector<int> side(static_cast<std::size_t>(vertices));
  side[0] = 0;
  side[1] = 1;
  for (int v = 2; v < vertices; ++v) side[static_cast<std::size_t>(v)] = std::uniform_int_distribution<int>(0, 1)(rng);
  Graph g = Graph::empty(vertices, false);
  for (Vertex v = 1; v < vertices; ++v) {
    std::vector<Vertex> opts;
    for (Vertex u = 0; u < v; ++u)
      if (side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)]) opts.push_back(u);
    if (opts.empty()) {
      // every earlier vertex shares v's class; flip v
      side[static_cast<std::size_t>(v)] ^= 1;
      for (Vertex u = 0; u < v; ++u) opts.push_back(u);
    }
    g.add_edge(opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)], v);
  }
  std::bernoulli_distribution coin(density);
  for (Vertex u = 0; u < vertices; ++u)
    for (Vertex v = u + 1; v < vertices; ++v)
      if (side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)] && coin(rng)) g.add_edge(u, v);
  std::vector<Vertex> pool;
  for (Vertex v = 1; v < vertices; ++v) pool.push_back(v);
  return same_start_instance(std::move(g), detail::pick_customers(pool, customers, rng), 0);
}

// Connected graph: random spanning tree plus each other pair with
// probability `density`.
inline Instance random_general(int vertices, int customers, std::uint64_t seed, double density = 0.3) {
  if (vertices < 2) throw std::invalid_argument("graph needs at least two vertices");
  std::mt19937_64 rng(seed);
  Graph g = Graph::empty(vertices, false);
  for (Vertex v = 1; v < vertices; ++v) g.add_edge(std::uniform_int_distribution<Vertex>(0, v - 1)(rng), v);
  std::bernoulli_distribution coin(density);
  for (Vertex u = 0; u < vertices; ++u)
    for (Vertex v = u + 1; v < vertices; ++v)
      if (coin(rng)) g.add_edge(u, v);
  std::vector<Vertex> pool;
  for (Vertex v = 1; v < vertices; ++v) pool.push_back(v);
  return same_start_instance(std::move(g), detail::pick_customers(pool, customers, rng), 0);
}

// size = vertex count, except for stars where it is the ray count.
inline Instance gen_random(Family family, int size, int customers, std::uint64_t seed) {
  switch (family) {
    case Family::Tree: return random_tree(size, customers, seed);
    case Family::Star: return random_star(size, 4, customers, seed);
    case Family::Bipartite: return random_bipartite(size, customers, seed);
    case Family::General: return random_general(size, customers, seed);
  }
  throw std::invalid_argument("unknown family");
}

// ---- exhaustive enumerations ----

// Rooted unlabeled trees on n vertices (root 0, parent[v] < v), one per
// isomorphism class.
inline std::vector<Graph> rooted_trees(int n) {
  std::vector<Graph> out;
  if (n < 1) return out;
  std::set<std::string> seen;
  std::vector<Vertex> parent(static_cast<std::size_t>(n), -1);
  std::function<std::string(const std::vector<std::vector<Vertex>>&, Vertex)> code =
      [&](const std::vector<std::vector<Vertex>>& kids, Vertex v) {
        std::vector<std::string> parts;
        for (Vertex c : kids[static_cast<std::size_t>(v)]) parts.push_back(code(kids, c));
        std::sort(parts.begin(), parts.end());
        std::string s = "(";
        for (auto& p : parts) s += p;
        return s + ")";
      };
  std::function<void(Vertex)> rec = [&](Vertex v) {
    if (v == n) {
      std::vector<std::vector<Vertex>> kids(static_cast<std::size_t>(n));
      for (Vertex u = 1; u < n; ++u) kids[static_cast<std::size_t>(parent[static_cast<std::size_t>(u)])].push_back(u);
      if (!seen.insert(code(kids, 0)).second) return;
      Graph g = Graph::empty(n, false);
      for (Vertex u = 1; u < n; ++u) g.add_edge(parent[static_cast<std::size_t>(u)], u);
      g.canonicalize();
      out.push_back(std::move(g));
      return;
    }
    // Nondecreasing parents still reach every shape (BFS order labeling).
    Vertex lo = v == 1 ? 0 : parent[static_cast<std::size_t>(v - 1)];
    for (Vertex p = lo; p < v; ++p) {
      parent[static_cast<std::size_t>(v)] = p;
      rec(v + 1);
    }
  };
  if (n == 1) {
    out.push_back(Graph::empty(1, false));
    return out;
  }
  rec(1);
  return out;
}

namespace detail {

// Largest upper-triangle adjacency bitmask over all relabelings (n <= 11).
inline std::uint64_t canonical_code(const Graph& g) {
  const int n = g.vertex_count;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  const auto edges = g.edges();
  std::uint64_t best = 0;
  do {
    std::uint64_t c = 0;
    for (auto [u, v] : edges) {
      int a = perm[static_cast<std::size_t>(u)], b = perm[static_cast<std::size_t>(v)];
      if (a > b) std::swap(a, b);
      c |= std::uint64_t{1} << (b * (b - 1) / 2 + a);
    }
    best = std::max(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

// Connected bipartite graphs on n vertices up to isomorphism. Every such
// graph on n+1 vertices is one on n vertices plus a vertex joined to a
// nonempty subset of one color class, so the levels grow one vertex at a
// time with isomorphs dropped at each level. Intended for n <= 8.
inline std::vector<Graph> connected_bipartite_graphs(int n) {
  if (n < 1) return {};
  if (n > 11) throw std::invalid_argument("bipartite enumeration supports at most 11 vertices");
  std::vector<Graph> level{Graph::empty(1, false)};
  for (int v = 1; v < n; ++v) {
    std::vector<Graph> next;
    std::set<std::uint64_t> seen;
    for (const Graph& g : level) {
      const auto color = *two_coloring(g);
      for (int s = 0; s < 2; ++s) {
        std::vector<Vertex> other;
        for (Vertex u = 0; u < v; ++u)
          if (color[static_cast<std::size_t>(u)] != s) other.push_back(u);
        for (std::uint32_t mask = 1; mask < (1u << other.size()); ++mask) {
          Graph h = g;
          h.vertex_count = v + 1;
          h.adjacency.emplace_back();
          for (std::size_t i = 0; i < other.size(); ++i)
            if (mask >> i & 1u) h.add_edge(other[i], v);
          h.canonicalize();
          if (seen.insert(detail::canonical_code(h)).second) next.push_back(std::move(h));
        }
      }
    }
    level = std::move(next);
  }
  return level;
}

// Calls fn(subset) for every subset of `pool` with size in [lo, hi].
inline void for_each_subset(const std::vector<Vertex>& pool, int lo, int hi,
                            const std::function<void(const std::vector<Vertex>&)>& fn) {
  std::vector<Vertex> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (static_cast<int>(cur.size()) >= lo) fn(cur);
    if (static_cast<int>(cur.size()) == hi) return;
    for (std::size_t j = i; j < pool.size(); ++j) {
      cur.push_back(pool[j]);
      rec(j + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace csp
