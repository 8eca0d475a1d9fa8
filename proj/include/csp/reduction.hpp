#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "csp/instance.hpp"
#include "csp/q3sat.hpp"

namespace csp {

enum class Part { Main, Cache };

inline const char* to_string(Part p) { return p == Part::Main ? "main" : "cache"; }

struct ReductionArtifact {
  Instance instance;         // subdivided when requested, else same as pre_subdivision
  Instance pre_subdivision;
  std::vector<Part> parts;   // per vertex of `instance`
  std::vector<Part> pre_parts;
  int n = 0;
  int m = 0;
  int B = 0;
  bool subdivided = false;
  std::vector<std::string> clamps;  // dropped or rewired edges, one line each

  const std::vector<std::string>& labels() const { return instance.graph.labels; }

  Vertex find(const std::string& label) const {
    const auto& ls = pre_subdivision.graph.labels;
    for (std::size_t i = 0; i < ls.size(); ++i)
      if (ls[i] == label) return static_cast<Vertex>(i);
    return -1;
  }
};

namespace detail {

class ReductionBuilder {
 public:
  Vertex add(const std::string& label, Part part, bool customer) {
    Vertex id = static_cast<Vertex>(labels_.size());
    if (!ids_.emplace(label, id).second) throw std::logic_error("duplicate label " + label);
    labels_.push_back(label);
    parts_.push_back(part);
    if (customer) customers_.push_back(id);
    return id;
  }

  bool has(const std::string& label) const { return ids_.count(label) > 0; }
  Vertex id(const std::string& label) const { return ids_.at(label); }

  // Adds the edge if both endpoints exist; otherwise records the clamp.
  void edge(const std::string& a, const std::string& b, const std::string& family) {
    if (!has(a) || !has(b)) {
      clamps_.push_back(family + ": (" + a + "," + b + ") dropped, " + (has(a) ? b : a) + " undefined");
      return;
    }
    edges_.emplace_back(id(a), id(b));
  }

  void note(std::string s) { clamps_.push_back(std::move(s)); }

  Instance finish(Vertex start_i, Vertex start_ii) const {
    Instance inst;
    inst.graph = Graph::empty(static_cast<int>(labels_.size()), false);
    inst.graph.labels = labels_;
    for (auto [u, v] : edges_) inst.graph.add_edge(u, v);
    inst.graph.canonicalize();
    inst.customers = customers_;
    std::sort(inst.customers.begin(), inst.customers.end());
    inst.starts_i = {start_i};
    inst.starts_ii = {start_ii};
    return inst;
  }

  const std::vector<Part>& parts() const { return parts_; }
  const std::vector<std::string>& clamps() const { return clamps_; }

 private:
  std::vector<std::string> labels_;
  std::vector<Part> parts_;
  std::vector<Vertex> customers_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  std::unordered_map<std::string, Vertex> ids_;
  std::vector<std::string> clamps_;
};

inline std::string lbl(const std::string& base, int a) { return base + "_" + std::to_string(a); }
inline std::string lbl(const std::string& base, int a, int b) { return lbl(base, a) + "_" + std::to_string(b); }
inline std::string u_lbl(int i, int h) { return lbl("u", i, h); }
inline std::string y_lbl(int k, int j) { return "y^" + std::to_string(k) + "_" + std::to_string(j); }
inline std::string p_lbl(int k, int j, int h) { return "p^" + std::to_string(k) + "_" + std::to_string(j) + "_" + std::to_string(h); }
inline std::string literal_lbl(Literal l) { return l > 0 ? lbl("x", l) : lbl("xbar", -l); }

}  // namespace detail

// Replaces every edge (u,v) by u - s - v through a fresh vertex labeled
// s(u,v). Original ids, customers and starts are kept. A subdivision vertex
// belongs to the cache part only if both ends do.
inline std::pair<Instance, std::vector<Part>> subdivide(const Instance& inst, const std::vector<Part>& parts) {
  const auto edges = inst.graph.edges();
  const int n0 = inst.graph.vertex_count;
  Instance out = inst;
  out.graph = Graph::empty(n0 + static_cast<int>(edges.size()), inst.graph.directed);
  out.graph.labels = inst.graph.labels;
  auto out_parts = parts;
  if (out.graph.labels.empty())
    for (Vertex v = 0; v < n0; ++v) out.graph.labels.push_back(std::to_string(v));
  Vertex next = n0;
  for (auto [u, v] : edges) {
    out.graph.labels.push_back("s(" + std::to_string(u) + "," + std::to_string(v) + ")");
    out_parts.push_back(parts[static_cast<std::size_t>(u)] == Part::Cache && parts[static_cast<std::size_t>(v)] == Part::Cache
                            ? Part::Cache
                            : Part::Main);
    out.graph.add_edge(u, next);
    out.graph.add_edge(next, v);
    ++next;
  }
  out.graph.canonicalize();
  return {std::move(out), std::move(out_parts)};
}

// Builds the CSP(1,1) instance for a normalized formula (even n, a clause
// with a complementary pair). Edge families are emitted exactly as listed;
// edges whose endpoint index lies outside its family are dropped and noted
// in `clamps`.
inline ReductionArtifact build_reduction(const QFormula& f, bool subdivide_edges = true) {
  using namespace detail;
  if (!is_normalized(f)) throw std::invalid_argument("formula must be padded first (even n, complementary clause)");
  const int n = f.n, m = f.m();
  const int B = n * n / 2;
  const int n3 = n * n * n;
  const int dmax = 5 * m + n - 6;
  ReductionBuilder b;

  // Vertices.
  for (int i = 1; i <= n; ++i) {
    b.add(lbl("x", i), Part::Main, true);
    b.add(lbl("xbar", i), Part::Main, true);
  }
  const Vertex v_i = b.add("v_I", Part::Main, false);
  const Vertex v_ii = b.add("v_II", Part::Main, false);
  for (int i = -1; i <= n - 2; ++i)
    for (int h = 1; h <= 2 * n; ++h) b.add(u_lbl(i, h), Part::Main, true);
  for (int i = n - 1; i <= n; ++i)
    for (int h = 1; h <= B; ++h) b.add(u_lbl(i, h), Part::Main, true);
  for (int j = 1; j <= m; ++j) {
    b.add(lbl("v", j), Part::Main, false);
    b.add(lbl("a", j), Part::Main, true);
    b.add(lbl("b", j), Part::Main, true);
    b.add(lbl("c", j), Part::Main, false);
    for (int k = 1; k <= 3; ++k) b.add(y_lbl(k, j), Part::Main, true);
  }
  b.add("v_0", Part::Main, false);
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= m; ++j)
      for (int h = 1; h <= B - n; ++h) b.add(p_lbl(k, j, h), Part::Main, false);
  for (int i = 0; i <= 2 * n; ++i)
    for (int h = 1; h <= n3; ++h) b.add(lbl("q", i, h), Part::Cache, false);
  // d_0 sits next to the literals; counting it in the main part is what
  // makes the cache hold exactly 5m+n-6 customers.
  b.add("d_0", Part::Main, true);
  for (int i = 1; i <= dmax; ++i) b.add(lbl("d", i), Part::Cache, true);

  // Edges.
  b.edge("v_I", "v_II", "start");
  b.edge("v_I", u_lbl(-1, 1), "start");
  b.edge("v_II", u_lbl(0, 1), "start");
  for (int i = -1; i <= n - 2; ++i)
    for (int h = 1; h <= 2 * n; ++h) b.edge(u_lbl(i, h), u_lbl(i, h + 1), "ladder side");
  for (int i = n - 1; i <= n; ++i)
    for (int h = 1; h <= B; ++h) b.edge(u_lbl(i, h), u_lbl(i, h + 1), "ladder side");
  for (int i = -1; i <= n - 2; ++i) {
    b.edge(u_lbl(i, 2 * n), lbl("x", i + 2), "diamond entry");
    b.edge(u_lbl(i, 2 * n), lbl("xbar", i + 2), "diamond entry");
  }
  for (int i = 1; i <= n; ++i) {
    b.edge(lbl("x", i), u_lbl(i, 1), "diamond exit");
    b.edge(lbl("xbar", i), u_lbl(i, 1), "diamond exit");
  }
  for (int i = -1; i <= n / 2 - 1; ++i)
    for (int h = 1; h <= 2 * n; ++h) b.edge(u_lbl(2 * i + 1, h), u_lbl(2 * i + 2, h), "ladder rung");
  for (int h = 1; h <= B; ++h) b.edge(u_lbl(n - 1, h), u_lbl(n, h), "ladder rung");
  b.edge(u_lbl(n - 1, B), "v_0", "clause entry");
  for (int j = 1; j <= m; ++j) {
    b.edge(u_lbl(n, B), lbl("a", j), "clause entry");
    b.edge("v_0", lbl("v", j), "clause entry");
    b.edge(lbl("a", j), lbl("b", j), "clause path");
    b.edge(lbl("b", j), lbl("c", j), "clause path");
    b.edge(y_lbl(1, j), y_lbl(2, j), "triangle");
    b.edge(y_lbl(1, j), y_lbl(3, j), "triangle");
    b.edge(y_lbl(2, j), y_lbl(3, j), "triangle");
    for (int k = 1; k <= 3; ++k) {
      b.edge(lbl("v", j), y_lbl(k, j), "triangle");
      b.edge(lbl("c", j), y_lbl(k, j), "triangle");
    }
  }
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= m; ++j) {
      const std::string lit = literal_lbl(f.clauses[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)]);
      if (B - n == 0) {
        b.note("feedback path " + y_lbl(k, j) + ": B-n=0, joined directly to " + lit);
        b.edge(y_lbl(k, j), lit, "feedback path");
        continue;
      }
      b.edge(y_lbl(k, j), p_lbl(k, j, 1), "feedback path");
      for (int h = 1; h <= B - n; ++h) b.edge(p_lbl(k, j, h), p_lbl(k, j, h + 1), "feedback path");
      b.edge(p_lbl(k, j, B - n), lit, "feedback path");
    }
  for (int i = 1; i <= n; ++i) {
    b.edge(lbl("x", i), lbl("q", 2 * i, 1), "cache entry");
    b.edge(lbl("xbar", i), lbl("q", 2 * i - 1, 1), "cache entry");
    b.edge(lbl("x", i), "d_0", "cache entry");
    b.edge(lbl("xbar", i), "d_0", "cache entry");
  }
  for (int i = 0; i <= 2 * n; ++i)
    for (int h = 1; h <= n3 - 1; ++h) b.edge(lbl("q", i, h), lbl("q", i, h + 1), "cache path");
  b.edge("d_0", lbl("q", 0, 1), "cache entry");
  for (int i = 0; i <= 2 * n; ++i) b.edge(lbl("q", i, n3), "d_1", "cache path");
  for (int h = 1; h <= dmax; ++h) b.edge(lbl("d", h), lbl("d", h + 1), "cache chain");

  ReductionArtifact art;
  art.n = n;
  art.m = m;
  art.B = B;
  art.pre_subdivision = b.finish(v_i, v_ii);
  art.pre_parts = b.parts();
  art.clamps = b.clamps();
  art.subdivided = subdivide_edges;
  if (subdivide_edges) {
    auto [inst, parts] = subdivide(art.pre_subdivision, art.pre_parts);
    art.instance = std::move(inst);
    art.parts = std::move(parts);
  } else {
    art.instance = art.pre_subdivision;
    art.parts = art.pre_parts;
  }
  return art;
}

// "<id> <label> <main|cache>" per vertex.
inline std::string label_sidecar(const ReductionArtifact& art) {
  std::ostringstream out;
  for (std::size_t v = 0; v < art.parts.size(); ++v)
    out << v << ' ' << art.instance.graph.labels[v] << ' ' << to_string(art.parts[v]) << '\n';
  return out.str();
}

struct AuditRow {
  std::string name;
  std::int64_t expected = 0;
  std::int64_t actual = 0;
  bool required = true;  // false: informational, the delta is reported but not a failure
  std::string note;

  bool pass() const { return expected == actual; }
  std::int64_t delta() const { return actual - expected; }
};

struct AuditReport {
  std::vector<AuditRow> rows;

  bool ok() const {
    for (const auto& r : rows)
      if (r.required && !r.pass()) return false;
    return true;
  }
};

inline AuditReport verify_reduction(const ReductionArtifact& art, std::uint64_t seed = 1) {
  AuditReport rep;
  const std::int64_t n = art.n, m = art.m, B = art.B;
  const Instance& pre = art.pre_subdivision;
  auto row = [&](std::string name, std::int64_t expected, std::int64_t actual, bool required, std::string note = "") {
    rep.rows.push_back({std::move(name), expected, actual, required, std::move(note)});
  };
  auto flag = [&](std::string name, bool holds, std::string note = "") {
    row(std::move(name), 1, holds ? 1 : 0, true, std::move(note));
  };

  const std::int64_t v_count = pre.graph.vertex_count;
  const std::int64_t closed_v = 2 * n * n * n * n + 3 * m * n * n / 2 + 3 * n * n - 3 * m * n + 12 * m + 3 * n - 4;
  const std::int64_t tally_v =
      2 * n + 2 + 2 * n * n + 2 * B + 7 * m + 1 + 3 * m * (B - n) + 2 * n * n * n * n + 5 * m + n - 5;
  row("|V| vs closed form", closed_v, v_count, false, "q family has (2n+1)n^3 vertices; closed form also differs from its own tally");
  row("|V| vs itemized tally", tally_v, v_count, false, "tally counts the q family as 2n^4");
  row("itemized tally vs closed form", closed_v, tally_v, false);

  std::int64_t vc = pre.customer_count(), vc_cache = 0;
  for (Vertex c : pre.customers)
    if (art.pre_parts[static_cast<std::size_t>(c)] == Part::Cache) ++vc_cache;
  row("|V_C|", 3 * n * n + 10 * m + 3 * n - 5, vc, true);
  row("|V_C cap V_2|", 5 * m + n - 6, vc_cache, true);
  row("|V_C cap V_1|", 3 * n * n + 5 * m + 2 * n + 1, vc - vc_cache, true);
  row("majority threshold floor(|V_C|/2)+1", 3 * n * n / 2 + 5 * m + 3 * n / 2 - 2, vc / 2 + 1, true);

  flag("every vertex labeled", static_cast<int>(art.instance.graph.labels.size()) == art.instance.graph.vertex_count);
  {
    std::int64_t cache_vertices = 0;
    for (Vertex v = 0; v < pre.graph.vertex_count; ++v) {
      const std::string& l = pre.graph.labels[static_cast<std::size_t>(v)];
      bool cache_label = l.rfind("q_", 0) == 0 || (l.rfind("d_", 0) == 0 && l != "d_0");
      if (cache_label != (art.pre_parts[static_cast<std::size_t>(v)] == Part::Cache)) {
        flag("part assignment matches labels", false, l);
        break;
      }
      cache_vertices += cache_label;
    }
    row("|V_2|", (2 * n + 1) * n * n * n + 5 * m + n - 6, cache_vertices, true);
  }

  // Feedback paths: B-n internal vertices from y^k_j to the literal.
  {
    const auto& g = pre.graph;
    bool all_ok = true;
    std::string first_bad;
    for (int j = 1; j <= m && all_ok; ++j)
      for (int k = 1; k <= 3; ++k) {
        Vertex y = art.find(detail::y_lbl(k, j));
        int internal = 0;
        Vertex prev = y, cur = -1;
        for (Vertex nb : g.neighbors(y))
          if (g.labels[static_cast<std::size_t>(nb)].rfind("p^", 0) == 0) cur = nb;
        while (cur != -1 && g.labels[static_cast<std::size_t>(cur)].rfind("p^", 0) == 0) {
          ++internal;
          Vertex nxt = -1;
          for (Vertex nb : g.neighbors(cur))
            if (nb != prev) nxt = nb;
          prev = cur;
          cur = nxt;
        }
        if (internal != B - n) {
          all_ok = false;
          first_bad = detail::y_lbl(k, j) + " has " + std::to_string(internal);
          break;
        }
      }
    flag("feedback paths have B-n internal vertices", all_ok, first_bad);
  }

  // Ladders: paired tracks with a rung at every height and consecutive sides.
  {
    const auto& g = pre.graph;
    bool ok = true;
    std::string bad;
    auto check = [&](const std::string& a, const std::string& c) {
      Vertex x = art.find(a), y = art.find(c);
      if (ok && (x < 0 || y < 0 || !g.has_edge(x, y))) {
        ok = false;
        bad = "(" + a + "," + c + ")";
      }
    };
    for (int i = -1; i <= n - 2; i += 2)
      for (int h = 1; h <= 2 * n; ++h) {
        check(detail::u_lbl(i, h), detail::u_lbl(i + 1, h));
        if (h < 2 * n) {
          check(detail::u_lbl(i, h), detail::u_lbl(i, h + 1));
          check(detail::u_lbl(i + 1, h), detail::u_lbl(i + 1, h + 1));
        }
      }
    for (int h = 1; h <= B; ++h) {
      check(detail::u_lbl(static_cast<int>(n) - 1, h), detail::u_lbl(static_cast<int>(n), h));
      if (h < B) {
        check(detail::u_lbl(static_cast<int>(n) - 1, h), detail::u_lbl(static_cast<int>(n) - 1, h + 1));
        check(detail::u_lbl(static_cast<int>(n), h), detail::u_lbl(static_cast<int>(n), h + 1));
      }
    }
    flag("ladder rung pattern", ok, bad);
  }

  row("edges clamped to defined vertices", 0, static_cast<std::int64_t>(art.clamps.size()), false,
      "dangling index at the end of a family");

  const Instance& post = art.instance;
  const Vertex vi = post.starts_i.front(), vii = post.starts_ii.front();
  if (art.subdivided) {
    flag("subdivided graph bipartite", is_bipartite(post.graph));
    auto d = shortest_distance(post, vi, vii);
    row("dist(v_I, v_II) after subdivision", 2, d ? *d : -1, true);
    // Distances double under subdivision.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Vertex> pick(0, pre.graph.vertex_count - 1);
    bool doubled = true;
    std::string bad;
    for (int t = 0; t < 50 && doubled; ++t) {
      Vertex a = pick(rng), c = pick(rng);
      auto d0 = shortest_distance(pre, a, c), d1 = shortest_distance(post, a, c);
      if (d0.has_value() != d1.has_value() || (d0 && *d1 != 2 * *d0)) {
        doubled = false;
        bad = pre.graph.labels[static_cast<std::size_t>(a)] + " to " + pre.graph.labels[static_cast<std::size_t>(c)];
      }
    }
    flag("subdivision doubles 50 sampled distances", doubled, bad);
  } else {
    auto d = shortest_distance(post, vi, vii);
    row("dist(v_I, v_II)", 1, d ? *d : -1, true);
  }
  flag("connected", is_connected(post.graph));
  flag("instance valid", validate_instance(post).ok());
  return rep;
}

inline std::string format_audit(const AuditReport& rep) {
  std::ostringstream out;
  for (const auto& r : rep.rows) {
    const char* status = r.pass() ? "pass" : (r.required ? "FAIL" : "delta");
    out << status << "  " << r.name << ": expected " << r.expected << ", got " << r.actual;
    if (!r.pass()) out << " (delta " << (r.delta() > 0 ? "+" : "") << r.delta() << ")";
    if (!r.note.empty()) out << "  [" << r.note << "]";
    out << '\n';
  }
  return out.str();
}

}  // namespace csp
