#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "csp/generators.hpp"
#include "csp/instance_io.hpp"
#include "csp/match.hpp"

namespace csp {

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
  bool required = true;  // informational probes are reported, never asserted
};

struct Certificate {
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (c.required && !c.ok) return false;
    return true;
  }

  void add(std::string name, bool ok, std::string detail = "", bool required = true) {
    checks.push_back({std::move(name), ok, std::move(detail), required});
  }

  std::string format() const {
    std::ostringstream out;
    for (const auto& c : checks) {
      out << (c.required ? (c.ok ? "pass" : "FAIL") : "info") << "  " << c.name;
      if (!c.detail.empty()) out << ": " << c.detail;
      out << '\n';
    }
    return out.str();
  }
};

inline bool at_most(Outcome a, Outcome b, DrawRank r = DrawRank::BelowTie) { return compare_outcomes(a, b, r) <= 0; }
inline bool at_least(Outcome a, Outcome b, DrawRank r = DrawRank::BelowTie) { return compare_outcomes(a, b, r) >= 0; }

// Plays single-piece steps to the given targets from the initial position.
inline std::pair<GameState, int> play_line(const Instance& inst, const std::vector<Vertex>& targets) {
  GameState s = initial_state(inst);
  int margin = 0;
  for (Vertex t : targets) {
    auto r = apply_move(inst, s, Move::step(0, t));
    margin += s.turn == Player::I ? r.capture : -r.capture;
    s = std::move(r.state);
  }
  return {s, margin};
}

inline std::string line_name(const std::vector<Vertex>& targets) {
  std::string s;
  for (std::size_t i = 0; i < targets.size(); ++i)
    s += (i ? " " : "") + std::string(i % 2 ? "II:v" : "I:v") + std::to_string(targets[i]);
  return s;
}

// ---- zugzwang and draw game ----

// Move sequences from the zugzwang narrative after which I must still lose.
inline const std::vector<std::vector<Vertex>>& zugzwang_lines() {
  static const std::vector<std::vector<Vertex>> lines = {
      {1, 2},        // II answers v1 with v2
      {2, 1},        // and v2 with v1
      {1, 2, 0, 4},  // retreat to v0, II moves on to v4
      {2, 1, 0, 3},  // retreat to v0, II moves on to v3
      {1, 2, 3, 4},  // I takes v3, II heads for v6 and v8
      {2, 1, 4, 3},  // I goes to v4, II secures v3
  };
  return lines;
}

inline Certificate certify_zugzwang(const Instance& inst, std::size_t budget = kDefaultBudget) {
  Certificate cert;
  cert.add("9 vertices", inst.graph.vertex_count == 9, std::to_string(inst.graph.vertex_count));
  cert.add("3 customers", inst.customer_count() == 3);
  cert.add("non-bipartite", !is_bipartite(inst.graph));
  cert.add("connected", is_connected(inst.graph));
  cert.add("same start, no passing", inst.starts_i == inst.starts_ii && !inst.passing_allowed);
  const auto solved = solve(inst, budget);
  cert.add("value <= Ended(-1)", at_most(solved.value(), Outcome::ended(-1)), solved.value().to_string());
  for (const auto& line : zugzwang_lines()) {
    auto [s, margin] = play_line(inst, line);
    Outcome v = solved.value_at(s, margin);
    cert.add("after " + line_name(line), at_most(v, Outcome::ended(-1)), v.to_string());
  }
  Instance passing = inst;
  passing.passing_allowed = true;
  cert.add("with passing allowed", true, solve(passing, budget).value().to_string(), false);
  return cert;
}

// First extra-edge set (by size, then lexicographically over pairs among
// v1..v8 other than the forced ones) whose instance passes every zugzwang
// check and `also`. Extra edges never touch v0, so v1 and v2 are the only
// first moves.
struct ZugzwangSearchResult {
  std::vector<std::pair<Vertex, Vertex>> extra;
  std::size_t candidates_tried = 0;
};

inline std::optional<ZugzwangSearchResult> zugzwang_search(int max_extra,
                                                           const std::function<bool(const Instance&)>& also = nullptr) {
  std::vector<std::pair<Vertex, Vertex>> pool;
  for (Vertex u = 1; u <= 8; ++u)
    for (Vertex v = u + 1; v <= 8; ++v)
      if (!(u == 1 && v == 3) && !(u == 2 && v == 4)) pool.emplace_back(u, v);
  const auto loses = [](Outcome o) { return at_most(o, Outcome::ended(-1)); };
  std::size_t tried = 0;
  for (int k = 0; k <= max_extra; ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<std::pair<Vertex, Vertex>> extra;
      for (auto i : idx) extra.push_back(pool[i]);
      Instance inst = zugzwang_candidate(extra);
      ++tried;
      if (is_connected(inst.graph) && !is_bipartite(inst.graph)) {
        auto solved = solve(inst);
        bool ok = loses(solved.value());
        for (const auto& line : zugzwang_lines()) {
          if (!ok) break;
          auto [s, margin] = play_line(inst, line);
          ok = loses(solved.value_at(s, margin));
        }
        if (ok && (!also || also(inst))) return ZugzwangSearchResult{extra, tried};
      }
      int i = k - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == pool.size() - static_cast<std::size_t>(k - i)) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return std::nullopt;
}

inline const std::vector<std::pair<Vertex, Vertex>>& zugzwang_extra_edges() {
  static const std::vector<std::pair<Vertex, Vertex>> edges = {{3, 5}, {3, 7}, {4, 6}, {4, 8}, {5, 6}, {7, 8}};
  return edges;
}

inline Instance gen_zugzwang() {
  Instance inst = zugzwang_candidate(zugzwang_extra_edges());
  inst.graph.labels = {"v0", "v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8"};
  return inst;
}

// v0' (id 9) next to v0 and to both first-move vertices v1, v2, so either
// player can step from {v0, v0'} into {v1, v2} in one move.
inline Instance with_twin(const Instance& base) {
  Instance inst = with_pendant(base);
  inst.graph.add_edge(9, 1);
  inst.graph.add_edge(9, 2);
  inst.graph.canonicalize();
  return inst;
}

inline Instance gen_draw_game() { return with_twin(gen_zugzwang()); }

inline Certificate certify_draw_game(const Instance& inst, std::size_t budget = kDefaultBudget) {
  Certificate cert;
  auto solved = std::make_shared<const SolveResult>(solve(inst, budget));
  cert.add("value = Draw", solved->value().is_draw(), solved->value().to_string());
  OptimalStrategy a(budget, solved), b(budget, solved);
  auto rec = run_match(inst, a, b);
  cert.add("optimal vs optimal ends by repetition", rec.reason == MatchRecord::Termination::RepetitionDraw,
           to_string(rec.reason) + " after " + std::to_string(rec.moves.size()) + " plies");
  // Whoever first enters {v1, v2} while the other is still on {v0, v0'} loses.
  for (Vertex x : {1, 2})
    for (Vertex y : {0, 9})
      for (Player entered : {Player::I, Player::II}) {
        GameState s = initial_state(inst);
        s.pieces(entered) = {x};
        s.pieces(opponent(entered)) = {y};
        s.turn = opponent(entered);
        Outcome v = solve_from(inst, s, budget).value();
        bool loses = entered == Player::I ? at_most(v, Outcome::ended(-1)) : at_least(v, Outcome::ended(1));
        cert.add(to_string(entered) + " on v" + std::to_string(x) + ", other on " + (y == 9 ? "v0'" : "v0"), loses,
                 v.to_string());
      }
  Instance pendant_only = with_pendant(zugzwang_candidate(zugzwang_extra_edges()));
  cert.add("pendant v0' on v0 only", true, solve(pendant_only, budget).value().to_string(), false);
  return cert;
}

// ---- trees and stars ----

struct TrailingParams {
  int k = 2;
  int d = 2;
  int L = 7;
  int s = 1;
};

inline TrailingParams trailing_defaults() { return {2, 2, 7, 1}; }

inline Certificate certify_trailing_tree(const TrailingParams& p, std::size_t budget = kDefaultBudget) {
  Certificate cert;
  const Instance inst = gen_trailing_tree(p.k, p.d, p.L, p.s);
  cert.add("2k+1 customers", inst.customer_count() == 2 * p.k + 1);
  auto solved = std::make_shared<const SolveResult>(solve(inst, budget));
  cert.add("value = Ended(+1)", solved->value() == Outcome::ended(1), solved->value().to_string());
  // Near ray r starts at vertex 1 + r*d.
  std::vector<Vertex> near_tips;
  for (int r = 0; r < p.k; ++r) {
    const Vertex first = 1 + r * p.d;
    near_tips.push_back(first + p.d - 1);
    auto [s, margin] = play_line(inst, {first});
    Outcome v = solved->value_at(s, margin);
    cert.add("first move onto near ray " + std::to_string(r), at_most(v, Outcome::ended(-1)), v.to_string());
  }
  // II sweeps the near tips first while I plays optimally.
  std::vector<Vertex> priority = near_tips;
  for (Vertex c : inst.customers)
    if (std::find(near_tips.begin(), near_tips.end(), c) == near_tips.end()) priority.push_back(c);
  OptimalStrategy opt(budget, solved);
  APrioriStrategy sweep(priority);
  auto rec = run_match(inst, opt, sweep);
  int ii_before = 0;
  for (const auto& pm : rec.moves) {
    if (pm.capture && pm.mover == Player::I) break;
    if (pm.capture) ++ii_before;
  }
  cert.add("II takes all k near customers before I's first capture", ii_before == p.k,
           std::to_string(ii_before) + " captured first");
  cert.add("I still wins that line", at_least(rec.outcome, Outcome::ended(1)), rec.outcome.to_string());
  return cert;
}

inline std::optional<TrailingParams> trailing_search(int k) {
  for (int d = 2; d <= 6; ++d)
    for (int L = 6; L <= 20; ++L) {
      TrailingParams p{k, d, L, 1};
      if (certify_trailing_tree(p).ok()) return p;
    }
  return std::nullopt;
}

struct AprioriParams {
  int p = 1;
  int q = 1;
};

inline AprioriParams apriori_defaults() { return {1, 1}; }

inline Certificate certify_apriori_tree(const AprioriParams& params, std::size_t budget = kDefaultBudget,
                                        bool stop_at_first_failure = false) {
  Certificate cert;
  const Instance inst = gen_apriori_tree(params.p, params.q);
  cert.add("nine leaf customers in three triples", inst.customer_count() == 9);
  int lost = 0, total = 0;
  std::string counter;
  for (const auto& cls : apriori_ordering_classes()) {
    ++total;
    APrioriStrategy s(apriori_priority(inst, cls));
    s.init(inst, Player::I);
    Outcome o = best_response(inst, s, Player::I, budget);
    if (at_most(o, Outcome::ended(-1))) {
      ++lost;
    } else if (counter.empty()) {
      counter = s.kind() + " reaches " + o.to_string();
      if (stop_at_first_failure) break;
    }
  }
  cert.add("every a-priori ordering class loses", lost == total && total == 280,
           std::to_string(lost) + "/" + std::to_string(total) + (counter.empty() ? "" : "; " + counter));
  Outcome v = solve(inst, budget).value();
  cert.add("optimal value >= Draw", at_least(v, Outcome::draw()), v.to_string());
  return cert;
}

inline std::optional<AprioriParams> apriori_search(int max_p = 4, int max_q = 4) {
  for (int p = 1; p <= max_p; ++p)
    for (int q = 1; q <= max_q; ++q)
      if (certify_apriori_tree({p, q}, kDefaultBudget, true).ok()) return AprioriParams{p, q};
  return std::nullopt;
}

// Three rays carrying 5, 3 and 3 customers; ray r has gaps[r] empty
// vertices before its customers, which then fill the rest of the ray.
inline Instance gen_three_ray_star(const std::array<int, 3>& gaps = {0, 0, 0}) {
  const std::array<int, 3> counts = {5, 3, 3};
  std::vector<Ray> rays;
  for (std::size_t r = 0; r < 3; ++r) {
    Ray ray{gaps[r] + counts[r], {}};
    for (int c = 1; c <= counts[r]; ++c) ray.customers.push_back(gaps[r] + c);
    rays.push_back(ray);
  }
  return gen_star(rays);
}

// Customers of each ray of a star built by gen_star, nearest first.
inline std::vector<std::vector<Vertex>> star_rays(const Instance& star) {
  std::vector<std::vector<Vertex>> rays;
  for (Vertex first : star.graph.neighbors(0)) {
    std::vector<Vertex> ray;
    Vertex prev = 0, cur = first;
    while (true) {
      if (star.is_customer(cur)) ray.push_back(cur);
      Vertex next = -1;
      for (Vertex nb : star.graph.neighbors(cur))
        if (nb != prev) next = nb;
      if (next < 0) break;
      prev = cur;
      cur = next;
    }
    rays.push_back(ray);
  }
  return rays;
}

// Collect ray r completely, then the rest nearest first.
inline std::vector<Vertex> single_ray_priority(const Instance& star, std::size_t r) {
  auto rays = star_rays(star);
  std::vector<Vertex> out = rays[r];
  const auto dist = distances_from(star.graph, 0);
  std::vector<Vertex> rest;
  for (Vertex c : star.customers)
    if (std::find(out.begin(), out.end(), c) == out.end()) rest.push_back(c);
  std::stable_sort(rest.begin(), rest.end(), [&](Vertex a, Vertex b) {
    return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
  });
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

inline Certificate certify_three_ray_star(const Instance& inst, std::size_t budget = kDefaultBudget) {
  Certificate cert;
  cert.add("11 customers", inst.customer_count() == 11);
  Outcome v = solve(inst, budget).value();
  cert.add("value >= Ended(+1)", at_least(v, Outcome::ended(1)), v.to_string());
  auto rays = star_rays(inst);
  for (std::size_t r = 0; r < rays.size(); ++r) {
    APrioriStrategy s(single_ray_priority(inst, r));
    s.init(inst, Player::I);
    Outcome o = best_response(inst, s, Player::I, budget);
    cert.add("collecting ray " + std::to_string(r) + " (" + std::to_string(rays[r].size()) + " customers) first loses",
             at_most(o, Outcome::ended(-1)), o.to_string());
  }
  GreedyStrategy g;
  g.init(inst, Player::I);
  cert.add("nearest-customer play by I", true, best_response(inst, g, Player::I, budget).to_string(), false);
  return cert;
}

inline std::optional<std::array<int, 3>> three_ray_search(int max_gap = 5) {
  for (int total = 0; total <= 3 * max_gap; ++total)
    for (int g1 = 0; g1 <= max_gap; ++g1)
      for (int g2 = 0; g2 <= max_gap; ++g2)
        for (int g3 = g2; g3 <= max_gap; ++g3) {
          if (g1 + g2 + g3 != total || g1 + 5 <= g3 + 3) continue;
          std::array<int, 3> gaps{g1, g2, g3};
          if (certify_three_ray_star(gen_three_ray_star(gaps)).ok()) return gaps;
        }
  return std::nullopt;
}

inline Certificate certify_wheel(int n, std::size_t budget = kDefaultBudget) {
  Certificate cert;
  Outcome v = solve(gen_wheel(n), budget).value();
  cert.add("value = Ended(2-n)", v == Outcome::ended(2 - n), v.to_string());
  return cert;
}

// ---- catalog ----

struct CatalogEntry {
  std::string name;
  json params;
  std::string certificate;  // what certify() establishes
  std::string provenance;
  std::function<Instance()> build;
  std::function<Certificate(std::size_t budget)> certify;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (int n : {3, 5, 7, 9}) {
      out.push_back({"wheel" + std::to_string(n), json{{"n", n}}, "value Ended(" + std::to_string(2 - n) + ")",
                     "directed wheel; I wins one customer", [n] { return gen_wheel(n); },
                     [n](std::size_t b) { return certify_wheel(n, b); }});
    }
    out.push_back({"zugzwang", json{{"extra_edges", zugzwang_extra_edges()}}, "value <= Ended(-1), response lines lose",
                   "searched: first extra-edge set passing the zugzwang checks", [] { return gen_zugzwang(); },
                   [](std::size_t b) { return certify_zugzwang(gen_zugzwang(), b); }});
    out.push_back({"draw-game", json{{"base", "zugzwang"}, {"v0'", {0, 1, 2}}}, "value Draw, optimal play repeats",
                   "zugzwang plus v0' adjacent to v0, v1, v2", [] { return gen_draw_game(); },
                   [](std::size_t b) { return certify_draw_game(gen_draw_game(), b); }});
    const auto tp = trailing_defaults();
    out.push_back({"trailing-tree", json{{"k", tp.k}, {"d", tp.d}, {"L", tp.L}, {"s", tp.s}},
                   "value Ended(+1), near first moves lose", "grid search d in 2..6, L in 6..20",
                   [tp] { return gen_trailing_tree(tp.k, tp.d, tp.L, tp.s); },
                   [tp](std::size_t b) { return certify_trailing_tree(tp, b); }});
    const auto ap = apriori_defaults();
    out.push_back({"apriori-tree", json{{"p", ap.p}, {"q", ap.q}}, "every a-priori ordering loses to best response",
                   "grid search p, q in 1..4", [ap] { return gen_apriori_tree(ap.p, ap.q); },
                   [ap](std::size_t b) { return certify_apriori_tree(ap, b); }});
    out.push_back({"three-ray-star", json{{"rays", {5, 3, 3}}, {"gaps", {0, 0, 0}}},
                   "value >= Ended(+1), single-ray plans lose", "searched ray gaps, customers 5/3/3",
                   [] { return gen_three_ray_star(); }, [](std::size_t b) { return certify_three_ray_star(gen_three_ray_star(), b); }});
    out.push_back({"two-rays", json{{"rays", {1, 1}}}, "value Ended(0)", "two rays of length one, one customer each",
                   [] { return gen_star({{1, {1}}, {1, {1}}}); },
                   [](std::size_t b) {
                     Certificate c;
                     Outcome v = solve(gen_star({{1, {1}}, {1, {1}}}), b).value();
                     c.add("value = Ended(0)", v == Outcome::ended(0), v.to_string());
                     return c;
                   }});
    return out;
  }();
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw std::invalid_argument("no catalog entry named '" + name + "'");
}

}  // namespace csp
