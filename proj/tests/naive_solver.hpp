#pragma once

// Slow reference values for tests. The full state is (position, remaining,
// running margin); every candidate outcome gets its own fixpoint by repeated
// sweeps over the whole graph. Optionally one player is tied to a fixed
// move function, which turns the value into that player's opponent's best
// response.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "csp/game.hpp"

namespace naive {

using namespace csp;

using FixedMove = std::function<Move(const GameState&, int margin)>;

struct Graph {
  std::vector<GameState> state;
  std::vector<int> margin;
  std::vector<bool> terminal;
  std::vector<std::vector<std::size_t>> succ;
};

inline Graph explore(const Instance& inst, const GameState& root, int root_margin, std::optional<Player> fixed_player,
                     const FixedMove& fixed) {
  Graph g;
  std::map<std::tuple<int, std::vector<Vertex>, std::vector<Vertex>, CustomerSet, int>, std::size_t> index;
  auto node = [&](const GameState& s, int margin) {
    auto key = std::make_tuple(static_cast<int>(s.turn), s.pieces_i, s.pieces_ii, s.remaining, margin);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    std::size_t id = g.state.size();
    index.emplace(key, id);
    g.state.push_back(s);
    g.margin.push_back(margin);
    g.terminal.push_back(is_terminal(inst, s));
    g.succ.emplace_back();
    return id;
  };
  node(root, root_margin);
  for (std::size_t i = 0; i < g.state.size(); ++i) {
    if (g.terminal[i]) continue;
    const GameState s = g.state[i];
    const int margin = g.margin[i];
    std::vector<Move> moves;
    if (fixed_player && s.turn == *fixed_player) moves = {fixed(s, margin)};
    else moves = legal_moves(inst, s);
    for (const Move& m : moves) {
      auto r = apply_move(inst, s, m);
      std::size_t j = node(r.state, margin + (s.turn == Player::I ? r.capture : -r.capture));
      g.succ[i].push_back(j);
    }
  }
  return g;
}

// Can I force an outcome ranked >= target from every state? Draw counts
// when it ranks >= target.
inline std::vector<bool> forces(const Instance& inst, const Graph& g, Outcome target) {
  const bool draw_ok = compare_outcomes(Outcome::draw(), target, inst.draw_rank) >= 0;
  auto good_end = [&](std::size_t i) {
    return compare_outcomes(Outcome::ended(g.margin[i]), target, inst.draw_rank) >= 0;
  };
  const std::size_t n = g.state.size();
  // draw_ok: greatest fixpoint of "not yet lost"; otherwise least fixpoint of "won".
  std::vector<bool> in(n, draw_ok);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      bool v;
      if (g.terminal[i]) {
        v = good_end(i);
      } else {
        const bool max_node = g.state[i].turn == Player::I;
        v = !max_node;
        for (std::size_t j : g.succ[i]) {
          if (max_node && in[j]) v = true;
          if (!max_node && !in[j]) v = false;
        }
      }
      if (v != in[i]) {
        in[i] = v;
        changed = true;
      }
    }
  }
  return in;
}

// Best outcome I can force from root, counting root_margin already scored.
inline Outcome value_from(const Instance& inst, const GameState& root, int root_margin,
                          std::optional<Player> fixed_player = std::nullopt, const FixedMove& fixed = {}) {
  Graph g = explore(inst, root, root_margin, fixed_player, fixed);
  std::vector<Outcome> ladder{Outcome::draw()};
  const int span = inst.customer_count() + std::abs(root_margin);
  for (int m = -span; m <= span; ++m) ladder.push_back(Outcome::ended(m));
  std::stable_sort(ladder.begin(), ladder.end(), [&](Outcome a, Outcome b) {
    return compare_outcomes(a, b, inst.draw_rank) > 0;
  });
  for (Outcome t : ladder)
    if (forces(inst, g, t)[0]) return t;
  return ladder.back();
}

inline Outcome value(const Instance& inst, std::optional<Player> fixed_player = std::nullopt, const FixedMove& fixed = {}) {
  return value_from(inst, initial_state(inst), 0, fixed_player, fixed);
}

// Equal, or equivalent under the instance's draw rank.
inline bool same_value(const Instance& inst, Outcome a, Outcome b) {
  return compare_outcomes(a, b, inst.draw_rank) == 0 && (inst.draw_rank == DrawRank::EqualsTie || a == b);
}

}  // namespace naive
