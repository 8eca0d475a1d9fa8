#pragma once

#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "csp/game.hpp"
#include "csp/solver.hpp"

namespace csp {

// Reference value for small instances. Enumerates the whole reachable game
// with the running margin as part of the state (no layering, no shifting) and
// answers each threshold with its own fixpoint over that single graph. Built
// only from the public rule functions so that it shares nothing with the
// layered solver beyond the rules themselves.
inline Outcome oracle_value(const Instance& inst, std::size_t budget = 1'000'000) {
  require_valid(inst);
  struct Node {
    Player mover;
    bool terminal;
    int margin;
    std::vector<std::size_t> succ;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<GameState> states;
  auto key_of = [](const GameState& s, int margin) {
    std::string k;
    k += static_cast<char>(s.turn);
    for (int v : s.pieces_i) k += std::to_string(v) + ",";
    k += "|";
    for (int v : s.pieces_ii) k += std::to_string(v) + ",";
    k += "|" + std::to_string(s.remaining) + "|" + std::to_string(margin);
    return k;
  };
  auto intern = [&](const GameState& s, int margin) {
    auto [it, fresh] = index.try_emplace(key_of(s, margin), nodes.size());
    if (fresh) {
      if (nodes.size() + 1 > budget) throw BudgetExceeded(budget, nodes.size() + 1);
      nodes.push_back({s.turn, is_terminal(inst, s), margin, {}});
      states.push_back(s);
    }
    return it->second;
  };
  intern(initial_state(inst), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].terminal) continue;
    const GameState s = states[i];
    const int margin = nodes[i].margin;
    for (const Move& m : legal_moves(inst, s)) {
      auto r = apply_move(inst, s, m);
      int next_margin = margin + (s.turn == Player::I ? r.capture : -r.capture);
      std::size_t j = intern(r.state, next_margin);
      nodes[i].succ.push_back(j);
    }
  }

  const std::size_t n = nodes.size();
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : nodes[i].succ) pred[j].push_back(i);

  // Does I force an outcome ranked >= target from the root?
  auto forces = [&](Outcome target, bool require_end) {
    const DrawRank dr = inst.draw_rank;
    const bool draw_ok = !require_end && compare_outcomes(Outcome::draw(), target, dr) >= 0;
    const Player attacker = draw_ok ? Player::II : Player::I;
    auto goal_terminal = [&](const Node& nd) {
      bool good = compare_outcomes(Outcome::ended(nd.margin), target, dr) >= 0;
      return draw_ok ? !good : good;
    };
    std::vector<char> goal(n, 0);
    std::vector<std::size_t> counter(n);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
      counter[i] = nodes[i].succ.size();
      if (nodes[i].terminal && goal_terminal(nodes[i])) {
        goal[i] = 1;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      auto w = queue.front();
      queue.pop_front();
      for (auto p : pred[w]) {
        if (goal[p]) continue;
        if (nodes[p].mover == attacker || --counter[p] == 0) {
          goal[p] = 1;
          queue.push_back(p);
        }
      }
    }
    return draw_ok ? !goal[0] : static_cast<bool>(goal[0]);
  };

  // Candidate outcomes from best to worst for I.
  const int c = inst.customer_count();
  std::vector<Outcome> candidates;
  for (int m = c; m >= -c; --m) candidates.push_back(Outcome::ended(m));
  candidates.push_back(Outcome::draw());
  std::stable_sort(candidates.begin(), candidates.end(), [&](Outcome a, Outcome b) {
    return compare_outcomes(a, b, inst.draw_rank) > 0;
  });
  for (Outcome t : candidates) {
    if (!forces(t, false)) continue;
    // With Draw and Ended(0) sharing a rank, name it by whether I can force
    // the game to actually end there.
    if (t.is_draw()) return t;
    if (t.margin() == 0 && compare_outcomes(t, Outcome::draw(), inst.draw_rank) == 0)
      return forces(t, true) ? Outcome::ended(0) : Outcome::draw();
    return t;
  }
  return candidates.back();
}

}  // namespace csp
