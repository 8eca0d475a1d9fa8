#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "csp/game.hpp"

namespace csp {

inline constexpr std::size_t kDefaultBudget = 10'000'000;

// Sentinels for the per-state threshold values below.
inline constexpr int kNeverEnds = -10000;   // I cannot force the game to end
inline constexpr int kForcesDraw = 10000;   // I can keep the game from ever ending

// "I forces an ending whose margin is >= margin, or (when draw_ok) a game that
// never ends." Margins are relative to the position they are asked about.
struct Threshold {
  int margin = 0;
  bool draw_ok = false;

  friend bool operator==(const Threshold&, const Threshold&) = default;
};

// What a solved position knows about I's guarantees, in future margin:
//   end_value:  largest m such that I forces an ending with margin >= m
//   hold_value: largest m such that I forces (ending with margin >= m or no ending)
struct PositionValues {
  int end_value = kNeverEnds;
  int hold_value = kNeverEnds;

  bool forces(Threshold t, int offset = 0) const {
    if (t.draw_ok) return hold_value == kForcesDraw || hold_value + offset >= t.margin;
    return end_value != kNeverEnds && end_value + offset >= t.margin;
  }

  PositionValues shifted(int delta) const {
    PositionValues v = *this;
    if (v.end_value != kNeverEnds) v.end_value += delta;
    if (v.hold_value != kForcesDraw) v.hold_value += delta;
    return v;
  }
};

// One rung per distinct rank of the outcome order, lowest first.
struct Rung {
  Outcome outcome;
  Threshold threshold;
  bool tie_and_draw = false;  // EqualsTie: Draw and Ended(0) share this rung
};

inline std::vector<Rung> outcome_ladder(int customers, DrawRank rank) {
  std::vector<Rung> ladder;
  auto draw_rank = outcome_rank(Outcome::draw(), rank);
  bool draw_placed = false;
  for (int m = -customers; m <= customers; ++m) {
    Outcome o = Outcome::ended(m);
    auto r = outcome_rank(o, rank);
    if (!draw_placed && draw_rank < r) {
      ladder.push_back({Outcome::draw(), {m, true}, false});
      draw_placed = true;
    }
    if (r == draw_rank) {
      ladder.push_back({o, {m, true}, true});
      draw_placed = true;
      continue;
    }
    ladder.push_back({o, {m, draw_rank >= r}, false});
  }
  if (!draw_placed) ladder.push_back({Outcome::draw(), {customers + 1, true}, false});
  return ladder;
}

// Index of the highest rung I forces from a position with the given values
// and accumulated margin.
inline std::size_t value_rung(const std::vector<Rung>& ladder, PositionValues v, int offset) {
  for (std::size_t i = ladder.size(); i-- > 0;)
    if (v.forces(ladder[i].threshold, offset)) return i;
  return 0;
}

inline Outcome rung_outcome(const Rung& rung, PositionValues v, int offset) {
  if (!rung.tie_and_draw) return rung.outcome;
  return v.forces(Threshold{0, false}, offset) ? Outcome::ended(0) : Outcome::draw();
}

// The non-capturing part of one layer as an explicit game graph. Capturing
// moves and in-layer terminal positions are exits with known values.
struct LayerGame {
  CustomerSet remaining = 0;
  std::vector<Player> mover;
  std::vector<char> terminal;
  std::vector<std::uint32_t> succ_begin;  // CSR over in-layer successors
  std::vector<std::uint32_t> succ;
  std::vector<std::uint32_t> exit_begin;  // CSR over exits
  std::vector<PositionValues> exits;      // already shifted by the capture

  std::size_t size() const { return mover.size(); }
  std::size_t out_degree(std::size_t s) const {
    return (succ_begin[s + 1] - succ_begin[s]) + (exit_begin[s + 1] - exit_begin[s]);
  }

  std::vector<std::vector<std::uint32_t>> predecessors() const {
    std::vector<std::vector<std::uint32_t>> pred(size());
    for (std::uint32_t s = 0; s < size(); ++s)
      for (auto i = succ_begin[s]; i < succ_begin[s + 1]; ++i) pred[succ[i]].push_back(s);
    return pred;
  }
};

// Set of in-layer positions from which I forces the threshold, computed from
// scratch as a least fixpoint (reachability) or via the complement of II's
// least fixpoint (safety).
inline std::vector<char> force_set(const LayerGame& game, Threshold t) {
  const std::size_t n = game.size();
  const auto pred = game.predecessors();
  auto exit_ok = [&](const PositionValues& v) { return v.forces(t); };
  auto terminal_ok = [&] { return PositionValues{0, 0}.forces(t); };

  // "goal" states: for reachability those where I has won, for safety those
  // where II has pushed the game into an ending below the threshold.
  std::vector<char> goal(n, 0);
  std::vector<std::size_t> counter(n, 0);
  std::deque<std::uint32_t> queue;
  const Player attacker = t.draw_ok ? Player::II : Player::I;
  auto add = [&](std::uint32_t s) {
    if (!goal[s]) {
      goal[s] = 1;
      queue.push_back(s);
    }
  };
  for (std::uint32_t s = 0; s < n; ++s) {
    if (game.terminal[s]) {
      if (terminal_ok() != t.draw_ok) add(s);
      continue;
    }
    counter[s] = game.out_degree(s);
    for (auto i = game.exit_begin[s]; i < game.exit_begin[s + 1]; ++i) {
      bool hit = exit_ok(game.exits[i]) != t.draw_ok;
      if (!hit) continue;
      if (game.mover[s] == attacker) {
        add(s);
      } else if (--counter[s] == 0) {
        add(s);
      }
    }
  }
  while (!queue.empty()) {
    auto w = queue.front();
    queue.pop_front();
    for (auto p : pred[w]) {
      if (goal[p]) continue;
      if (game.mover[p] == attacker) {
        add(p);
      } else if (--counter[p] == 0) {
        add(p);
      }
    }
  }
  if (t.draw_ok)
    for (auto& g : goal) g = !g;
  return goal;
}

struct SolveStats {
  std::size_t states_visited = 0;
  std::size_t layers_solved = 0;
  double elapsed_seconds = 0;
};

struct BestMove {
  Move move;
  Outcome outcome;  // value after the move, including the accumulated margin
};

class SolveResult;

SolveResult solve(const Instance& inst, std::size_t budget = kDefaultBudget);
SolveResult solve_from(const Instance& inst, const GameState& root, std::size_t budget = kDefaultBudget);

class SolveResult {
 public:
  const GameRules& rules() const { return *rules_; }
  const Instance& instance() const { return rules_->instance(); }
  const SolveStats& stats() const { return stats_; }
  const GameState& root() const { return root_; }
  const std::vector<Rung>& ladder() const { return ladder_; }

  // Optimal outcome from the root with I moving first (or whoever's turn the
  // root says).
  Outcome value() const { return value_at(root_, 0); }

  // Optimal outcome of the rest of the game given the margin accumulated so
  // far; the result includes that margin.
  Outcome value_at(const GameState& s, int margin_so_far) const {
    auto v = values(s);
    const auto ladder = ladder_for(margin_so_far);
    return rung_outcome(ladder[value_rung(ladder, v, margin_so_far)], v, margin_so_far);
  }

  bool contains(const GameState& s) const { return find(s).has_value(); }

  PositionValues values(const GameState& s) const {
    auto loc = find(s);
    if (!loc) throw std::out_of_range("state not reachable from the solved root");
    return layers_[loc->first].values[loc->second];
  }

  // Optimal move with a deterministic tie-break: the first qualifying move in
  // legal_moves order. A move qualifies when it keeps the value and, where the
  // mover must force the game to end, makes progress toward that ending.
  // nullopt on terminal positions.
  std::optional<BestMove> best_move(const GameState& s, int margin_so_far) const {
    auto loc = find(s);
    if (!loc) throw std::out_of_range("state not reachable from the solved root");
    const SolvedLayer& layer = layers_[loc->first];
    const std::uint32_t idx = loc->second;
    Position pos = rules_->decode(layer.keys[idx]);
    if (rules_->terminal(pos, layer.remaining)) return std::nullopt;
    const PositionValues here = layer.values[idx];
    const auto ladder = ladder_for(margin_so_far);
    const std::size_t rung = value_rung(ladder, here, margin_so_far);
    const Player mover = pos.turn;

    std::optional<BestMove> chosen;
    rules_->for_each_move(pos, [&](const Move& m, const Position& next, int cust) {
      if (chosen) return;
      CustomerSet rem = layer.remaining;
      int delta = 0;
      if (cust >= 0 && (rem >> cust & 1u)) {
        rem &= ~(CustomerSet{1} << cust);
        delta = mover == Player::I ? 1 : -1;
      }
      const bool same_layer = rem == layer.remaining;
      const SolvedLayer& nl = same_layer ? layer : layers_[layer_of_.at(rem)];
      const std::uint32_t ni = nl.index.at(rules_->encode(next));
      const PositionValues nv = nl.values[ni];
      const int offset = margin_so_far + delta;
      bool ok = false;
      if (mover == Player::I) {
        const Threshold t = ladder[rung].threshold;
        ok = nv.forces(t, offset);
        if (ok && !t.draw_ok && same_layer) ok = nl.end_rank[ni] < layer.end_rank[idx];
      } else if (rung + 1 == ladder.size()) {
        ok = true;
      } else {
        const Threshold t = ladder[rung + 1].threshold;
        ok = !nv.forces(t, offset);
        if (ok && t.draw_ok && same_layer) ok = nl.hold_rank[ni] < layer.hold_rank[idx];
      }
      if (ok) chosen = BestMove{m, rung_outcome(ladder[value_rung(ladder, nv, offset)], nv, offset)};
    });
    if (!chosen) throw std::logic_error("solver tables admit no optimal move");
    return chosen;
  }

  // The in-layer game of one solved layer, rebuilt from stored values of the
  // layers below it.
  LayerGame layer_game(CustomerSet remaining) const {
    const SolvedLayer& layer = layers_[layer_of_.at(remaining)];
    return build_layer_game(layer);
  }

  std::vector<CustomerSet> layer_keys() const {
    std::vector<CustomerSet> out;
    for (const auto& l : layers_) out.push_back(l.remaining);
    return out;
  }

  template <class Fn>
  void for_each_state(Fn&& fn) const {
    for (const auto& layer : layers_)
      for (std::size_t i = 0; i < layer.keys.size(); ++i)
        fn(rules_->state_of(rules_->decode(layer.keys[i]), layer.remaining), layer.values[i]);
  }

  // States of one layer in the same order as layer_game() indices.
  std::vector<GameState> layer_states(CustomerSet remaining) const {
    const SolvedLayer& layer = layers_[layer_of_.at(remaining)];
    std::vector<GameState> out;
    for (auto key : layer.keys) out.push_back(rules_->state_of(rules_->decode(key), remaining));
    return out;
  }

  std::size_t state_count() const { return stats_.states_visited; }

 private:
  friend SolveResult solve_from(const Instance&, const GameState&, std::size_t);

  struct SolvedLayer {
    CustomerSet remaining = 0;
    std::vector<std::uint64_t> keys;
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<PositionValues> values;
    std::vector<std::uint32_t> end_rank;   // order of entry into I's reachability sets
    std::vector<std::uint32_t> hold_rank;  // order of entry into II's attractor
  };

  std::optional<std::pair<std::size_t, std::uint32_t>> find(const GameState& s) const {
    auto lit = layer_of_.find(s.remaining);
    if (lit == layer_of_.end()) return std::nullopt;
    if (s.pieces_i.size() != static_cast<std::size_t>(rules_->instance().h()) ||
        s.pieces_ii.size() != static_cast<std::size_t>(rules_->instance().k()))
      return std::nullopt;
    const SolvedLayer& layer = layers_[lit->second];
    auto it = layer.index.find(rules_->encode(rules_->position_of(s)));
    if (it == layer.index.end()) return std::nullopt;
    return std::make_pair(lit->second, it->second);
  }

  LayerGame build_layer_game(const SolvedLayer& layer) const {
    LayerGame g;
    g.remaining = layer.remaining;
    const std::size_t n = layer.keys.size();
    g.mover.resize(n);
    g.terminal.assign(n, 0);
    g.succ_begin.reserve(n + 1);
    g.exit_begin.reserve(n + 1);
    g.succ_begin.push_back(0);
    g.exit_begin.push_back(0);
    for (std::size_t s = 0; s < n; ++s) {
      Position pos = rules_->decode(layer.keys[s]);
      g.mover[s] = pos.turn;
      if (rules_->terminal(pos, layer.remaining)) {
        g.terminal[s] = 1;
      } else {
        rules_->for_each_move(pos, [&](const Move&, const Position& next, int cust) {
          if (cust >= 0 && (layer.remaining >> cust & 1u)) {
            CustomerSet rem = layer.remaining & ~(CustomerSet{1} << cust);
            const SolvedLayer& nl = layers_[layer_of_.at(rem)];
            const int delta = pos.turn == Player::I ? 1 : -1;
            g.exits.push_back(nl.values[nl.index.at(rules_->encode(next))].shifted(delta));
          } else {
            g.succ.push_back(layer.index.at(rules_->encode(next)));
          }
        });
      }
      g.succ_begin.push_back(static_cast<std::uint32_t>(g.succ.size()));
      g.exit_begin.push_back(static_cast<std::uint32_t>(g.exits.size()));
    }
    return g;
  }

  // Both threshold families in one sweep each: I's reachability sets grow as
  // the margin threshold falls, II's attractor grows as it rises, so the
  // counters carry over between thresholds.
  void solve_layer(SolvedLayer& layer) const {
    const LayerGame g = build_layer_game(layer);
    const std::size_t n = g.size();
    const int r = customer_count(layer.remaining);
    const auto pred = g.predecessors();
    constexpr auto kUnranked = std::numeric_limits<std::uint32_t>::max();
    layer.values.assign(n, PositionValues{kNeverEnds, kForcesDraw});
    layer.end_rank.assign(n, kUnranked);
    layer.hold_rank.assign(n, kUnranked);

    // Events keyed by the threshold at which they fire, offset by r.
    const int span = 2 * r + 3;
    std::vector<std::vector<std::uint32_t>> end_events(static_cast<std::size_t>(span));
    std::vector<std::vector<std::uint32_t>> hold_events(static_cast<std::size_t>(span));
    auto bucket = [&](int theta) { return static_cast<std::size_t>(theta + r + 1); };
    for (std::uint32_t s = 0; s < n; ++s) {
      if (g.terminal[s]) {
        end_events[bucket(0)].push_back(s);
        hold_events[bucket(1)].push_back(s);
        continue;
      }
      for (auto i = g.exit_begin[s]; i < g.exit_begin[s + 1]; ++i) {
        const auto& e = g.exits[i];
        if (e.end_value != kNeverEnds) end_events[bucket(e.end_value)].push_back(s);
        if (e.hold_value != kForcesDraw) hold_events[bucket(e.hold_value + 1)].push_back(s);
      }
    }

    std::uint32_t order = 0;
    std::vector<std::size_t> counter(n);
    std::vector<char> in(n, 0);
    std::vector<std::uint32_t> queue;

    // I forces an ending with margin >= theta.
    for (std::uint32_t s = 0; s < n; ++s) counter[s] = g.out_degree(s);
    for (int theta = r; theta >= -r; --theta) {
      queue.clear();
      auto add = [&](std::uint32_t s) {
        if (in[s]) return;
        in[s] = 1;
        layer.values[s].end_value = theta;
        layer.end_rank[s] = order++;
        queue.push_back(s);
      };
      for (auto s : end_events[bucket(theta)]) {
        if (g.terminal[s] || g.mover[s] == Player::I) {
          add(s);
        } else if (!in[s] && --counter[s] == 0) {
          add(s);
        }
      }
      for (std::size_t q = 0; q < queue.size(); ++q)
        for (auto p : pred[queue[q]]) {
          if (in[p]) continue;
          if (g.mover[p] == Player::I || --counter[p] == 0) add(p);
        }
    }

    // II forces an ending with margin < theta; I holds theta - 1 at best.
    std::fill(in.begin(), in.end(), 0);
    order = 0;
    for (std::uint32_t s = 0; s < n; ++s) counter[s] = g.out_degree(s);
    for (int theta = -r + 1; theta <= r + 1; ++theta) {
      queue.clear();
      auto add = [&](std::uint32_t s) {
        if (in[s]) return;
        in[s] = 1;
        layer.values[s].hold_value = theta - 1;
        layer.hold_rank[s] = order++;
        queue.push_back(s);
      };
      for (auto s : hold_events[bucket(theta)]) {
        if (g.terminal[s] || g.mover[s] == Player::II) {
          add(s);
        } else if (!in[s] && --counter[s] == 0) {
          add(s);
        }
      }
      for (std::size_t q = 0; q < queue.size(); ++q)
        for (auto p : pred[queue[q]]) {
          if (in[p]) continue;
          if (g.mover[p] == Player::II || --counter[p] == 0) add(p);
        }
    }
  }

  std::shared_ptr<const GameRules> rules_;
  GameState root_;
  std::vector<SolvedLayer> layers_;
  std::unordered_map<CustomerSet, std::size_t> layer_of_;
  std::vector<Rung> ladder_;

  // Final margins lie in [-C, C] in any real game; a caller may still ask
  // about an accumulated margin no game reaches, which needs a wider ladder.
  std::vector<Rung> ladder_for(int margin_so_far) const {
    if (margin_so_far == 0) return ladder_;
    const Instance& inst = instance();
    return outcome_ladder(inst.customer_count() + std::abs(margin_so_far), inst.draw_rank);
  }
  SolveStats stats_;
};

inline SolveResult solve_from(const Instance& inst, const GameState& root, std::size_t budget) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult res;
  res.rules_ = std::make_shared<const GameRules>(inst);
  const GameRules& rules = *res.rules_;
  res.root_ = root;
  res.ladder_ = outcome_ladder(inst.customer_count(), inst.draw_rank);

  auto layer_for = [&](CustomerSet rem) -> std::size_t {
    auto [it, fresh] = res.layer_of_.try_emplace(rem, res.layers_.size());
    if (fresh) {
      res.layers_.emplace_back();
      res.layers_.back().remaining = rem;
    }
    return it->second;
  };

  // Forward enumeration of everything reachable from the root.
  std::size_t total = 0;
  std::deque<std::pair<std::size_t, std::uint32_t>> frontier;
  auto visit = [&](CustomerSet rem, std::uint64_t key) {
    std::size_t li = layer_for(rem);
    auto& layer = res.layers_[li];
    auto [it, fresh] = layer.index.try_emplace(key, static_cast<std::uint32_t>(layer.keys.size()));
    if (fresh) {
      if (++total > budget) throw BudgetExceeded(budget, total);
      layer.keys.push_back(key);
      frontier.emplace_back(li, it->second);
    }
  };
  if ((root.remaining & ~rules.all_customers()) != 0) throw InvalidInstance("root remaining set has foreign bits");
  visit(root.remaining, rules.encode(rules.position_of(root)));
  while (!frontier.empty()) {
    auto [li, idx] = frontier.front();
    frontier.pop_front();
    const CustomerSet rem = res.layers_[li].remaining;
    const Position pos = rules.decode(res.layers_[li].keys[idx]);
    if (rules.terminal(pos, rem)) continue;
    rules.for_each_move(pos, [&](const Move&, const Position& next, int cust) {
      CustomerSet nrem = rem;
      if (cust >= 0) nrem &= ~(CustomerSet{1} << cust);
      visit(nrem, rules.encode(next));
    });
  }

  // Captures remove exactly one customer, so solving by increasing size of
  // the remaining set always finds the exits' layers finished.
  std::vector<std::size_t> order(res.layers_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return customer_count(res.layers_[a].remaining) < customer_count(res.layers_[b].remaining);
  });
  for (std::size_t li : order) res.solve_layer(res.layers_[li]);

  res.stats_.states_visited = total;
  res.stats_.layers_solved = res.layers_.size();
  res.stats_.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

inline SolveResult solve(const Instance& inst, std::size_t budget) {
  return solve_from(inst, initial_state(inst), budget);
}

inline BestMove best_move(const SolveResult& solved, const GameState& s, int margin_so_far = 0) {
  auto m = solved.best_move(s, margin_so_far);
  if (!m) throw IllegalMove("no move from a terminal position");
  return *m;
}

}  // namespace csp
