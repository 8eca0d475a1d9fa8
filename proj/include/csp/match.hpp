#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "csp/strategy.hpp"

namespace csp {

inline constexpr std::size_t kDefaultPlyCap = 1'000'000;

struct PlayedMove {
  Player mover;
  Move move;
  int capture = 0;
};

struct MatchRecord {
  enum class Termination { Ended, RepetitionDraw };

  std::vector<PlayedMove> moves;
  Outcome outcome = Outcome::ended(0);
  Termination reason = Termination::Ended;
  int score_i = 0;
  int score_ii = 0;
  bool flagged = false;  // a strategy left its construction (see Strategy::flagged)
};

inline std::string to_string(MatchRecord::Termination t) {
  return t == MatchRecord::Termination::Ended ? "Ended" : "RepetitionDraw";
}

inline std::string position_key(const GameState& s) {
  std::string k(1, static_cast<char>('0' + static_cast<int>(s.turn)));
  for (Vertex v : s.pieces_i) k += "," + std::to_string(v);
  k += "|";
  for (Vertex v : s.pieces_ii) k += "," + std::to_string(v);
  k += "|" + std::to_string(s.remaining);
  return k;
}

// Tracks positions since the last capture; a repeat ends the game as a draw.
class RepetitionTracker {
 public:
  // True when the position was already seen since the last capture.
  bool repeated(const GameState& s) { return !seen_.insert(position_key(s)).second; }
  void clear() { seen_.clear(); }

 private:
  std::unordered_set<std::string> seen_;
};

// Plays the strategies against each other from the initial position. Both
// strategies are (re)initialized for the instance.
inline MatchRecord run_match(const Instance& inst, Strategy& strat_i, Strategy& strat_ii,
                             std::size_t ply_cap = kDefaultPlyCap) {
  strat_i.init(inst, Player::I);
  strat_ii.init(inst, Player::II);
  MatchRecord rec;
  GameState s = initial_state(inst);
  RepetitionTracker seen;
  for (std::size_t ply = 0;; ++ply) {
    if (is_terminal(inst, s)) {
      rec.outcome = Outcome::ended(rec.score_i - rec.score_ii);
      rec.reason = MatchRecord::Termination::Ended;
      break;
    }
    if (seen.repeated(s)) {
      rec.outcome = Outcome::draw();
      rec.reason = MatchRecord::Termination::RepetitionDraw;
      break;
    }
    if (ply >= ply_cap) throw PlyCapExceeded("match exceeded " + std::to_string(ply_cap) + " plies");
    Strategy& mover = s.turn == Player::I ? strat_i : strat_ii;
    Move m = mover.propose();
    if (!is_legal(inst, s, m)) throw IllegalMove(mover.kind() + " proposed illegal move " + m.to_string());
    auto r = apply_move(inst, s, m);
    rec.moves.push_back({s.turn, m, r.capture});
    (s.turn == Player::I ? rec.score_i : rec.score_ii) += r.capture;
    strat_i.observe(m);
    strat_ii.observe(m);
    if (r.capture) seen.clear();
    s = std::move(r.state);
  }
  rec.flagged = strat_i.flagged() || strat_ii.flagged();
  return rec;
}

// Exact best outcome the free player achieves against a fixed positional
// strategy. The opponent's replies are determined, so this is a one-player
// search: the free player picks among every reachable ending, or a draw if
// any cycle (a repeated position) is reachable.
inline Outcome best_response(const Instance& inst, const Strategy& fixed, Player fixed_role,
                             std::size_t budget = kDefaultBudget) {
  if (!fixed.positional()) throw std::invalid_argument(fixed.kind() + " is not positional");
  const Player free_role = opponent(fixed_role);
  GameRules rules(inst);

  struct Key {
    CustomerSet remaining;
    std::uint64_t pos;
    int margin;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<std::uint64_t>{}(k.pos);
      h ^= std::hash<std::uint64_t>{}(k.remaining) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<int>{}(k.margin) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };
  std::unordered_map<Key, char, KeyHash> color;  // 1 on stack, 2 done

  bool cycle = false;
  std::optional<Outcome> best;
  auto better = [&](Outcome a, Outcome b) {
    auto c = compare_outcomes(a, b, inst.draw_rank);
    return free_role == Player::I ? c > 0 : c < 0;
  };
  auto consider = [&](Outcome o) {
    if (!best || better(o, *best)) best = o;
  };

  struct Frame {
    Key key;
    GameState state;
    std::vector<std::pair<GameState, int>> next;  // successor, margin
    std::size_t i = 0;
  };
  auto expand = [&](const GameState& s, int margin) {
    std::vector<std::pair<GameState, int>> out;
    if (is_terminal(inst, s)) return out;
    std::vector<Move> moves;
    if (s.turn == fixed_role) {
      moves.push_back(fixed.decide(s, margin));
    } else {
      moves = legal_moves(inst, s);
    }
    for (const Move& m : moves) {
      auto r = apply_move(inst, s, m);
      out.emplace_back(r.state, margin + (s.turn == Player::I ? r.capture : -r.capture));
    }
    return out;
  };
  auto key_of = [&](const GameState& s, int margin) {
    return Key{s.remaining, rules.encode(rules.position_of(s)), margin};
  };

  std::vector<Frame> stack;
  auto push = [&](const GameState& s, int margin) {
    Key k = key_of(s, margin);
    auto [it, fresh] = color.try_emplace(k, 1);
    if (!fresh) {
      if (it->second == 1) cycle = true;
      return;
    }
    if (color.size() > budget) throw BudgetExceeded(budget, color.size());
    if (is_terminal(inst, s)) {
      consider(Outcome::ended(margin));
      it->second = 2;
      return;
    }
    stack.push_back({k, s, expand(s, margin), 0});
  };
  push(initial_state(inst), 0);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.i < f.next.size()) {
      auto [ns, nm] = f.next[f.i++];
      push(ns, nm);
    } else {
      color[f.key] = 2;
      stack.pop_back();
    }
  }
  if (cycle) consider(Outcome::draw());
  return *best;
}

}  // namespace csp
