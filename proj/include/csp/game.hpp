#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csp/instance.hpp"

namespace csp {

enum class Player : std::uint8_t { I = 0, II = 1 };

constexpr Player opponent(Player p) noexcept { return p == Player::I ? Player::II : Player::I; }

inline std::string to_string(Player p) { return p == Player::I ? "I" : "II"; }

// Remaining customers as a bitset over Instance::customers indices.
using CustomerSet = std::uint64_t;

inline constexpr int kMaxStateCustomers = 64;

inline int customer_count(CustomerSet s) { return std::popcount(s); }

struct GameState {
  Player turn = Player::I;
  std::vector<Vertex> pieces_i;   // sorted
  std::vector<Vertex> pieces_ii;  // sorted
  CustomerSet remaining = 0;

  const std::vector<Vertex>& pieces(Player p) const { return p == Player::I ? pieces_i : pieces_ii; }
  std::vector<Vertex>& pieces(Player p) { return p == Player::I ? pieces_i : pieces_ii; }

  friend bool operator==(const GameState&, const GameState&) = default;
};

struct Move {
  enum class Kind : std::uint8_t { Step, Pass, ForcedNull };

  Kind kind = Kind::ForcedNull;
  int piece = 0;
  Vertex target = -1;

  static Move step(int piece, Vertex target) { return {Kind::Step, piece, target}; }
  static Move pass() { return {Kind::Pass, 0, -1}; }
  static Move forced_null() { return {Kind::ForcedNull, 0, -1}; }

  bool is_step() const { return kind == Kind::Step; }

  friend bool operator==(const Move&, const Move&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::Step: return "Step(" + std::to_string(piece) + "," + std::to_string(target) + ")";
      case Kind::Pass: return "Pass";
      case Kind::ForcedNull: return "ForcedNull";
    }
    return "?";
  }
};

inline std::vector<Vertex> remaining_vertices(const Instance& inst, CustomerSet remaining) {
  std::vector<Vertex> out;
  for (int i = 0; i < inst.customer_count(); ++i)
    if (remaining >> i & 1u) out.push_back(inst.customers[static_cast<std::size_t>(i)]);
  return out;
}

inline CustomerSet all_customers_mask(int count) {
  if (count > kMaxStateCustomers)
    throw InvalidInstance("game states support at most 64 customers, instance has " + std::to_string(count));
  return count == 64 ? ~CustomerSet{0} : (CustomerSet{1} << count) - 1;
}

inline CustomerSet customer_mask(const Instance& inst, std::span<const Vertex> vertices) {
  CustomerSet m = 0;
  for (Vertex v : vertices) {
    int idx = inst.customer_index(v);
    if (idx < 0) throw InvalidInstance("vertex " + std::to_string(v) + " is not a customer");
    m |= CustomerSet{1} << idx;
  }
  return m;
}

inline GameState initial_state(const Instance& inst) {
  GameState s;
  s.turn = Player::I;
  s.pieces_i = inst.starts_i;
  s.pieces_ii = inst.starts_ii;
  std::sort(s.pieces_i.begin(), s.pieces_i.end());
  std::sort(s.pieces_ii.begin(), s.pieces_ii.end());
  s.remaining = all_customers_mask(inst.customer_count());
  return s;
}

// Steps in (piece, target) order, then Pass when allowed; a lone ForcedNull
// when the mover is stuck and may not pass.
inline std::vector<Move> legal_moves(const Instance& inst, const GameState& s) {
  std::vector<Move> moves;
  const auto& pieces = s.pieces(s.turn);
  for (std::size_t p = 0; p < pieces.size(); ++p)
    for (Vertex t : inst.graph.neighbors(pieces[p])) moves.push_back(Move::step(static_cast<int>(p), t));
  if (inst.passing_allowed) {
    moves.push_back(Move::pass());
  } else if (moves.empty()) {
    moves.push_back(Move::forced_null());
  }
  return moves;
}

inline bool is_legal(const Instance& inst, const GameState& s, const Move& m) {
  switch (m.kind) {
    case Move::Kind::Step: {
      const auto& pieces = s.pieces(s.turn);
      if (m.piece < 0 || m.piece >= static_cast<int>(pieces.size())) return false;
      if (m.target < 0 || m.target >= inst.graph.vertex_count) return false;
      return inst.graph.has_edge(pieces[static_cast<std::size_t>(m.piece)], m.target);
    }
    case Move::Kind::Pass: return inst.passing_allowed;
    case Move::Kind::ForcedNull: {
      if (inst.passing_allowed) return false;
      for (Vertex v : s.pieces(s.turn))
        if (!inst.graph.neighbors(v).empty()) return false;
      return true;
    }
  }
  return false;
}

struct MoveResult {
  GameState state;
  int capture = 0;  // 0 or 1, credited to the mover
};

inline MoveResult apply_move(const Instance& inst, const GameState& s, const Move& m) {
  if (!is_legal(inst, s, m)) throw IllegalMove("illegal move " + m.to_string() + " for player " + to_string(s.turn));
  MoveResult r{s, 0};
  if (m.is_step()) {
    auto& pieces = r.state.pieces(s.turn);
    pieces[static_cast<std::size_t>(m.piece)] = m.target;
    std::sort(pieces.begin(), pieces.end());
    int idx = inst.customer_index(m.target);
    if (idx >= 0 && (r.state.remaining >> idx & 1u)) {
      r.state.remaining &= ~(CustomerSet{1} << idx);
      r.capture = 1;
    }
  }
  r.state.turn = opponent(s.turn);
  return r;
}

enum class TerminalStatus { NotTerminal, Terminal };

inline TerminalStatus terminal_status(const Instance& inst, const GameState& s) {
  if (s.remaining == 0) return TerminalStatus::Terminal;
  const Graph& g = inst.graph;
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count), 0);
  std::vector<Vertex> stack;
  for (const auto* pieces : {&s.pieces_i, &s.pieces_ii})
    for (Vertex v : *pieces)
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
      }
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    int idx = inst.customer_index(u);
    if (idx >= 0 && (s.remaining >> idx & 1u)) return TerminalStatus::NotTerminal;
    for (Vertex v : g.neighbors(u))
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
      }
  }
  return TerminalStatus::Terminal;
}

inline bool is_terminal(const Instance& inst, const GameState& s) {
  return terminal_status(inst, s) == TerminalStatus::Terminal;
}

// Fixed-capacity piece placement used by the search code.
inline constexpr int kMaxPieces = 8;

struct Position {
  Player turn = Player::I;
  std::uint8_t h = 0;
  std::uint8_t k = 0;
  std::array<std::uint16_t, kMaxPieces> pieces{};  // I's pieces then II's, each group sorted

  std::span<std::uint16_t> group(Player p) {
    return p == Player::I ? std::span<std::uint16_t>(pieces.data(), h) : std::span<std::uint16_t>(pieces.data() + h, k);
  }
  std::span<const std::uint16_t> group(Player p) const {
    return p == Player::I ? std::span<const std::uint16_t>(pieces.data(), h)
                          : std::span<const std::uint16_t>(pieces.data() + h, k);
  }
};

// Precomputed lookups over one instance; what the solvers and strategies
// run against. Owns a copy of the instance.
class GameRules {
 public:
  explicit GameRules(Instance inst) : inst_(std::move(inst)) {
    require_valid(inst_);
    const int n = inst_.graph.vertex_count;
    all_ = all_customers_mask(inst_.customer_count());
    if (inst_.h() + inst_.k() > kMaxPieces) throw InvalidInstance("at most 8 pieces in total are supported");
    if (n > 65535) throw InvalidInstance("too many vertices for the state encoding");
    customer_of_.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < inst_.customer_count(); ++i)
      customer_of_[static_cast<std::size_t>(inst_.customers[static_cast<std::size_t>(i)])] = i;
    bits_ = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(n - 1))));
    if (1 + (inst_.h() + inst_.k()) * bits_ > 64) throw InvalidInstance("position does not fit the 64-bit key");
    reach_.assign(static_cast<std::size_t>(n), 0);
    for (Vertex v = 0; v < n; ++v) {
      auto d = distances_from(inst_.graph, v);
      CustomerSet m = 0;
      for (Vertex u = 0; u < n; ++u)
        if (d[static_cast<std::size_t>(u)] != kUnreachable && customer_of_[static_cast<std::size_t>(u)] >= 0)
          m |= CustomerSet{1} << customer_of_[static_cast<std::size_t>(u)];
      reach_[static_cast<std::size_t>(v)] = m;
    }
  }

  const Instance& instance() const { return inst_; }
  const Graph& graph() const { return inst_.graph; }
  CustomerSet all_customers() const { return all_; }
  int customer_of(Vertex v) const { return customer_of_[static_cast<std::size_t>(v)]; }
  CustomerSet reach(Vertex v) const { return reach_[static_cast<std::size_t>(v)]; }

  bool terminal(const Position& pos, CustomerSet remaining) const {
    if (remaining == 0) return true;
    CustomerSet r = 0;
    for (int i = 0; i < pos.h + pos.k; ++i) r |= reach_[pos.pieces[static_cast<std::size_t>(i)]];
    return (r & remaining) == 0;
  }

  Position position_of(const GameState& s) const {
    Position p;
    p.turn = s.turn;
    p.h = static_cast<std::uint8_t>(s.pieces_i.size());
    p.k = static_cast<std::uint8_t>(s.pieces_ii.size());
    for (std::size_t i = 0; i < s.pieces_i.size(); ++i) p.pieces[i] = static_cast<std::uint16_t>(s.pieces_i[i]);
    for (std::size_t i = 0; i < s.pieces_ii.size(); ++i)
      p.pieces[p.h + i] = static_cast<std::uint16_t>(s.pieces_ii[i]);
    return p;
  }

  GameState state_of(const Position& p, CustomerSet remaining) const {
    GameState s;
    s.turn = p.turn;
    for (auto v : p.group(Player::I)) s.pieces_i.push_back(v);
    for (auto v : p.group(Player::II)) s.pieces_ii.push_back(v);
    s.remaining = remaining;
    return s;
  }

  std::uint64_t encode(const Position& p) const {
    std::uint64_t key = static_cast<std::uint64_t>(p.turn);
    int shift = 1;
    for (int i = 0; i < p.h + p.k; ++i, shift += bits_) key |= static_cast<std::uint64_t>(p.pieces[static_cast<std::size_t>(i)]) << shift;
    return key;
  }

  Position decode(std::uint64_t key) const {
    Position p;
    p.turn = static_cast<Player>(key & 1u);
    p.h = static_cast<std::uint8_t>(inst_.h());
    p.k = static_cast<std::uint8_t>(inst_.k());
    const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
    int shift = 1;
    for (int i = 0; i < p.h + p.k; ++i, shift += bits_)
      p.pieces[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(key >> shift & mask);
    return p;
  }

  // Calls visit(move, successor, capture) for every legal move in legal_moves
  // order. The successor keeps the remaining set; the caller applies the
  // capture bit.
  template <class Visit>
  void for_each_move(const Position& pos, Visit&& visit) const {
    const Player mover = pos.turn;
    auto group = pos.group(mover);
    bool any_step = false;
    for (int i = 0; i < static_cast<int>(group.size()); ++i) {
      for (Vertex t : inst_.graph.neighbors(group[static_cast<std::size_t>(i)])) {
        any_step = true;
        Position next = pos;
        next.turn = opponent(mover);
        auto g = next.group(mover);
        g[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(t);
        // restore sorted order after replacing one element
        std::size_t j = static_cast<std::size_t>(i);
        while (j > 0 && g[j - 1] > g[j]) std::swap(g[j - 1], g[j]), --j;
        while (j + 1 < g.size() && g[j + 1] < g[j]) std::swap(g[j + 1], g[j]), ++j;
        visit(Move::step(i, t), next, customer_of_[static_cast<std::size_t>(t)]);
      }
    }
    if (inst_.passing_allowed || !any_step) {
      Position next = pos;
      next.turn = opponent(mover);
      visit(inst_.passing_allowed ? Move::pass() : Move::forced_null(), next, -1);
    }
  }

 private:
  Instance inst_;
  CustomerSet all_ = 0;
  std::vector<int> customer_of_;
  std::vector<CustomerSet> reach_;
  int bits_ = 1;
};

}  // namespace csp
