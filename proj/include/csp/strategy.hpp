#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "csp/game.hpp"
#include "csp/solver.hpp"

namespace csp {

// Shortest-path distances toward a target, computed on first use.
class DistanceCache {
 public:
  explicit DistanceCache(const Graph* g = nullptr) : graph_(g) {}

  void reset(const Graph* g) {
    graph_ = g;
    to_.clear();
  }

  const std::vector<int>& to(Vertex target) const {
    auto it = to_.find(target);
    if (it == to_.end()) it = to_.emplace(target, distances_to(*graph_, target)).first;
    return it->second;
  }

 private:
  const Graph* graph_;
  mutable std::unordered_map<Vertex, std::vector<int>> to_;
};

// A move-proposing policy that follows the game by observing every move.
// Lifecycle: init(instance, role), then observe() for each move made by
// either side, and propose() whenever it is the strategy's turn.
class Strategy {
 public:
  virtual ~Strategy() = default;

  void init(const Instance& inst, Player role) {
    inst_ = std::make_shared<const Instance>(inst);
    role_ = role;
    state_ = initial_state(*inst_);
    margin_ = 0;
    on_init();
  }

  void observe(const Move& m) {
    const GameState before = state_;
    auto r = apply_move(*inst_, state_, m);
    state_ = r.state;
    margin_ += before.turn == Player::I ? r.capture : -r.capture;
    on_observe(m, before.turn, before);
  }

  Move propose() {
    if (state_.turn != role_) throw std::logic_error("propose() called out of turn");
    return on_propose();
  }

  Player role() const { return role_; }
  const GameState& state() const { return state_; }
  int margin() const { return margin_; }
  const Instance& instance() const { return *inst_; }

  virtual std::string kind() const = 0;

  // Positional strategies choose from the position and accumulated margin
  // alone, which best_response relies on.
  virtual bool positional() const { return false; }
  virtual Move decide(const GameState&, int) const { throw std::logic_error(kind() + " is not positional"); }

  // Set when the strategy had to leave its intended construction.
  virtual bool flagged() const { return false; }

 protected:
  virtual void on_init() {}
  virtual void on_observe(const Move&, Player, const GameState&) {}
  virtual Move on_propose() { return decide(state_, margin_); }

 private:
  std::shared_ptr<const Instance> inst_;
  Player role_ = Player::I;
  GameState state_;
  int margin_ = 0;
};

namespace detail {

// Step for piece `piece` along a shortest path to target; lowest next vertex
// on ties.
inline Move step_toward(const Instance& inst, const DistanceCache& dist, Vertex from, int piece, Vertex target) {
  const auto& d = dist.to(target);
  const int here = d[static_cast<std::size_t>(from)];
  for (Vertex nb : inst.graph.neighbors(from))
    if (d[static_cast<std::size_t>(nb)] == here - 1) return Move::step(piece, nb);
  throw std::logic_error("no shortest-path step toward target");
}

inline Move idle_move(const Instance& inst, const GameState& s) {
  if (inst.passing_allowed) return Move::pass();
  return legal_moves(inst, s).front();
}

// Piece of the mover closest to target (lowest index on ties) and its
// distance, or nullopt if no piece reaches it.
inline std::optional<std::pair<int, int>> closest_piece(const GameState& s, const DistanceCache& dist, Vertex target) {
  const auto& d = dist.to(target);
  std::optional<std::pair<int, int>> best;
  const auto& pieces = s.pieces(s.turn);
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    int dp = d[static_cast<std::size_t>(pieces[p])];
    if (dp == kUnreachable) continue;
    if (!best || dp < best->second) best = std::make_pair(static_cast<int>(p), dp);
  }
  return best;
}

}  // namespace detail

// Heads for the nearest remaining customer, re-choosing every turn. Ties go
// to the lowest customer vertex, then the lowest piece index.
class GreedyStrategy : public Strategy {
 public:
  std::string kind() const override { return "greedy"; }
  bool positional() const override { return true; }

  Move decide(const GameState& s, int) const override {
    const Instance& inst = instance();
    std::optional<std::pair<int, int>> best;  // (piece, distance)
    Vertex target = -1;
    for (Vertex c : remaining_vertices(inst, s.remaining)) {
      auto cp = detail::closest_piece(s, dist_, c);
      if (cp && (!best || cp->second < best->second)) {
        best = cp;
        target = c;
      }
    }
    if (!best) return detail::idle_move(inst, s);
    return detail::step_toward(inst, dist_, s.pieces(s.turn)[static_cast<std::size_t>(best->first)], best->first, target);
  }

 protected:
  void on_init() override { dist_.reset(&instance().graph); }

 private:
  DistanceCache dist_;
};

// Always heads for the highest-priority customer that is still remaining.
class APrioriStrategy : public Strategy {
 public:
  explicit APrioriStrategy(std::vector<Vertex> priority) : priority_(std::move(priority)) {}

  std::string kind() const override {
    std::string s = "apriori:";
    for (std::size_t i = 0; i < priority_.size(); ++i) s += (i ? "," : "") + std::to_string(priority_[i]);
    return s;
  }
  bool positional() const override { return true; }
  const std::vector<Vertex>& priority() const { return priority_; }

  Move decide(const GameState& s, int) const override {
    const Instance& inst = instance();
    for (Vertex c : priority_) {
      int idx = inst.customer_index(c);
      if (!(s.remaining >> idx & 1u)) continue;
      auto cp = detail::closest_piece(s, dist_, c);
      if (!cp) continue;
      return detail::step_toward(inst, dist_, s.pieces(s.turn)[static_cast<std::size_t>(cp->first)], cp->first, c);
    }
    return detail::idle_move(inst, s);
  }

 protected:
  void on_init() override {
    auto sorted = priority_;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != instance().customers) throw InvalidInstance("a-priori priority must be a permutation of the customers");
    dist_.reset(&instance().graph);
  }

 private:
  std::vector<Vertex> priority_;
  DistanceCache dist_;
};

// Uniform over legal moves from a seeded generator.
class RandomStrategy : public Strategy {
 public:
  explicit RandomStrategy(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  std::string kind() const override { return "random:" + std::to_string(seed_); }

 protected:
  void on_init() override { rng_.seed(seed_); }
  Move on_propose() override {
    auto moves = legal_moves(instance(), state());
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    return moves[pick(rng_)];
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

// Plays the exact solver's best move. A pre-solved table may be shared
// between several strategy objects on the same instance.
class OptimalStrategy : public Strategy {
 public:
  explicit OptimalStrategy(std::size_t budget = kDefaultBudget, std::shared_ptr<const SolveResult> solved = nullptr)
      : budget_(budget), solved_(std::move(solved)) {}

  std::string kind() const override { return "optimal"; }
  bool positional() const override { return true; }
  const std::shared_ptr<const SolveResult>& solved() const { return solved_; }

  Move decide(const GameState& s, int margin) const override { return best_move(*solved_, s, margin).move; }

 protected:
  void on_init() override {
    if (solved_ && solved_->instance() == instance() && solved_->root() == initial_state(instance())) return;
    solved_ = std::make_shared<const SolveResult>(solve(instance(), budget_));
  }

 private:
  std::size_t budget_;
  std::shared_ptr<const SolveResult> solved_;
};

// Player I's stolen second-player strategy: step to the lowest neighbor of
// the start, step back, then answer the opponent's moves delayed by one with
// the inner strategy playing second in a phantom game.
class StolenStrategy : public Strategy {
 public:
  explicit StolenStrategy(std::unique_ptr<Strategy> inner) : inner_(std::move(inner)) {}

  std::string kind() const override { return "stolen:" + inner_->kind(); }
  bool flagged() const override { return flagged_; }
  const Strategy& inner() const { return *inner_; }

 protected:
  void on_init() override {
    const Instance& inst = instance();
    if (role() != Player::I) throw InvalidInstance("a stolen strategy plays first");
    auto si = inst.starts_i, sii = inst.starts_ii;
    std::sort(si.begin(), si.end());
    std::sort(sii.begin(), sii.end());
    if (si != sii) throw InvalidInstance("strategy stealing needs both sides on the same start vertices");
    if (si.size() != 1) throw InvalidInstance("strategy stealing is defined for one piece per side");
    const Vertex start = si.front();
    detour_.reset();
    for (Vertex nb : inst.graph.neighbors(start))
      if (inst.graph.has_edge(nb, start)) {
        detour_ = nb;
        break;
      }
    if (!detour_) throw InvalidInstance("start has no neighbor to step out to and back from");
    // The detour captures its vertex before the phantom game starts.
    Instance phantom = inst;
    std::erase(phantom.customers, *detour_);
    inner_->init(phantom, Player::II);
    opponent_moves_.clear();
    own_moves_ = 0;
    flagged_ = false;
    fallback_.reset();
  }

  void on_observe(const Move& m, Player mover, const GameState&) override {
    if (mover == Player::II) opponent_moves_.push_back(m);
  }

  Move on_propose() override {
    const Instance& inst = instance();
    const std::size_t n = own_moves_++;
    if (n == 0) return Move::step(0, *detour_);
    if (n == 1) return Move::step(0, inst.starts_i.front());
    if (!flagged_) {
      // Phantom opponent's move: the real opponent's move from one round ago.
      const Move& lagged = opponent_moves_[n - 2];
      const Instance& pinst = inner_->instance();
      const GameState& phantom = inner_->state();
      if (phantom.turn == Player::I && !is_terminal(pinst, phantom) && is_legal(pinst, phantom, lagged)) {
        inner_->observe(lagged);
        if (!is_terminal(pinst, inner_->state())) {
          Move reply = inner_->propose();
          if (is_legal(inst, state(), reply)) {
            inner_->observe(reply);
            return reply;
          }
        }
      }
      flagged_ = true;
      fallback_ = std::make_unique<GreedyStrategy>();
      fallback_->init(inst, Player::I);
    }
    return fallback_->decide(state(), margin());
  }

 private:
  std::unique_ptr<Strategy> inner_;
  std::optional<Vertex> detour_;
  std::vector<Move> opponent_moves_;
  std::size_t own_moves_ = 0;
  bool flagged_ = false;
  std::unique_ptr<GreedyStrategy> fallback_;
};

// "greedy", "apriori:<v,v,...>", "random:<seed>", "optimal", "stolen:<kind>".
inline std::unique_ptr<Strategy> make_strategy(const std::string& spec, std::size_t budget = kDefaultBudget,
                                               std::shared_ptr<const SolveResult> solved = nullptr) {
  auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "greedy" && arg.empty()) return std::make_unique<GreedyStrategy>();
  if (head == "optimal" && arg.empty()) return std::make_unique<OptimalStrategy>(budget, std::move(solved));
  if (head == "random" && !arg.empty()) {
    try {
      std::size_t used = 0;
      auto seed = std::stoull(arg, &used);
      if (used == arg.size()) return std::make_unique<RandomStrategy>(seed);
    } catch (const std::exception&) {
    }
  }
  if (head == "apriori" && !arg.empty()) {
    std::vector<Vertex> priority;
    std::stringstream in(arg);
    std::string tok;
    try {
      while (std::getline(in, tok, ',')) priority.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad a-priori list '" + arg + "'");
    }
    return std::make_unique<APrioriStrategy>(std::move(priority));
  }
  if (head == "stolen" && !arg.empty()) return std::make_unique<StolenStrategy>(make_strategy(arg, budget, std::move(solved)));
  throw std::invalid_argument("unknown strategy kind '" + spec + "'");
}

}  // namespace csp
