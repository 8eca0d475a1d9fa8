#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "csp/catalog.hpp"
#include "csp/instance_io.hpp"
#include "csp/match.hpp"
#include "csp/solver.hpp"

namespace csp {

enum class GameMode { HumanVsEngine, HumanVsHuman, EngineVsEngine };

inline std::string to_string(GameMode m) {
  switch (m) {
    case GameMode::HumanVsEngine: return "human_vs_engine";
    case GameMode::HumanVsHuman: return "human_vs_human";
    case GameMode::EngineVsEngine: return "engine_vs_engine";
  }
  return "?";
}

inline std::optional<GameMode> parse_game_mode(const std::string& s) {
  if (s == "human_vs_engine") return GameMode::HumanVsEngine;
  if (s == "human_vs_human") return GameMode::HumanVsHuman;
  if (s == "engine_vs_engine") return GameMode::EngineVsEngine;
  return std::nullopt;
}

struct ServiceResponse {
  int status = 200;
  json body;
};

inline ServiceResponse error_response(int status, const std::string& msg) { return {status, json{{"error", msg}}}; }

struct GameSession {
  using Clock = std::chrono::steady_clock;

  std::string id;
  Instance instance;
  GameMode mode = GameMode::HumanVsEngine;
  Player human = Player::I;
  std::size_t budget = kDefaultBudget;
  GameState state;
  int score_i = 0;
  int score_ii = 0;
  std::vector<PlayedMove> history;
  std::optional<Outcome> result;
  MatchRecord::Termination reason = MatchRecord::Termination::Ended;
  std::shared_ptr<const SolveResult> solved;  // null when over budget; the engine then plays greedy
  Outcome start_value = Outcome::draw();
  RepetitionTracker seen;
  Clock::time_point last_used = Clock::now();
  std::mutex mutex;

  int margin() const { return score_i - score_ii; }
  bool finished() const { return result.has_value(); }

  bool engine_turn() const {
    if (finished()) return false;
    switch (mode) {
      case GameMode::EngineVsEngine: return true;
      case GameMode::HumanVsHuman: return false;
      case GameMode::HumanVsEngine: return state.turn != human;
    }
    return false;
  }

  void settle() {
    if (is_terminal(instance, state)) {
      result = Outcome::ended(margin());
      reason = MatchRecord::Termination::Ended;
    } else if (seen.repeated(state)) {
      result = Outcome::draw();
      reason = MatchRecord::Termination::RepetitionDraw;
    }
  }

  void play(const Move& m) {
    auto r = apply_move(instance, state, m);
    history.push_back({state.turn, m, r.capture});
    (state.turn == Player::I ? score_i : score_ii) += r.capture;
    if (r.capture) seen.clear();
    state = std::move(r.state);
    settle();
  }

  Move engine_move() {
    if (solved) return best_move(*solved, state, margin()).move;
    GreedyStrategy greedy;
    greedy.init(instance, state.turn);
    return greedy.decide(state, margin());
  }

  // Plays engine moves, and the only move of a human who has no step, until
  // a human must choose or the game is over.
  std::vector<PlayedMove> advance(std::size_t ply_cap) {
    std::vector<PlayedMove> played;
    for (std::size_t ply = 0; !finished(); ++ply) {
      if (ply >= ply_cap) throw PlyCapExceeded("engine play exceeded " + std::to_string(ply_cap) + " plies");
      Move m;
      if (engine_turn()) {
        m = engine_move();
      } else {
        auto moves = legal_moves(instance, state);
        if (moves.size() != 1 || moves.front().kind != Move::Kind::ForcedNull) break;
        m = moves.front();
      }
      play(m);
      played.push_back(history.back());
    }
    return played;
  }
};

inline json move_to_json(const Move& m) {
  switch (m.kind) {
    case Move::Kind::Step: return {{"kind", "step"}, {"piece", m.piece}, {"target", m.target}};
    case Move::Kind::Pass: return {{"kind", "pass"}};
    case Move::Kind::ForcedNull: return {{"kind", "forced_null"}};
  }
  return {};
}

inline json played_to_json(const PlayedMove& p) {
  json j = move_to_json(p.move);
  j["mover"] = to_string(p.mover);
  j["capture"] = p.capture;
  return j;
}

inline json state_to_json(const Instance& inst, const GameState& s) {
  return {{"turn", to_string(s.turn)},
          {"pieces_i", s.pieces_i},
          {"pieces_ii", s.pieces_ii},
          {"remaining", remaining_vertices(inst, s.remaining)}};
}

class PlayService {
 public:
  using Clock = GameSession::Clock;

  struct Options {
    std::size_t budget = kDefaultBudget;  // default and maximum per-session budget
    std::chrono::seconds idle_expiry{3600};
    std::size_t ply_cap = kDefaultPlyCap;
    std::uint64_t seed = std::random_device{}();
  };

  PlayService() : PlayService(Options{}) {}
  explicit PlayService(Options opt) : opt_(opt), rng_(opt.seed) {}

  const Options& options() const { return opt_; }

  ServiceResponse handle(const std::string& method, const std::string& path, const std::string& body) {
    try {
      expire_idle(Clock::now());
      return route(method, path, body);
    } catch (const json::exception& e) {
      return error_response(400, std::string("malformed request: ") + e.what());
    } catch (const std::exception& e) {
      return error_response(500, e.what());
    }
  }

  // POST /games
  ServiceResponse create_game(const std::string& body) {
    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return error_response(400, "request body must be a JSON object");

    Instance inst;
    try {
      if (!req.contains("instance")) return error_response(400, "missing field 'instance'");
      const json& spec = req.at("instance");
      if (spec.is_string()) {
        const std::string name = spec.get<std::string>();
        auto it = std::find_if(catalog().begin(), catalog().end(), [&](const auto& e) { return e.name == name; });
        if (it == catalog().end()) return error_response(400, "unknown catalog instance '" + name + "'");
        inst = it->build();
      } else {
        inst = instance_from_json(spec);
      }
    } catch (const Error& e) {
      return error_response(400, e.what());
    }
    auto report = validate_instance(inst);
    if (!report.ok()) return error_response(400, "invalid instance: " + report.violations.front());
    if (inst.customer_count() > kMaxStateCustomers)
      return error_response(400, "at most " + std::to_string(kMaxStateCustomers) + " customers are supported");

    auto session = std::make_shared<GameSession>();
    session->instance = inst;
    const std::string mode = req.value("mode", std::string("human_vs_engine"));
    auto parsed = parse_game_mode(mode);
    if (!parsed) return error_response(400, "unknown mode '" + mode + "'");
    session->mode = *parsed;
    const std::string human = req.value("human", std::string("I"));
    if (human != "I" && human != "II") return error_response(400, "human must be \"I\" or \"II\"");
    session->human = human == "I" ? Player::I : Player::II;
    if (req.contains("budget")) {
      if (!req.at("budget").is_number_unsigned()) return error_response(400, "budget must be a non-negative integer");
      session->budget = std::min(req.at("budget").get<std::size_t>(), opt_.budget);
    } else {
      session->budget = opt_.budget;
    }
    const bool want_analysis = req.value("analysis", false);

    try {
      session->solved = std::make_shared<const SolveResult>(solve(inst, session->budget));
      session->start_value = session->solved->value();
    } catch (const BudgetExceeded&) {
      if (want_analysis)
        return {413, json{{"available", false}, {"error", "instance exceeds the analysis budget"}}};
    }

    session->state = initial_state(inst);
    session->settle();
    std::vector<PlayedMove> replies;
    try {
      replies = session->advance(opt_.ply_cap);
    } catch (const PlyCapExceeded& e) {
      return error_response(500, e.what());
    }
    {
      std::lock_guard lock(mutex_);
      session->id = new_id();
      sessions_[session->id] = session;
    }
    return {201, view(*session, &replies)};
  }

  // GET /games/{id}
  ServiceResponse get_game(const std::string& id) {
    auto s = find(id);
    if (!s) return error_response(404, "no game '" + id + "'");
    std::lock_guard lock(s->mutex);
    return {200, view(*s, nullptr)};
  }

  // POST /games/{id}/moves
  ServiceResponse post_move(const std::string& id, const std::string& body) {
    auto s = find(id);
    if (!s) return error_response(404, "no game '" + id + "'");
    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return error_response(400, "request body must be a JSON object");
    Move m;
    if (req.value("pass", false)) {
      m = Move::pass();
    } else if (req.contains("piece") && req.contains("target") && req["piece"].is_number_integer() &&
               req["target"].is_number_integer()) {
      m = Move::step(req["piece"].get<int>(), req["target"].get<int>());
    } else {
      return error_response(400, "move must be {\"piece\":int,\"target\":int} or {\"pass\":true}");
    }

    std::lock_guard lock(s->mutex);
    if (s->finished()) return error_response(409, "game is over");
    if (s->mode == GameMode::EngineVsEngine) return error_response(409, "no human player in this game");
    if (s->mode == GameMode::HumanVsEngine && s->state.turn != s->human)
      return error_response(409, "not your turn");
    if (!is_legal(s->instance, s->state, m))
      return error_response(422, "illegal move " + m.to_string() + " for player " + to_string(s->state.turn));
    s->play(m);
    std::vector<PlayedMove> played{s->history.back()};
    try {
      auto replies = s->advance(opt_.ply_cap);
      played.insert(played.end(), replies.begin(), replies.end());
    } catch (const PlyCapExceeded& e) {
      return error_response(500, e.what());
    }
    return {200, view(*s, &played)};
  }

  // GET /games/{id}/analysis
  ServiceResponse analysis(const std::string& id) {
    auto s = find(id);
    if (!s) return error_response(404, "no game '" + id + "'");
    std::shared_ptr<const SolveResult> solved;
    Instance inst;
    GameState state;
    int margin = 0;
    {
      std::lock_guard lock(s->mutex);
      solved = s->solved;
      inst = s->instance;
      state = s->state;
      margin = s->margin();
    }
    if (!solved) return {413, json{{"available", false}, {"error", "instance exceeds the analysis budget"}}};

    json moves = json::array();
    if (!is_terminal(inst, state)) {
      const int sign = state.turn == Player::I ? 1 : -1;
      for (const Move& m : legal_moves(inst, state)) {
        auto r = apply_move(inst, state, m);
        json j = move_to_json(m);
        j["outcome"] = solved->value_at(r.state, margin + sign * r.capture).to_string();
        moves.push_back(std::move(j));
      }
    }
    return {200, json{{"available", true},
                      {"exact", true},
                      {"turn", to_string(state.turn)},
                      {"value", solved->value_at(state, margin).to_string()},
                      {"moves", std::move(moves)}}};
  }

  // GET /catalog
  ServiceResponse list_catalog() const {
    json out = json::array();
    for (const auto& e : catalog()) {
      Instance inst = e.build();
      out.push_back({{"name", e.name},
                     {"params", e.params},
                     {"certificate", e.certificate},
                     {"provenance", e.provenance},
                     {"vertices", inst.graph.vertex_count},
                     {"customers", inst.customer_count()},
                     {"instance", instance_to_json(inst)}});
    }
    return {200, out};
  }

  std::size_t expire_idle(Clock::time_point now) {
    std::lock_guard lock(mutex_);
    return std::erase_if(sessions_, [&](const auto& kv) {
      std::unique_lock slock(kv.second->mutex, std::try_to_lock);
      return slock.owns_lock() && now - kv.second->last_used > opt_.idle_expiry;
    });
  }

  std::size_t session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

 private:
  ServiceResponse route(const std::string& method, const std::string& path, const std::string& body) {
    std::vector<std::string> parts;
    std::stringstream in(path);
    for (std::string p; std::getline(in, p, '/');)
      if (!p.empty()) parts.push_back(p);
    if (parts.size() == 1 && parts[0] == "catalog") {
      if (method != "GET") return error_response(405, "method not allowed");
      return list_catalog();
    }
    if (!parts.empty() && parts[0] == "games") {
      if (parts.size() == 1) {
        if (method != "POST") return error_response(405, "method not allowed");
        return create_game(body);
      }
      if (parts.size() == 2) {
        if (method != "GET") return error_response(405, "method not allowed");
        return get_game(parts[1]);
      }
      if (parts.size() == 3 && parts[2] == "moves") {
        if (method != "POST") return error_response(405, "method not allowed");
        return post_move(parts[1], body);
      }
      if (parts.size() == 3 && parts[2] == "analysis") {
        if (method != "GET") return error_response(405, "method not allowed");
        return analysis(parts[1]);
      }
    }
    return error_response(404, "no route for " + method + " " + path);
  }

  std::shared_ptr<GameSession> find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->last_used = Clock::now();
    return it->second;
  }

  std::string new_id() {
    for (;;) {
      std::ostringstream out;
      out << std::hex << rng_();
      if (!sessions_.contains(out.str())) return out.str();
    }
  }

  json view(const GameSession& s, const std::vector<PlayedMove>* played) const {
    json history = json::array();
    for (const auto& p : s.history) history.push_back(played_to_json(p));
    json j{{"id", s.id},
           {"mode", to_string(s.mode)},
           {"instance", instance_to_json(s.instance)},
           {"state", state_to_json(s.instance, s.state)},
           {"score_i", s.score_i},
           {"score_ii", s.score_ii},
           {"margin", s.margin()},
           {"history", std::move(history)},
           {"terminal", s.finished()},
           {"engine", s.solved ? "exact" : "heuristic"}};
    if (s.mode == GameMode::HumanVsEngine) j["human"] = to_string(s.human);
    if (s.solved) j["start_value"] = s.start_value.to_string();
    if (s.finished()) {
      j["outcome"] = s.result->to_string();
      j["reason"] = to_string(s.reason);
    }
    if (played) {
      json moves = json::array();
      for (const auto& p : *played) moves.push_back(played_to_json(p));
      j["played"] = std::move(moves);
    }
    return j;
  }

  Options opt_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<GameSession>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace csp
