#include <gtest/gtest.h>

#include <random>

#include "csp/generators.hpp"
#include "csp/game.hpp"
#include "csp/instance_io.hpp"

using namespace csp;

namespace {

Instance path_instance(int n, std::vector<Vertex> customers, Vertex start) {
  Graph g = Graph::empty(n, false);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  g.canonicalize();
  return same_start_instance(g, std::move(customers), start);
}

}  // namespace

TEST(Outcome, BelowTieOrdersDrawBetweenLossAndTie) {
  const auto r = DrawRank::BelowTie;
  EXPECT_TRUE(compare_outcomes(Outcome::ended(-1), Outcome::draw(), r) < 0);
  EXPECT_TRUE(compare_outcomes(Outcome::draw(), Outcome::ended(0), r) < 0);
  EXPECT_TRUE(compare_outcomes(Outcome::ended(0), Outcome::ended(1), r) < 0);
}

TEST(Outcome, BelowAllPutsDrawUnderEveryEnding) {
  EXPECT_TRUE(compare_outcomes(Outcome::draw(), Outcome::ended(-50), DrawRank::BelowAll) < 0);
}

TEST(Outcome, EqualsTieMakesDrawEquivalentToTie) {
  EXPECT_TRUE(compare_outcomes(Outcome::draw(), Outcome::ended(0), DrawRank::EqualsTie) == 0);
  EXPECT_TRUE(compare_outcomes(Outcome::draw(), Outcome::ended(-1), DrawRank::EqualsTie) > 0);
  EXPECT_TRUE(compare_outcomes(Outcome::draw(), Outcome::ended(1), DrawRank::EqualsTie) < 0);
}

TEST(Outcome, TextRoundTrip) {
  for (Outcome o : {Outcome::draw(), Outcome::ended(0), Outcome::ended(-5), Outcome::ended(3)})
    EXPECT_EQ(parse_outcome(o.to_string()), o);
  EXPECT_EQ(Outcome::ended(3).to_string(), "Ended(+3)");
  EXPECT_THROW(parse_outcome("Ended(x)"), Error);
}

TEST(Outcome, ShiftAndReverse) {
  EXPECT_EQ(Outcome::ended(1).shifted(-2), Outcome::ended(-1));
  EXPECT_EQ(Outcome::draw().shifted(4), Outcome::draw());
  EXPECT_EQ(Outcome::ended(2).reversed(), Outcome::ended(-2));
}

TEST(Validation, StartOnCustomerRejected) {
  Instance inst = path_instance(3, {1, 2}, 0);
  inst.customers = {0, 2};
  auto r = validate_instance(inst);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("start in V_C"), std::string::npos);
}

TEST(Validation, AsymmetricUndirectedGraphRejected) {
  Instance inst = path_instance(3, {2}, 0);
  inst.graph.adjacency[2].clear();
  auto r = validate_instance(inst);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.violations.front().find("asymmetry"), std::string::npos);
}

TEST(Validation, SelfLoopAndMissingPiecesRejected) {
  Instance inst = path_instance(3, {2}, 0);
  inst.graph.adjacency[1] = {0, 1, 2};
  inst.starts_ii.clear();
  auto r = validate_instance(inst);
  EXPECT_GE(r.violations.size(), 2u);
}

TEST(InstanceIo, JsonRoundTrip) {
  Instance inst = gen_wheel(5);
  inst.passing_allowed = true;
  inst.draw_rank = DrawRank::EqualsTie;
  EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
}

TEST(InstanceIo, SchemaErrorsAreInvalidInstance) {
  json j = instance_to_json(gen_wheel(3));
  j.erase("customers");
  EXPECT_THROW(instance_from_json(j), InvalidInstance);
  j = instance_to_json(gen_wheel(3));
  j["edges"].push_back({0, 99});
  EXPECT_THROW(instance_from_json(j), InvalidInstance);
  j = instance_to_json(gen_wheel(3));
  j["vertices"] = "four";
  EXPECT_THROW(instance_from_json(j), InvalidInstance);
}

TEST(Rules, CaptureOnArrivalCreditsTheMover) {
  Instance inst = path_instance(4, {1, 3}, 0);
  GameState s = initial_state(inst);
  auto r = apply_move(inst, s, Move::step(0, 1));
  EXPECT_EQ(r.capture, 1);
  EXPECT_EQ(r.state.turn, Player::II);
  EXPECT_EQ(remaining_vertices(inst, r.state.remaining), std::vector<Vertex>{3});
  // II arriving on an already captured vertex scores nothing.
  auto r2 = apply_move(inst, r.state, Move::step(0, 1));
  EXPECT_EQ(r2.capture, 0);
}

TEST(Rules, NonAdjacentStepIsIllegal) {
  Instance inst = path_instance(4, {3}, 0);
  GameState s = initial_state(inst);
  EXPECT_FALSE(is_legal(inst, s, Move::step(0, 2)));
  EXPECT_THROW(apply_move(inst, s, Move::step(0, 2)), IllegalMove);
  EXPECT_FALSE(is_legal(inst, s, Move::pass()));
}

TEST(Rules, PassOnlyWhenAllowed) {
  Instance inst = path_instance(3, {2}, 0);
  inst.passing_allowed = true;
  auto moves = legal_moves(inst, initial_state(inst));
  EXPECT_EQ(moves.back(), Move::pass());
  EXPECT_TRUE(is_legal(inst, initial_state(inst), Move::pass()));
}

TEST(Rules, ForcedNullWhenStuck) {
  Graph g = Graph::empty(3, true);
  g.add_edge(0, 1);
  g.add_edge(2, 1);
  g.canonicalize();
  Instance inst;
  inst.graph = g;
  inst.customers = {1};
  inst.starts_i = {2};
  inst.starts_ii = {0};
  GameState s = initial_state(inst);
  s = apply_move(inst, s, Move::step(0, 1)).state;  // I captures, game over
  EXPECT_TRUE(is_terminal(inst, s));

  // A sink with customers still reachable by the other side.
  Graph g2 = Graph::empty(3, true);
  g2.add_edge(0, 1);
  g2.canonicalize();
  Instance sink;
  sink.graph = g2;
  sink.customers = {1};
  sink.starts_i = {2};
  sink.starts_ii = {0};
  GameState t = initial_state(sink);
  ASSERT_FALSE(is_terminal(sink, t));
  auto moves = legal_moves(sink, t);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0], Move::forced_null());
  auto r = apply_move(sink, t, moves[0]);
  EXPECT_EQ(r.state.turn, Player::II);
  EXPECT_EQ(r.state.pieces_i, t.pieces_i);
}

TEST(Rules, TerminalWhenNoRemainingCustomerIsReachable) {
  Graph g = Graph::empty(4, false);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  g.canonicalize();
  Instance inst = same_start_instance(g, {3}, 0);
  EXPECT_TRUE(is_terminal(inst, initial_state(inst)));
  inst.customers = {1};
  EXPECT_FALSE(is_terminal(inst, initial_state(inst)));
}

TEST(Rules, TeamMovesOnePiecePerTurn) {
  Instance inst = path_instance(5, {2}, 0);
  inst.starts_i = {0, 4};
  inst.starts_ii = {1};
  GameState s = initial_state(inst);
  auto moves = legal_moves(inst, s);
  // piece 0 at vertex 0 has one neighbor, piece 1 at vertex 4 has one.
  ASSERT_EQ(moves.size(), 2u);
  EXPECT_EQ(moves[0], Move::step(0, 1));
  EXPECT_EQ(moves[1], Move::step(1, 3));
  auto r = apply_move(inst, s, Move::step(1, 3));
  EXPECT_EQ(r.state.pieces_i, (std::vector<Vertex>{0, 3}));
}

TEST(Rules, ScoresMatchCaptureSumsOnRandomPlayouts) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = random_general(8, 4, rng());
    GameState s = initial_state(inst);
    int score_i = 0, score_ii = 0;
    std::vector<Move> history;
    for (int ply = 0; ply < 60 && !is_terminal(inst, s); ++ply) {
      auto moves = legal_moves(inst, s);
      Move m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
      auto r = apply_move(inst, s, m);
      (s.turn == Player::I ? score_i : score_ii) += r.capture;
      history.push_back(m);
      s = r.state;
    }
    EXPECT_EQ(score_i + score_ii, inst.customer_count() - customer_count(s.remaining));
    GameState replay = initial_state(inst);
    for (const Move& m : history) replay = apply_move(inst, replay, m).state;
    EXPECT_EQ(replay, s);
  }
}

TEST(GraphUtil, BipartiteAndDistances) {
  Instance wheel = gen_wheel(5);
  EXPECT_FALSE(is_bipartite(wheel.graph));
  Instance path = path_instance(5, {4}, 0);
  EXPECT_TRUE(is_bipartite(path.graph));
  EXPECT_TRUE(is_connected(path.graph));
  auto d = distances_from(path.graph, 0);
  EXPECT_EQ(d, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(shortest_distance(path, 4, 1), 3);
}

TEST(State, MoreThan64CustomersRejected) {
  Graph g = Graph::empty(70, false);
  for (int v = 0; v + 1 < 70; ++v) g.add_edge(v, v + 1);
  g.canonicalize();
  std::vector<Vertex> cs;
  for (int v = 1; v < 70; ++v) cs.push_back(v);
  Instance inst = same_start_instance(g, cs, 0);
  EXPECT_THROW(initial_state(inst), InvalidInstance);
}
