#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "csp/generators.hpp"
#include "csp/instance_io.hpp"
#include "csp/match.hpp"
#include "csp/oracle.hpp"
#include "csp/solver.hpp"
#include "naive_solver.hpp"

using namespace csp;

namespace {

// Small instances across families, rule variants and piece counts.
std::vector<Instance> small_corpus(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = std::uniform_int_distribution<int>(3, 7)(rng);
    const int c = std::uniform_int_distribution<int>(1, std::min(4, n - 1))(rng);
    Instance inst;
    switch (out.size() % 4) {
      case 0: inst = random_general(n, c, rng()); break;
      case 1: inst = random_bipartite(n, c, rng()); break;
      case 2: inst = random_tree(n, 1, rng()); break;
      default: {
        inst = random_general(n, c, rng(), 0.5);
        inst.graph.directed = true;
        // Drop one direction of some edges.
        for (Vertex u = 0; u < n; ++u)
          std::erase_if(inst.graph.adjacency[u], [&](Vertex v) { return u > v && rng() % 2; });
        break;
      }
    }
    std::vector<Vertex> free;
    for (Vertex v = 0; v < n; ++v)
      if (!inst.is_customer(v)) free.push_back(v);
    if (rng() % 3 == 0) inst.starts_ii = {free[rng() % free.size()]};
    if (rng() % 8 == 0 && n <= 5) {
      inst.starts_i = {free[rng() % free.size()], free[rng() % free.size()]};
      std::sort(inst.starts_i.begin(), inst.starts_i.end());
    }
    inst.passing_allowed = rng() % 4 == 0;
    inst.draw_rank = static_cast<DrawRank>(rng() % 3);
    if (validate_instance(inst).ok()) out.push_back(inst);
  }
  return out;
}

}  // namespace

TEST(Solver, WheelValuesAreTwoMinusN) {
  for (int n : {3, 5, 7, 9}) EXPECT_EQ(solve(gen_wheel(n)).value(), Outcome::ended(2 - n)) << "n=" << n;
}

TEST(Solver, SingleReachableCustomerGoesToTheFirstMover) {
  Graph g = Graph::empty(2, false);
  g.add_edge(0, 1);
  g.canonicalize();
  EXPECT_EQ(solve(same_start_instance(g, {1}, 0)).value(), Outcome::ended(1));
}

TEST(Solver, MatchesNaiveFixpointOnSmallCorpus) {
  for (const Instance& inst : small_corpus(160, 11)) {
    Outcome fast = solve(inst).value();
    Outcome slow = naive::value(inst);
    EXPECT_TRUE(naive::same_value(inst, fast, slow))
        << instance_to_json(inst).dump() << " solver " << fast.to_string() << " naive " << slow.to_string();
  }
}

TEST(Solver, MatchesLibraryOracleOnSmallCorpus) {
  for (const Instance& inst : small_corpus(160, 12)) EXPECT_EQ(solve(inst).value(), oracle_value(inst));
}

TEST(Solver, ValueAtDependsOnScoredMarginLikeTheNaiveFixpoint) {
  int checked = 0;
  for (const Instance& inst : small_corpus(40, 13)) {
    SolveResult solved = solve(inst);
    std::vector<GameState> sample;
    solved.for_each_state([&](const GameState& s, const PositionValues&) {
      if (sample.size() < 6) sample.push_back(s);
    });
    for (const GameState& s : sample)
      for (int margin : {-2, -1, 0, 1, 2}) {
        Outcome fast = solved.value_at(s, margin);
        Outcome slow = naive::value_from(inst, s, margin);
        EXPECT_TRUE(naive::same_value(inst, fast, slow))
            << instance_to_json(inst).dump() << " margin " << margin << ": " << fast.to_string() << " vs "
            << slow.to_string();
        ++checked;
      }
  }
  EXPECT_GT(checked, 500);
}

TEST(Solver, SolveFromAgreesWithValueAtInsideTheTable) {
  for (const Instance& inst : small_corpus(30, 14)) {
    SolveResult solved = solve(inst);
    int n = 0;
    solved.for_each_state([&](const GameState& s, const PositionValues&) {
      if (n++ % 7) return;
      EXPECT_EQ(solve_from(inst, s).value(), solved.value_at(s, 0));
    });
  }
}

TEST(Solver, BestMoveKeepsTheValue) {
  for (const Instance& inst : small_corpus(60, 15)) {
    SolveResult solved = solve(inst);
    solved.for_each_state([&](const GameState& s, const PositionValues&) {
      for (int margin : {-1, 0, 1}) {
        auto bm = solved.best_move(s, margin);
        if (is_terminal(inst, s)) {
          EXPECT_FALSE(bm.has_value());
          continue;
        }
        ASSERT_TRUE(bm.has_value());
        EXPECT_TRUE(is_legal(inst, s, bm->move));
        auto r = apply_move(inst, s, bm->move);
        int next = margin + (s.turn == Player::I ? r.capture : -r.capture);
        EXPECT_TRUE(naive::same_value(inst, solved.value_at(r.state, next), solved.value_at(s, margin)));
        EXPECT_TRUE(naive::same_value(inst, bm->outcome, solved.value_at(s, margin)));
      }
    });
  }
}

TEST(Solver, OptimalSelfPlayRealizesTheValue) {
  for (const Instance& inst : small_corpus(120, 16)) {
    auto solved = std::make_shared<const SolveResult>(solve(inst));
    OptimalStrategy a(kDefaultBudget, solved), b(kDefaultBudget, solved);
    auto rec = run_match(inst, a, b);
    EXPECT_TRUE(naive::same_value(inst, rec.outcome, solved->value()))
        << instance_to_json(inst).dump() << " played " << rec.outcome.to_string() << " value "
        << solved->value().to_string();
  }
}

TEST(Solver, OptimalNeverFallsBelowTheValueAgainstRandomPlay) {
  int seed = 0;
  for (const Instance& inst : small_corpus(120, 17)) {
    auto solved = std::make_shared<const SolveResult>(solve(inst));
    const Outcome v = solved->value();
    OptimalStrategy opt_i(kDefaultBudget, solved), opt_ii(kDefaultBudget, solved);
    RandomStrategy rnd_i(++seed), rnd_ii(++seed);
    auto as_i = run_match(inst, opt_i, rnd_ii);
    EXPECT_TRUE(compare_outcomes(as_i.outcome, v, inst.draw_rank) >= 0) << instance_to_json(inst).dump();
    auto as_ii = run_match(inst, rnd_i, opt_ii);
    EXPECT_TRUE(compare_outcomes(as_ii.outcome, v, inst.draw_rank) <= 0) << instance_to_json(inst).dump();
  }
}

TEST(Solver, EveryDrawRankMatchesTheNaiveFixpoint) {
  for (DrawRank r : {DrawRank::BelowTie, DrawRank::BelowAll, DrawRank::EqualsTie}) {
    for (const Instance& base : small_corpus(30, 18)) {
      Instance v = base;
      v.draw_rank = r;
      EXPECT_TRUE(naive::same_value(v, solve(v).value(), naive::value(v)));
    }
  }
}

TEST(Solver, BudgetIsEnforced) {
  EXPECT_THROW(solve(gen_wheel(7), 10), BudgetExceeded);
  EXPECT_THROW(oracle_value(gen_wheel(7), 10), BudgetExceeded);
  SolveResult ok = solve(gen_wheel(7));
  EXPECT_GT(ok.stats().states_visited, 10u);
  EXPECT_NO_THROW(solve(gen_wheel(7), ok.stats().states_visited));
}

TEST(Solver, UnreachableStateLookupThrows) {
  Instance inst = gen_wheel(3);
  SolveResult solved = solve(inst);
  // II to move before I has moved: never reachable.
  GameState bogus = initial_state(inst);
  bogus.pieces_i = {0};
  bogus.pieces_ii = {0};
  bogus.turn = Player::II;
  EXPECT_FALSE(solved.contains(bogus));
  EXPECT_THROW((void)solved.value_at(bogus, 0), std::out_of_range);
}

TEST(Solver, NoCustomersIsAnImmediateTie) {
  Graph g = Graph::empty(1, false);
  Instance inst = same_start_instance(g, {}, 0);
  EXPECT_TRUE(is_terminal(inst, initial_state(inst)));
  EXPECT_EQ(solve(inst).value(), Outcome::ended(0));
  EXPECT_EQ(oracle_value(inst), Outcome::ended(0));
  EXPECT_EQ(naive::value(inst), Outcome::ended(0));
}

TEST(Solver, WheelFiveOpensOnTheLowestSpoke) {
  Instance inst = gen_wheel(5);
  SolveResult solved = solve(inst);
  auto bm = solved.best_move(initial_state(inst), 0);
  ASSERT_TRUE(bm.has_value());
  EXPECT_EQ(bm->move, Move::step(0, 1));
  EXPECT_EQ(bm->outcome, Outcome::ended(-3));
}

TEST(Solver, SwappingRolesReversesTheValue) {
  // With Draw ranked as a tie the order is symmetric under negation, so
  // letting II move first from swapped positions must mirror the value.
  for (Instance inst : small_corpus(80, 19)) {
    inst.draw_rank = DrawRank::EqualsTie;
    Instance swapped = inst;
    std::swap(swapped.starts_i, swapped.starts_ii);
    GameState s = initial_state(swapped);
    s.turn = Player::II;
    Outcome v = solve(inst).value();
    Outcome w = solve_from(swapped, s).value();
    Outcome mirrored = w.is_draw() ? w : Outcome::ended(-w.margin());
    EXPECT_TRUE(naive::same_value(inst, v, mirrored)) << instance_to_json(inst).dump();
  }
}

TEST(Solver, ForceSetsShrinkAsTheThresholdRises) {
  for (const Instance& inst : small_corpus(40, 20)) {
    SolveResult solved = solve(inst);
    for (CustomerSet layer : solved.layer_keys()) {
      LayerGame game = solved.layer_game(layer);
      std::vector<char> prev;
      for (const Rung& r : solved.ladder()) {
        auto cur = force_set(game, r.threshold);
        if (!prev.empty())
          for (std::size_t i = 0; i < cur.size(); ++i) EXPECT_LE(cur[i], prev[i]);
        prev = std::move(cur);
      }
    }
  }
}

TEST(Solver, MovesNeverGrowTheRemainingSet) {
  for (const Instance& inst : small_corpus(40, 21)) {
    solve(inst).for_each_state([&](const GameState& s, const PositionValues&) {
      if (is_terminal(inst, s)) return;
      for (const Move& m : legal_moves(inst, s)) {
        auto r = apply_move(inst, s, m);
        EXPECT_EQ(r.state.remaining & ~s.remaining, CustomerSet{0});
        EXPECT_EQ(std::popcount(s.remaining) - std::popcount(r.state.remaining), r.capture);
      }
    });
  }
}
