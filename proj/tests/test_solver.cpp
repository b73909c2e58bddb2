#include <gtest/gtest.h>

#include "support.hpp"

using namespace tww;
using namespace tww::testing;

namespace {

Trigraph cycle(std::size_t n) {
  Pairs e;
  for (VertexId i = 0; i < n; ++i) e.emplace_back(i, VertexId((i + 1) % n));
  return Trigraph::from_edges(n, e);
}

Trigraph grid(std::size_t r, std::size_t c) {
  Pairs e;
  for (VertexId i = 0; i < r; ++i)
    for (VertexId j = 0; j < c; ++j) {
      VertexId v = VertexId(i * c + j);
      if (j + 1 < c) e.emplace_back(v, v + 1);
      if (i + 1 < r) e.emplace_back(v, VertexId(v + c));
    }
  return Trigraph::from_edges(r * c, e);
}

}  // namespace

TEST(Solver, KnownValues) {
  EXPECT_EQ(optimal_sequence(Trigraph::from_edges(1, {})).width, 0u);
  EXPECT_EQ(optimal_sequence(cycle(4)).width, 0u);
  EXPECT_EQ(optimal_sequence(cycle(5)).width, 2u);
  EXPECT_EQ(optimal_sequence(cycle(9)).width, 2u);
  // Petersen graph.
  Pairs p;
  for (VertexId i = 0; i < 5; ++i) {
    p.emplace_back(i, (i + 1) % 5);
    p.emplace_back(i, i + 5);
    p.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  EXPECT_EQ(optimal_sequence(Trigraph::from_edges(10, p)).width, 4u);
  EXPECT_EQ(optimal_sequence(grid(3, 3)).width, 2u);
}

TEST(Solver, MatchesNaiveEnumerationOnSmallTrigraphs) {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 150; ++it) {
    std::size_t n = 1 + pick(rng, 7);
    Pairs black, red;
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b) {
        auto r = pick(rng, 6);
        if (r < 2) black.emplace_back(a, b);
        if (r == 2) red.emplace_back(a, b);
      }
    auto g = Trigraph::from_edges(n, black, red);
    auto s = optimal_sequence(g);
    EXPECT_TRUE(s.optimal);
    EXPECT_EQ(int(s.width), naive_tww(g));
    EXPECT_EQ(int(s.width), naive_width(g, s.sequence));
  }
}

TEST(Solver, DecideAgreesWithOptimum) {
  std::mt19937_64 rng(32);
  for (int it = 0; it < 80; ++it) {
    auto g = random_fen(2 + pick(rng, 8), pick(rng, 5), rng);
    auto w = optimal_sequence(g).width;
    for (std::size_t d = 0; d <= 3; ++d) {
      auto r = decide_width_at_most(g, d);
      EXPECT_EQ(r.has_value(), w <= d) << "d=" << d;
      if (r) EXPECT_LE(verify(g, *r, Completeness::Full), d);
    }
  }
}

TEST(Solver, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 rng(33);
  for (int it = 0; it < 20; ++it) {
    auto g = random_fen(8 + pick(rng, 6), 3 + pick(rng, 6), rng);
    SolverConfig one, four;
    four.threads = 4;
    auto a = optimal_sequence(g, one);
    auto b = optimal_sequence(g, four);
    EXPECT_EQ(a.sequence, b.sequence);
    EXPECT_EQ(a.width, b.width);
  }
}

TEST(Solver, DisconnectedAndBudget) {
  auto g = Trigraph::from_edges(9, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {5, 6}, {7, 8}});
  auto s = optimal_sequence(g);
  EXPECT_EQ(s.width, 2u);
  EXPECT_TRUE(s.sequence.is_full());
  SolverConfig tiny;
  tiny.max_n = 3;
  try {
    optimal_sequence(cycle(6), tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
}

TEST(Solver, TimeLimitDowngradesToNotProven) {
  SolverConfig cfg;
  cfg.time_limit = std::chrono::milliseconds(0);
  cfg.max_n = 30;
  auto r = optimal_sequence(grid(4, 5), cfg);
  EXPECT_FALSE(r.optimal);
  EXPECT_EQ(r.status, SolveStatus::NotProven);
  EXPECT_EQ(verify(grid(4, 5), r.sequence, Completeness::Full), r.width);
}

TEST(Solver, LargeWidthOneDecisions) {
  // Long caterpillar: width 1 certified without the exact search.
  Pairs e;
  for (VertexId i = 0; i + 1 < 40; ++i) e.emplace_back(i, i + 1);
  for (VertexId i = 0; i < 40; ++i) e.emplace_back(i, 40 + i);
  auto cat = Trigraph::from_edges(80, e);
  auto r = decide_width_at_most(cat, 1);
  ASSERT_TRUE(r);
  EXPECT_LE(verify(cat, *r, Completeness::Full), 1u);
  // Long cycles contain an induced C5 or longer: width 1 is impossible.
  EXPECT_FALSE(decide_width_at_most(cycle(50), 1));
}

TEST(Solver, GreedyIsAValidUpperBound) {
  std::mt19937_64 rng(34);
  for (int it = 0; it < 60; ++it) {
    auto g = random_fen(1 + pick(rng, 10), pick(rng, 6), rng);
    auto c = greedy_sequence(g);
    EXPECT_TRUE(c.is_full());
    EXPECT_GE(verify(g, c, Completeness::Full), optimal_sequence(g).width);
  }
}
