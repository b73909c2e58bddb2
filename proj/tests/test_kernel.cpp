#include <gtest/gtest.h>

#include "support.hpp"

using namespace tww;
using namespace tww::testing;

namespace {

// Two triangles joined by a path with `inner` interior vertices.
Trigraph dumbbell(std::size_t inner) {
  Pairs e{{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
  VertexId prev = 0;
  for (std::size_t i = 0; i < inner; ++i) {
    e.emplace_back(prev, VertexId(6 + i));
    prev = VertexId(6 + i);
  }
  e.emplace_back(prev, 3);
  return Trigraph::from_edges(6 + inner, e);
}

}  // namespace

TEST(Kernel, FhSpotValues) {
  EXPECT_EQ(f_h(1, 0), 1);
  EXPECT_EQ(f_h(7, 0), 1);
  EXPECT_EQ(f_h(1, 1), 243);
  EXPECT_EQ(f_h(2, 1), 2916);
  EXPECT_EQ(f_h(2, 2), BigInt(2916) * 2916);
}

TEST(Kernel, TheoryFloorIsExactForSmallCores) {
  auto fl = BoundPolicy::theory().floor(3);
  ASSERT_TRUE(fl.exact);
  BigInt want = 1;
  for (int i = 0; i < 18; ++i) want *= BigInt(2187) * 9;
  want = 3 * want + 9;
  EXPECT_EQ(*fl.exact, want);
  EXPECT_EQ(fl.text, want.str());
  EXPECT_TRUE(fl.exceeds(1'000'000));
}

TEST(Kernel, TheoryFloorBeyondCapIsSymbolic) {
  auto fl = BoundPolicy::theory().floor(40, 4096);
  EXPECT_FALSE(fl.exact);
  EXPECT_EQ(fl.text, "3*(3^44*40^2)^3200+9");
  EXPECT_TRUE(fl.exceeds(std::size_t(-1)));
}

TEST(Kernel, PolicyParsing) {
  EXPECT_EQ(BoundPolicy::parse("theory").kind, BoundPolicy::Kind::Theory);
  auto p = BoundPolicy::parse("practical:5");
  EXPECT_EQ(p.kind, BoundPolicy::Kind::Practical);
  EXPECT_EQ(p.length, 5u);
  EXPECT_EQ(p.name(), "practical:5");
  for (const char* bad : {"practical:0", "practical:", "practical:x", "practical:5x", "nope"})
    EXPECT_THROW(BoundPolicy::parse(bad), Error) << bad;
}

TEST(Kernel, BikernelOnHpInput) {
  ReduceOptions opt;
  opt.known_at_least_2 = true;
  auto out = tww2_bikernel(load("hp_input.gr"), opt);
  auto& k = std::get<KernelReduced>(out);
  EXPECT_LE(k.kernel.vertex_count(), 116u * 2);
  EXPECT_EQ(k.meta.k, 2u);
  ASSERT_EQ(k.meta.path_lengths.size(), 1u);
  // The tidy path collapses to one vertex.
  auto tidied = load("hp_tidied.gr");
  EXPECT_EQ(k.kernel.vertex_count(), tidied.vertex_count() - (k.meta.path_lengths[0] - 1));
  auto seq = k.lift.apply(greedy_sequence(k.kernel));
  EXPECT_NO_THROW(verify(load("hp_input.gr"), seq, Completeness::Full));
}

TEST(Kernel, BikernelEquivalenceSmall) {
  std::mt19937_64 rng(51);
  int reduced = 0;
  for (int it = 0; it < 150; ++it) {
    auto g = random_core_with_trees(5 + pick(rng, 6), 1 + pick(rng, 2), rng);
    auto w = optimal_sequence(g).width;
    auto out = tww2_bikernel(g);
    if (auto* s = std::get_if<KernelSolved>(&out)) {
      EXPECT_LE(verify(g, s->sequence, Completeness::Full), std::max<std::size_t>(w, 2));
      continue;
    }
    auto& k = std::get<KernelReduced>(out);
    EXPECT_LE(k.kernel.vertex_count(), 116 * k.meta.k);
    auto kw = optimal_sequence(k.kernel).width;
    EXPECT_EQ(w == 2, kw == 2);
    ++reduced;
  }
  EXPECT_GT(reduced, 30);
}

TEST(Kernel, PracticalFloorShortensToExactLength) {
  auto g = dumbbell(20);
  ReduceOptions opt;
  opt.known_at_least_2 = true;
  auto out = general_kernel(g, BoundPolicy::practical(5), opt);
  auto& k = std::get<KernelReduced>(out);
  ASSERT_EQ(k.meta.path_lengths.size(), 1u);
  EXPECT_TRUE(k.meta.shortened);
  auto tidied = tidy(std::get<Pruned>(prune(g, opt).outcome).graph).graph.graph;
  EXPECT_EQ(k.kernel.vertex_count(), tidied.vertex_count() - (k.meta.path_lengths[0] - 5));
  // The remaining red path: vertices of red degree two outside the triangles.
  std::size_t red_inner = 0;
  for (VertexId v : k.kernel.vertices()) red_inner += k.kernel.red_degree(v) == 2 && k.kernel.degree(v) == 2;
  EXPECT_GE(red_inner, 5u);
  auto seq = k.lift.apply(optimal_sequence(k.kernel, {.max_n = 64}).sequence);
  EXPECT_LE(verify(g, seq, Completeness::Full), 2u);
}

TEST(Kernel, ShortPathsAreAllAbsorbed) {
  auto g = dumbbell(12);
  ReduceOptions opt;
  opt.known_at_least_2 = true;
  auto out = general_kernel(g, BoundPolicy::theory(), opt);
  auto& k = std::get<KernelReduced>(out);
  EXPECT_FALSE(k.meta.shortened);
  EXPECT_TRUE(k.meta.path_lengths.empty());
  EXPECT_GE(k.meta.core_sizes.size(), 3u);
  EXPECT_EQ(k.meta.core_sizes.back(), k.kernel.vertex_count());
  EXPECT_EQ(k.meta.floors.size(), 2u);
}

TEST(Kernel, DisconnectedInputRejected) {
  auto g = Trigraph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  EXPECT_THROW(tww2_bikernel(g), Error);
  EXPECT_THROW(general_kernel(g, BoundPolicy::practical(3)), Error);
}

TEST(Solve, TreesAndUnicyclic) {
  std::mt19937_64 rng(52);
  auto t = random_tree(150, rng);
  auto r = solve(t);
  EXPECT_LE(r.width, 2u);
  EXPECT_EQ(verify(t, r.sequence, Completeness::Full), r.width);
  auto c = random_fen(120, 1, rng);
  auto rc = solve(c);
  EXPECT_LE(rc.width, 2u);
}

TEST(Solve, WithinOneOfOptimumOnSmallGraphs) {
  std::mt19937_64 rng(53);
  for (int it = 0; it < 120; ++it) {
    auto g = random_fen(2 + pick(rng, 8), pick(rng, 8), rng);
    auto w = optimal_sequence(g).width;
    auto r = solve(g);
    EXPECT_EQ(verify(g, r.sequence, Completeness::Full), r.width);
    EXPECT_LE(r.width, w + 1);
    if (r.optimality == Optimality::Optimal) EXPECT_EQ(r.width, w);
  }
}

TEST(Solve, ComponentsAndJoin) {
  auto g = Trigraph::from_edges(9, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {5, 6}, {7, 8}});
  auto r = solve(g);
  EXPECT_EQ(r.width, 2u);
  EXPECT_EQ(replay(g, r.sequence).final.vertex_count(), 3u);
  auto j = solve(g, {}, {}, {.join_roots = true});
  EXPECT_TRUE(j.sequence.is_full());
  EXPECT_EQ(j.width, 2u);
}

TEST(Solve, LargeKernelNeedsFallback) {
  auto g = load("hp_input.gr");
  try {
    solve(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
  }
  auto r = solve(g, {}, {}, {.greedy_fallback = true});
  EXPECT_EQ(r.width, 2u);
  EXPECT_EQ(r.optimality, Optimality::Optimal);
}
