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

bool acyclic_without(const Trigraph& g, const std::vector<VertexPair>& f) {
  std::vector<VertexId> parent(g.next_label());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  std::set<VertexPair> drop(f.begin(), f.end());
  for (const Edge& e : g.edges()) {
    if (drop.count({e.u, e.v})) continue;
    auto a = find(e.u), b = find(e.v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

// Bridges by deleting each edge and counting components.
std::vector<VertexPair> brute_bridges(const Trigraph& g) {
  std::vector<VertexPair> out;
  auto base = components(g).size();
  for (const Edge& e : g.edges()) {
    auto h = g.recolor({{e.u, e.v, std::nullopt}}, RecolorMode::Unchecked);
    if (components(h).size() > base) out.push_back({e.u, e.v});
  }
  return out;
}

}  // namespace

TEST(Structure, FeedbackEdgeSetExamples) {
  std::mt19937_64 rng(1);
  EXPECT_TRUE(feedback_edge_set(random_tree(12, rng)).edges.empty());
  EXPECT_EQ(feedback_edge_set(cycle(5)).edges.size(), 1u);
  auto left = load("hp_input.gr");
  EXPECT_EQ(feedback_edge_set(left).edges.size(), 2u);
  EXPECT_EQ(feedback_edge_number(left), 2u);
}

TEST(Structure, FeedbackEdgeSetProperties) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + pick(rng, 15);
    auto g = random_fen(n, pick(rng, 6), rng);
    auto f = feedback_edge_set(g);
    EXPECT_EQ(f.edges.size(), g.edge_count() - n + 1);
    EXPECT_EQ(f.edges.size(), feedback_edge_number(g));
    EXPECT_TRUE(acyclic_without(g, f.edges));
  }
}

TEST(Structure, BridgesMatchBruteForce) {
  EXPECT_TRUE(find_bridges(cycle(5)).empty());
  EXPECT_EQ(find_bridges(Trigraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})).size(), 4u);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    auto g = random_fen(1 + pick(rng, 14), pick(rng, 4), rng);
    EXPECT_EQ(find_bridges(g), brute_bridges(g));
  }
}

TEST(Structure, TwoCoreOfCycleWithTail) {
  auto g = Trigraph::from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {3, 5}});
  EXPECT_EQ(two_core(g), (std::set<VertexId>{0, 1, 2}));
}

TEST(Structure, StumpKinds) {
  // Triangle 0,1,2; 3 pendant on 0; 4-5 black chain on 1; 6-7 red tail on 2.
  auto g = Trigraph::from_edges(8, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 4}, {4, 5}, {2, 6}}, {{6, 7}});
  auto s = classify_stumps(g);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.at(0).front().kind, StumpKind::Half);
  EXPECT_EQ(s.at(1).front().kind, StumpKind::Black);
  EXPECT_EQ(s.at(2).front().kind, StumpKind::Red);
  EXPECT_EQ(s.at(2).front().vertices(), (std::vector<VertexId>{6, 7}));
  EXPECT_TRUE(classify_stumps(cycle(3)).empty());
  EXPECT_TRUE(find_dangling_paths(cycle(3)).empty());
}

TEST(Structure, DanglingTreesOnHpInput) {
  auto left = load("hp_input.gr");
  auto trees = find_dangling_trees(left);
  auto core = two_core(left);
  std::set<VertexId> covered;
  for (const auto& t : trees) {
    covered.insert(t.vertices.begin(), t.vertices.end());
    EXPECT_TRUE(core.count(t.anchor));
  }
  // Off the 2-core every vertex is in some dangling tree.
  for (VertexId v : left.vertices()) EXPECT_EQ(covered.count(v) == 1, core.count(v) == 0) << v;
}

TEST(Structure, DanglingTreeProperties) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 200; ++it) {
    auto g = random_core_with_trees(4 + pick(rng, 12), 1 + pick(rng, 3), rng);
    for (const auto& t : find_dangling_trees(g)) {
      std::set<VertexId> in(t.vertices.begin(), t.vertices.end());
      std::size_t leaving = 0;
      for (VertexId x : t.vertices)
        for (const auto& [y, _] : g.neighbors(x)) leaving += !in.count(y);
      EXPECT_EQ(leaving, 1u);
      std::set<VertexId> rest;
      for (VertexId v : g.vertices())
        if (!in.count(v)) rest.insert(v);
      for (const auto& u : find_dangling_trees(g.induce(rest)))
        for (VertexId x : u.vertices) EXPECT_FALSE(in.count(x));
    }
  }
}

TEST(Structure, DisconnectedInputRejected) {
  auto g = Trigraph::from_edges(4, {{0, 1}, {2, 3}});
  try {
    find_dangling_trees(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Disconnected);
  }
}

TEST(Structure, PrunedInputIsValidHPGraph) {
  ReduceOptions opt;
  opt.known_at_least_2 = true;
  auto pr = prune(load("hp_input.gr"), opt);
  const auto& hp = std::get<Pruned>(pr.outcome).graph;
  EXPECT_FALSE(hp_violation(hp));
  EXPECT_EQ(hp.paths.size(), 1u);
  auto broken = hp;
  broken.core.erase(*broken.core.begin());
  EXPECT_TRUE(hp_violation(broken));
}
