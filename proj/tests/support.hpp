#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance binary. The oracles keep their own matrix representation and do
// not call into the library.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tww/tww.hpp"

namespace tww::testing {

using Pairs = std::vector<std::pair<VertexId, VertexId>>;

inline Trigraph load(const std::string& name) {
  std::ifstream in(std::string(TWW_TEST_DATA) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return parse_graph(in);
}

// ---- generators -----------------------------------------------------------

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::size_t(rng() % n); }

inline Pairs random_tree_edges(std::size_t n, std::mt19937_64& rng) {
  Pairs e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(VertexId(pick(rng, i)), VertexId(i));
  return e;
}

inline Trigraph random_tree(std::size_t n, std::mt19937_64& rng) {
  return Trigraph::from_edges(n, random_tree_edges(n, rng));
}

// Connected graph with exactly `extra` more edges than a spanning tree, or
// fewer if the graph is nearly complete.
inline Trigraph random_fen(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  auto e = random_tree_edges(n, rng);
  std::set<std::pair<VertexId, VertexId>> have;
  for (auto [a, b] : e) have.insert({std::min(a, b), std::max(a, b)});
  std::size_t room = n * (n - 1) / 2 - e.size();
  for (std::size_t k = 0; k < std::min(extra, room);) {
    VertexId a = VertexId(pick(rng, n)), b = VertexId(pick(rng, n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!have.insert({a, b}).second) continue;
    e.emplace_back(a, b);
    ++k;
  }
  return Trigraph::from_edges(n, e);
}

// A cycle core with fen-1 chords and trees hanging off it.
inline Trigraph random_core_with_trees(std::size_t n, std::size_t fen, std::mt19937_64& rng) {
  std::size_t c = 3 + pick(rng, std::max<std::size_t>(1, std::min<std::size_t>(n, 6) - 2));
  c = std::min(c, n);
  Pairs e;
  std::set<std::pair<VertexId, VertexId>> have;
  auto add = [&](VertexId a, VertexId b) {
    if (a == b || !have.insert({std::min(a, b), std::max(a, b)}).second) return false;
    e.emplace_back(a, b);
    return true;
  };
  for (std::size_t i = 0; i < c; ++i) add(VertexId(i), VertexId((i + 1) % c));
  std::size_t room = c * (c - 1) / 2 - c;
  for (std::size_t k = 1, tries = 0; k < fen && k - 1 < room && tries < 100; ++tries)
    if (add(VertexId(pick(rng, c)), VertexId(pick(rng, c)))) ++k;
  for (std::size_t v = c; v < n; ++v) add(VertexId(pick(rng, v)), VertexId(v));
  return Trigraph::from_edges(n, e);
}

// All graphs on n vertices as edge masks over pairs (i<j) in lexicographic order.
inline Trigraph from_mask(std::size_t n, std::uint32_t mask) {
  Pairs e;
  std::size_t bit = 0;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = i + 1; j < n; ++j, ++bit)
      if ((mask >> bit) & 1) e.emplace_back(i, j);
  return Trigraph::from_edges(n, e);
}

// ---- oracles --------------------------------------------------------------

// Symmetric colour matrix with a liveness flag per slot.
struct NaiveTrigraph {
  std::vector<std::vector<int>> c;  // 0 none, 1 black, 2 red
  std::vector<bool> alive;

  static NaiveTrigraph of(const Trigraph& g) {
    auto vs = g.vertices();
    NaiveTrigraph t;
    t.c.assign(vs.size(), std::vector<int>(vs.size(), 0));
    t.alive.assign(vs.size(), true);
    auto at = [&](VertexId v) { return std::size_t(std::find(vs.begin(), vs.end(), v) - vs.begin()); };
    for (const Edge& e : g.edges()) t.c[at(e.u)][at(e.v)] = t.c[at(e.v)][at(e.u)] = e.color == EdgeColor::Black ? 1 : 2;
    return t;
  }

  std::size_t size() const { return std::size_t(std::count(alive.begin(), alive.end(), true)); }

  int red_degree(std::size_t x) const {
    int r = 0;
    for (std::size_t y = 0; y < c.size(); ++y) r += alive[y] && c[x][y] == 2;
    return r;
  }

  int max_red() const {
    int m = 0;
    for (std::size_t x = 0; x < c.size(); ++x)
      if (alive[x]) m = std::max(m, red_degree(x));
    return m;
  }

  // u absorbs v: black survives only where both were black.
  NaiveTrigraph contract(std::size_t u, std::size_t v) const {
    NaiveTrigraph t = *this;
    for (std::size_t x = 0; x < c.size(); ++x) {
      if (!alive[x] || x == u || x == v) continue;
      int a = c[u][x], b = c[v][x];
      int r = (a == 0 && b == 0) ? 0 : (a == 1 && b == 1 ? 1 : 2);
      t.c[u][x] = t.c[x][u] = r;
      t.c[v][x] = t.c[x][v] = 0;
    }
    t.c[u][v] = t.c[v][u] = 0;
    t.alive[v] = false;
    return t;
  }
};

// Minimum width over every contraction sequence, by plain recursion.
inline int naive_tww(const NaiveTrigraph& t) {
  int here = t.max_red();
  if (t.size() <= 1) return here;
  int best = 1 << 20;
  for (std::size_t u = 0; u < t.c.size(); ++u) {
    if (!t.alive[u]) continue;
    for (std::size_t v = u + 1; v < t.c.size(); ++v) {
      if (!t.alive[v]) continue;
      best = std::min(best, naive_tww(t.contract(u, v)));
      if (best <= here) return here;
    }
  }
  return std::max(here, best);
}

inline int naive_tww(const Trigraph& g) { return naive_tww(NaiveTrigraph::of(g)); }

// Width of a sequence replayed on the matrix model.
inline int naive_width(const Trigraph& g, const ContractionSequence& seq) {
  auto vs = g.vertices();
  std::map<VertexId, std::size_t> slot;
  for (std::size_t i = 0; i < vs.size(); ++i) slot[vs[i]] = i;
  NaiveTrigraph t = NaiveTrigraph::of(g);
  int w = t.max_red();
  for (const auto& s : seq.steps()) {
    std::size_t a = slot.at(s.a), b = slot.at(s.b);
    t = t.contract(a, b);
    slot.erase(s.a);
    slot.erase(s.b);
    slot[s.result] = a;
    w = std::max(w, t.max_red());
  }
  return w;
}

// Minimum row-major encoding over all vertex orders. Only for small n.
inline std::string brute_canon(const Trigraph& g) {
  NaiveTrigraph t = NaiveTrigraph::of(g);
  std::vector<std::size_t> p(t.c.size());
  std::iota(p.begin(), p.end(), 0);
  std::string best;
  bool first = true;
  do {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) s.push_back(char('0' + t.c[p[i]][p[j]]));
    if (first || s < best) best = s, first = false;
  } while (std::next_permutation(p.begin(), p.end()));
  return std::to_string(p.size()) + ":" + best;
}

inline bool brute_connected(std::size_t n, const Pairs& e) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (auto [a, b] : e) parent[find(a)] = find(b);
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

// One representative per isomorphism class of connected graphs on n vertices.
inline std::vector<Trigraph> connected_graphs(std::size_t n) {
  std::vector<Trigraph> out;
  std::set<std::string> seen;
  std::size_t pairs = n * (n - 1) / 2;
  for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
    Trigraph g = from_mask(n, mask);
    Pairs e;
    for (const Edge& x : g.edges()) e.emplace_back(x.u, x.v);
    if (!brute_connected(n, e)) continue;
    if (seen.insert(brute_canon(g)).second) out.push_back(g);
  }
  return out;
}

}  // namespace tww::testing
