#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tww/trigraph.hpp"

namespace tww {

using CanonicalKey = std::string;

// Dense colour matrix: 0 = non-edge, 1 = black, 2 = red.
struct ColourMatrix {
  int n = 0;
  std::vector<std::uint8_t> a;

  explicit ColourMatrix(int size = 0) : n(size), a(std::size_t(size) * size, 0) {}
  std::uint8_t at(int i, int j) const { return a[std::size_t(i) * n + j]; }
  void set(int i, int j, std::uint8_t c) {
    a[std::size_t(i) * n + j] = c;
    a[std::size_t(j) * n + i] = c;
  }

  static ColourMatrix of(const Trigraph& g) {
    auto vs = g.vertices();
    ColourMatrix m(static_cast<int>(vs.size()));
    for (const Edge& e : g.edges()) {
      int i = int(std::lower_bound(vs.begin(), vs.end(), e.u) - vs.begin());
      int j = int(std::lower_bound(vs.begin(), vs.end(), e.v) - vs.begin());
      m.set(i, j, e.color == EdgeColor::Black ? 1 : 2);
    }
    return m;
  }
};

namespace detail {

using Cell = std::vector<int>;
using Partition = std::vector<Cell>;

// Splits cells by (black, red) neighbour counts into every cell until stable.
// Sub-cells are ordered by signature, so the result is label independent.
inline void refine(const ColourMatrix& m, Partition& p) {
  std::vector<int> cell_of(m.n);
  while (true) {
    for (std::size_t c = 0; c < p.size(); ++c)
      for (int v : p[c]) cell_of[v] = int(c);
    Partition next;
    next.reserve(p.size());
    for (const Cell& cell : p) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      std::vector<std::pair<std::vector<int>, int>> sig;
      sig.reserve(cell.size());
      for (int v : cell) {
        std::vector<int> s(2 * p.size(), 0);
        for (int w = 0; w < m.n; ++w) {
          auto c = m.at(v, w);
          if (c) ++s[2 * cell_of[w] + (c - 1)];
        }
        sig.emplace_back(std::move(s), v);
      }
      std::sort(sig.begin(), sig.end());
      for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i == 0 || sig[i].first != sig[i - 1].first) next.emplace_back();
        next.back().push_back(sig[i].second);
      }
    }
    bool stable = next.size() == p.size();
    p = std::move(next);
    if (stable) return;
  }
}

inline bool twins(const ColourMatrix& m, int u, int v) {
  for (int x = 0; x < m.n; ++x) {
    if (x != u && x != v && m.at(u, x) != m.at(v, x)) return false;
  }
  return true;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Individualisation-refinement keeping the smallest leaf encoding. Subtrees
// are skipped for twins and for orbits of automorphisms found at equal leaves.
class Canonicaliser {
 public:
  explicit Canonicaliser(const ColourMatrix& m) : m_(m) {}

  CanonicalKey run() {
    Partition p;
    if (m_.n > 0) {
      p.emplace_back(m_.n);
      std::iota(p[0].begin(), p[0].end(), 0);
    }
    std::vector<int> fixed;
    search(p, fixed);
    return best_ ? *best_ : encode({});
  }

 private:
  std::string encode(const std::vector<int>& order) const {
    std::string out;
    int n = m_.n;
    out.push_back(char(n & 0xff));
    out.push_back(char((n >> 8) & 0xff));
    unsigned acc = 0;
    int bits = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        acc = (acc << 2) | m_.at(order[i], order[j]);
        bits += 2;
        if (bits == 8) {
          out.push_back(char(acc));
          acc = 0;
          bits = 0;
        }
      }
    }
    if (bits) out.push_back(char(acc << (8 - bits)));
    return out;
  }

  void leaf(const Partition& p) {
    std::vector<int> order;
    order.reserve(m_.n);
    for (const Cell& c : p) order.push_back(c[0]);
    std::string code = encode(order);
    if (!best_ || code < *best_) {
      best_ = std::move(code);
      best_order_ = std::move(order);
    } else if (code == *best_) {
      // order[i] and best_order_[i] play the same role: an automorphism.
      std::vector<int> gamma(m_.n);
      for (int i = 0; i < m_.n; ++i) gamma[best_order_[i]] = order[i];
      autos_.push_back(std::move(gamma));
    }
  }

  void search(Partition p, std::vector<int>& fixed) {
    refine(m_, p);
    std::size_t target = p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].size() > 1 && (target == p.size() || p[i].size() < p[target].size())) target = i;
    }
    if (target == p.size()) {
      leaf(p);
      return;
    }
    Cell cell = p[target];
    std::vector<int> tried;
    for (int v : cell) {
      bool skip = false;
      for (int t : tried) skip = skip || twins(m_, t, v);
      if (!skip && !autos_.empty()) {
        UnionFind uf(m_.n);
        for (const auto& g : autos_) {
          bool fixes = true;
          for (int f : fixed) fixes = fixes && g[f] == f;
          if (!fixes) continue;
          for (int x = 0; x < m_.n; ++x) uf.unite(x, g[x]);
        }
        for (int t : tried) skip = skip || uf.find(t) == uf.find(v);
      }
      if (skip) continue;
      tried.push_back(v);
      Partition q;
      q.reserve(p.size() + 1);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i != target) {
          q.push_back(p[i]);
          continue;
        }
        q.push_back({v});
        Cell rest;
        for (int x : p[i])
          if (x != v) rest.push_back(x);
        q.push_back(std::move(rest));
      }
      fixed.push_back(v);
      search(std::move(q), fixed);
      fixed.pop_back();
    }
  }

  const ColourMatrix& m_;
  std::optional<std::string> best_;
  std::vector<int> best_order_;
  std::vector<std::vector<int>> autos_;
};

}  // namespace detail

inline CanonicalKey canonical_key(const ColourMatrix& m) { return detail::Canonicaliser(m).run(); }

// Equal keys iff the trigraphs are isomorphic with colours preserved.
inline CanonicalKey canonical_key(const Trigraph& g) { return canonical_key(ColourMatrix::of(g)); }

}  // namespace tww
