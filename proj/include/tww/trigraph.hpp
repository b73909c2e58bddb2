#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tww/error.hpp"

namespace tww {

using VertexId = std::uint32_t;

enum class EdgeColor : std::uint8_t { Black, Red };

struct Edge {
  VertexId u;
  VertexId v;
  EdgeColor color;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Recoloring {
  VertexId u;
  VertexId v;
  std::optional<EdgeColor> color;  // nullopt drops the edge
};

enum class RecolorMode { Checked, Unchecked };

using Neighborhood = std::map<VertexId, EdgeColor>;

// A trigraph with stable labels. Contraction retires both endpoints and adds a
// vertex labelled next_label(); labels are never reused.
class Trigraph {
 public:
  Trigraph() = default;

  static Trigraph from_edges(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& black,
                             const std::vector<std::pair<VertexId, VertexId>>& red = {}) {
    Trigraph g;
    for (VertexId v = 0; v < n; ++v) g.adj_.emplace(v, Neighborhood{});
    g.next_ = static_cast<VertexId>(n);
    auto add = [&](const std::vector<std::pair<VertexId, VertexId>>& list, EdgeColor c) {
      for (auto [a, b] : list) {
        if (a >= n || b >= n) throw Error(Errc::BadEndpoint, "edge endpoint out of range");
        if (a == b) throw Error(Errc::SelfLoop, "self-loop at " + std::to_string(a));
        if (g.adj_[a].count(b)) {
          throw Error(Errc::DuplicateEdge, "pair " + std::to_string(a) + "," + std::to_string(b));
        }
        g.adj_[a][b] = c;
        g.adj_[b][a] = c;
      }
    };
    add(black, EdgeColor::Black);
    add(red, EdgeColor::Red);
    return g;
  }

  // Builds a trigraph over arbitrary labels; next_label must exceed all of them.
  static Trigraph from_labelled(const std::vector<VertexId>& vertices, const std::vector<Edge>& edges,
                                VertexId next_label) {
    Trigraph g;
    for (VertexId v : vertices) {
      if (v >= next_label) throw Error(Errc::BadEndpoint, "label beyond next_label");
      if (!g.adj_.emplace(v, Neighborhood{}).second) throw Error(Errc::BadVertexSet, "repeated vertex");
    }
    g.next_ = next_label;
    for (const Edge& e : edges) {
      if (e.u == e.v) throw Error(Errc::SelfLoop, "self-loop at " + std::to_string(e.u));
      if (!g.contains(e.u) || !g.contains(e.v)) throw Error(Errc::BadEndpoint, "edge endpoint not a vertex");
      if (g.adj_[e.u].count(e.v)) throw Error(Errc::DuplicateEdge, "repeated pair");
      g.adj_[e.u][e.v] = e.color;
      g.adj_[e.v][e.u] = e.color;
    }
    return g;
  }

  bool contains(VertexId v) const { return adj_.count(v) != 0; }
  std::size_t vertex_count() const { return adj_.size(); }
  bool empty() const { return adj_.empty(); }
  VertexId next_label() const { return next_; }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    out.reserve(adj_.size());
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
  }

  const Neighborhood& neighbors(VertexId v) const { return at(v); }

  std::optional<EdgeColor> edge(VertexId u, VertexId v) const {
    const auto& n = at(u);
    at(v);
    auto it = n.find(v);
    if (it == n.end()) return std::nullopt;
    return it->second;
  }

  std::size_t degree(VertexId v) const { return at(v).size(); }

  std::size_t red_degree(VertexId v) const {
    std::size_t r = 0;
    for (const auto& [_, c] : at(v)) r += c == EdgeColor::Red;
    return r;
  }

  std::size_t black_degree(VertexId v) const { return degree(v) - red_degree(v); }

  std::size_t max_red_degree() const {
    std::size_t best = 0;
    for (const auto& [v, _] : adj_) best = std::max(best, red_degree(v));
    return best;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& [_, n] : adj_) m += n.size();
    return m / 2;
  }

  std::size_t red_edge_count() const {
    std::size_t m = 0;
    for (const auto& [v, _] : adj_) m += red_degree(v);
    return m / 2;
  }

  // Sorted with u < v.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& [u, n] : adj_) {
      for (const auto& [v, c] : n) {
        if (u < v) out.push_back({u, v, c});
      }
    }
    return out;
  }

  Trigraph contract(VertexId u, VertexId v) const {
    Trigraph g = *this;
    g.merge(u, v);
    return g;
  }

  Trigraph induce(const std::set<VertexId>& keep) const {
    Trigraph g;
    g.next_ = next_;
    for (VertexId v : keep) {
      if (!contains(v)) throw Error(Errc::BadVertexSet, "vertex " + std::to_string(v) + " not live");
      auto& n = g.adj_[v];
      for (const auto& [w, c] : adj_.at(v)) {
        if (keep.count(w)) n.emplace(w, c);
      }
    }
    return g;
  }

  Trigraph recolor(const std::vector<Recoloring>& changes, RecolorMode mode = RecolorMode::Checked) const {
    Trigraph g = *this;
    for (const Recoloring& r : changes) {
      auto old = g.edge(r.u, r.v);
      if (r.u == r.v) throw Error(Errc::SelfLoop, "recolor on a single vertex");
      if (mode == RecolorMode::Checked) {
        bool ok = old == EdgeColor::Red && (!r.color || *r.color == EdgeColor::Black);
        if (!ok) throw Error(Errc::IllegalRecolor, "only red edges may be dropped or blackened");
      }
      if (r.color) {
        g.adj_[r.u][r.v] = *r.color;
        g.adj_[r.v][r.u] = *r.color;
      } else {
        g.adj_[r.u].erase(r.v);
        g.adj_[r.v].erase(r.u);
      }
    }
    return g;
  }

  // True when this is obtainable from `parent` by deleting vertices, dropping
  // red edges, and turning red edges black.
  bool is_pseudoinduced_of(const Trigraph& parent) const {
    for (const auto& [u, n] : adj_) {
      if (!parent.contains(u)) return false;
      for (const auto& [v, pc] : parent.adj_.at(u)) {
        if (!contains(v)) continue;
        auto it = n.find(v);
        if (pc == EdgeColor::Black && (it == n.end() || it->second != EdgeColor::Black)) return false;
      }
      for (const auto& [v, c] : n) {
        if (!parent.adj_.at(u).count(v)) return false;
      }
    }
    return true;
  }

  // Throws std::logic_error on a broken representation.
  void validate() const {
    for (const auto& [u, n] : adj_) {
      if (u >= next_) throw std::logic_error("label beyond counter");
      for (const auto& [v, c] : n) {
        if (v == u) throw std::logic_error("self-loop");
        auto it = adj_.find(v);
        if (it == adj_.end()) throw std::logic_error("dangling endpoint");
        auto back = it->second.find(u);
        if (back == it->second.end() || back->second != c) throw std::logic_error("asymmetric edge");
      }
    }
  }

  // FNV-1a over labels, edges and the label counter.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(next_);
    mix(adj_.size());
    for (const auto& [u, n] : adj_) {
      mix(u);
      for (const auto& [v, c] : n) {
        if (u < v) mix((std::uint64_t(v) << 2) | std::uint64_t(c));
      }
    }
    return h;
  }

  friend bool operator==(const Trigraph& a, const Trigraph& b) { return a.next_ == b.next_ && a.adj_ == b.adj_; }

 private:
  friend class Replay;

  // In-place contraction; returns the fresh label.
  VertexId merge(VertexId u, VertexId v) {
    if (u == v) throw Error(Errc::SameVertex, "cannot contract " + std::to_string(u) + " with itself");
    if (!contains(u)) throw Error(Errc::DeadVertex, "vertex " + std::to_string(u) + " not live");
    if (!contains(v)) throw Error(Errc::DeadVertex, "vertex " + std::to_string(v) + " not live");
    const VertexId w = next_++;
    Neighborhood nu = std::move(adj_[u]);
    Neighborhood nv = std::move(adj_[v]);
    adj_.erase(u);
    adj_.erase(v);
    nu.erase(v);
    nv.erase(u);
    Neighborhood nw;
    for (const auto& [x, c] : nu) {
      auto it = nv.find(x);
      bool black = c == EdgeColor::Black && it != nv.end() && it->second == EdgeColor::Black;
      nw.emplace(x, black ? EdgeColor::Black : EdgeColor::Red);
    }
    for (const auto& [x, c] : nv) {
      if (!nu.count(x)) nw.emplace(x, EdgeColor::Red);
    }
    for (const auto& [x, c] : nw) {
      auto& nx = adj_[x];
      nx.erase(u);
      nx.erase(v);
      nx.emplace(w, c);
    }
    adj_.emplace(w, std::move(nw));
    return w;
  }

  const Neighborhood& at(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw Error(Errc::DeadVertex, "vertex " + std::to_string(v) + " not live");
    return it->second;
  }

  std::map<VertexId, Neighborhood> adj_;
  VertexId next_ = 0;
};

// Connected components in ascending order of their smallest label.
inline std::vector<std::vector<VertexId>> components(const Trigraph& g) {
  std::vector<std::vector<VertexId>> out;
  std::set<VertexId> seen;
  for (VertexId s : g.vertices()) {
    if (seen.count(s)) continue;
    std::vector<VertexId> comp{s};
    seen.insert(s);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (const auto& [x, _] : g.neighbors(comp[i])) {
        if (seen.insert(x).second) comp.push_back(x);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline bool is_connected(const Trigraph& g) { return components(g).size() <= 1; }

}  // namespace tww
