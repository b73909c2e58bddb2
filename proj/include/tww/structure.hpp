#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tww/trigraph.hpp"

namespace tww {

using VertexPair = std::pair<VertexId, VertexId>;

struct FeedbackEdgeSet {
  std::vector<VertexPair> edges;  // u < v, sorted
};

// Non-tree edges of a BFS forest grown from the smallest label of each
// component, neighbours visited in label order. Colours are ignored.
inline FeedbackEdgeSet feedback_edge_set(const Trigraph& g) {
  std::set<VertexPair> tree;
  std::set<VertexId> seen;
  for (VertexId s : g.vertices()) {
    if (!seen.insert(s).second) continue;
    std::vector<VertexId> q{s};
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (const auto& [y, _] : g.neighbors(q[i])) {
        if (!seen.insert(y).second) continue;
        tree.insert({std::min(q[i], y), std::max(q[i], y)});
        q.push_back(y);
      }
    }
  }
  FeedbackEdgeSet f;
  for (const Edge& e : g.edges())
    if (!tree.count({e.u, e.v})) f.edges.push_back({e.u, e.v});
  return f;
}

inline std::size_t feedback_edge_number(const Trigraph& g) {
  return g.edge_count() + components(g).size() - g.vertex_count();
}

// Bridges by iterative low-link, sorted with u < v.
inline std::vector<VertexPair> find_bridges(const Trigraph& g) {
  std::map<VertexId, int> disc, low;
  std::vector<VertexPair> out;
  int clock = 0;
  for (VertexId s : g.vertices()) {
    if (disc.count(s)) continue;
    struct Frame {
      VertexId v;
      std::optional<VertexId> parent;
      Neighborhood::const_iterator it;
    };
    std::vector<Frame> stack;
    disc[s] = low[s] = clock++;
    stack.push_back({s, std::nullopt, g.neighbors(s).begin()});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.it != g.neighbors(f.v).end()) {
        VertexId y = f.it->first;
        ++f.it;
        if (f.parent && y == *f.parent) continue;
        if (disc.count(y)) {
          low[f.v] = std::min(low[f.v], disc[y]);
        } else {
          disc[y] = low[y] = clock++;
          stack.push_back({y, f.v, g.neighbors(y).begin()});
        }
        continue;
      }
      VertexId v = f.v;
      auto p = f.parent;
      stack.pop_back();
      if (p) {
        low[*p] = std::min(low[*p], low[v]);
        if (low[v] > disc[*p]) out.push_back({std::min(*p, v), std::max(*p, v)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Vertices surviving repeated deletion of vertices of degree at most one.
inline std::set<VertexId> two_core(const Trigraph& g) {
  std::map<VertexId, std::size_t> deg;
  std::vector<VertexId> q;
  for (VertexId v : g.vertices()) {
    deg[v] = g.degree(v);
    if (deg[v] <= 1) q.push_back(v);
  }
  std::set<VertexId> gone(q.begin(), q.end());
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (const auto& [y, _] : g.neighbors(q[i])) {
      if (gone.count(y)) continue;
      if (--deg[y] <= 1) {
        gone.insert(y);
        q.push_back(y);
      }
    }
  }
  std::set<VertexId> core;
  for (VertexId v : g.vertices())
    if (!gone.count(v)) core.insert(v);
  return core;
}

enum class StumpKind { Half, Black, Red };

struct Stump {
  StumpKind kind;
  VertexId owner;
  VertexId v;
  std::optional<VertexId> w;

  std::vector<VertexId> vertices() const { return w ? std::vector<VertexId>{v, *w} : std::vector<VertexId>{v}; }
  friend bool operator==(const Stump&, const Stump&) = default;
};

struct DanglingTree {
  VertexId anchor;  // the endpoint outside the tree
  VertexId root;    // the endpoint inside the tree
  std::vector<VertexId> vertices;
  bool black;
};

// The stump hanging at `owner` through `v`, if v and what lies behind it form one.
inline std::optional<Stump> stump_at(const Trigraph& g, VertexId owner, VertexId v) {
  if (g.edge(owner, v) != EdgeColor::Black) return std::nullopt;
  const auto& nv = g.neighbors(v);
  if (nv.size() == 1) return Stump{StumpKind::Half, owner, v, std::nullopt};
  if (nv.size() != 2) return std::nullopt;
  VertexId w = nv.begin()->first == owner ? std::next(nv.begin())->first : nv.begin()->first;
  if (g.degree(w) != 1) return std::nullopt;
  auto kind = nv.at(w) == EdgeColor::Black ? StumpKind::Black : StumpKind::Red;
  return Stump{kind, owner, v, w};
}

// Owners of degree at least two only; overlapping candidates are dropped in
// (owner, v) order.
inline std::map<VertexId, std::vector<Stump>> classify_stumps(const Trigraph& g) {
  std::vector<Stump> cand;
  for (VertexId u : g.vertices()) {
    if (g.degree(u) < 2) continue;
    for (const auto& [v, _] : g.neighbors(u)) {
      auto s = stump_at(g, u, v);
      if (!s) continue;
      // A half stump must not be the far end of a two-vertex stump.
      if (s->kind == StumpKind::Half && g.degree(u) == 2) {
        bool far_end = false;
        for (const auto& [x, c] : g.neighbors(u))
          if (x != v && stump_at(g, x, u)) far_end = true;
        if (far_end) continue;
      }
      cand.push_back(*s);
    }
  }
  std::set<VertexId> owners, taken;
  std::map<VertexId, std::vector<Stump>> out;
  for (const Stump& s : cand) {
    auto vs = s.vertices();
    bool clash = taken.count(s.owner) != 0;
    for (VertexId x : vs) clash = clash || taken.count(x) || owners.count(x);
    if (clash) continue;
    owners.insert(s.owner);
    taken.insert(vs.begin(), vs.end());
    out[s.owner].push_back(s);
  }
  return out;
}

inline bool is_stump_tree(const Trigraph& g, const DanglingTree& t) {
  return t.vertices.size() <= 2 && stump_at(g, t.anchor, t.root).has_value();
}

// Maximal dangling trees: the components hanging off the 2-core. An acyclic
// input has no core and reports none. Once red edges exist, stumps are left
// to classify_stumps.
inline std::vector<DanglingTree> find_dangling_trees(const Trigraph& g) {
  if (!is_connected(g)) throw Error(Errc::Disconnected, "dangling trees need a connected trigraph");
  auto core = two_core(g);
  std::vector<DanglingTree> out;
  if (core.empty()) return out;
  bool has_red = g.red_edge_count() > 0;
  for (VertexId u : core) {
    for (const auto& [v, c] : g.neighbors(u)) {
      if (core.count(v)) continue;
      DanglingTree t{u, v, {v}, c == EdgeColor::Black};
      std::set<VertexId> seen{u, v};
      for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        for (const auto& [y, cy] : g.neighbors(t.vertices[i])) {
          if (!seen.insert(y).second) continue;
          t.vertices.push_back(y);
        }
      }
      std::sort(t.vertices.begin(), t.vertices.end());
      for (VertexId x : t.vertices)
        for (const auto& [y, cy] : g.neighbors(x)) t.black = t.black && cy == EdgeColor::Black;
      if (has_red && is_stump_tree(g, t)) continue;
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Maximal runs of degree-2 vertices that do not close into a cycle of their
// own, each listed from the end with the smaller label.
inline std::vector<std::vector<VertexId>> find_dangling_paths(const Trigraph& g) {
  std::set<VertexId> seen;
  std::vector<std::vector<VertexId>> out;
  for (VertexId s : g.vertices()) {
    if (g.degree(s) != 2 || seen.count(s)) continue;
    std::vector<VertexId> run{s};
    seen.insert(s);
    bool closed = false;
    for (int side = 0; side < 2 && !closed; ++side) {
      VertexId prev = s;
      VertexId cur = side == 0 ? g.neighbors(s).begin()->first : std::next(g.neighbors(s).begin())->first;
      while (g.degree(cur) == 2) {
        if (cur == s) {
          closed = true;
          break;
        }
        if (side == 0) {
          run.push_back(cur);
        } else {
          run.insert(run.begin(), cur);
        }
        seen.insert(cur);
        const auto& n = g.neighbors(cur);
        VertexId a = n.begin()->first, b = std::next(n.begin())->first;
        VertexId nxt = a == prev ? b : a;
        prev = cur;
        cur = nxt;
      }
    }
    if (closed) continue;
    if (run.back() < run.front()) std::reverse(run.begin(), run.end());
    out.push_back(std::move(run));
  }
  return out;
}

enum class PathFlavor { Original, Tidy };

struct PseudoPath {
  std::vector<VertexId> vertices;
  PathFlavor flavor = PathFlavor::Original;
};

// A trigraph split into a core H and dangling pseudo-paths. Stumps of path
// vertices are implicit: whatever hangs off a path vertex outside H. The
// width flag is carried from the producing rule, not re-derived.
struct HPGraph {
  Trigraph graph;
  std::set<VertexId> core;
  std::vector<PseudoPath> paths;
  bool tww_at_least_2 = false;
};

// Stumps hanging at path vertex x, i.e. neighbours outside H and all paths.
inline std::optional<std::vector<Stump>> path_stumps(const HPGraph& h, VertexId x,
                                                     const std::set<VertexId>& on_paths) {
  std::vector<Stump> out;
  for (const auto& [y, _] : h.graph.neighbors(x)) {
    if (h.core.count(y) || on_paths.count(y)) continue;
    auto s = stump_at(h.graph, x, y);
    if (!s) return std::nullopt;
    out.push_back(*s);
  }
  return out;
}

inline std::set<VertexId> path_vertex_set(const HPGraph& h) {
  std::set<VertexId> s;
  for (const auto& p : h.paths) s.insert(p.vertices.begin(), p.vertices.end());
  return s;
}

// Re-derives every (H,P) invariant from the trigraph. Returns the first
// violation found, or nullopt.
inline std::optional<std::string> hp_violation(const HPGraph& h) {
  const Trigraph& g = h.graph;
  if (!is_connected(g)) return "trigraph is disconnected";
  for (VertexId v : h.core)
    if (!g.contains(v)) return "core vertex " + std::to_string(v) + " not live";
  std::set<VertexId> on_paths;
  for (const auto& p : h.paths) {
    if (p.vertices.empty()) return "empty path";
    for (VertexId v : p.vertices) {
      if (!g.contains(v)) return "path vertex " + std::to_string(v) + " not live";
      if (h.core.count(v) || !on_paths.insert(v).second) return "path vertex " + std::to_string(v) + " reused";
    }
  }
  std::set<VertexId> covered(h.core.begin(), h.core.end());
  covered.insert(on_paths.begin(), on_paths.end());
  for (const auto& p : h.paths) {
    const auto& pv = p.vertices;
    const bool tidy = p.flavor == PathFlavor::Tidy;
    const EdgeColor want = tidy ? EdgeColor::Red : EdgeColor::Black;
    for (std::size_t i = 0; i + 1 < pv.size(); ++i) {
      if (g.edge(pv[i], pv[i + 1]) != want) return "path edge " + std::to_string(pv[i]) + " has the wrong colour";
    }
    std::vector<VertexId> connectors;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      VertexId x = pv[i];
      std::size_t path_nbrs = 0;
      for (const auto& [y, c] : g.neighbors(x)) {
        if (on_paths.count(y)) {
          bool consecutive = (i > 0 && pv[i - 1] == y) || (i + 1 < pv.size() && pv[i + 1] == y);
          if (!consecutive) return "path vertex " + std::to_string(x) + " touches another path";
          ++path_nbrs;
        } else if (h.core.count(y)) {
          if (c != want) return "connector edge at " + std::to_string(x) + " has the wrong colour";
          connectors.push_back(y);
        }
      }
      std::size_t need = (pv.size() == 1 ? 2 : (i == 0 || i + 1 == pv.size() ? 1 : 0));
      std::size_t core_nbrs = 0;
      for (const auto& [y, _] : g.neighbors(x)) core_nbrs += h.core.count(y);
      if (core_nbrs != need) return "path vertex " + std::to_string(x) + " has wrong core attachments";
      if (path_nbrs + core_nbrs != 2) return "path vertex " + std::to_string(x) + " is not on a path";
      auto stumps = path_stumps(h, x, on_paths);
      if (!stumps) return "vertex " + std::to_string(x) + " carries a non-stump";
      std::size_t half = 0, black = 0, red = 0;
      for (const Stump& s : *stumps) {
        half += s.kind == StumpKind::Half;
        black += s.kind == StumpKind::Black;
        red += s.kind == StumpKind::Red;
        for (VertexId y : s.vertices())
          if (!covered.insert(y).second) return "stump vertex " + std::to_string(y) + " counted twice";
      }
      if (tidy && !stumps->empty()) return "tidy path vertex " + std::to_string(x) + " has stumps";
      bool allowed = (red == 1 && half + black == 0) || (red == 0 && half <= 1 && black <= 1);
      if (!allowed) return "path vertex " + std::to_string(x) + " has a forbidden stump mix";
    }
    if (tidy) {
      for (VertexId u : connectors) {
        if (g.black_degree(u) != 0) return "tidy connector " + std::to_string(u) + " has black edges";
        std::size_t pn = 0, hn = 0;
        std::optional<VertexId> up;
        for (const auto& [y, _] : g.neighbors(u)) {
          pn += on_paths.count(y);
          if (h.core.count(y)) {
            ++hn;
            up = y;
          }
        }
        if (pn != 1) return "tidy connector " + std::to_string(u) + " sees several path vertices";
        if (hn != 1 || g.black_degree(*up) == 0) return "tidy connector " + std::to_string(u) + " is badly anchored";
      }
    }
  }
  if (covered.size() != g.vertex_count()) return "vertices outside H, paths and stumps";
  return std::nullopt;
}

inline void validate(const HPGraph& h) {
  if (auto why = hp_violation(h)) throw std::logic_error("invalid (H,P)-graph: " + *why);
}

}  // namespace tww
