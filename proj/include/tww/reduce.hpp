#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tww/sequence.hpp"
#include "tww/solver.hpp"
#include "tww/structure.hpp"
#include "tww/trigraph.hpp"

namespace tww {

struct Solved {
  ContractionSequence sequence;
};

struct Reduced {
  Trigraph kernel;
  Lift lift;
};

using RuleOutcome = std::variant<Solved, Reduced>;

struct ReduceOptions {
  // Run the width <= 1 due-diligence checks. Without them the output only
  // supports upper bounds: lifts still verify, equivalence is not claimed.
  bool check_width = true;
  // Caller already knows tww(G) >= 2.
  bool known_at_least_2 = false;
  // Keep before/after trigraphs and lifts in the trace.
  bool keep_instances = false;
  SolverConfig solver;
};

struct RuleRecord {
  std::string rule;
  VertexId site;
  std::optional<Trigraph> before;
  std::optional<Trigraph> after;
  std::optional<Lift> lift;
};

namespace detail {

// Post-order contraction of a tree hanging from `root`: each finished subtree
// is folded into one pendant of its parent, and pendants of the same parent
// are merged as soon as they appear, so no vertex ever sees more than two red
// neighbours. The root takes part only in the final contraction, which is
// skipped when `keep_root` is set; the result is then root plus one pendant.
inline std::optional<VertexId> contract_tree(Replay& rp, const std::set<VertexId>& tree, VertexId root,
                                             bool keep_root) {
  std::map<VertexId, VertexId> parent;
  std::vector<VertexId> order;
  std::vector<std::pair<VertexId, bool>> stack{{root, false}};
  parent[root] = root;
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      order.push_back(v);
      continue;
    }
    stack.push_back({v, true});
    const auto& n = rp.current().neighbors(v);
    for (auto it = n.rbegin(); it != n.rend(); ++it) {
      VertexId c = it->first;
      if (!tree.count(c) || parent.count(c)) continue;
      parent[c] = v;
      stack.push_back({c, false});
    }
  }
  std::map<VertexId, VertexId> acc;
  for (VertexId v : order) {
    if (v == root) break;
    VertexId s = v;
    if (auto it = acc.find(v); it != acc.end()) s = rp.contract(v, it->second);
    VertexId p = parent[v];
    auto it = acc.find(p);
    acc[p] = it == acc.end() ? s : rp.contract(it->second, s);
  }
  auto it = acc.find(root);
  if (it == acc.end()) return std::nullopt;
  if (keep_root) return it->second;
  rp.contract(root, it->second);
  return std::nullopt;
}

inline std::size_t red_stump_count(const Trigraph& g) {
  std::size_t r = 0;
  for (const auto& [_, list] : classify_stumps(g))
    for (const Stump& s : list) r += s.kind == StumpKind::Red;
  return r;
}

// None when tww(k) >= 2 is certain; otherwise a width-1 sequence of k.
inline std::optional<ContractionSequence> one_sequence_unless_two(const Trigraph& k, const ReduceOptions& opt) {
  if (!opt.check_width) return std::nullopt;
  if (is_connected(k) && red_stump_count(k) >= 2) return std::nullopt;
  return decide_width_at_most(k, 1, opt.solver);
}

inline bool is_black_star(const Trigraph& g, const DanglingTree& t) {
  if (!t.black) return false;
  for (VertexId x : t.vertices) {
    if (x == t.root) continue;
    if (g.degree(x) != 1 || !g.neighbors(x).count(t.root)) return false;
  }
  return true;
}

inline std::vector<Stump> stumps_of(const Trigraph& g, VertexId u, const std::set<VertexId>& exclude = {}) {
  std::vector<Stump> out;
  for (const auto& [v, _] : g.neighbors(u)) {
    if (exclude.count(v)) continue;
    if (auto s = stump_at(g, u, v)) out.push_back(*s);
  }
  return out;
}

// Folds u's stumps into one pendant vertex and returns it.
inline std::optional<VertexId> stumps_to_pendant(Replay& rp, const std::vector<Stump>& stumps) {
  const Stump* half = nullptr;
  const Stump* two = nullptr;
  for (const Stump& s : stumps) (s.kind == StumpKind::Half ? half : two) = &s;
  bool ok = (stumps.size() == 1) || (stumps.size() == 2 && half && two && two->kind == StumpKind::Black);
  if (!ok) throw Error(Errc::BadStumpConfig, "need one stump, or one half and one black stump");
  if (!two) return half->v;
  VertexId v = two->v;
  if (half) v = rp.contract(half->v, v);
  return rp.contract(v, *two->w);
}

}  // namespace detail

// Width <= 2 sequence of a black tree in which `root` is touched only by the
// last contraction.
inline ContractionSequence tree_sequence(const Trigraph& t, VertexId root) {
  if (t.red_edge_count() > 0 || !is_connected(t) || t.edge_count() + 1 != t.vertex_count()) {
    throw Error(Errc::NotATree, "input is not a black tree");
  }
  if (!t.contains(root)) throw Error(Errc::DeadVertex, "root " + std::to_string(root) + " not live");
  Replay rp(t);
  auto vs = t.vertices();
  detail::contract_tree(rp, {vs.begin(), vs.end()}, root, false);
  return rp.sequence();
}

// Replaces a dangling black star centred at the bridge endpoint by a black stump.
inline RuleOutcome reduce_star(const Trigraph& g, const DanglingTree& t) {
  if (t.vertices.size() < 2 || !detail::is_black_star(g, t)) {
    throw Error(Errc::NotAStar, "tree at " + std::to_string(t.anchor) + " is not a black star with a leaf");
  }
  Replay rp(g);
  std::optional<VertexId> cur;
  for (VertexId x : t.vertices) {
    if (x == t.root) continue;
    cur = cur ? rp.contract(*cur, x) : x;
  }
  Trigraph k = rp.current();
  return Reduced{k, Lift::prefix(g, rp.sequence(), k, unchanged, "onestar")};
}

// Cuts a dangling black tree with a vertex at distance two from its root down
// to a red stump. tww(g) >= 2 is the caller's precondition.
inline RuleOutcome reduce_tree(const Trigraph& g, const DanglingTree& t, const ReduceOptions& opt = {}) {
  if (!t.black || t.vertices.size() < 3 || detail::is_black_star(g, t)) {
    throw Error(Errc::PreconditionViolated, "tree at " + std::to_string(t.anchor) + " has no vertex at distance 2");
  }
  Replay rp(g);
  detail::contract_tree(rp, {t.vertices.begin(), t.vertices.end()}, t.root, true);
  Trigraph k = rp.current();
  if (auto one = detail::one_sequence_unless_two(k, opt)) return Solved{rp.sequence().then(*one)};
  return Reduced{k, Lift::prefix(g, rp.sequence(), k, at_least_two, "onebigtree")};
}

// One merging step among the stumps of u. The allowed black+half pair is left
// as is.
inline RuleOutcome merge_stumps(const Trigraph& g, VertexId u, const ReduceOptions& opt = {}) {
  auto stumps = detail::stumps_of(g, u);
  if (stumps.size() < 2) throw Error(Errc::NoMultipleStumps, "vertex " + std::to_string(u) + " has < 2 stumps");
  std::vector<Stump> half, black, red;
  for (const Stump& s : stumps) {
    (s.kind == StumpKind::Half ? half : s.kind == StumpKind::Black ? black : red).push_back(s);
  }
  Replay rp(g);
  std::string rule;
  bool diligence = true;
  if (!red.empty()) {
    const Stump& r = red.front();
    const Stump& s = stumps.front() == r ? stumps[1] : stumps.front();
    if (s.kind == StumpKind::Half) {
      rp.contract(s.v, r.v);
    } else {
      rp.contract(*s.w, *r.w);
      rp.contract(s.v, r.v);
    }
    rule = "redstumps";
  } else if (half.size() >= 2) {
    rp.contract(half[0].v, half[1].v);
    rule = "halfstumps";
    diligence = false;
  } else if (black.size() >= 2) {
    rp.contract(*black[0].w, *black[1].w);
    rp.contract(black[0].v, black[1].v);
    rule = "twoblack";
  } else {
    return Reduced{g, identity_lift(g)};
  }
  Trigraph k = rp.current();
  if (diligence) {
    if (auto one = detail::one_sequence_unless_two(k, opt)) return Solved{rp.sequence().then(*one)};
  }
  return Reduced{k, Lift::prefix(g, rp.sequence(), k, diligence ? at_least_two : unchanged, rule)};
}

struct Pruned {
  HPGraph graph;
  Lift lift;
};

struct PruneResult {
  std::variant<Solved, Pruned> outcome;
  std::vector<RuleRecord> trace;
  std::size_t k = 0;
  bool optimal = false;  // a Solved sequence is optimal when widths were checked
};

namespace detail {

struct Pipeline {
  Trigraph cur;
  Lift lift;
  std::vector<RuleRecord> trace;
  bool keep;

  Pipeline(const Trigraph& g, bool keep_instances) : cur(g), lift(identity_lift(g)), keep(keep_instances) {}

  void apply(const Reduced& r, const std::string& rule, VertexId site) {
    RuleRecord rec{rule, site, std::nullopt, std::nullopt, std::nullopt};
    if (keep) {
      rec.before = cur;
      rec.after = r.kernel;
      rec.lift = r.lift;
    }
    trace.push_back(std::move(rec));
    lift = compose(lift, r.lift);
    cur = r.kernel;
  }

  ContractionSequence lift_solved(const Solved& s) const { return lift.apply(s.sequence); }
};

}  // namespace detail

// Cuts every dangling tree down to a stump and merges stumps, then splits the
// result into a core H and original dangling pseudo-paths.
inline PruneResult prune(const Trigraph& g, const ReduceOptions& opt = {}) {
  if (!is_connected(g) || g.empty()) throw Error(Errc::Disconnected, "prune needs a connected trigraph");
  PruneResult res;
  res.k = feedback_edge_number(g);
  const auto fes = feedback_edge_set(g);
  if (opt.check_width && !opt.known_at_least_2) {
    if (auto one = decide_width_at_most(g, 1, opt.solver)) {
      res.outcome = Solved{*one};
      res.optimal = true;
      return res;
    }
  }
  res.optimal = opt.check_width;
  if (res.k == 0) {
    res.outcome = Solved{tree_sequence(g, g.vertices().front())};
    return res;
  }
  detail::Pipeline pl(g, opt.keep_instances);
  auto finish_solved = [&](const Solved& s) {
    res.outcome = Solved{pl.lift_solved(s)};
    res.trace = std::move(pl.trace);
    return res;
  };

  for (bool again = true; again;) {
    again = false;
    for (const auto& t : find_dangling_trees(pl.cur)) {
      if (t.vertices.size() >= 3 && detail::is_black_star(pl.cur, t)) {
        pl.apply(std::get<Reduced>(reduce_star(pl.cur, t)), "onestar", t.anchor);
        again = true;
        break;
      }
    }
  }
  for (bool again = true; again;) {
    again = false;
    for (const auto& t : find_dangling_trees(pl.cur)) {
      if (!t.black || t.vertices.size() < 3 || detail::is_black_star(pl.cur, t)) continue;
      auto out = reduce_tree(pl.cur, t, opt);
      if (auto* s = std::get_if<Solved>(&out)) return finish_solved(*s);
      pl.apply(std::get<Reduced>(out), "onebigtree", t.anchor);
      again = true;
      break;
    }
  }
  for (bool again = true; again;) {
    again = false;
    for (const auto& [u, list] : classify_stumps(pl.cur)) {
      std::size_t half = 0, black = 0, red = 0;
      for (const Stump& s : list) {
        half += s.kind == StumpKind::Half;
        black += s.kind == StumpKind::Black;
        red += s.kind == StumpKind::Red;
      }
      if (!((red && list.size() >= 2) || half >= 2 || black >= 2)) continue;
      auto out = merge_stumps(pl.cur, u, opt);
      if (auto* s = std::get_if<Solved>(&out)) return finish_solved(*s);
      const auto& r = std::get<Reduced>(out);
      pl.apply(r, r.lift.chain().empty() ? "halfstumps" : r.lift.chain().back(), u);
      again = true;
      break;
    }
  }

  // H: feedback endpoints, branching vertices of the spanning tree of the
  // core, and their stumps. What is left of the core falls apart into paths.
  const Trigraph& k = pl.cur;
  auto core = two_core(k);
  std::set<VertexPair> f(fes.edges.begin(), fes.edges.end());
  std::set<VertexId> q;
  for (auto [a, b] : fes.edges) {
    q.insert(a);
    q.insert(b);
  }
  for (VertexId v : core) {
    std::size_t d = 0;
    for (const auto& [y, _] : k.neighbors(v))
      if (core.count(y) && !f.count({std::min(v, y), std::max(v, y)})) ++d;
    if (d > 2) q.insert(v);
  }
  HPGraph hp{k, q, {}, opt.check_width};
  auto stumps = classify_stumps(k);
  for (VertexId v : q) {
    if (auto it = stumps.find(v); it != stumps.end())
      for (const Stump& s : it->second)
        for (VertexId x : s.vertices()) hp.core.insert(x);
  }
  std::set<VertexId> seen;
  for (VertexId s : core) {
    if (q.count(s) || seen.count(s)) continue;
    std::set<VertexId> comp{s};
    std::vector<VertexId> stack{s};
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (const auto& [y, _] : k.neighbors(x))
        if (core.count(y) && !q.count(y) && comp.insert(y).second) stack.push_back(y);
    }
    seen.insert(comp.begin(), comp.end());
    VertexId start = 0;
    bool found = false;
    for (VertexId x : comp) {
      std::size_t inside = 0;
      for (const auto& [y, _] : k.neighbors(x)) inside += comp.count(y);
      if (inside <= 1) {
        start = x;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("core component without an end");
    PseudoPath p{{start}, PathFlavor::Original};
    std::optional<VertexId> prev;
    while (true) {
      std::optional<VertexId> nxt;
      for (const auto& [y, _] : k.neighbors(p.vertices.back()))
        if (comp.count(y) && y != prev) nxt = y;
      if (!nxt) break;
      prev = p.vertices.back();
      p.vertices.push_back(*nxt);
    }
    hp.paths.push_back(std::move(p));
  }
  if (hp.core.size() > 16 * res.k || hp.paths.size() > 4 * res.k) {
    throw std::logic_error("pruned core exceeds 16k vertices or 4k paths");
  }
  validate(hp);
  res.outcome = Pruned{std::move(hp), pl.lift};
  res.trace = std::move(pl.trace);
  return res;
}

namespace detail {

// Folds u's stumps and then u itself, leaving every edge at u red.
inline VertexId kill_stumps(Replay& rp, VertexId u, const std::vector<Stump>& stumps) {
  auto x = stumps_to_pendant(rp, stumps);
  return rp.contract(*x, u);
}

}  // namespace detail

// Partial sequence removing u's stumps by merging them into u.
inline ContractionSequence kill_stumps_prefix(const Trigraph& g, VertexId u) {
  Replay rp(g);
  detail::kill_stumps(rp, u, detail::stumps_of(g, u));
  return rp.sequence();
}

struct TidyResult {
  HPGraph graph;
  Lift lift;
  std::vector<RuleRecord> trace;
};

// Turns every original path into a tidy red path, or absorbs it into H when
// it has at most six vertices.
inline TidyResult tidy(const HPGraph& h, bool keep_instances = false) {
  if (auto why = hp_violation(h)) throw Error(Errc::NotOriginal, *why);
  detail::Pipeline pl(h.graph, keep_instances);
  HPGraph out{h.graph, h.core, {}, h.tww_at_least_2};
  auto on_paths = path_vertex_set(h);
  for (const auto& p : h.paths) {
    if (p.flavor == PathFlavor::Tidy) {
      out.paths.push_back(p);
      continue;
    }
    const auto& u = p.vertices;
    const std::size_t n = u.size();
    auto stumps_at = [&](std::size_t i) { return *path_stumps(HPGraph{pl.cur, out.core, {}, true}, u[i], on_paths); };
    if (n <= 6) {
      for (std::size_t i = 0; i < n; ++i) {
        out.core.insert(u[i]);
        for (const Stump& s : stumps_at(i))
          for (VertexId x : s.vertices()) out.core.insert(x);
      }
      continue;
    }
    // 0-based: u[1] and u[n-2] are the second and second-to-last vertices.
    std::vector<std::vector<Stump>> st(n);
    for (std::size_t i = 0; i < n; ++i) st[i] = stumps_at(i);
    Replay rp(pl.cur);
    std::vector<VertexId> lab(u.begin(), u.end());
    std::vector<std::size_t> kill;
    for (std::size_t j = 2; j + 2 < n; ++j)
      if (!st[j].empty()) kill.push_back(j);
    if (!kill.empty()) {
      std::size_t first = kill.front();
      std::stable_sort(kill.begin(), kill.end(), [&](std::size_t a, std::size_t b) {
        auto da = a > first ? a - first : first - a;
        auto db = b > first ? b - first : first - b;
        return da < db;
      });
      for (std::size_t j : kill) lab[j] = detail::kill_stumps(rp, lab[j], st[j]);
    }
    for (auto [e, nb] : {std::pair<std::size_t, std::size_t>{1, 2}, {n - 2, n - 3}}) {
      if (st[e].empty()) continue;
      VertexId x = *detail::stumps_to_pendant(rp, st[e]);
      lab[nb] = rp.contract(x, lab[nb]);
    }
    std::vector<Recoloring> rc;
    for (std::size_t i = 1; i + 2 < n; ++i) rc.push_back({lab[i], lab[i + 1], EdgeColor::Red});
    Trigraph k = rp.current().recolor(rc, RecolorMode::Unchecked);
    Reduced r{k, Lift::prefix(pl.cur, rp.sequence(), k, at_least_two, "tidy")};
    pl.apply(r, "tidy", u.front());
    for (std::size_t i : {std::size_t(0), std::size_t(1), std::size_t(2), n - 3, n - 2, n - 1}) out.core.insert(lab[i]);
    for (std::size_t i : {std::size_t(0), n - 1})
      for (const Stump& s : st[i])
        for (VertexId x : s.vertices()) out.core.insert(x);
    out.paths.push_back({{lab.begin() + 3, lab.end() - 3}, PathFlavor::Tidy});
  }
  out.graph = pl.cur;
  validate(out);
  if (out.core.size() > h.core.size() + 24 * h.paths.size()) throw std::logic_error("tidy core grew past 24 per path");
  return {std::move(out), pl.lift, std::move(pl.trace)};
}

// Width <= 2 sequence for a connected graph with at most one independent cycle.
inline ContractionSequence fen1_sequence(const Trigraph& g) {
  if (!is_connected(g) || g.empty()) throw Error(Errc::Disconnected, "fen1_sequence needs a connected graph");
  auto k = feedback_edge_number(g);
  if (k > 1) throw Error(Errc::FenTooLarge, "feedback edge number " + std::to_string(k) + " exceeds 1");
  if (k == 0) return tree_sequence(g, g.vertices().front());
  ReduceOptions opt;
  opt.check_width = false;
  auto pr = prune(g, opt);
  const auto& pruned = std::get<Pruned>(pr.outcome);
  auto td = tidy(pruned.graph);
  const Trigraph& c = td.graph.graph;

  // Walk the cycle from its smallest vertex.
  auto cyc = two_core(c);
  std::vector<VertexId> ring{*cyc.begin()};
  std::optional<VertexId> prev;
  while (true) {
    std::optional<VertexId> nxt;
    for (const auto& [y, _] : c.neighbors(ring.back()))
      if (cyc.count(y) && y != prev && y != ring.front()) {
        nxt = y;
        break;
      }
    if (!nxt) break;
    prev = ring.back();
    ring.push_back(*nxt);
  }
  if (ring.size() != cyc.size()) throw std::logic_error("core of a fen-1 graph is not a cycle");

  Replay rp(c);
  const std::size_t m = ring.size();
  std::vector<std::optional<VertexId>> pend(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto st = detail::stumps_of(c, ring[i], cyc);
    if (!st.empty()) pend[i] = detail::stumps_to_pendant(rp, st);
  }
  // Fold pendants pairwise into every second cycle vertex.
  for (std::size_t j = 0; j + 1 < m; j += 2) {
    VertexId& b = ring[j + 1];
    auto pa = pend[j], pb = pend[j + 1];
    if (pa && pb) {
      b = rp.contract(rp.contract(*pa, *pb), b);
    } else if (pa || pb) {
      b = rp.contract(pa ? *pa : *pb, b);
    }
  }
  if (m % 2 == 1 && pend[m - 1]) ring[m - 1] = rp.contract(*pend[m - 1], ring[m - 1]);
  while (ring.size() > 1) {
    VertexId r = rp.contract(ring[0], ring[1]);
    ring.erase(ring.begin());
    ring[0] = r;
  }
  auto seq = pruned.lift.apply(td.lift.apply(rp.sequence()));
  if (verify(g, seq, Completeness::Full) > 2) throw std::logic_error("fen-1 construction exceeded width 2");
  return seq;
}

}  // namespace tww
