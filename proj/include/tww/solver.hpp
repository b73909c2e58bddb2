#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tww/canonical.hpp"
#include "tww/sequence.hpp"
#include "tww/trigraph.hpp"

namespace tww {

struct SolverConfig {
  std::size_t max_n = 20;  // after twin reduction, per component
  std::uint64_t max_nodes = 2'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
  unsigned threads = 1;
};

enum class SolveStatus { Optimal, NotProven };

struct SolveResult {
  std::size_t width = 0;
  ContractionSequence sequence;
  bool optimal = false;
  SolveStatus status = SolveStatus::NotProven;
};

// Replays `seq`, built on a trigraph whose vertices are live in rp, inside rp.
inline void transplant(Replay& rp, const ContractionSequence& seq) {
  std::unordered_map<VertexId, VertexId> map;
  auto look = [&](VertexId x) {
    auto it = map.find(x);
    return it == map.end() ? x : it->second;
  };
  for (const auto& s : seq.steps()) map[s.result] = rp.contract(look(s.a), look(s.b));
}

inline bool colour_twins(const Trigraph& g, VertexId u, VertexId v) {
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  std::size_t du = nu.size() - nu.count(v);
  std::size_t dv = nv.size() - nv.count(u);
  if (du != dv) return false;
  for (const auto& [x, c] : nu) {
    if (x == v) continue;
    auto it = nv.find(x);
    if (it == nv.end() || it->second != c) return false;
  }
  return true;
}

// Contracts colour twins until none remain. Twin contractions never raise a
// red degree.
inline void twin_reduce(Replay& rp) {
  while (true) {
    const Trigraph& g = rp.current();
    // Twins have equal open neighbourhoods or equal closed ones.
    std::map<std::vector<VertexId>, std::vector<VertexId>> open, closed;
    for (VertexId v : g.vertices()) {
      std::vector<VertexId> o;
      for (const auto& [x, _] : g.neighbors(v)) o.push_back(x);
      auto c = o;
      c.insert(std::lower_bound(c.begin(), c.end(), v), v);
      open[o].push_back(v);
      closed[c].push_back(v);
    }
    std::vector<std::pair<VertexId, VertexId>> pairs;
    std::set<VertexId> used;
    for (auto* buckets : {&open, &closed}) {
      for (const auto& [_, bucket] : *buckets) {
        for (std::size_t i = 0; i < bucket.size(); ++i) {
          if (used.count(bucket[i])) continue;
          for (std::size_t j = i + 1; j < bucket.size(); ++j) {
            if (used.count(bucket[j]) || !colour_twins(g, bucket[i], bucket[j])) continue;
            pairs.emplace_back(bucket[i], bucket[j]);
            used.insert(bucket[i]);
            used.insert(bucket[j]);
            break;
          }
        }
      }
    }
    if (pairs.empty()) return;
    std::sort(pairs.begin(), pairs.end());
    for (auto [a, b] : pairs) rp.contract(a, b);
  }
}

namespace detail {

struct BudgetHit {};
struct TimeHit {};

// Bitmask trigraph on at most 64 slots; slot order is deterministic.
struct Dense {
  int n = 0;
  std::vector<std::uint64_t> blk, red;
  std::vector<VertexId> label;
  VertexId next = 0;

  static Dense of(const Trigraph& g) {
    Dense d;
    auto vs = g.vertices();
    d.n = int(vs.size());
    d.blk.assign(d.n, 0);
    d.red.assign(d.n, 0);
    d.label = vs;
    d.next = g.next_label();
    for (const Edge& e : g.edges()) {
      int i = int(std::lower_bound(vs.begin(), vs.end(), e.u) - vs.begin());
      int j = int(std::lower_bound(vs.begin(), vs.end(), e.v) - vs.begin());
      auto& m = e.color == EdgeColor::Black ? d.blk : d.red;
      m[i] |= 1ull << j;
      m[j] |= 1ull << i;
    }
    return d;
  }

  int red_degree(int i) const { return std::popcount(red[i]); }

  int max_red() const {
    int best = 0;
    for (int i = 0; i < n; ++i) best = std::max(best, red_degree(i));
    return best;
  }

  bool twins(int i, int j) const {
    std::uint64_t mask = ~((1ull << i) | (1ull << j));
    return (blk[i] & mask) == (blk[j] & mask) && (red[i] & mask) == (red[j] & mask);
  }

  // Max red degree right after contracting slots i and j.
  int cost(int i, int j) const {
    std::uint64_t ij = (1ull << i) | (1ull << j);
    std::uint64_t nb = blk[i] & blk[j] & ~ij;
    std::uint64_t all = (blk[i] | red[i] | blk[j] | red[j]) & ~ij;
    std::uint64_t nr = all & ~nb;
    int best = std::popcount(nr);
    for (int x = 0; x < n; ++x) {
      if (x == i || x == j) continue;
      int r = std::popcount(red[x] & ~ij) + int((nr >> x) & 1);
      best = std::max(best, r);
    }
    return best;
  }

  // Slot i receives the merged vertex; slot j is refilled from the last slot.
  Dense contract(int i, int j) const {
    Dense d = *this;
    std::uint64_t bi = 1ull << i, bj = 1ull << j, ij = bi | bj;
    std::uint64_t nb = blk[i] & blk[j] & ~ij;
    std::uint64_t nr = (blk[i] | red[i] | blk[j] | red[j]) & ~ij & ~nb;
    for (int x = 0; x < n; ++x) {
      d.blk[x] &= ~ij;
      d.red[x] &= ~ij;
      if ((nb >> x) & 1) d.blk[x] |= bi;
      if ((nr >> x) & 1) d.red[x] |= bi;
    }
    d.blk[i] = nb;
    d.red[i] = nr;
    d.label[i] = d.next++;
    int last = n - 1;
    if (j != last) {
      d.blk[j] = d.blk[last];
      d.red[j] = d.red[last];
      d.label[j] = d.label[last];
      std::uint64_t bl = 1ull << last;
      for (int x = 0; x < last; ++x) {
        if (d.blk[x] & bl) d.blk[x] = (d.blk[x] & ~bl) | bj;
        if (d.red[x] & bl) d.red[x] = (d.red[x] & ~bl) | bj;
      }
    }
    d.blk.pop_back();
    d.red.pop_back();
    d.label.pop_back();
    d.n = last;
    return d;
  }

  ColourMatrix matrix() const {
    ColourMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if ((blk[i] >> j) & 1) m.set(i, j, 1);
        if ((red[i] >> j) & 1) m.set(i, j, 2);
      }
    return m;
  }
};

using Steps = std::vector<std::pair<VertexId, VertexId>>;

inline void twin_reduce(Dense& s, Steps& out) {
  bool again = true;
  while (again && s.n > 1) {
    again = false;
    for (int i = 0; i < s.n && !again; ++i)
      for (int j = i + 1; j < s.n && !again; ++j) {
        if (!s.twins(i, j)) continue;
        out.emplace_back(s.label[i], s.label[j]);
        s = s.contract(i, j);
        again = true;
      }
  }
}

// Finishes a state whose size bounds every red degree by the cap.
inline void finish(Dense s, Steps& out) {
  while (s.n > 1) {
    out.emplace_back(s.label[0], s.label[1]);
    s = s.contract(0, 1);
  }
}

enum class Outcome { Found, Failed, Aborted };

// Depth-first search for a sequence of width at most `cap`. Failures are
// memoised by canonical key with the largest cap that failed.
class Search {
 public:
  Search(const SolverConfig& cfg, std::chrono::steady_clock::time_point start) : cfg_(cfg), start_(start) {}

  Outcome run(const Dense& s, int cap, Steps& out, const std::atomic<std::size_t>* cancel = nullptr,
              std::size_t branch = 0) {
    Dense t = s;
    Steps local;
    twin_reduce(t, local);
    if (t.n <= cap + 1) {
      finish(t, local);
      out.insert(out.end(), local.begin(), local.end());
      return Outcome::Found;
    }
    tick();
    if (cancel && cancel->load() < branch) return Outcome::Aborted;
    auto key = canonical_key(t.matrix());
    if (failed_at_least(key, cap)) return Outcome::Failed;
    for (auto [i, j] : moves(t, cap)) {
      Steps sub;
      auto r = run(t.contract(i, j), cap, sub, cancel, branch);
      if (r == Outcome::Aborted) return r;
      if (r == Outcome::Found) {
        out.insert(out.end(), local.begin(), local.end());
        out.emplace_back(t.label[i], t.label[j]);
        out.insert(out.end(), sub.begin(), sub.end());
        return Outcome::Found;
      }
    }
    record_failure(key, cap);
    return Outcome::Failed;
  }

  // Admissible moves, cheapest first, ties by label pair.
  static std::vector<std::pair<int, int>> moves(const Dense& t, int cap) {
    std::vector<std::tuple<int, VertexId, VertexId, int, int>> c;
    for (int i = 0; i < t.n; ++i)
      for (int j = i + 1; j < t.n; ++j) {
        int w = t.cost(i, j);
        if (w > cap) continue;
        VertexId a = std::min(t.label[i], t.label[j]), b = std::max(t.label[i], t.label[j]);
        c.emplace_back(w, a, b, i, j);
      }
    std::sort(c.begin(), c.end());
    std::vector<std::pair<int, int>> out;
    out.reserve(c.size());
    for (auto& [w, a, b, i, j] : c) out.emplace_back(i, j);
    return out;
  }

  std::uint64_t nodes() const { return nodes_.load(); }

 private:
  void tick() {
    auto k = ++nodes_;
    if (k > cfg_.max_nodes) throw BudgetHit{};
    if (cfg_.time_limit && (k & 255) == 0 && std::chrono::steady_clock::now() - start_ > *cfg_.time_limit) {
      throw TimeHit{};
    }
  }

  bool failed_at_least(const CanonicalKey& key, int cap) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    return it != memo_.end() && it->second >= cap;
  }

  void record_failure(const CanonicalKey& key, int cap) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& v = memo_[key];
    v = std::max(v, cap);
  }

  const SolverConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> nodes_{0};
  std::mutex mu_;
  std::unordered_map<CanonicalKey, int> memo_;
};

// Root of a search: the first branching level is spread over workers; the
// lowest-index successful branch wins, whatever the worker count.
inline std::optional<Steps> decide_dense(Search& search, const Dense& s, int cap, unsigned threads) {
  Dense t = s;
  Steps pre;
  twin_reduce(t, pre);
  if (t.max_red() > cap) return std::nullopt;
  if (t.n <= cap + 1 || threads <= 1) {
    Steps out;
    if (search.run(s, cap, out) == Outcome::Found) return out;
    return std::nullopt;
  }
  auto moves = Search::moves(t, cap);
  std::atomic<std::size_t> best{moves.size()};
  std::atomic<std::size_t> next{0};
  std::vector<Steps> found(moves.size());
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    try {
      while (true) {
        std::size_t k = next++;
        if (k >= moves.size() || k > best.load()) return;
        auto [i, j] = moves[k];
        Steps sub;
        if (search.run(t.contract(i, j), cap, sub, &best, k) == Outcome::Found) {
          found[k] = std::move(sub);
          std::size_t cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
      best.store(0);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  std::size_t k = best.load();
  if (k == moves.size()) return std::nullopt;
  Steps out = pre;
  out.emplace_back(t.label[moves[k].first], t.label[moves[k].second]);
  out.insert(out.end(), found[k].begin(), found[k].end());
  return out;
}

// Repeatedly takes the cheapest contraction; used as a fallback incumbent.
inline Steps greedy(Dense s) {
  Steps out;
  twin_reduce(s, out);
  while (s.n > 1) {
    auto m = Search::moves(s, 64);
    out.emplace_back(s.label[m[0].first], s.label[m[0].second]);
    s = s.contract(m[0].first, m[0].second);
    twin_reduce(s, out);
  }
  return out;
}

inline std::size_t shortest_cycle_through(const Trigraph& g, VertexId a, VertexId b) {
  std::map<VertexId, std::size_t> dist{{a, 0}};
  std::vector<VertexId> q{a};
  for (std::size_t i = 0; i < q.size(); ++i) {
    VertexId x = q[i];
    for (const auto& [y, _] : g.neighbors(x)) {
      if ((x == a && y == b) || dist.count(y)) continue;
      dist[y] = dist[x] + 1;
      if (y == b) return dist[y] + 1;
      q.push_back(y);
    }
  }
  return 0;
}

// Lower-bound witnesses for width >= 2, colours ignored: an induced cycle on
// at least five vertices, or an induced subdivided claw S(2,2,2).
inline bool has_width_two_obstruction(const Trigraph& g, std::uint64_t budget = 20'000'000) {
  std::uint64_t work = 0;
  for (const Edge& e : g.edges()) {
    work += g.vertex_count() + g.edge_count();
    if (work > budget) break;
    if (shortest_cycle_through(g, e.u, e.v) >= 5) return true;
  }
  auto adj = [&](VertexId x, VertexId y) { return g.neighbors(x).count(y) != 0; };
  work = 0;
  for (VertexId c : g.vertices()) {
    std::vector<VertexId> nc;
    for (const auto& [x, _] : g.neighbors(c)) nc.push_back(x);
    if (nc.size() < 3) continue;
    auto arm = [&](VertexId x) {
      std::vector<VertexId> out;
      for (const auto& [y, _] : g.neighbors(x))
        if (y != c && !adj(y, c)) out.push_back(y);
      return out;
    };
    for (std::size_t i = 0; i < nc.size(); ++i)
      for (std::size_t j = i + 1; j < nc.size(); ++j) {
        if (adj(nc[i], nc[j])) continue;
        for (std::size_t k = j + 1; k < nc.size(); ++k) {
          VertexId a = nc[i], b = nc[j], d = nc[k];
          if (adj(a, d) || adj(b, d)) continue;
          for (VertexId x : arm(a)) {
            if (adj(x, b) || adj(x, d)) continue;
            for (VertexId y : arm(b)) {
              if (y == x || adj(y, a) || adj(y, d) || adj(x, y)) continue;
              for (VertexId z : arm(d)) {
                if (++work > budget) return false;
                if (z == x || z == y || adj(z, a) || adj(z, b) || adj(z, x) || adj(z, y)) continue;
                return true;
              }
            }
          }
        }
      }
  }
  return false;
}

// Width-1 sequence for a tree whose non-leaves form a path, walking the spine
// and dragging one pendant along. Returns false if the replayed width is > 1.
inline bool caterpillar_sequence(Replay& rp, const std::vector<VertexId>& comp) {
  const Trigraph& g = rp.current();
  std::vector<VertexId> spine;
  for (VertexId v : comp)
    if (g.degree(v) >= 2) spine.push_back(v);
  if (spine.empty()) return false;
  auto spine_nbrs = [&](VertexId v) {
    std::vector<VertexId> out;
    for (const auto& [x, _] : g.neighbors(v))
      if (g.degree(x) >= 2) out.push_back(x);
    return out;
  };
  VertexId start = spine.front();
  for (VertexId v : spine) {
    auto s = spine_nbrs(v);
    if (s.size() > 2) return false;
    if (s.size() <= 1) {
      start = v;
      break;
    }
  }
  std::vector<VertexId> order{start};
  std::set<VertexId> seen{start};
  while (true) {
    std::optional<VertexId> nxt;
    for (VertexId x : spine_nbrs(order.back()))
      if (!seen.count(x)) nxt = x;
    if (!nxt) break;
    seen.insert(*nxt);
    order.push_back(*nxt);
  }
  if (order.size() != spine.size()) return false;
  std::vector<std::vector<VertexId>> leaves(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& [x, _] : g.neighbors(order[i]))
      if (g.degree(x) == 1) leaves[i].push_back(x);
  std::size_t before = rp.width();
  std::optional<VertexId> cur;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (VertexId l : leaves[i]) cur = cur ? rp.contract(*cur, l) : l;
    cur = cur ? rp.contract(*cur, order[i]) : order[i];
  }
  return rp.width() <= std::max<std::size_t>(before, 1);
}

inline bool is_forest(const Trigraph& g) { return g.edge_count() + components(g).size() == g.vertex_count(); }

}  // namespace detail

// Exact twin-width with an optimal sequence. Components are solved apart and
// their roots joined at the end.
inline SolveResult optimal_sequence(const Trigraph& g, const SolverConfig& cfg = {}) {
  if (g.empty()) throw Error(Errc::BadVertexSet, "empty trigraph");
  auto start = std::chrono::steady_clock::now();
  Replay rp(g);
  bool proven = true;
  for (const auto& comp : components(g)) {
    Replay local(g.induce({comp.begin(), comp.end()}));
    twin_reduce(local);
    auto d = detail::Dense::of(local.current());
    if (std::size_t(d.n) > cfg.max_n || d.n > 64) {
      throw Error(Errc::BudgetExceeded,
                  "component with " + std::to_string(d.n) + " vertices exceeds limit " + std::to_string(cfg.max_n));
    }
    auto incumbent = detail::greedy(d);
    int ub = int(verify(local.current(), [&] {
      ContractionSequence c(local.current());
      for (auto [a, b] : incumbent) c.push(a, b);
      return c;
    }()));
    detail::Steps chosen = incumbent;
    try {
      detail::Search search(cfg, start);
      for (int cap = d.max_red(); cap < ub; ++cap) {
        auto r = detail::decide_dense(search, d, cap, cfg.threads);
        if (r) {
          chosen = *r;
          break;
        }
      }
    } catch (const detail::TimeHit&) {
      proven = false;
    } catch (const detail::BudgetHit&) {
      throw Error(Errc::BudgetExceeded, "node budget of " + std::to_string(cfg.max_nodes) + " exhausted");
    }
    ContractionSequence tail(local.current());
    for (auto [a, b] : chosen) tail.push(a, b);
    transplant(rp, local.sequence().then(tail));
  }
  auto live = rp.current().vertices();
  while (live.size() > 1) {
    VertexId r = rp.contract(live[0], live[1]);
    live.erase(live.begin(), live.begin() + 2);
    live.insert(live.begin(), r);
  }
  SolveResult out;
  out.sequence = rp.sequence();
  out.width = verify(g, out.sequence, Completeness::Full);
  out.optimal = proven;
  out.status = proven ? SolveStatus::Optimal : SolveStatus::NotProven;
  return out;
}

// Upper bound for trigraphs of any size: twin reduction, then the pair at
// distance at most two whose contraction leaves the smallest red degree
// around it. Components are joined at the end.
inline ContractionSequence greedy_sequence(const Trigraph& g) {
  if (g.empty()) throw Error(Errc::BadVertexSet, "empty trigraph");
  Replay rp(g);
  auto cost = [](const Trigraph& t, VertexId u, VertexId v) {
    const auto& nu = t.neighbors(u);
    const auto& nv = t.neighbors(v);
    std::size_t own = 0, worst = 0;
    auto touch = [&](VertexId x, bool red_now) {
      std::size_t r = t.red_degree(x);
      if (auto c = t.edge(x, u); c == EdgeColor::Red) --r;
      if (auto c = t.edge(x, v); c == EdgeColor::Red) --r;
      worst = std::max(worst, r + red_now);
      own += red_now;
    };
    for (const auto& [x, c] : nu) {
      if (x == v) continue;
      auto it = nv.find(x);
      touch(x, !(c == EdgeColor::Black && it != nv.end() && it->second == EdgeColor::Black));
    }
    for (const auto& [x, c] : nv)
      if (x != u && !nu.count(x)) touch(x, true);
    return std::max(own, worst);
  };
  while (true) {
    twin_reduce(rp);
    const Trigraph& t = rp.current();
    if (t.vertex_count() <= 1) break;
    std::optional<std::tuple<std::size_t, VertexId, VertexId>> best;
    for (VertexId u : t.vertices()) {
      std::set<VertexId> near;
      for (const auto& [x, _] : t.neighbors(u)) {
        near.insert(x);
        for (const auto& [y, _] : t.neighbors(x)) near.insert(y);
      }
      for (VertexId v : near) {
        if (v <= u) continue;
        std::tuple<std::size_t, VertexId, VertexId> c{cost(t, u, v), u, v};
        if (!best || c < *best) best = c;
      }
    }
    if (!best) {
      auto vs = t.vertices();
      best = std::tuple<std::size_t, VertexId, VertexId>{0, vs[0], vs[1]};
    }
    rp.contract(std::get<1>(*best), std::get<2>(*best));
  }
  return rp.sequence();
}

// Some(C) with width(C) <= d, or nullopt when none exists. Components past the
// exact-search size are settled only by a width-2 obstruction (None) or a
// verified caterpillar certificate when d == 1; otherwise BudgetExceeded.
inline std::optional<ContractionSequence> decide_width_at_most(const Trigraph& g, std::size_t d,
                                                               const SolverConfig& cfg = {}) {
  if (g.max_red_degree() > d) return std::nullopt;
  auto start = std::chrono::steady_clock::now();
  Replay rp(g);
  for (const auto& comp : components(g)) {
    Replay local(g.induce({comp.begin(), comp.end()}));
    twin_reduce(local);
    const Trigraph& h = local.current();
    bool done = h.vertex_count() <= d + 1;
    if (!done && d == 0) return std::nullopt;
    if (!done && d == 1 && detail::has_width_two_obstruction(h)) return std::nullopt;
    if (!done && h.vertex_count() <= std::min<std::size_t>(cfg.max_n, 64)) {
      detail::Search search(cfg, start);
      std::optional<detail::Steps> r;
      try {
        r = detail::decide_dense(search, detail::Dense::of(h), int(d), cfg.threads);
      } catch (const detail::BudgetHit&) {
        throw Error(Errc::BudgetExceeded, "node budget exhausted while deciding width " + std::to_string(d));
      } catch (const detail::TimeHit&) {
        throw Error(Errc::BudgetExceeded, "time limit hit while deciding width " + std::to_string(d));
      }
      if (!r) return std::nullopt;
      ContractionSequence tail(h);
      for (auto [a, b] : *r) tail.push(a, b);
      transplant(rp, local.sequence().then(tail));
      continue;
    }
    if (!done && d == 1) {
      if (detail::is_forest(h)) {
        auto vs = h.vertices();
        done = detail::caterpillar_sequence(local, vs);
      }
      if (!done) throw Error(Errc::BudgetExceeded, "component too large to decide width 1");
    } else if (!done) {
      throw Error(Errc::BudgetExceeded, "component with " + std::to_string(h.vertex_count()) +
                                            " vertices too large to decide width " + std::to_string(d));
    }
    auto live = local.current().vertices();
    while (live.size() > 1) {
      VertexId r = local.contract(live[0], live[1]);
      live.erase(live.begin(), live.begin() + 2);
      live.insert(live.begin(), r);
    }
    if (local.width() > d) throw std::logic_error("width certificate exceeds cap");
    transplant(rp, local.sequence());
  }
  auto live = rp.current().vertices();
  while (live.size() > 1) {
    VertexId r = rp.contract(live[0], live[1]);
    live.erase(live.begin(), live.begin() + 2);
    live.insert(live.begin(), r);
  }
  if (verify(g, rp.sequence(), Completeness::Full) > d) throw std::logic_error("decision certificate exceeds cap");
  return rp.sequence();
}

}  // namespace tww
