#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tww/reduce.hpp"
#include "tww/sequence.hpp"
#include "tww/solver.hpp"
#include "tww/structure.hpp"

namespace tww {

using BigInt = boost::multiprecision::cpp_int;

// (3^(t+4) * t^2)^l, exactly.
inline BigInt f_h(std::size_t t, std::size_t l) {
  BigInt base = boost::multiprecision::pow(BigInt(3), unsigned(t + 4)) * BigInt(t) * BigInt(t);
  return boost::multiprecision::pow(base, unsigned(l));
}

// Path-length floor. Exact unless the value would need more than max_bits,
// in which case only its closed form is kept and every path falls short.
struct PathFloor {
  std::optional<BigInt> exact;
  std::string text;

  bool exceeds(std::size_t length) const { return !exact || *exact > length; }
};

struct BoundPolicy {
  enum class Kind { Theory, Practical };
  Kind kind = Kind::Practical;
  std::size_t length = 12;

  static BoundPolicy theory() { return {Kind::Theory, 0}; }
  static BoundPolicy practical(std::size_t l) { return {Kind::Practical, l}; }

  // "theory" or "practical:<L>".
  static BoundPolicy parse(const std::string& s) {
    if (s == "theory") return theory();
    const std::string p = "practical:";
    if (s.rfind(p, 0) == 0) {
      std::size_t pos = 0;
      std::size_t l = 0;
      try {
        l = std::stoul(s.substr(p.size()), &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos > 0 && pos == s.size() - p.size() && l >= 1) return practical(l);
    }
    throw Error(Errc::SyntaxError, "policy must be 'theory' or 'practical:<L>' with L >= 1");
  }

  std::string name() const { return kind == Kind::Theory ? "theory" : "practical:" + std::to_string(length); }

  PathFloor floor(std::size_t t, std::size_t max_bits = 1u << 20) const {
    if (kind == Kind::Practical) return {BigInt(length), std::to_string(length)};
    const std::size_t l = 2 * t * t;
    double bits = double(l) * ((double(t) + 4) * std::log2(3.0) + 2 * std::log2(double(std::max<std::size_t>(t, 1))));
    std::string closed = "3*(3^" + std::to_string(t + 4) + "*" + std::to_string(t) + "^2)^" + std::to_string(l) + "+9";
    if (bits > double(max_bits)) return {std::nullopt, closed};
    BigInt v = 3 * f_h(t, l) + 9;
    return {v, v.str()};
  }
};

struct KernelMeta {
  std::size_t k = 0;
  std::vector<std::size_t> core_sizes;  // |V(H)| after pruning, tidying and each absorption
  std::vector<std::string> floors;
  std::vector<std::size_t> path_lengths;
  bool shortened = false;
  std::vector<RuleRecord> trace;
};

struct KernelReduced {
  Trigraph kernel;
  Lift lift;
  KernelMeta meta;
};

struct KernelSolved {
  ContractionSequence sequence;
  bool optimal;
  KernelMeta meta;
};

using KernelOutcome = std::variant<KernelSolved, KernelReduced>;

namespace detail {

// Contracts consecutive path vertices, lowest labelled pair first, until
// `target` remain.
inline void shorten_path(Replay& rp, std::vector<VertexId> path, std::size_t target) {
  while (path.size() > target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      auto key = [&](std::size_t j) {
        return std::pair(std::min(path[j], path[j + 1]), std::max(path[j], path[j + 1]));
      };
      if (key(i) < key(best)) best = i;
    }
    path[best] = rp.contract(path[best], path[best + 1]);
    path.erase(path.begin() + best + 1);
  }
}

struct Tidied {
  HPGraph graph;
  Lift lift;
  KernelMeta meta;
};

inline std::variant<KernelSolved, Tidied> prune_and_tidy(const Trigraph& g, const ReduceOptions& opt) {
  auto pr = prune(g, opt);
  KernelMeta meta;
  meta.k = pr.k;
  meta.trace = std::move(pr.trace);
  if (auto* s = std::get_if<Solved>(&pr.outcome)) return KernelSolved{s->sequence, pr.optimal, std::move(meta)};
  auto& pruned = std::get<Pruned>(pr.outcome);
  meta.core_sizes.push_back(pruned.graph.core.size());
  auto td = tidy(pruned.graph, opt.keep_instances);
  meta.core_sizes.push_back(td.graph.core.size());
  meta.trace.insert(meta.trace.end(), td.trace.begin(), td.trace.end());
  return Tidied{std::move(td.graph), compose(pruned.lift, td.lift), std::move(meta)};
}

}  // namespace detail

// Linear bikernel for deciding width 2: prune, tidy, then shrink every tidy
// path to one vertex.
inline KernelOutcome tww2_bikernel(const Trigraph& g, const ReduceOptions& opt = {}) {
  auto pt = detail::prune_and_tidy(g, opt);
  if (auto* s = std::get_if<KernelSolved>(&pt)) return std::move(*s);
  auto& t = std::get<detail::Tidied>(pt);
  Replay rp(t.graph.graph);
  for (const auto& p : t.graph.paths) {
    t.meta.path_lengths.push_back(p.vertices.size());
    detail::shorten_path(rp, p.vertices, 1);
  }
  t.meta.shortened = rp.sequence().size() > 0;
  Trigraph k = rp.current();
  if (k.vertex_count() > 116 * t.meta.k) throw std::logic_error("bikernel exceeds 116k vertices");
  Lift lift = compose(t.lift, Lift::prefix(t.graph.graph, rp.sequence(), k, at_least_two, "shorten"));
  return KernelReduced{std::move(k), std::move(lift), std::move(t.meta)};
}

// Absorbs paths shorter than the floor for the current core, recomputing the
// floor after each absorption, then shortens the rest to exactly the floor.
inline KernelOutcome general_kernel(const Trigraph& g, const BoundPolicy& policy, const ReduceOptions& opt = {}) {
  auto pt = detail::prune_and_tidy(g, opt);
  if (auto* s = std::get_if<KernelSolved>(&pt)) return std::move(*s);
  auto& t = std::get<detail::Tidied>(pt);
  auto& hp = t.graph;
  std::vector<PseudoPath> keep(hp.paths.begin(), hp.paths.end());
  PathFloor fl;
  while (true) {
    fl = policy.floor(hp.core.size());
    t.meta.floors.push_back(fl.text);
    auto it = std::find_if(keep.begin(), keep.end(), [&](const PseudoPath& p) { return fl.exceeds(p.vertices.size()); });
    if (it == keep.end()) break;
    hp.core.insert(it->vertices.begin(), it->vertices.end());
    keep.erase(it);
    t.meta.core_sizes.push_back(hp.core.size());
  }
  Replay rp(hp.graph);
  for (const auto& p : keep) {
    t.meta.path_lengths.push_back(p.vertices.size());
    detail::shorten_path(rp, p.vertices, std::size_t(*fl.exact));
  }
  t.meta.shortened = rp.sequence().size() > 0;
  Trigraph k = rp.current();
  Lift lift = compose(t.lift, Lift::prefix(hp.graph, rp.sequence(), k, at_least_two, "shorten"));
  return KernelReduced{std::move(k), std::move(lift), std::move(t.meta)};
}

enum class Optimality { Optimal, WithinOne, NotProven };

inline const char* optimality_name(Optimality o) {
  switch (o) {
    case Optimality::Optimal: return "optimal";
    case Optimality::WithinOne: return "within_one";
    case Optimality::NotProven: return "not_proven";
  }
  return "not_proven";
}

struct SolveOptions {
  // Merge the roots of per-component sequences into a single vertex.
  bool join_roots = false;
  // Use greedy_sequence when the kernel is past the exact solver's budget
  // instead of failing with BudgetExceeded.
  bool greedy_fallback = false;
};

struct SolveReport {
  ContractionSequence sequence;
  std::size_t width = 0;
  Optimality optimality = Optimality::NotProven;
  std::string method;
  KernelMeta meta;
};

namespace detail {

inline SolveReport solve_connected(const Trigraph& g, const BoundPolicy& policy, const SolverConfig& cfg,
                                   const SolveOptions& so) {
  SolveReport rep;
  rep.meta.k = feedback_edge_number(g);
  // Certified lower bound on tww(G). A verified width at this bound is optimal.
  std::size_t lower = 0;
  auto done = [&](ContractionSequence s, std::string method, Optimality otherwise = Optimality::NotProven) {
    rep.width = verify(g, s, Completeness::Full);
    rep.sequence = std::move(s);
    rep.optimality = rep.width <= lower ? Optimality::Optimal : otherwise;
    rep.method = std::move(method);
    return rep;
  };
  if (g.vertex_count() == 1) return done(ContractionSequence(g), "trivial");
  bool known = false;
  try {
    if (auto s = decide_width_at_most(g, 0, cfg)) return done(*s, "width0");
    lower = 1;
    if (auto s = decide_width_at_most(g, 1, cfg)) return done(*s, "width1");
    lower = 2;
    known = true;
  } catch (const Error& e) {
    if (e.code() != Errc::BudgetExceeded) throw;
  }
  if (rep.meta.k == 0) return done(tree_sequence(g, g.vertices().front()), "tree");
  if (rep.meta.k == 1) return done(fen1_sequence(g), "fen1");

  ReduceOptions opt;
  opt.check_width = known;
  opt.known_at_least_2 = true;
  opt.solver = cfg;
  if (known) {
    auto bk = tww2_bikernel(g, opt);
    if (auto* s = std::get_if<KernelSolved>(&bk)) {
      rep.meta = s->meta;
      return done(s->sequence, "prune");
    }
    auto& kr = std::get<KernelReduced>(bk);
    try {
      if (auto s = decide_width_at_most(kr.kernel, 2, cfg)) {
        rep.meta = kr.meta;
        return done(kr.lift.apply(*s), "bikernel");
      }
      lower = 3;
    } catch (const Error& e) {
      if (e.code() != Errc::BudgetExceeded) throw;
    }
  }
  auto gk = general_kernel(g, policy, opt);
  if (auto* s = std::get_if<KernelSolved>(&gk)) {
    rep.meta = s->meta;
    return done(s->sequence, "prune");
  }
  auto& kr = std::get<KernelReduced>(gk);
  rep.meta = kr.meta;
  SolveResult sol;
  try {
    sol = optimal_sequence(kr.kernel, cfg);
  } catch (const Error& e) {
    if (e.code() != Errc::BudgetExceeded || !so.greedy_fallback) throw;
    return done(kr.lift.apply(greedy_sequence(kr.kernel)), "kernel-greedy");
  }
  const bool within_one = sol.optimal && policy.kind == BoundPolicy::Kind::Theory;
  return done(kr.lift.apply(sol.sequence), "kernel", within_one ? Optimality::WithinOne : Optimality::NotProven);
}

}  // namespace detail

// End-to-end: width <= 1 and <= 2 decisions first, then the general kernel
// with the exact solver. Components are solved separately.
inline SolveReport solve(const Trigraph& g, const BoundPolicy& policy = {}, const SolverConfig& cfg = {},
                         const SolveOptions& so = {}) {
  if (g.empty()) throw Error(Errc::BadVertexSet, "empty graph");
  auto comps = components(g);
  if (comps.size() == 1) {
    return detail::solve_connected(g, policy, cfg, so);
  }
  SolveReport rep;
  Replay rp(g);
  rep.optimality = Optimality::Optimal;
  rep.method = "components";
  for (const auto& c : comps) {
    auto sub = detail::solve_connected(g.induce({c.begin(), c.end()}), policy, cfg, so);
    transplant(rp, sub.sequence);
    rep.meta.k += sub.meta.k;
    if (sub.optimality != Optimality::Optimal && rep.optimality != Optimality::NotProven) {
      rep.optimality = sub.optimality;
    }
    rep.meta.trace.insert(rep.meta.trace.end(), sub.meta.trace.begin(), sub.meta.trace.end());
  }
  if (so.join_roots) {
    auto live = rp.current().vertices();
    while (live.size() > 1) {
      VertexId r = rp.contract(live[0], live[1]);
      live.erase(live.begin(), live.begin() + 2);
      live.insert(live.begin(), r);
    }
  }
  rep.sequence = rp.sequence();
  rep.width = verify(g, rep.sequence, so.join_roots ? Completeness::Full : Completeness::PerComponent);
  return rep;
}

}  // namespace tww
