#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tww/trigraph.hpp"

namespace tww {

struct ContractionStep {
  VertexId a;
  VertexId b;
  VertexId result;

  friend bool operator==(const ContractionStep&, const ContractionStep&) = default;
};

// Steps bound to one base trigraph. Result labels are implied by the base's
// label counter, so a sequence is a fingerprint plus a list of pairs.
class ContractionSequence {
 public:
  ContractionSequence() = default;

  explicit ContractionSequence(const Trigraph& base)
      : base_(base.fingerprint()), next_(base.next_label()), n_(base.vertex_count()) {}

  std::uint64_t base() const { return base_; }
  VertexId base_next_label() const { return next_; }
  std::size_t base_vertex_count() const { return n_; }

  const std::vector<ContractionStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  bool is_full() const { return n_ == 0 ? steps_.empty() : steps_.size() + 1 == n_; }

  // Label the base trigraph's counter reaches after all steps.
  VertexId end_label() const { return next_ + static_cast<VertexId>(steps_.size()); }

  VertexId push(VertexId a, VertexId b) {
    VertexId r = end_label();
    steps_.push_back({a, b, r});
    return r;
  }

  // Appends a sequence whose base is the trigraph reached by this one, up to
  // recolouring. Only label continuity can be checked here.
  ContractionSequence then(const ContractionSequence& tail) const {
    if (tail.next_ != end_label() || tail.n_ + steps_.size() != n_) {
      throw Error(Errc::InstanceMismatch, "tail sequence does not continue this prefix");
    }
    ContractionSequence out = *this;
    for (const auto& s : tail.steps_) out.push(s.a, s.b);
    return out;
  }

  ContractionSequence prefix(std::size_t k) const {
    ContractionSequence out = *this;
    out.steps_.resize(std::min(k, steps_.size()));
    return out;
  }

  friend bool operator==(const ContractionSequence&, const ContractionSequence&) = default;

 private:
  std::uint64_t base_ = 0;
  VertexId next_ = 0;
  std::size_t n_ = 0;
  std::vector<ContractionStep> steps_;
};

// Applies contractions one at a time while tracking the width so far.
class Replay {
 public:
  explicit Replay(const Trigraph& g) : cur_(g), seq_(g), width_(g.max_red_degree()) {}

  VertexId contract(VertexId a, VertexId b) {
    VertexId r = cur_.merge(a, b);
    seq_.push(a, b);
    width_ = std::max(width_, cur_.red_degree(r));
    for (const auto& [x, _] : cur_.neighbors(r)) width_ = std::max(width_, cur_.red_degree(x));
    return r;
  }

  const Trigraph& current() const { return cur_; }
  const ContractionSequence& sequence() const { return seq_; }
  std::size_t width() const { return width_; }

 private:
  Trigraph cur_;
  ContractionSequence seq_;
  std::size_t width_;
};

enum class Completeness { Any, Full, PerComponent };

struct ReplayResult {
  Trigraph final;
  std::size_t width;
};

inline ReplayResult replay(const Trigraph& g, const ContractionSequence& c, Completeness need = Completeness::Any) {
  if (c.base() != g.fingerprint()) throw Error(Errc::InstanceMismatch, "sequence was built for another trigraph");
  Replay rp(g);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& s = c.steps()[i];
    if (s.a == s.b || !rp.current().contains(s.a) || !rp.current().contains(s.b)) {
      throw Error(Errc::DeadVertexAtStep, "step " + std::to_string(i) + " references a dead vertex", i);
    }
    rp.contract(s.a, s.b);
  }
  const Trigraph& f = rp.current();
  if (need == Completeness::Full && f.vertex_count() > 1) {
    throw Error(Errc::IncompleteSequence, std::to_string(f.vertex_count()) + " vertices remain");
  }
  if (need == Completeness::PerComponent && f.edge_count() > 0) {
    throw Error(Errc::IncompleteSequence, "some component has more than one vertex left");
  }
  return {f, rp.width()};
}

// Max red degree over every trigraph of the sequence, the base included.
inline std::size_t verify(const Trigraph& g, const ContractionSequence& c, Completeness need = Completeness::Any) {
  return replay(g, c, need).width;
}

class BagForest {
 public:
  const std::vector<VertexId>& of(VertexId v) const {
    auto it = bags_.find(v);
    if (it == bags_.end()) throw Error(Errc::DeadVertex, "no bag for " + std::to_string(v));
    return it->second;
  }
  const std::vector<VertexId>& live() const { return live_; }
  const std::map<VertexId, std::vector<VertexId>>& all() const { return bags_; }

 private:
  friend BagForest bags(const Trigraph&, const ContractionSequence&);
  std::map<VertexId, std::vector<VertexId>> bags_;
  std::vector<VertexId> live_;
};

inline BagForest bags(const Trigraph& g, const ContractionSequence& c) {
  auto fin = replay(g, c).final;
  BagForest f;
  for (VertexId v : g.vertices()) f.bags_[v] = {v};
  for (const auto& s : c.steps()) {
    std::vector<VertexId> u;
    const auto& x = f.bags_[s.a];
    const auto& y = f.bags_[s.b];
    std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(u));
    f.bags_[s.result] = std::move(u);
  }
  f.live_ = fin.vertices();
  return f;
}

// Projects C onto G[S]: a step survives iff both merged bags meet S.
inline ContractionSequence restrict(const Trigraph& g, const ContractionSequence& c, const std::set<VertexId>& s) {
  replay(g, c);
  Trigraph h = g.induce(s);
  ContractionSequence out(h);
  std::map<VertexId, VertexId> proj;
  for (VertexId v : s) proj[v] = v;
  for (const auto& st : c.steps()) {
    auto pa = proj.find(st.a);
    auto pb = proj.find(st.b);
    bool ha = pa != proj.end();
    bool hb = pb != proj.end();
    if (ha && hb) {
      proj[st.result] = out.push(pa->second, pb->second);
    } else if (ha) {
      proj[st.result] = pa->second;
    } else if (hb) {
      proj[st.result] = pb->second;
    }
    proj.erase(st.a);
    proj.erase(st.b);
  }
  return out;
}

// Turns a sequence of a reduced instance into one of its parent, with a
// guaranteed width bound.
class Lift {
 public:
  using Apply = std::function<ContractionSequence(const ContractionSequence&)>;
  using Bound = std::function<std::size_t(std::size_t)>;

  Lift(std::uint64_t parent, std::uint64_t child, Apply apply, Bound bound, std::vector<std::string> chain)
      : s_(std::make_shared<const State>(State{parent, child, std::move(apply), std::move(bound), std::move(chain)})) {}

  static Lift identity(const Trigraph& g) {
    auto fp = g.fingerprint();
    return Lift(fp, fp, [](const ContractionSequence& c) { return c; }, [](std::size_t w) { return w; }, {});
  }

  // apply(C) = prefix ++ C, where `child` is what `prefix` produces on
  // `parent`, possibly recoloured.
  static Lift prefix(const Trigraph& parent, ContractionSequence pre, const Trigraph& child, Bound bound,
                     std::string rule) {
    if (pre.base() != parent.fingerprint() || pre.end_label() != child.next_label() ||
        pre.base_vertex_count() != child.vertex_count() + pre.size()) {
      throw Error(Errc::InstanceMismatch, "prefix does not lead from parent to child");
    }
    return Lift(
        parent.fingerprint(), child.fingerprint(),
        [pre = std::move(pre)](const ContractionSequence& c) { return pre.then(c); }, std::move(bound),
        {std::move(rule)});
  }

  ContractionSequence apply(const ContractionSequence& c) const {
    if (c.base() != s_->child) throw Error(Errc::InstanceMismatch, "sequence is not for this lift's child");
    return s_->apply(c);
  }

  std::size_t bound(std::size_t w) const { return s_->bound(w); }
  std::uint64_t parent() const { return s_->parent; }
  std::uint64_t child() const { return s_->child; }
  const std::vector<std::string>& chain() const { return s_->chain; }

 private:
  // Shared so that composed lifts copy in constant time.
  struct State {
    std::uint64_t parent;
    std::uint64_t child;
    Apply apply;
    Bound bound;
    std::vector<std::string> chain;
  };
  std::shared_ptr<const State> s_;
};

inline Lift identity_lift(const Trigraph& g) { return Lift::identity(g); }

// l1 lifts into the final parent, l2 into l1's child: apply = l1 ∘ l2.
inline Lift compose(const Lift& l1, const Lift& l2) {
  if (l1.child() != l2.parent()) throw Error(Errc::InstanceMismatch, "lifts do not chain");
  auto chain = l1.chain();
  chain.insert(chain.end(), l2.chain().begin(), l2.chain().end());
  return Lift(
      l1.parent(), l2.child(), [l1, l2](const ContractionSequence& c) { return l1.apply(l2.apply(c)); },
      [l1, l2](std::size_t w) { return l1.bound(l2.bound(w)); }, std::move(chain));
}

inline std::size_t at_least_two(std::size_t w) { return std::max<std::size_t>(w, 2); }
inline std::size_t unchanged(std::size_t w) { return w; }

}  // namespace tww
