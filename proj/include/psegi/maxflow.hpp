#pragma once

#include "psegi/tau_poly.hpp"

#include <cstdint>
#include <deque>
#include <set>
#include <vector>

namespace psegi::bk {

/// A capacity carried both as a number and as its polynomial along a line.
/// The number decides control flow; the polynomial is what gets recorded.
struct Traced {
  double v = 0.0;
  TauPoly p;

  Traced& operator+=(const Traced& o) {
    v += o.v;
    p += o.p;
    return *this;
  }
  Traced& operator-=(const Traced& o) {
    v -= o.v;
    p -= o.p;
    return *this;
  }
  friend Traced operator-(Traced t) {
    t.v = -t.v;
    t.p = -t.p;
    return t;
  }
};

inline double value(double c) { return c; }
inline double value(const Traced& c) { return c.v; }

/// Directed network with paired arcs: arc 2e and 2e + 1 are reverses of
/// each other. tr_cap is source capacity minus sink capacity per node.
template <class Cap>
struct Network {
  std::vector<std::uint32_t> head;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<Cap> r_cap;
  std::vector<Cap> tr_cap;

  explicit Network(std::size_t nodes) : out(nodes), tr_cap(nodes) {}

  void add_edge(std::uint32_t p, std::uint32_t q, const Cap& cap, const Cap& rev_cap) {
    const auto a = static_cast<std::uint32_t>(head.size());
    head.push_back(q);
    head.push_back(p);
    r_cap.push_back(cap);
    r_cap.push_back(rev_cap);
    out[p].push_back(a);
    out[q].push_back(a + 1);
  }
};

/// Boykov-Kolmogorov augmenting paths with search trees, without the
/// distance heuristic. Every comparison on capacities goes through the
/// oracle, which may record it or force its outcome:
///   positive(c, origin), negative(c, origin), less(a, b, origin), zero(c).
/// Active nodes are served FIFO; the node that found a path stays in front.
/// Orphans are adopted in ascending node order.
template <class Cap, class Oracle>
class Solver {
public:
  Solver(Network<Cap> net, Oracle& oracle)
      : net_(std::move(net)), oracle_(oracle), tree_(net_.tr_cap.size(), kFree),
        parent_(net_.tr_cap.size(), kNone), queued_(net_.tr_cap.size(), 0) {}

  /// Runs to completion; returns the value of the maximum flow.
  double run() {
    const std::size_t n = tree_.size();
    for (std::uint32_t p = 0; p < n; ++p) {
      if (oracle_.positive(net_.tr_cap[p], Origin::gc_init)) {
        tree_[p] = kSource;
      } else if (oracle_.negative(net_.tr_cap[p], Origin::gc_init)) {
        tree_[p] = kSink;
      } else {
        continue;
      }
      parent_[p] = kTerminal;
      activate(p);
    }

    while (true) {
      while (!queue_.empty() && tree_[queue_.front()] == kFree) {
        queued_[queue_.front()] = 0;
        queue_.pop_front();
      }
      if (queue_.empty()) break;
      const std::uint32_t p = queue_.front();
      const std::int64_t bridge = grow(p);
      if (bridge < 0) {
        queued_[p] = 0;
        queue_.pop_front();
        continue;
      }
      augment(static_cast<std::uint32_t>(bridge));
      adopt();
    }
    return flow_;
  }

  bool in_source_tree(std::uint32_t p) const { return tree_[p] == kSource; }

  /// Residual network; after run() its saturated arcs mark the cut.
  const Network<Cap>& network() const { return net_; }

private:
  static constexpr std::uint8_t kFree = 0, kSource = 1, kSink = 2;
  static constexpr std::int64_t kNone = -1, kTerminal = -2, kOrphan = -3;

  static std::uint32_t sister(std::uint32_t a) { return a ^ 1u; }

  void activate(std::uint32_t p) {
    if (queued_[p]) return;
    queued_[p] = 1;
    queue_.push_back(p);
  }

  // Capacity of the arc leaving p toward q, seen from p's tree: outward for
  // the source tree, inward for the sink tree.
  const Cap& tree_cap(std::uint8_t tree, std::uint32_t a) const {
    return tree == kSource ? net_.r_cap[a] : net_.r_cap[sister(a)];
  }

  // Returns the arc from the source tree into the sink tree, or -1.
  std::int64_t grow(std::uint32_t p) {
    const std::uint8_t t = tree_[p];
    for (std::uint32_t a : net_.out[p]) {
      const std::uint32_t q = net_.head[a];
      if (tree_[q] == t) continue;
      if (!oracle_.positive(tree_cap(t, a), Origin::gc_grow)) continue;
      if (tree_[q] == kFree) {
        tree_[q] = t;
        parent_[q] = sister(a);
        activate(q);
      } else {
        return t == kSource ? a : sister(a);
      }
    }
    return -1;
  }

  void make_orphan(std::uint32_t p) {
    parent_[p] = kOrphan;
    orphans_.insert(p);
  }

  void augment(std::uint32_t bridge) {
    // Bottleneck: bridge, source side upward, source root, sink side
    // upward, sink root. Ties keep the earlier candidate.
    Cap f = net_.r_cap[bridge];
    auto consider = [&](const Cap& c) {
      if (oracle_.less(c, f, Origin::gc_augment_cmp)) f = c;
    };
    std::uint32_t u = net_.head[sister(bridge)];
    while (parent_[u] != kTerminal) {
      const auto a = static_cast<std::uint32_t>(parent_[u]);
      consider(net_.r_cap[sister(a)]);
      u = net_.head[a];
    }
    consider(net_.tr_cap[u]);
    std::uint32_t w = net_.head[bridge];
    while (parent_[w] != kTerminal) {
      const auto a = static_cast<std::uint32_t>(parent_[w]);
      consider(net_.r_cap[a]);
      w = net_.head[a];
    }
    consider(-net_.tr_cap[w]);

    net_.r_cap[bridge] -= f;
    net_.r_cap[sister(bridge)] += f;
    u = net_.head[sister(bridge)];
    while (parent_[u] != kTerminal) {
      const auto a = static_cast<std::uint32_t>(parent_[u]);
      net_.r_cap[sister(a)] -= f;
      net_.r_cap[a] += f;
      const std::uint32_t up = net_.head[a];
      if (oracle_.zero(net_.r_cap[sister(a)])) make_orphan(u);
      u = up;
    }
    net_.tr_cap[u] -= f;
    if (oracle_.zero(net_.tr_cap[u])) make_orphan(u);
    w = net_.head[bridge];
    while (parent_[w] != kTerminal) {
      const auto a = static_cast<std::uint32_t>(parent_[w]);
      net_.r_cap[a] -= f;
      net_.r_cap[sister(a)] += f;
      const std::uint32_t up = net_.head[a];
      if (oracle_.zero(net_.r_cap[a])) make_orphan(w);
      w = up;
    }
    net_.tr_cap[w] += f;
    if (oracle_.zero(net_.tr_cap[w])) make_orphan(w);
    flow_ += value(f);
  }

  bool rooted(std::uint32_t q) const {
    while (true) {
      const std::int64_t a = parent_[q];
      if (a == kTerminal) return true;
      if (a < 0) return false;
      q = net_.head[static_cast<std::uint32_t>(a)];
    }
  }

  void adopt() {
    while (!orphans_.empty()) {
      const std::uint32_t p = *orphans_.begin();
      orphans_.erase(orphans_.begin());
      const std::uint8_t t = tree_[p];
      bool adopted = false;
      for (std::uint32_t a : net_.out[p]) {
        const std::uint32_t q = net_.head[a];
        if (tree_[q] != t) continue;
        // Flow into p from its would-be parent q.
        if (!oracle_.positive(tree_cap(t, sister(a)), Origin::gc_adopt)) continue;
        if (rooted(q)) {
          parent_[p] = a;
          adopted = true;
          break;
        }
      }
      if (adopted) continue;
      for (std::uint32_t a : net_.out[p]) {
        const std::uint32_t q = net_.head[a];
        if (tree_[q] != t) continue;
        if (oracle_.positive(tree_cap(t, sister(a)), Origin::gc_adopt)) activate(q);
        const std::int64_t qa = parent_[q];
        if (qa >= 0 && net_.head[static_cast<std::uint32_t>(qa)] == p) make_orphan(q);
      }
      tree_[p] = kFree;
      parent_[p] = kNone;
    }
  }

  Network<Cap> net_;
  Oracle& oracle_;
  std::vector<std::uint8_t> tree_;
  std::vector<std::int64_t> parent_;
  std::vector<std::uint8_t> queued_;
  std::deque<std::uint32_t> queue_;
  std::set<std::uint32_t> orphans_;
  double flow_ = 0.0;
};

} // namespace psegi::bk
