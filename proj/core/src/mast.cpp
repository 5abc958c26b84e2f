#include "mastlab/mast.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <limits>

#include "mastlab/error.hpp"

namespace mastlab {

namespace {

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

std::vector<Label> common_labels(const Cladogram& a, const Cladogram& b) {
  const auto la = a.labels();
  const auto lb = b.labels();
  std::vector<Label> out;
  std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                        std::back_inserter(out));
  return out;
}

// Directed edges of a fully labelled binary tree. Edge (u -> v) stands for
// the rooted subtree hanging from v away from u. Edges whose head is an
// internal node get dense ids in order of subtree size, so a DP row fills
// left to right; edges into a leaf are coded as ~leaf (negative).
using Code = std::int32_t;

class DirectedEdges {
 public:
  explicit DirectedEdges(const Cladogram& t) : t_(t) {
    const std::size_t n = t.node_count();
    // Euler intervals and leaf counts, rooted at node 0.
    parent_.assign(n, kNoNode);
    tin_.assign(n, 0);
    tout_.assign(n, 0);
    std::vector<std::size_t> below(n, 0);
    std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
    parent_[0] = 0;
    int clock = 0;
    tin_[0] = clock++;
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      auto nb = t.neighbors(v);
      if (k < nb.size()) {
        const NodeId w = nb[k++];
        if (parent_[idx(w)] == kNoNode) {
          parent_[idx(w)] = v;
          tin_[idx(w)] = clock++;
          stack.emplace_back(w, 0);
        }
      } else {
        const NodeId done = v;
        tout_[idx(done)] = clock;
        if (t.is_leaf(done)) ++below[idx(done)];
        stack.pop_back();
        if (!stack.empty()) below[idx(stack.back().first)] += below[idx(done)];
      }
    }
    parent_[0] = kNoNode;
    const std::size_t leaves = below[0];

    struct Raw {
      NodeId u, v;
      std::size_t size;
    };
    std::vector<Raw> raw;
    for (std::size_t u = 0; u < n; ++u) {
      for (NodeId v : t.neighbors(static_cast<NodeId>(u))) {
        if (t.is_leaf(v)) continue;
        const auto uu = static_cast<NodeId>(u);
        const std::size_t size =
            parent_[idx(v)] == uu ? below[idx(v)] : leaves - below[u];
        raw.push_back({uu, v, size});
      }
    }
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Raw& x, const Raw& y) { return x.size < y.size; });
    slot_id_.assign(3 * n, -1);
    for (const auto& r : raw) {
      const auto nb = t.neighbors(r.u);
      const auto k = static_cast<std::size_t>(
          std::find(nb.begin(), nb.end(), r.v) - nb.begin());
      slot_id_[3 * idx(r.u) + k] = static_cast<Code>(tail_.size());
      tail_.push_back(r.u);
      head_.push_back(r.v);
    }
    kids_.resize(head_.size());
    for (std::size_t e = 0; e < head_.size(); ++e) {
      std::size_t k = 0;
      for (NodeId w : t.neighbors(head_[e])) {
        if (w != tail_[e]) kids_[e][k++] = code(head_[e], w);
      }
    }
  }

  std::size_t count() const noexcept { return head_.size(); }
  const std::array<Code, 2>& kids(Code e) const { return kids_[idx(e)]; }

  // Code of (u -> v).
  Code code(NodeId u, NodeId v) const {
    if (t_.is_leaf(v)) return ~v;
    auto nb = t_.neighbors(u);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] == v) return slot_id_[3 * idx(u) + k];
    }
    throw InvariantError("mast: not an edge");
  }

  // Whether leaf node x lies in the subtree of internal edge e.
  bool contains(Code e, NodeId x) const {
    const NodeId u = tail_[idx(e)], v = head_[idx(e)];
    if (parent_[idx(v)] == u) return in_down(v, x);
    return !in_down(u, x);
  }

 private:
  bool in_down(NodeId v, NodeId x) const {
    return tin_[idx(v)] <= tin_[idx(x)] && tin_[idx(x)] < tout_[idx(v)];
  }

  const Cladogram& t_;
  std::vector<NodeId> parent_;
  std::vector<int> tin_;
  std::vector<int> tout_;
  std::vector<Code> slot_id_;
  std::vector<NodeId> tail_;
  std::vector<NodeId> head_;
  std::vector<std::array<Code, 2>> kids_;
};

class MastSolver {
 public:
  MastSolver(const Cladogram& a, const Cladogram& b)
      : a_(a), b_(b), ea_(a), eb_(b),
        table_(ea_.count() * eb_.count(), 0) {
    // Leaf correspondence by label (both trees share the label set).
    a_to_b_.assign(a.node_count(), kNoNode);
    for (std::size_t v = 0; v < a.node_count(); ++v) {
      if (a.is_leaf(static_cast<NodeId>(v))) {
        a_to_b_[v] = *b.node_of(a.label(static_cast<NodeId>(v)));
      }
    }
    b_to_a_.assign(b.node_count(), kNoNode);
    for (std::size_t v = 0; v < b.node_count(); ++v) {
      if (b.is_leaf(static_cast<NodeId>(v))) {
        b_to_a_[v] = *a.node_of(b.label(static_cast<NodeId>(v)));
      }
    }
    fill();
  }

  MastResult solve() {
    // Root both trees at the same leaf; ties go to the smallest label.
    std::size_t best = 0;
    Label best_label = kNoLabel;
    for (Label l : a_.labels()) {
      const std::size_t v = 1 + value(root_a(l), root_b(l));
      if (v > best) {
        best = v;
        best_label = l;
      }
    }
    MastResult r;
    r.size = best;
    r.witness.push_back(best_label);
    trace(root_a(best_label), root_b(best_label), r.witness);
    std::sort(r.witness.begin(), r.witness.end());
    if (r.witness.size() != r.size) {
      throw InvariantError("mast: witness size does not match the optimum");
    }
    return r;
  }

 private:
  Code root_a(Label l) const {
    const NodeId v = *a_.node_of(l);
    return ea_.code(v, a_.neighbors(v)[0]);
  }
  Code root_b(Label l) const {
    const NodeId v = *b_.node_of(l);
    return eb_.code(v, b_.neighbors(v)[0]);
  }

  std::size_t value(Code x, Code y) const {
    if (x < 0) {
      const NodeId in_b = a_to_b_[idx(~x)];
      return y < 0 ? (in_b == ~y) : eb_.contains(y, in_b);
    }
    if (y < 0) return ea_.contains(x, b_to_a_[idx(~y)]);
    return table_[idx(x) * eb_.count() + idx(y)];
  }

  // The six candidates of the rooted recurrence, in tie-break order.
  std::array<std::size_t, 6> options(Code x, Code y) const {
    const auto [x1, x2] = ea_.kids(x);
    const auto [y1, y2] = eb_.kids(y);
    return {value(x1, y1) + value(x2, y2), value(x1, y2) + value(x2, y1),
            value(x1, y), value(x2, y), value(x, y1), value(x, y2)};
  }

  void fill() {
    const auto na = static_cast<Code>(ea_.count());
    const auto nb = static_cast<Code>(eb_.count());
    for (Code x = 0; x < na; ++x) {
      for (Code y = 0; y < nb; ++y) {
        const auto o = options(x, y);
        table_[idx(x) * eb_.count() + idx(y)] =
            static_cast<std::uint16_t>(*std::max_element(o.begin(), o.end()));
      }
    }
  }

  void trace(Code x0, Code y0, std::vector<Label>& out) const {
    std::vector<std::pair<Code, Code>> stack{{x0, y0}};
    while (!stack.empty()) {
      auto [x, y] = stack.back();
      stack.pop_back();
      if (value(x, y) == 0) continue;
      if (x < 0) {
        out.push_back(a_.label(~x));
        continue;
      }
      if (y < 0) {
        out.push_back(b_.label(~y));
        continue;
      }
      const auto o = options(x, y);
      const auto [x1, x2] = ea_.kids(x);
      const auto [y1, y2] = eb_.kids(y);
      const auto pick = static_cast<std::size_t>(
          std::find(o.begin(), o.end(), value(x, y)) - o.begin());
      switch (pick) {
        case 0: stack.push_back({x1, y1}); stack.push_back({x2, y2}); break;
        case 1: stack.push_back({x1, y2}); stack.push_back({x2, y1}); break;
        case 2: stack.push_back({x1, y}); break;
        case 3: stack.push_back({x2, y}); break;
        case 4: stack.push_back({x, y1}); break;
        case 5: stack.push_back({x, y2}); break;
        default: throw InvariantError("mast: traceback lost the optimum");
      }
    }
  }

  const Cladogram& a_;
  const Cladogram& b_;
  DirectedEdges ea_;
  DirectedEdges eb_;
  std::vector<std::uint16_t> table_;
  std::vector<NodeId> a_to_b_;
  std::vector<NodeId> b_to_a_;
};

}  // namespace

MastResult mast(const Cladogram& a, const Cladogram& b) {
  const auto common = common_labels(a, b);
  if (common.size() <= 3) return {common.size(), common};
  if (common.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw DomainError("mast: too many common labels");
  }
  const Cladogram ra = induced_subtree(a, common);
  const Cladogram rb = induced_subtree(b, common);
  return MastSolver(ra, rb).solve();
}

bool is_agreement_set(const Cladogram& a, const Cladogram& b,
                      std::span<const Label> labels) {
  return canonical_form(induced_subtree(a, labels)) ==
         canonical_form(induced_subtree(b, labels));
}

MastResult mast_bruteforce(const Cladogram& a, const Cladogram& b) {
  const auto common = common_labels(a, b);
  const std::size_t n = common.size();
  if (n > 20) {
    throw DomainError("mast_bruteforce: more than 20 common labels");
  }
  if (n <= 3) return {n, common};
  for (std::size_t s = n; s >= 4; --s) {
    // Combinations of size s in lexicographic order.
    std::vector<std::size_t> pick(s);
    for (std::size_t i = 0; i < s; ++i) pick[i] = i;
    std::vector<Label> subset(s);
    for (;;) {
      for (std::size_t i = 0; i < s; ++i) subset[i] = common[pick[i]];
      if (is_agreement_set(a, b, subset)) return {s, subset};
      std::size_t i = s;
      while (i > 0 && pick[i - 1] == n - s + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return {3, {common[0], common[1], common[2]}};
}

MastResult mast_regions(const Region& r, const Region& r2) {
  return mast(r.tree, r2.tree);
}

double mast_cost_estimate(std::size_t n) {
  const double e = 3.0 * static_cast<double>(n);
  return e * e;
}

}  // namespace mastlab
