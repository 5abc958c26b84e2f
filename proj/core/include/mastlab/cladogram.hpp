#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mastlab/rng.hpp"

namespace mastlab {

using NodeId = std::int32_t;
using Label = std::int32_t;
inline constexpr Label kNoLabel = -1;
inline constexpr NodeId kNoNode = -1;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Unrooted binary tree with labelled leaves. Every node has degree 1 or 3
// once there are at least two nodes; the single-vertex tree and the empty
// tree are valid values. Leaves may be unlabelled (regions produce those);
// labels are non-negative and distinct. Immutable once built.
class Cladogram {
 public:
  // Incremental construction; `build()` validates the result.
  class Builder {
   public:
    NodeId add_node(Label label = kNoLabel);
    void add_edge(NodeId u, NodeId v);
    // Replaces edge `edge_index` (u, v) by u - w - v and hangs a new leaf
    // with `leaf_label` from w. Returns the new leaf.
    NodeId subdivide(std::size_t edge_index, Label leaf_label);
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t node_count() const noexcept { return labels_.size(); }
    Cladogram build() const;

   private:
    friend class Cladogram;
    void replace_neighbor(NodeId node, NodeId from, NodeId to);
    std::vector<std::array<NodeId, 3>> adjacency_;
    std::vector<std::uint8_t> degree_;
    std::vector<Label> labels_;
    std::vector<Edge> edges_;
  };

  Cladogram() = default;  // the empty tree
  static Cladogram single_leaf(Label label);
  // Canonical n-leaf caterpillar with leaves in the given order.
  static Cladogram caterpillar(std::span<const Label> order);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept {
    return labels_.empty() ? 0 : labels_.size() - 1;
  }
  // Number of degree <= 1 vertices, labelled or not.
  std::size_t leaf_count() const noexcept { return leaf_count_; }
  std::size_t labelled_leaf_count() const noexcept { return by_label_.size(); }

  int degree(NodeId v) const { return degree_[static_cast<std::size_t>(v)]; }
  bool is_leaf(NodeId v) const { return degree(v) <= 1; }
  std::span<const NodeId> neighbors(NodeId v) const {
    const auto i = static_cast<std::size_t>(v);
    return {adjacency_[i].data(), degree_[i]};
  }
  Label label(NodeId v) const { return labels_[static_cast<std::size_t>(v)]; }
  std::optional<NodeId> node_of(Label label) const;

  // Sorted label set.
  std::vector<Label> labels() const;
  // Edges with u < v, sorted; an edge id is an index into this list.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::array<NodeId, 3>> adjacency_;
  std::vector<std::uint8_t> degree_;
  std::vector<Label> labels_;
  std::vector<std::pair<Label, NodeId>> by_label_;  // sorted by label
  std::size_t leaf_count_ = 0;
};

// #B_n: 1 for n <= 3, (2n - 5)!! otherwise.
boost::multiprecision::cpp_int count_cladograms(int n);

// Uniform element of B_n by stepwise attachment of leaf k to a uniform edge.
Cladogram sample_uniform(int n, Rng& rng);

// Every element of B_n exactly once, 2 <= n <= 8.
void for_each_cladogram(int n, const std::function<void(const Cladogram&)>& fn);
std::vector<Cladogram> enumerate_cladograms(int n);

// Minimal subtree spanning the leaves labelled by `labels`, with degree-2
// vertices contracted. Empty input gives the empty tree.
Cladogram induced_subtree(const Cladogram& t, std::span<const Label> labels);

// Equal iff the trees are isomorphic as leaf-labelled trees. This is the
// canonical Newick text: rooted next to the smallest label, children ordered
// by their smallest label.
std::string canonical_form(const Cladogram& t);

// Component of the forest obtained by blowing up the boundary nodes. The
// component is stored as a standalone tree whose blown-up copies are
// unlabelled leaves.
struct Region {
  Cladogram tree;
  std::vector<NodeId> boundary;      // node ids in the parent tree
  std::vector<Edge> parent_edges;    // parent edges inside the region

  std::size_t size() const noexcept { return tree.labelled_leaf_count(); }
  std::vector<Label> labels() const { return tree.labels(); }
};

// `boundary` holds at most two internal nodes of t; `edge_id` indexes
// t.edges() and selects the component.
Region region(const Cladogram& t, std::span<const NodeId> boundary,
              std::size_t edge_id);
// All components for a boundary set (one Region per component).
std::vector<Region> regions_around(const Cladogram& t,
                                   std::span<const NodeId> boundary);
Region whole_region(const Cladogram& t);
Region leaf_region(const Cladogram& t, Label label);

// Internal nodes of the region whose three components each hold at least
// `m` labelled leaves. At most size / m of them exist.
std::size_t count_large_branch_points(const Region& r, std::size_t m);

// Size of the smallest region (at most two boundary nodes) containing every
// leaf in `labels`.
std::size_t smallest_region_size(const Cladogram& t,
                                 std::span<const Label> labels);

}  // namespace mastlab
