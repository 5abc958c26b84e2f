#include "mastlab/cladogram.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "mastlab/error.hpp"

namespace mastlab {

namespace {

constexpr Label kNoMinLabel = std::numeric_limits<Label>::max();

std::size_t idx(NodeId v) { return static_cast<std::size_t>(v); }

// Parent and preorder of a rooted traversal; iterative so caterpillars with
// thousands of leaves do not stress the stack.
struct Rooted {
  std::vector<NodeId> parent;
  std::vector<NodeId> order;  // preorder
};

Rooted root_at(const Cladogram& t, NodeId root) {
  Rooted r;
  r.parent.assign(t.node_count(), kNoNode);
  r.order.reserve(t.node_count());
  std::vector<NodeId> stack{root};
  r.parent[idx(root)] = root;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    r.order.push_back(v);
    for (NodeId w : t.neighbors(v)) {
      if (r.parent[idx(w)] == kNoNode) {
        r.parent[idx(w)] = v;
        stack.push_back(w);
      }
    }
  }
  r.parent[idx(root)] = kNoNode;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Builder

NodeId Cladogram::Builder::add_node(Label label) {
  adjacency_.push_back({kNoNode, kNoNode, kNoNode});
  degree_.push_back(0);
  labels_.push_back(label);
  return static_cast<NodeId>(labels_.size() - 1);
}

void Cladogram::Builder::add_edge(NodeId u, NodeId v) {
  const auto n = static_cast<NodeId>(labels_.size());
  if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
    throw DomainError("Cladogram::Builder: bad edge endpoints");
  }
  for (NodeId x : {u, v}) {
    if (degree_[idx(x)] == 3) {
      throw DomainError("Cladogram::Builder: node degree would exceed 3");
    }
  }
  adjacency_[idx(u)][degree_[idx(u)]++] = v;
  adjacency_[idx(v)][degree_[idx(v)]++] = u;
  edges_.push_back({u, v});
}

void Cladogram::Builder::replace_neighbor(NodeId node, NodeId from,
                                          NodeId to) {
  auto& adj = adjacency_[idx(node)];
  for (std::size_t i = 0; i < degree_[idx(node)]; ++i) {
    if (adj[i] == from) {
      adj[i] = to;
      return;
    }
  }
  throw InvariantError("Cladogram::Builder: missing adjacency");
}

NodeId Cladogram::Builder::subdivide(std::size_t edge_index, Label leaf_label) {
  if (edge_index >= edges_.size()) {
    throw DomainError("Cladogram::Builder::subdivide: edge out of range");
  }
  const Edge e = edges_[edge_index];
  const NodeId mid = add_node();
  const NodeId leaf = add_node(leaf_label);
  replace_neighbor(e.u, e.v, mid);
  replace_neighbor(e.v, e.u, mid);
  adjacency_[idx(mid)] = {e.u, e.v, leaf};
  degree_[idx(mid)] = 3;
  adjacency_[idx(leaf)][0] = mid;
  degree_[idx(leaf)] = 1;
  edges_[edge_index] = {e.u, mid};
  edges_.push_back({mid, e.v});
  edges_.push_back({mid, leaf});
  return leaf;
}

Cladogram Cladogram::Builder::build() const {
  Cladogram t;
  t.adjacency_ = adjacency_;
  t.degree_ = degree_;
  t.labels_ = labels_;
  const std::size_t n = labels_.size();
  if (n > 0 && edges_.size() != n - 1) {
    throw DomainError("Cladogram: a tree on " + std::to_string(n) +
                      " nodes needs " + std::to_string(n - 1) + " edges");
  }
  for (std::size_t v = 0; v < n; ++v) {
    const int d = degree_[v];
    if (n >= 2 && d != 1 && d != 3) {
      throw DomainError("Cladogram: node " + std::to_string(v) +
                        " has degree " + std::to_string(d));
    }
    if (d <= 1) ++t.leaf_count_;
    if (labels_[v] != kNoLabel) {
      if (labels_[v] < 0) throw DomainError("Cladogram: negative label");
      if (d > 1) throw DomainError("Cladogram: internal node carries a label");
      t.by_label_.emplace_back(labels_[v], static_cast<NodeId>(v));
    }
  }
  std::sort(t.by_label_.begin(), t.by_label_.end());
  for (std::size_t i = 1; i < t.by_label_.size(); ++i) {
    if (t.by_label_[i].first == t.by_label_[i - 1].first) {
      throw DomainError("Cladogram: duplicate label " +
                        std::to_string(t.by_label_[i].first));
    }
  }
  if (n > 0 && root_at(t, 0).order.size() != n) {
    throw DomainError("Cladogram: graph is not connected");
  }
  return t;
}

// ---------------------------------------------------------------- Cladogram

Cladogram Cladogram::single_leaf(Label label) {
  Builder b;
  b.add_node(label);
  return b.build();
}

Cladogram Cladogram::caterpillar(std::span<const Label> order) {
  Builder b;
  if (order.empty()) return b.build();
  if (order.size() == 1) return single_leaf(order[0]);
  if (order.size() == 2) {
    NodeId x = b.add_node(order[0]);
    NodeId y = b.add_node(order[1]);
    b.add_edge(x, y);
    return b.build();
  }
  // Spine of n - 2 internal nodes; first and last carry a cherry.
  const std::size_t n = order.size();
  std::vector<NodeId> spine(n - 2);
  for (auto& s : spine) s = b.add_node();
  for (std::size_t i = 0; i + 1 < spine.size(); ++i) {
    b.add_edge(spine[i], spine[i + 1]);
  }
  b.add_edge(spine.front(), b.add_node(order[0]));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    b.add_edge(spine[i - 1], b.add_node(order[i]));
  }
  b.add_edge(spine.back(), b.add_node(order[n - 1]));
  return b.build();
}

std::optional<NodeId> Cladogram::node_of(Label label) const {
  auto it = std::lower_bound(
      by_label_.begin(), by_label_.end(), label,
      [](const auto& entry, Label l) { return entry.first < l; });
  if (it == by_label_.end() || it->first != label) return std::nullopt;
  return it->second;
}

std::vector<Label> Cladogram::labels() const {
  std::vector<Label> out;
  out.reserve(by_label_.size());
  for (const auto& [l, v] : by_label_) out.push_back(l);
  return out;
}

std::vector<Edge> Cladogram::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(static_cast<NodeId>(u))) {
      if (static_cast<NodeId>(u) < v) out.push_back({static_cast<NodeId>(u), v});
    }
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

// ---------------------------------------------------------------- counting

boost::multiprecision::cpp_int count_cladograms(int n) {
  if (n < 0) throw DomainError("count_cladograms: n must be non-negative");
  boost::multiprecision::cpp_int result = 1;
  for (int k = 3; k <= 2 * n - 5; k += 2) result *= k;
  return result;
}

Cladogram sample_uniform(int n, Rng& rng) {
  if (n < 2) throw DomainError("sample_uniform: n must be at least 2");
  Cladogram::Builder b;
  b.add_edge(b.add_node(1), b.add_node(2));
  for (int k = 3; k <= n; ++k) {
    b.subdivide(rng.below(b.edge_count()), k);
  }
  return b.build();
}

namespace {

void enumerate_rec(Cladogram::Builder& b, int next, int n,
                   const std::function<void(const Cladogram&)>& fn) {
  if (next > n) {
    fn(b.build());
    return;
  }
  for (std::size_t e = 0; e < b.edge_count(); ++e) {
    Cladogram::Builder child = b;
    child.subdivide(e, next);
    enumerate_rec(child, next + 1, n, fn);
  }
}

}  // namespace

void for_each_cladogram(int n,
                        const std::function<void(const Cladogram&)>& fn) {
  if (n < 2 || n > 8) {
    throw DomainError("enumerate_cladograms: n must lie in [2, 8]");
  }
  Cladogram::Builder b;
  b.add_edge(b.add_node(1), b.add_node(2));
  enumerate_rec(b, 3, n, fn);
}

std::vector<Cladogram> enumerate_cladograms(int n) {
  std::vector<Cladogram> out;
  for_each_cladogram(n, [&](const Cladogram& t) { out.push_back(t); });
  return out;
}

// ---------------------------------------------------------------- induced

Cladogram induced_subtree(const Cladogram& t, std::span<const Label> labels) {
  std::vector<std::uint8_t> marked(t.node_count(), 0);
  std::vector<NodeId> marked_nodes;
  for (Label l : labels) {
    auto v = t.node_of(l);
    if (!v) {
      throw DomainError("induced_subtree: label " + std::to_string(l) +
                        " is not in the tree");
    }
    if (!marked[idx(*v)]) {
      marked[idx(*v)] = 1;
      marked_nodes.push_back(*v);
    }
  }
  if (marked_nodes.empty()) return Cladogram();
  if (marked_nodes.size() == 1) {
    return Cladogram::single_leaf(t.label(marked_nodes.front()));
  }

  const NodeId root = marked_nodes.front();
  const Rooted rooted = root_at(t, root);
  std::vector<std::int32_t> count(t.node_count(), 0);
  for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
    const NodeId v = *it;
    count[idx(v)] += marked[idx(v)];
    if (v != root) count[idx(rooted.parent[idx(v)])] += count[idx(v)];
  }

  // rep[v]: node of the new tree standing for the contracted subtree below v.
  Cladogram::Builder b;
  std::vector<NodeId> rep(t.node_count(), kNoNode);
  for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
    const NodeId v = *it;
    if (v == root || count[idx(v)] == 0) continue;
    if (marked[idx(v)]) {
      rep[idx(v)] = b.add_node(t.label(v));
      continue;
    }
    NodeId kids[2];
    int k = 0;
    for (NodeId w : t.neighbors(v)) {
      if (w != rooted.parent[idx(v)] && count[idx(w)] > 0) kids[k++] = w;
    }
    if (k == 1) {
      rep[idx(v)] = rep[idx(kids[0])];
    } else {
      const NodeId mid = b.add_node();
      b.add_edge(mid, rep[idx(kids[0])]);
      b.add_edge(mid, rep[idx(kids[1])]);
      rep[idx(v)] = mid;
    }
  }
  const NodeId new_root = b.add_node(t.label(root));
  b.add_edge(new_root, rep[idx(t.neighbors(root)[0])]);
  return b.build();
}

// ---------------------------------------------------------------- canonical

namespace {

struct Encoded {
  Label min_label;
  std::string text;
};

bool encoded_less(const Encoded& a, const Encoded& b) {
  if (a.min_label != b.min_label) return a.min_label < b.min_label;
  return a.text < b.text;
}

std::string leaf_text(Label l) {
  return l == kNoLabel ? std::string() : std::to_string(l);
}

// Encoding of the subtree hanging from `v` away from `parent`.
Encoded encode_subtree(const Cladogram& t, NodeId v, NodeId parent) {
  if (t.is_leaf(v)) {
    const Label l = t.label(v);
    return {l == kNoLabel ? kNoMinLabel : l, leaf_text(l)};
  }
  std::vector<Encoded> kids;
  for (NodeId w : t.neighbors(v)) {
    if (w != parent) kids.push_back(encode_subtree(t, w, v));
  }
  std::sort(kids.begin(), kids.end(), encoded_less);
  return {kids.front().min_label,
          "(" + kids[0].text + "," + kids[1].text + ")"};
}

std::string encode_from_leaf(const Cladogram& t, NodeId leaf) {
  const NodeId hub = t.neighbors(leaf)[0];
  const std::string head = leaf_text(t.label(leaf));
  if (t.is_leaf(hub)) {
    std::string a = head;
    std::string b = leaf_text(t.label(hub));
    if (t.label(hub) != kNoLabel &&
        (t.label(leaf) == kNoLabel || t.label(hub) < t.label(leaf))) {
      std::swap(a, b);
    }
    return "(" + a + "," + b + ");";
  }
  std::vector<Encoded> kids;
  for (NodeId w : t.neighbors(hub)) {
    if (w != leaf) kids.push_back(encode_subtree(t, w, hub));
  }
  std::sort(kids.begin(), kids.end(), encoded_less);
  return "(" + head + "," + kids[0].text + "," + kids[1].text + ");";
}

}  // namespace

std::string canonical_form(const Cladogram& t) {
  if (t.node_count() == 0) return ";";
  if (t.node_count() == 1) return leaf_text(t.label(0)) + ";";
  if (t.labelled_leaf_count() > 0) {
    return encode_from_leaf(t, *t.node_of(t.labels().front()));
  }
  // No labels at all: the shape alone, minimized over rootings.
  std::string best;
  bool first = true;
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    if (!t.is_leaf(static_cast<NodeId>(v))) continue;
    std::string s = encode_from_leaf(t, static_cast<NodeId>(v));
    if (first || s < best) best = std::move(s);
    first = false;
  }
  return best;
}

// ---------------------------------------------------------------- regions

namespace {

void check_boundary(const Cladogram& t, std::span<const NodeId> boundary) {
  if (boundary.size() > 2) {
    throw DomainError("region: at most two boundary nodes");
  }
  for (NodeId b : boundary) {
    if (b < 0 || idx(b) >= t.node_count()) {
      throw DomainError("region: boundary node out of range");
    }
    if (t.is_leaf(b)) throw DomainError("region: boundary node is a leaf");
  }
  if (boundary.size() == 2 && boundary[0] == boundary[1]) {
    throw DomainError("region: repeated boundary node");
  }
}

bool in_boundary(std::span<const NodeId> boundary, NodeId v) {
  return std::find(boundary.begin(), boundary.end(), v) != boundary.end();
}

// Component containing edge `start` after blowing up the boundary nodes.
// `seen_edge` marks parent edges (by their position in `edges`) as used.
Region grow_region(const Cladogram& t, std::span<const NodeId> boundary,
                   const std::vector<Edge>& edges, std::size_t start,
                   std::vector<std::uint8_t>& seen_edge) {
  auto edge_index = [&](NodeId a, NodeId b) {
    Edge key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(
        edges.begin(), edges.end(), key, [](const Edge& x, const Edge& y) {
          return std::pair(x.u, x.v) < std::pair(y.u, y.v);
        });
    return static_cast<std::size_t>(it - edges.begin());
  };

  Region r;
  r.boundary.assign(boundary.begin(), boundary.end());
  Cladogram::Builder b;
  std::vector<NodeId> local(t.node_count(), kNoNode);
  std::queue<NodeId> frontier;
  // Boundary nodes get a fresh unlabelled copy per incident region edge.
  auto attach = [&](NodeId v) -> NodeId {
    if (in_boundary(boundary, v)) return b.add_node();
    if (local[idx(v)] == kNoNode) {
      local[idx(v)] = b.add_node(t.label(v));
      frontier.push(v);
    }
    return local[idx(v)];
  };

  auto take_edge = [&](std::size_t e) {
    seen_edge[e] = 1;
    r.parent_edges.push_back(edges[e]);
    const NodeId a = attach(edges[e].u);
    const NodeId c = attach(edges[e].v);
    b.add_edge(a, c);
  };

  take_edge(start);
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : t.neighbors(v)) {
      const std::size_t e = edge_index(v, w);
      if (!seen_edge[e]) take_edge(e);
    }
  }
  r.tree = b.build();
  return r;
}

}  // namespace

Region region(const Cladogram& t, std::span<const NodeId> boundary,
              std::size_t edge_id) {
  check_boundary(t, boundary);
  const auto edges = t.edges();
  if (edge_id >= edges.size()) {
    throw DomainError("region: component selector is not an edge of the tree");
  }
  std::vector<std::uint8_t> seen(edges.size(), 0);
  return grow_region(t, boundary, edges, edge_id, seen);
}

std::vector<Region> regions_around(const Cladogram& t,
                                   std::span<const NodeId> boundary) {
  check_boundary(t, boundary);
  if (t.edge_count() == 0) return {whole_region(t)};
  const auto edges = t.edges();
  std::vector<std::uint8_t> seen(edges.size(), 0);
  std::vector<Region> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!seen[e]) out.push_back(grow_region(t, boundary, edges, e, seen));
  }
  return out;
}

Region whole_region(const Cladogram& t) {
  Region r;
  r.tree = t;
  r.parent_edges = t.edges();
  return r;
}

Region leaf_region(const Cladogram& t, Label label) {
  if (!t.node_of(label)) {
    throw DomainError("leaf_region: label " + std::to_string(label) +
                      " is not in the tree");
  }
  Region r;
  r.tree = Cladogram::single_leaf(label);
  return r;
}

std::size_t count_large_branch_points(const Region& r, std::size_t m) {
  if (m == 0) throw DomainError("count_large_branch_points: m must be >= 1");
  const Cladogram& t = r.tree;
  if (t.node_count() < 4) return 0;
  NodeId root = 0;
  while (!t.is_leaf(root)) ++root;
  const Rooted rooted = root_at(t, root);
  std::vector<std::size_t> below(t.node_count(), 0);
  for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
    const NodeId v = *it;
    if (t.label(v) != kNoLabel) below[idx(v)] += 1;
    if (v != root) below[idx(rooted.parent[idx(v)])] += below[idx(v)];
  }
  const std::size_t total = below[idx(root)];
  std::size_t hits = 0;
  for (NodeId v : rooted.order) {
    if (t.is_leaf(v)) continue;
    std::size_t smallest = total - below[idx(v)];
    for (NodeId w : t.neighbors(v)) {
      if (w != rooted.parent[idx(v)]) smallest = std::min(smallest, below[idx(w)]);
    }
    if (smallest >= m) ++hits;
  }
  return hits;
}

std::size_t smallest_region_size(const Cladogram& t,
                                 std::span<const Label> labels) {
  std::vector<std::uint8_t> marked(t.node_count(), 0);
  std::vector<NodeId> nodes;
  for (Label l : labels) {
    auto v = t.node_of(l);
    if (!v) {
      throw DomainError("smallest_region_size: label " + std::to_string(l) +
                        " is not in the tree");
    }
    if (!marked[idx(*v)]) {
      marked[idx(*v)] = 1;
      nodes.push_back(*v);
    }
  }
  if (nodes.size() <= 1) return nodes.size();

  // Root at a marked leaf. The spanning subtree is every node with a marked
  // descendant; anything else hangs off it. A region must keep the spanning
  // subtree and can cut away at most two hanging subtrees, each rooted at an
  // internal node (a hanging single leaf cannot be blown up).
  const NodeId root = nodes.front();
  const Rooted rooted = root_at(t, root);
  std::vector<std::size_t> hits(t.node_count(), 0);
  std::vector<std::size_t> leaves(t.node_count(), 0);
  for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
    const NodeId v = *it;
    hits[idx(v)] += marked[idx(v)];
    if (t.label(v) != kNoLabel) leaves[idx(v)] += 1;
    if (v != root) {
      hits[idx(rooted.parent[idx(v)])] += hits[idx(v)];
      leaves[idx(rooted.parent[idx(v)])] += leaves[idx(v)];
    }
  }
  std::size_t best = 0;
  std::size_t second = 0;
  for (NodeId v : rooted.order) {
    if (v == root || hits[idx(v)] == 0 || t.is_leaf(v)) continue;
    for (NodeId w : t.neighbors(v)) {
      if (w == rooted.parent[idx(v)] || hits[idx(w)] > 0 || t.is_leaf(w)) {
        continue;
      }
      const std::size_t s = leaves[idx(w)];
      if (s > best) {
        second = best;
        best = s;
      } else if (s > second) {
        second = s;
      }
    }
  }
  return t.labelled_leaf_count() - best - second;
}

}  // namespace mastlab
