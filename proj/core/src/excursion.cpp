#include "mastlab/excursion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

#include "mastlab/error.hpp"
#include "mastlab/randkit.hpp"

namespace mastlab {

// ---------------------------------------------------------------- rmq

RangeMin::RangeMin(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) return;
  const std::size_t blocks = (values_.size() + kBlock - 1) / kBlock;
  std::vector<double> base(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t hi = std::min(values_.size(), (b + 1) * kBlock);
    base[b] = *std::min_element(values_.begin() + static_cast<long>(b * kBlock),
                                values_.begin() + static_cast<long>(hi));
  }
  sparse_.push_back(std::move(base));
  for (std::size_t k = 1; (std::size_t{1} << k) <= blocks; ++k) {
    const auto& prev = sparse_.back();
    const std::size_t half = std::size_t{1} << (k - 1);
    std::vector<double> next(blocks - (std::size_t{1} << k) + 1);
    for (std::size_t b = 0; b < next.size(); ++b) {
      next[b] = std::min(prev[b], prev[b + half]);
    }
    sparse_.push_back(std::move(next));
  }
}

double RangeMin::scan(std::size_t lo, std::size_t hi) const {
  double m = values_[lo];
  for (std::size_t i = lo + 1; i <= hi; ++i) m = std::min(m, values_[i]);
  return m;
}

double RangeMin::min(std::size_t lo, std::size_t hi) const {
  if (lo > hi || hi >= values_.size()) {
    throw DomainError("RangeMin: bad range");
  }
  const std::size_t bl = lo / kBlock, bh = hi / kBlock;
  if (bh - bl <= 1) return scan(lo, hi);
  double m = std::min(scan(lo, (bl + 1) * kBlock - 1), scan(bh * kBlock, hi));
  const std::size_t first = bl + 1, count = bh - bl - 1;
  const auto k = static_cast<std::size_t>(std::bit_width(count) - 1);
  m = std::min(m, sparse_[k][first]);
  m = std::min(m, sparse_[k][first + count - (std::size_t{1} << k)]);
  return m;
}

// ---------------------------------------------------------------- trees

ExcursionTree::ExcursionTree(std::vector<double> values) {
  if (values.size() < 2) {
    throw DomainError("ExcursionTree: need at least two grid points");
  }
  if (values.front() != 0.0 || values.back() != 0.0) {
    throw DomainError("ExcursionTree: endpoints must be 0");
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("ExcursionTree: values must be finite and >= 0");
    }
  }
  rmq_ = RangeMin(std::move(values));
}

double ExcursionTree::distance(std::size_t s, std::size_t t) const {
  const auto v = values();
  if (s >= v.size() || t >= v.size()) {
    throw DomainError("ExcursionTree: grid index out of range");
  }
  if (s == t) return 0.0;
  return v[s] + v[t] - 2.0 * rmq_.min(std::min(s, t), std::max(s, t));
}

double tree_distance(const ExcursionTree& e, std::size_t s, std::size_t t) {
  return e.distance(s, t);
}

ExcursionTree sample_excursion(std::size_t n_grid, Rng& rng) {
  if (n_grid < (1u << 8) || n_grid > (1u << 20) || !std::has_single_bit(n_grid)) {
    throw DomainError("sample_excursion: N must be a power of two in [2^8, 2^20]");
  }
  const double step = 1.0 / std::sqrt(static_cast<double>(n_grid));
  std::vector<double> walk(n_grid + 1, 0.0);
  NormalStream normal(rng);
  for (std::size_t k = 1; k <= n_grid; ++k) walk[k] = walk[k - 1] + step * normal();
  const double end = walk[n_grid];
  const double nd = static_cast<double>(n_grid);
  std::size_t argmin = 0;
  for (std::size_t k = 0; k <= n_grid; ++k) {
    walk[k] -= end * (static_cast<double>(k) / nd);
    if (walk[k] < walk[argmin]) argmin = k;
  }
  // The bridge is periodic with walk[0] == walk[N] == 0.
  walk[n_grid] = 0.0;
  std::vector<double> e(n_grid + 1);
  const double floor = walk[argmin];
  for (std::size_t k = 0; k < n_grid; ++k) {
    const double v = walk[(argmin + k) % n_grid] - floor;
    e[k] = v < 0.0 ? 0.0 : v;
  }
  e[0] = 0.0;
  e[n_grid] = 0.0;
  return ExcursionTree(std::move(e));
}

double diameter(const ExcursionTree& e) {
  const auto v = e.values();
  double best_s = -std::numeric_limits<double>::infinity();  // max e_s, s <= u
  double best_su = best_s;  // max e_s - 2 e_u, s <= u <= t
  double best = 0.0;
  for (double x : v) {
    best_s = std::max(best_s, x);
    best_su = std::max(best_su, best_s - 2.0 * x);
    best = std::max(best, best_su + x);
  }
  return best;
}

double holder_modulus(const ExcursionTree& e, double exponent,
                      std::size_t max_lag) {
  const auto v = e.values();
  const double nd = static_cast<double>(e.grid());
  double best = 0.0;
  for (std::size_t lag = 1; lag <= max_lag && lag < v.size(); ++lag) {
    const double scale = std::pow(static_cast<double>(lag) / nd, exponent);
    double diff = 0.0;
    for (std::size_t s = 0; s + lag < v.size(); ++s) {
      diff = std::max(diff, std::abs(v[s + lag] - v[s]));
    }
    best = std::max(best, diff / scale);
  }
  return best;
}

std::size_t sample_point(const ExcursionTree& e, Rng& rng) {
  return static_cast<std::size_t>(rng.below(e.grid()));
}

// ---------------------------------------------------------------- coupling

namespace {

// Leaf-to-all distances through the backbone for one labelled leaf.
std::vector<double> backbone_distances(const CoupledTree& c, NodeId from) {
  const auto& t = c.backbone;
  std::vector<double> dist(t.node_count(), -1.0);
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> inc(t.node_count());
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    inc[static_cast<std::size_t>(c.edges[i].u)].push_back({c.edges[i].v, i});
    inc[static_cast<std::size_t>(c.edges[i].v)].push_back({c.edges[i].u, i});
  }
  std::vector<NodeId> stack{from};
  dist[static_cast<std::size_t>(from)] = 0.0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (auto [w, i] : inc[static_cast<std::size_t>(v)]) {
      auto& dw = dist[static_cast<std::size_t>(w)];
      if (dw >= 0.0) continue;
      const auto& p = c.pieces[i];
      dw = dist[static_cast<std::size_t>(v)] +
           std::sqrt(c.weights[i]) * p.distance(c.ends[i].first, c.ends[i].second);
      stack.push_back(w);
    }
  }
  return dist;
}

}  // namespace

double CoupledTree::leaf_distance(Label a, Label b) const {
  const auto na = backbone.node_of(a), nb = backbone.node_of(b);
  if (!na || !nb) throw DomainError("CoupledTree: unknown leaf label");
  return backbone_distances(*this, *na)[static_cast<std::size_t>(*nb)];
}

std::vector<std::vector<double>> CoupledTree::distance_matrix() const {
  const auto labels = backbone.labels();
  std::vector<std::vector<double>> d(labels.size(),
                                     std::vector<double>(labels.size(), 0.0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto dist = backbone_distances(*this, *backbone.node_of(labels[i]));
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      d[i][j] = d[j][i] = dist[static_cast<std::size_t>(*backbone.node_of(labels[j]))];
    }
  }
  return d;
}

CoupledTree couple(int n, Rng& rng, std::size_t n_grid) {
  if (n < 3) throw DomainError("couple: need at least 3 leaves");
  CoupledTree c;
  c.backbone = sample_uniform(n, rng);
  c.edges = c.backbone.edges();
  std::vector<double> half(c.edges.size(), 0.5);
  const auto w = sample_dirichlet(half, rng);
  c.weights.assign(w.weights().begin(), w.weights().end());
  c.pieces.reserve(c.edges.size());
  const std::uint64_t key = rng();
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    Rng sub(derive_seed(key, i));
    c.pieces.push_back(sample_excursion(n_grid, sub));
    const auto a = sample_point(c.pieces.back(), sub);
    const auto b = sample_point(c.pieces.back(), sub);
    c.ends.emplace_back(a, b);
  }
  return c;
}

GluedSample glue_coupling(int n, Rng& rng, std::size_t n_grid) {
  if (n < 3 || n > 64) throw DomainError("glue_coupling: n must lie in [3, 64]");
  GluedSample g{couple(n, rng, n_grid), {}};
  g.distances = g.tree.distance_matrix();
  return g;
}

// ---------------------------------------------------------------- regions

namespace {

struct PieceCuts {
  std::vector<std::size_t> taus;
};

bool below(const ExcursionTree& e, std::size_t s, std::size_t tau) {
  return e.min(std::min(s, tau), std::max(s, tau)) >= e[tau];
}

}  // namespace

RegionCount leaf_region_counts(const CoupledTree& c,
                               std::span<const PiecePoint> cuts,
                               PiecePoint anchor) {
  if (cuts.size() > 2) throw DomainError("leaf_region_counts: at most two cuts");
  auto check_point = [&](const PiecePoint& p) {
    if (p.piece >= c.pieces.size() || p.time >= c.pieces[p.piece].grid()) {
      throw DomainError("leaf_region_counts: point outside the tree");
    }
  };
  for (const auto& p : cuts) check_point(p);
  check_point(anchor);
  if (cuts.size() == 2 && cuts[0].piece == cuts[1].piece &&
      cuts[0].time == cuts[1].time) {
    throw DomainError("leaf_region_counts: duplicate cut");
  }
  for (const auto& p : cuts) {
    if (p.piece == anchor.piece && p.time == anchor.time) return {0, 0.0};
  }

  const std::size_t m = c.pieces.size();
  std::vector<PieceCuts> per(m);
  for (const auto& p : cuts) per[p.piece].taus.push_back(p.time);

  // Graph nodes: backbone vertices, then 4 part slots per piece.
  const std::size_t nv = c.backbone.node_count();
  auto part_node = [&](std::size_t piece, unsigned mask) {
    return nv + 4 * piece + mask;
  };
  // Part of a piece: bit k set iff the grid point descends from cut k.
  auto mask_of = [&](std::size_t piece, std::size_t s) {
    unsigned mask = 0;
    const auto& taus = per[piece].taus;
    for (std::size_t k = 0; k < taus.size(); ++k) {
      if (below(c.pieces[piece], s, taus[k])) mask |= 1u << k;
    }
    return mask;
  };
  auto is_cut = [&](std::size_t piece, std::size_t s) {
    const auto& taus = per[piece].taus;
    return std::find(taus.begin(), taus.end(), s) != taus.end();
  };

  std::vector<std::vector<std::size_t>> adj(nv + 4 * m);
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (std::size_t i = 0; i < m; ++i) {
    const std::pair<std::size_t, NodeId> glue[2] = {
        {c.ends[i].first, c.edges[i].u}, {c.ends[i].second, c.edges[i].v}};
    if (per[i].taus.empty()) {
      link(part_node(i, 0), static_cast<std::size_t>(glue[0].second));
      link(part_node(i, 0), static_cast<std::size_t>(glue[1].second));
      continue;
    }
    for (const auto& [s, v] : glue) {
      if (!is_cut(i, s)) link(part_node(i, mask_of(i, s)), static_cast<std::size_t>(v));
    }
  }

  std::vector<bool> in(adj.size(), false);
  const std::size_t start = part_node(anchor.piece, mask_of(anchor.piece, anchor.time));
  std::queue<std::size_t> q;
  q.push(start);
  in[start] = true;
  while (!q.empty()) {
    const auto x = q.front();
    q.pop();
    for (auto y : adj[x]) {
      if (!in[y]) in[y] = true, q.push(y);
    }
  }

  RegionCount out{0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = c.pieces[i];
    const double unit = c.weights[i] / static_cast<double>(p.grid());
    if (per[i].taus.empty()) {
      if (in[part_node(i, 0)]) out.mass += c.weights[i];
      continue;
    }
    std::size_t inside = 0;
    for (std::size_t s = 0; s < p.grid(); ++s) {
      if (!is_cut(i, s) && in[part_node(i, mask_of(i, s))]) ++inside;
    }
    out.mass += unit * static_cast<double>(inside);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = c.edges[i];
    for (auto [s, v] : {std::pair{c.ends[i].first, e.u}, std::pair{c.ends[i].second, e.v}}) {
      if (c.backbone.label(v) == kNoLabel || is_cut(i, s)) continue;
      const bool inside = per[i].taus.empty() ? in[part_node(i, 0)]
                                              : in[part_node(i, mask_of(i, s))];
      out.leaves += inside;
    }
  }
  return out;
}

void write_distance_csv(const std::vector<std::vector<double>>& d,
                        std::ostream& out) {
  char buf[32];
  for (const auto& row : d) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace mastlab
