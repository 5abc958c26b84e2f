#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "mastlab/cladogram.hpp"
#include "mastlab/rng.hpp"

namespace mastlab {

// Range-minimum over a fixed array: per-block minima of 16 entries plus a
// sparse table over blocks. O(N) memory, queries scan at most two partial
// blocks.
class RangeMin {
 public:
  RangeMin() = default;
  explicit RangeMin(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  // Minimum of values[lo..hi], inclusive, lo <= hi < size().
  double min(std::size_t lo, std::size_t hi) const;

 private:
  static constexpr std::size_t kBlock = 16;
  double scan(std::size_t lo, std::size_t hi) const;
  std::vector<double> values_;
  std::vector<std::vector<double>> sparse_;  // sparse_[k][b]: blocks b..b+2^k-1
};

// Excursion on the grid 0, 1/N, ..., 1; e_0 = e_N = 0 and e >= 0. Grid
// points 0..N-1 carry mass 1/N each (N and 0 are the same point of the tree).
class ExcursionTree {
 public:
  ExcursionTree() = default;
  explicit ExcursionTree(std::vector<double> values);

  std::size_t grid() const noexcept { return rmq_.size() - 1; }  // N
  std::span<const double> values() const noexcept { return rmq_.values(); }
  double operator[](std::size_t i) const { return rmq_.values()[i]; }
  double min(std::size_t lo, std::size_t hi) const { return rmq_.min(lo, hi); }

  // d_e(s,t) = e_s + e_t - 2 min over [s∧t, s∨t].
  double distance(std::size_t s, std::size_t t) const;

 private:
  RangeMin rmq_;
};

// Gaussian bridge on N steps turned into an excursion by the cyclic shift
// at its minimum. N must be a power of two in [2^8, 2^20].
ExcursionTree sample_excursion(std::size_t n_grid, Rng& rng);

double tree_distance(const ExcursionTree& e, std::size_t s, std::size_t t);

// max over grid pairs of d_e, in one pass: for s <= u <= t,
// e_s - 2 e_u + e_t is maximized by u at the argmin of [s, t].
double diameter(const ExcursionTree& e);

// max over 0 < |s - t| <= max_lag of |e_s - e_t| / (|s - t| / N)^exponent.
double holder_modulus(const ExcursionTree& e, double exponent,
                      std::size_t max_lag);

// Uniform grid point under the mass measure.
std::size_t sample_point(const ExcursionTree& e, Rng& rng);

// Brownian tree glued from 2n-3 bi-pointed pieces along a uniform backbone.
// Piece i sits on backbone edge edges[i] = {u, v}; its marked point ends.first
// is glued at u and ends.second at v. Distances inside piece i are scaled by
// sqrt(weights[i]) and its mass by weights[i].
struct CoupledTree {
  Cladogram backbone;
  std::vector<Edge> edges;  // backbone.edges()
  std::vector<double> weights;
  std::vector<ExcursionTree> pieces;
  std::vector<std::pair<std::size_t, std::size_t>> ends;

  std::size_t leaf_count() const noexcept { return backbone.leaf_count(); }
  // Distance between the marked points of labelled leaves a and b.
  double leaf_distance(Label a, Label b) const;
  // All pairwise leaf distances, labels 1..n in order.
  std::vector<std::vector<double>> distance_matrix() const;
};

// Coupled tree on n >= 3 leaves without the distance matrix; N per piece.
CoupledTree couple(int n, Rng& rng, std::size_t n_grid);

struct GluedSample {
  CoupledTree tree;
  std::vector<std::vector<double>> distances;  // labels 1..n
};

// 3 <= n <= 64.
GluedSample glue_coupling(int n, Rng& rng, std::size_t n_grid);

// A grid point of one piece.
struct PiecePoint {
  std::size_t piece;
  std::size_t time;
};

struct RegionCount {
  std::size_t leaves;  // marked leaf points inside
  double mass;         // grid mass inside
};

// Removes up to two cut points and measures the component containing
// `anchor`. Cutting piece i at time tau separates {s : min e over [s, tau]
// >= e_tau} from the rest of the piece. An anchor on a cut point yields the
// empty region.
RegionCount leaf_region_counts(const CoupledTree& c,
                               std::span<const PiecePoint> cuts,
                               PiecePoint anchor);

void write_distance_csv(const std::vector<std::vector<double>>& d,
                        std::ostream& out);

}  // namespace mastlab
