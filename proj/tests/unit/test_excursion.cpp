#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "mastlab/error.hpp"
#include "mastlab/excursion.hpp"
#include "mastlab/stats.hpp"

using namespace mastlab;

namespace {

double naive_diameter(const ExcursionTree& e) {
  double best = 0.0;
  const auto v = e.values();
  for (std::size_t s = 0; s < v.size(); ++s) {
    double m = v[s];
    for (std::size_t t = s; t < v.size(); ++t) {
      m = std::min(m, v[t]);
      best = std::max(best, v[s] + v[t] - 2 * m);
    }
  }
  return best;
}

ExcursionTree tent(std::size_t n, double h) {
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k) / n;
    v[k] = h * (1.0 - std::abs(2.0 * x - 1.0));
  }
  v[0] = v[n] = 0.0;
  return ExcursionTree(v);
}

}  // namespace

TEST_CASE("range minimum matches a scan") {
  Rng rng(1);
  for (std::size_t n : {1u, 5u, 16u, 17u, 100u, 1000u}) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform();
    RangeMin r(v);
    for (int q = 0; q < 2000; ++q) {
      auto a = rng.below(n), b = rng.below(n);
      if (a > b) std::swap(a, b);
      CHECK(r.min(a, b) == *std::min_element(v.begin() + a, v.begin() + b + 1));
    }
  }
  RangeMin r({1.0, 2.0});
  CHECK_THROWS_AS(r.min(1, 0), DomainError);
  CHECK_THROWS_AS(r.min(0, 2), DomainError);
}

TEST_CASE("excursion validity") {
  Rng rng(2);
  auto e = sample_excursion(1 << 10, rng);
  CHECK(e.grid() == 1024);
  CHECK(e[0] == 0.0);
  CHECK(e[1024] == 0.0);
  for (double x : e.values()) CHECK(x >= 0.0);
  CHECK_THROWS_AS(sample_excursion(1000, rng), DomainError);
  CHECK_THROWS_AS(sample_excursion(128, rng), DomainError);
  CHECK_THROWS_AS(ExcursionTree({0.0, -1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(ExcursionTree({0.0, 1.0, 0.5}), DomainError);
  Rng a(3), b(3);
  CHECK(sample_excursion(256, a).values()[100] == sample_excursion(256, b).values()[100]);
}

TEST_CASE("pseudo-metric axioms") {
  Rng rng(4);
  auto e = sample_excursion(1 << 12, rng);
  int violations = 0;
  for (int i = 0; i < 100000; ++i) {
    auto s = rng.below(4097), t = rng.below(4097), u = rng.below(4097);
    const double st = tree_distance(e, s, t);
    REQUIRE(st == tree_distance(e, t, s));
    REQUIRE(st >= 0.0);
    violations += st > tree_distance(e, s, u) + tree_distance(e, u, t) + 1e-12;
  }
  CHECK(violations == 0);
  CHECK(tree_distance(e, 7, 7) == 0.0);
  CHECK_THROWS_AS(tree_distance(e, 0, 4097), DomainError);
}

TEST_CASE("diameter") {
  std::vector<double> zero(257, 0.0);
  CHECK(diameter(ExcursionTree(zero)) == 0.0);
  CHECK(diameter(tent(256, 0.7)) == doctest::Approx(0.7));
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    auto e = sample_excursion(256, rng);
    const double d = diameter(e);
    CHECK(d == doctest::Approx(naive_diameter(e)).epsilon(1e-12));
    CHECK(d >= *std::max_element(e.values().begin(), e.values().end()));
  }
}

TEST_CASE("resolution stability of the maximum") {
  Rng rng(6);
  RunningStats coarse, fine;
  for (int i = 0; i < 3000; ++i) {
    auto a = sample_excursion(1 << 11, rng);
    auto b = sample_excursion(1 << 13, rng);
    coarse.add(*std::max_element(a.values().begin(), a.values().end()));
    fine.add(*std::max_element(b.values().begin(), b.values().end()));
  }
  CHECK(std::abs(coarse.mean() / fine.mean() - 1.0) < 0.02);
}

TEST_CASE("holder modulus stays bounded") {
  Rng rng(7);
  RunningStats a, b;
  for (int i = 0; i < 20; ++i) {
    a.add(holder_modulus(sample_excursion(1 << 12, rng), 0.45, 64));
    b.add(holder_modulus(sample_excursion(1 << 13, rng), 0.45, 128));
  }
  CHECK(b.mean() < 1.1 * a.mean() + 3 * (a.standard_error() + b.standard_error()));
}

TEST_CASE("glued coupling") {
  Rng rng(8);
  auto g = glue_coupling(6, rng, 256);
  const auto& d = g.distances;
  REQUIRE(d.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(d[i][i] == 0.0);
    for (std::size_t j = 0; j < 6; ++j) CHECK(d[i][j] == d[j][i]);
  }
  double mass = 0;
  for (double w : g.tree.weights) mass += w;
  CHECK(std::abs(mass - 1.0) < 1e-12);
  CHECK(g.tree.pieces.size() == 9);
  CHECK(g.tree.leaf_distance(2, 5) == doctest::Approx(d[1][4]));
  // Four-point condition of a tree metric.
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c)
        for (int e = 0; e < 6; ++e) {
          double s[3] = {d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]};
          std::sort(s, s + 3);
          CHECK(s[2] - s[1] < 1e-12);
        }
  CHECK_THROWS_AS(glue_coupling(65, rng, 256), DomainError);
  CHECK_THROWS_AS(glue_coupling(2, rng, 256), DomainError);
  std::ostringstream os;
  write_distance_csv(d, os);
  const auto text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}

TEST_CASE("continuum regions") {
  Rng rng(9);
  auto c = couple(12, rng, 256);
  auto whole = leaf_region_counts(c, {}, {0, 5});
  CHECK(whole.leaves == 12);
  CHECK(whole.mass == doctest::Approx(1.0));
  std::vector<PiecePoint> cut{{3, 40}};
  CHECK(leaf_region_counts(c, cut, {3, 40}).leaves == 0);
  CHECK(leaf_region_counts(c, cut, {3, 40}).mass == 0.0);
  CHECK_THROWS_AS(leaf_region_counts(c, cut, {99, 0}), DomainError);

  // One cut: the two sides partition the tree minus the cut point.
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t i = rng.below(c.pieces.size());
    const std::size_t tau = 1 + rng.below(254);
    const auto& p = c.pieces[i];
    std::size_t inside = 0, outside = 0;
    for (std::size_t s = 0; s < 256; ++s) {
      if (s == tau) continue;
      (p.min(std::min(s, tau), std::max(s, tau)) >= p[tau] ? inside : outside) = s;
    }
    std::vector<PiecePoint> one{{i, tau}};
    auto a = leaf_region_counts(c, one, {i, inside});
    auto b = leaf_region_counts(c, one, {i, outside});
    if (std::abs(a.mass - b.mass) < 1e-15 && a.leaves == b.leaves) continue;
    const bool mark_cut = c.ends[i].first == tau || c.ends[i].second == tau;
    if (mark_cut) continue;
    ++checked;
    CHECK(a.mass + b.mass == doctest::Approx(1.0 - c.weights[i] / 256));
    CHECK(a.leaves + b.leaves == 12);
  }
  CHECK(checked > 20);
}

TEST_CASE("comparison inequality at n=512") {
  // #R <= n^eps or n^(1+eps)|R| should fail only rarely.
  Rng rng(10);
  const int n = 512;
  const double eps = 0.1;
  int bad_trees = 0;
  const int trees = 10;
  for (int t = 0; t < trees; ++t) {
    auto c = couple(n, rng, 256);
    bool bad = false;
    for (int r = 0; r < 100; ++r) {
      std::vector<PiecePoint> cuts;
      const auto k = 1 + rng.below(2);
      for (std::size_t j = 0; j < k; ++j)
        cuts.push_back({rng.below(c.pieces.size()), rng.below(256)});
      if (k == 2 && cuts[0].piece == cuts[1].piece && cuts[0].time == cuts[1].time)
        cuts.pop_back();
      PiecePoint anchor{rng.below(c.pieces.size()), rng.below(256)};
      auto rc = leaf_region_counts(c, cuts, anchor);
      const double bound = std::max(std::pow(n, eps), std::pow(n, 1 + eps) * rc.mass);
      bad |= rc.leaves > bound;
    }
    bad_trees += bad;
  }
  CHECK(bad_trees <= trees / 10);
}
