#include <doctest.h>

#include <algorithm>
#include <vector>

#include "mastlab/cladogram.hpp"
#include "mastlab/error.hpp"
#include "mastlab/mast.hpp"
#include "mastlab/newick.hpp"

using namespace mastlab;

namespace {

void check_witness(const Cladogram& a, const Cladogram& b, const MastResult& r) {
  CHECK(r.witness.size() == r.size);
  CHECK(std::is_sorted(r.witness.begin(), r.witness.end()));
  CHECK(canonical_form(induced_subtree(a, r.witness)) ==
        canonical_form(induced_subtree(b, r.witness)));
}

// Relabels t by a permutation of 1..n so the second tree has its own labels.
Cladogram relabel(const Cladogram& t, const std::vector<Label>& perm) {
  Cladogram::Builder b;
  for (NodeId v = 0; v < static_cast<NodeId>(t.node_count()); ++v) {
    auto l = t.label(v);
    b.add_node(l == kNoLabel ? kNoLabel : perm[static_cast<std::size_t>(l)]);
  }
  for (auto e : t.edges()) b.add_edge(e.u, e.v);
  return b.build();
}

}  // namespace

TEST_CASE("mast basics") {
  auto q1 = parse_newick("((1,2),(3,4));");
  auto q2 = parse_newick("((1,3),(2,4));");
  CHECK(mast(q1, q1).size == 4);
  auto r = mast(q1, q2);
  CHECK(r.size == 3);
  check_witness(q1, q2, r);
  CHECK(mast_bruteforce(q1, q2).size == 3);

  std::vector<Label> fwd{1, 2, 3, 4, 5}, rev{5, 4, 3, 2, 1};
  auto c1 = Cladogram::caterpillar(fwd), c2 = Cladogram::caterpillar(rev);
  CHECK(mast_bruteforce(c1, c2).size == 5);
  CHECK(mast(c1, c2).size == 5);

  auto d = parse_newick("((7,8),(9,10));");
  CHECK(mast(q1, d).size == 0);
  CHECK(mast(q1, d).witness.empty());
  CHECK(mast_bruteforce(q1, d).size == 0);
}

TEST_CASE("mast degenerate inputs") {
  Cladogram empty;
  auto one = Cladogram::single_leaf(1);
  auto q = parse_newick("((1,2),(3,4));");
  CHECK(mast(empty, q).size == 0);
  CHECK(mast(one, q).size == 1);
  CHECK(mast(one, one).witness == std::vector<Label>{1});
  auto pair = parse_newick("(2,3);");
  CHECK(mast(pair, q).size == 2);
}

TEST_CASE("mast equals brute force on B_5 x B_5") {
  auto all = enumerate_cladograms(5);
  int bad = 0;
  for (const auto& a : all)
    for (const auto& b : all) {
      auto r = mast(a, b);
      check_witness(a, b, r);
      bad += r.size != mast_bruteforce(a, b).size;
    }
  CHECK(bad == 0);
}

TEST_CASE("mast equals brute force on random pairs") {
  Rng rng(99);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 8;
    auto a = sample_uniform(n, rng), b = sample_uniform(n, rng);
    auto r = mast(a, b);
    check_witness(a, b, r);
    CHECK(r.size == mast_bruteforce(a, b).size);
    CHECK(mast(b, a).size == r.size);
  }
}

TEST_CASE("mast with partially shared labels") {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    auto a = sample_uniform(9, rng);
    std::vector<Label> perm(20);
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Label>(i);
    // Labels 1..9 of b map to a random subset of 1..14.
    for (std::size_t i = 1; i < 15; ++i) std::swap(perm[i], perm[1 + rng.below(14)]);
    auto b = relabel(sample_uniform(9, rng), perm);
    auto r = mast(a, b);
    check_witness(a, b, r);
    CHECK(r.size == mast_bruteforce(a, b).size);
  }
}

TEST_CASE("mast properties") {
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    auto a = sample_uniform(16, rng), b = sample_uniform(16, rng);
    auto full = mast(a, b);
    CHECK(full.size >= 3);
    check_witness(a, b, full);
    CHECK(is_agreement_set(a, b, full.witness));
    std::vector<Label> J;
    for (Label l = 1; l <= 16; ++l)
      if (rng.below(2)) J.push_back(l);
    auto sub = mast(induced_subtree(a, J), induced_subtree(b, J));
    CHECK(sub.size <= full.size);
  }
}

TEST_CASE("mast on regions") {
  Rng rng(21);
  for (int rep = 0; rep < 60; ++rep) {
    auto a = sample_uniform(30, rng), b = sample_uniform(30, rng);
    auto pick = [&](const Cladogram& t) {
      std::vector<NodeId> inner;
      for (NodeId v = 0; v < static_cast<NodeId>(t.node_count()); ++v)
        if (t.degree(v) == 3) inner.push_back(v);
      std::vector<NodeId> bd{inner[rng.below(inner.size())]};
      auto parts = regions_around(t, bd);
      return parts[rng.below(parts.size())];
    };
    auto ra = pick(a), rb = pick(b);
    auto la = ra.labels(), lb = rb.labels();
    std::vector<Label> common;
    std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                          std::back_inserter(common));
    auto r = mast_regions(ra, rb);
    if (common.size() <= 14) {
      CHECK(r.size == mast_bruteforce(ra.tree, rb.tree).size);
    }
    CHECK(r.size <= common.size());
  }
  auto w = whole_region(parse_newick("((1,2),(3,4));"));
  CHECK(mast_regions(w, w).size == 4);
}

TEST_CASE("brute force guard") {
  Rng rng(1);
  auto a = sample_uniform(21, rng);
  CHECK_THROWS_AS(mast_bruteforce(a, a), DomainError);
}

TEST_CASE("mast scales to a thousand leaves") {
  Rng rng(8);
  auto a = sample_uniform(1024, rng);
  CHECK(mast(a, a).size == 1024);
  auto b = sample_uniform(1024, rng);
  auto r = mast(a, b);
  check_witness(a, b, r);
}
