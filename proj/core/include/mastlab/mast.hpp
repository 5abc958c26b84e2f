#pragma once

#include <cstddef>
#include <vector>

#include "mastlab/cladogram.hpp"

namespace mastlab {

struct MastResult {
  std::size_t size = 0;
  std::vector<Label> witness;  // sorted; induces equal trees in both inputs
};

// Maximum agreement subtree of two unrooted binary trees over their common
// labels. Both trees are first restricted to the common labels; then for
// every pair of directed edges (one per tree) the rooted agreement value of
// the two hanging subtrees is filled in by increasing subtree size, and the
// unrooted optimum is the best pair obtained by rooting both trees at the
// same leaf. Time and memory O(n^2) for n common labels.
MastResult mast(const Cladogram& a, const Cladogram& b);

// Exhaustive search over subsets of the common labels, largest first, in
// lexicographic order. At most 20 common labels.
MastResult mast_bruteforce(const Cladogram& a, const Cladogram& b);

// MAST of two regions: only labels present in both regions count.
MastResult mast_regions(const Region& r, const Region& r2);

// True iff `labels` induces the same leaf-labelled tree in a and b.
bool is_agreement_set(const Cladogram& a, const Cladogram& b,
                      std::span<const Label> labels);

// DP table cells for n common labels; the harness budgets against this.
double mast_cost_estimate(std::size_t n);

}  // namespace mastlab
