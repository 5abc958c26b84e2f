#pragma once

#include <string>
#include <string_view>

#include "mastlab/cladogram.hpp"

namespace mastlab {

// Canonical Newick text of an unrooted cladogram: rooted at the internal node
// adjacent to the smallest label (written "(a,B,C);"), leaf names are decimal
// labels, unlabelled leaves have empty names. Identical to canonical_form.
std::string to_newick(const Cladogram& t);

// Accepts rooted or unrooted binary Newick with integer leaf names and
// optional branch lengths (ignored). A degree-2 root is suppressed. Throws
// DomainError on malformed input or non-binary trees.
Cladogram parse_newick(std::string_view text);

}  // namespace mastlab
