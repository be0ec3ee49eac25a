#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtangle/flow.hpp"
#include "dtangle/tangle.hpp"

namespace dtangle {

// Pairwise intersecting, strongly connected vertex sets. Elements are kept
// deduplicated by vertex set.
struct Bramble {
  std::vector<VertexSet> elements;
};

// First violated invariant (non-strongly-connected or disjoint pair), if any.
std::optional<std::string> validate_bramble(const Digraph& g, const Bramble& b);

struct BrambleOrder {
  int order = 0;
  VertexSet cover;  // a minimum hitting set
};

// Exact minimum hitting set by branch and bound: branch on the vertices of a
// smallest unhit element, prune against the incumbent. Throws
// PreconditionError on an invalid bramble and SizeGuardError when the search
// exceeds `max_nodes`.
BrambleOrder bramble_order(const Digraph& g, const Bramble& b,
                           std::size_t max_nodes = 5'000'000);

// The canonical bramble {C(X) : |X| < k}, deduplicated.
Bramble bramble_from_tangle(const Digraph& g, const Tangle& t);

// Tangle of order floor(k/3) orienting each separation toward the component
// of G - sep that hosts bramble elements. Throws PreconditionError when the
// bramble's certified order is below k.
Tangle tangle_from_bramble(const Digraph& g, const Bramble& b, int k);

// For all equal-size A, B c W: |A| disjoint A->B paths in G - (W \ (A u B)).
bool is_well_linked(const Digraph& g, const VertexSet& w);

std::vector<VertexSet> enumerate_well_linked_sets(const Digraph& g, int m,
                                                  std::size_t max_candidates = 2'000'000);

// Minimum separation between two covers (both directions), returned when its
// order is at most 3k-3.
std::optional<DirectedSeparation> distinguish_brambles(const Digraph& g,
                                                       const VertexSet& cover1,
                                                       const VertexSet& cover2, int k);

}  // namespace dtangle
