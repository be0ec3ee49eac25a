#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtangle/labelling.hpp"

namespace dtangle {

// Arborescence stored by parent pointers. guards[t] is the guard of the edge
// into t and is empty for the root.
struct DirectedTreeDecomposition {
  int root = 0;
  std::vector<int> parent;
  std::vector<VertexSet> bags;
  std::vector<VertexSet> guards;

  int num_nodes() const { return static_cast<int>(parent.size()); }
  std::vector<std::vector<int>> children() const;
  // Union of the bags in the subtree of t.
  VertexSet subtree_bags(int t) const;
  // Gamma(t): bag plus the guards of all incident edges.
  VertexSet gamma(int t) const;
  // Appends a node and returns its id.
  int add_node(int parent, VertexSet bag, VertexSet guard);
};

// Trivial decomposition: one node holding V(G).
DirectedTreeDecomposition trivial_decomposition(const Digraph& g);

struct DtdViolation {
  enum class Kind { NotArborescence, NotPartition, GuardedSetMeetsGuard, EscapingWalk, NotStrong }
      kind;
  int node = -1;
  Vertex vertex = -1;
  std::vector<Vertex> walk;  // for EscapingWalk: leaves the subtree and returns
  std::string detail;
};

enum class DtdMode {
  Strict,   // every subtree spans exactly one strong component of G - guard
  Relaxed,  // a union of strong components no walk in G - guard leaves and re-enters
};

std::optional<DtdViolation> verify_dtd(const Digraph& g, const DirectedTreeDecomposition& d,
                                       DtdMode mode = DtdMode::Strict);

// max |Gamma(t)| - 1.
int width(const DirectedTreeDecomposition& d);
// max |guard|.
int edge_width(const DirectedTreeDecomposition& d);

// Splits every subtree that spans several strong components of G - guard into
// one copy per component, top down. Guards are kept. origin[t] is the node of
// d that t copies.
DirectedTreeDecomposition make_nice(const Digraph& g, const DirectedTreeDecomposition& d,
                                    std::vector<int>* origin = nullptr);

struct DecompositionForTangles {
  DirectedTreeDecomposition dtd;  // (L', bags, omega)
  std::vector<int> tau;           // tangle index -> node
  // Labelling separation on the edge into a node, for edges of the labelling.
  std::vector<std::optional<LabelledEdge>> labels;

  int edge_width() const { return dtangle::edge_width(dtd); }
};

// Facts checked while building; for a correct construction each
// list stays empty.
struct DecompositionTrace {
  std::vector<int> order;                 // labelling nodes in DFS pre-order
  std::vector<VertexSet> boundary;        // per labelling node, empty for the root
  std::vector<std::vector<int>> resolvants;
  std::vector<std::pair<int, int>> asymmetric_conflicts;    // (j, l): l in kappa(B_j) only
  std::vector<std::pair<int, int>> independent_conflicts;   // left in the final system
  std::vector<std::pair<int, int>> dependent_violations;    // ancestor pairs left in conflict
  std::vector<std::pair<int, int>> resolved;                // (j, p(t_j))
  int split_nodes = 0;  // nodes added when the result needed make_nice
};

// Extends a labelling whose edges all have order <= k to a decomposition of
// edge-width <= k^2 + 2k. Node i of the labelling becomes node i of the
// result; new sibling nodes follow.
DecompositionForTangles decomposition_from_labelling(const Digraph& g, const TreeLabelling& lab,
                                                     int k, DecompositionTrace* trace = nullptr);

struct DistinguishingViolation {
  enum class Kind { Labelling, Decomposition, SeparatorNotGuarded } kind;
  int node = -1;
  std::string detail;
};

// The three conditions of a decomposition distinguishing ts.
std::optional<DistinguishingViolation> verify_distinguishing(
    const Digraph& g, const DecompositionForTangles& d, const TangleSet& ts,
    const EnumerationLimits& limits = {});

}  // namespace dtangle
