#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtangle/tangle.hpp"

namespace dtangle {

// Edge of a tree-labelling. Tangles on the head side of the edge take
// head_side of `sep` as their big side.
struct LabelledEdge {
  int tail = 0;
  int head = 0;
  DirectedSeparation sep;
  Side head_side = Side::In;
};

// Node i carries tangle i of the tangle set the labelling was built for.
struct TreeLabelling {
  int num_nodes = 0;
  int root = 0;
  std::vector<LabelledEdge> edges;
  // True when every minimum distinguisher was certified by enumeration.
  bool exact = true;

  int order() const;
};

struct MinDistinguisher {
  DirectedSeparation sep;
  bool exact = false;  // minimality certified by enumeration
};

// Minimum-order separation oriented differently by t1 and t2. Tries a
// min-cut between the covers in both directions, then enumerates every
// separation below the candidate's order when the graph is small enough.
std::optional<MinDistinguisher> min_distinguisher(const Digraph& g, const Tangle& t1,
                                                  const Tangle& t2,
                                                  const EnumerationLimits& limits = {});

// Levels C_1..C_m, one sigma per tangle and the root T_o. The root keeps
// the sigma of its level for reporting; the construction treats it as
// (empty, V) and gives it rank m+1. A tangle left alone in the last level
// has sigma (empty, V).
struct RankAssignment {
  int l = 0;
  std::vector<std::vector<int>> levels;
  std::vector<int> rank;                   // 1-based, per tangle
  std::vector<DirectedSeparation> sigma;   // per tangle
  std::vector<Side> big;                   // side B(T) of sigma(T)
  int root = -1;

  bool outgoing(int t) const { return big[t] == Side::Out; }
};

RankAssignment ranks(const Digraph& g, const TangleSet& ts, int l,
                     const EnumerationLimits& limits = {});

// T' is a descendant of T: T' takes B(T) and T takes A(T').
bool is_descendant(const TangleSet& ts, const RankAssignment& ra, int t, int t_prime);

// Intermediate objects of the uniform construction, for tests and reports.
struct UniformTrace {
  RankAssignment ranks;
  std::vector<std::pair<int, int>> descendant_edges;  // D
  std::vector<std::pair<int, int>> reduced_edges;     // D'
  std::vector<long> conflict_numbers;                 // c(D_0), c(D_1), ...
};

// Labelling with every edge of order exactly l for tangles that are pairwise
// l-distinguishable and (l-1)-indistinguishable.
TreeLabelling build_uniform_labelling(const Digraph& g, const TangleSet& ts, int l,
                                      const EnumerationLimits& limits = {},
                                      UniformTrace* trace = nullptr);

// Labelling of an arbitrary pairwise distinguishable tangle set, combining
// uniform labellings of strict cones level by level.
TreeLabelling build_labelling(const Digraph& g, const TangleSet& ts,
                              const EnumerationLimits& limits = {});

struct LabellingViolation {
  enum class Kind { NotBijective, NotTree, MinimumEdge, UnjustifiedEdge } kind;
  int edge = -1;
  std::pair<int, int> pair{-1, -1};
  std::string detail;
};

// Conditions 1-3 of a tree-labelling; minimum orders come from
// min_distinguisher.
std::optional<LabellingViolation> verify_labelling(const Digraph& g, const TangleSet& ts,
                                                   const TreeLabelling& lab,
                                                   const EnumerationLimits& limits = {});

// Same tree with every edge directed away from `root`; flipped edges get the
// opposite head side.
TreeLabelling reroot(const TreeLabelling& lab, int root);

// Indices of the edges on the tree path between nodes a and b.
std::vector<int> tree_path_edges(const TreeLabelling& lab, int a, int b);

}  // namespace dtangle
