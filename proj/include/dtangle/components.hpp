#pragma once

#include <vector>

#include "dtangle/digraph.hpp"

namespace dtangle {

// Strong components of g restricted to `allowed` (all vertices when null),
// sorted by smallest member id.
std::vector<VertexSet> strong_components(const Digraph& g,
                                         const VertexSet* allowed = nullptr);

// The component dag D(G, X): strong components of G - X with an edge C_i -> C_j
// whenever some edge of G runs from C_i to C_j. Heights are longest outgoing
// path lengths, so sinks have height 0.
class ComponentDag {
 public:
  ComponentDag(const Digraph& g, const VertexSet& x);

  int size() const { return static_cast<int>(components_.size()); }
  const std::vector<VertexSet>& components() const { return components_; }
  const VertexSet& component(int i) const { return components_[i]; }
  const std::vector<int>& out(int i) const { return out_[i]; }
  const std::vector<int>& in(int i) const { return in_[i]; }
  int height(int i) const { return height_[i]; }
  // Component index of v, or -1 for v in X.
  int component_of(Vertex v) const { return comp_of_[v]; }

  // C_1 < ... < C_l by increasing height (ties by smallest member id), so
  // C_1 is a sink and C_l a source.
  const std::vector<int>& topo_order() const { return topo_; }
  // Position of component i in topo_order().
  int topo_index(int i) const { return topo_pos_[i]; }

  // A set of component indices is downwards closed when it is closed under
  // out-neighbours in the dag.
  bool is_downwards_closed(const std::vector<bool>& members) const;
  bool is_upwards_closed(const std::vector<bool>& members) const;

  // The recursive lexicographic order on component subsets: A precedes B when
  // min(A) < min(B) in topo order, or the minima agree and the remainders
  // compare that way. An exhausted set counts as having an infinite minimum.
  bool lex_less(const std::vector<bool>& a, const std::vector<bool>& b) const;

  // Union of the given components' vertices.
  VertexSet vertices_of(const std::vector<bool>& members) const;

  // Calls f(members) for every downwards closed subset (including empty and
  // full). Returns false early if f returns false.
  template <typename F>
  bool for_each_downwards_closed(F&& f) const;

 private:
  template <typename F>
  bool enumerate(std::size_t pos, std::vector<bool>& members, F& f) const;

  std::vector<VertexSet> components_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> height_, comp_of_, topo_, topo_pos_;
};

template <typename F>
bool ComponentDag::for_each_downwards_closed(F&& f) const {
  std::vector<bool> members(components_.size(), false);
  return enumerate(0, members, f);
}

// Decide membership in topo order (sinks first): a component may join only
// when all of its out-neighbours already joined.
template <typename F>
bool ComponentDag::enumerate(std::size_t pos, std::vector<bool>& members,
                             F& f) const {
  if (pos == topo_.size()) return f(static_cast<const std::vector<bool>&>(members));
  int c = topo_[pos];
  if (!enumerate(pos + 1, members, f)) return false;
  bool ok = true;
  for (int d : out_[c])
    if (!members[d]) ok = false;
  if (!ok) return true;
  members[c] = true;
  bool cont = enumerate(pos + 1, members, f);
  members[c] = false;
  return cont;
}

}  // namespace dtangle
