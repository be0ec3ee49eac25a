#pragma once

#include <optional>
#include <vector>

#include "dtangle/separation.hpp"

namespace dtangle {

using Path = std::vector<Vertex>;

// Unit vertex-capacity flow from a source set to a sink set inside the
// vertices of `allowed` (all vertices when null). A vertex in both sets
// carries a zero-length path.
struct VertexFlow {
  int value = 0;
  std::vector<Path> paths;  // vertex-disjoint source -> sink paths
  // Minimum cut closest to the sinks: the separation (X+ -> X-) with the
  // sinks in X+ and the sources in X-. Only filled when `allowed` is null.
  DirectedSeparation cut;
  bool saturated = false;  // stopped because value reached the limit
};

VertexFlow vertex_disjoint_paths(const Digraph& g, const VertexSet& sources,
                                 const VertexSet& sinks, int limit,
                                 const VertexSet* allowed = nullptr);

// Minimum-order separation X with t in X+ and s in X-, or nullopt when the
// flow value reaches `bound`. `flow_value` receives the flow value reached.
std::optional<DirectedSeparation> min_separation(const Digraph& g,
                                                 const VertexSet& s,
                                                 const VertexSet& t, int bound,
                                                 int* flow_value = nullptr);

// Drops the closed sub-walks of a walk, leaving a path with the same ends
// that uses a subset of its vertices.
Path shortcut(const Path& walk);

// Largest number of paths sharing one vertex.
int congestion(const std::vector<Path>& paths);

}  // namespace dtangle
