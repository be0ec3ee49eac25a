#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtangle/vertex_set.hpp"

namespace dtangle {

using Edge = std::pair<Vertex, Vertex>;

// Immutable simple digraph on vertices 0..n-1. Vertex ids are assigned in
// input order and carry an optional external name. No self-loops, no
// parallel edges.
class Digraph {
 public:
  Digraph() = default;

  // Builds from an edge list. Duplicate edges collapse; self-loops throw
  // PreconditionError. Names default to the decimal id.
  Digraph(int n, const std::vector<Edge>& edges,
          std::vector<std::string> names = {});

  int num_vertices() const { return static_cast<int>(out_.size()); }
  std::size_t num_edges() const { return num_edges_; }

  const std::vector<Vertex>& out(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in(Vertex v) const { return in_[v]; }
  bool has_edge(Vertex u, Vertex v) const;
  std::vector<Edge> edges() const;

  const std::string& name(Vertex v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find(std::string_view name) const;

  VertexSet empty_set() const { return VertexSet(out_.size()); }
  VertexSet all() const { return VertexSet::full(out_.size()); }

  // Edges reversed; names and ids preserved.
  Digraph reversed() const;

 private:
  std::vector<std::vector<Vertex>> out_, in_;
  std::vector<std::string> names_;
  std::map<std::string, Vertex, std::less<>> index_;
  std::size_t num_edges_ = 0;
};

// Induced subgraph with id maps in both directions (-1 where absent).
struct InducedSubgraph {
  Digraph graph;
  std::vector<Vertex> to_parent;
  std::vector<Vertex> from_parent;
};

InducedSubgraph induced_subgraph(const Digraph& g, const VertexSet& keep);

// Graph JSON ({"vertices": [...], "edges": [[t,h],...]}) or edge-list text
// ("tail head" per line). Throws ParseError naming the offending token.
Digraph parse_digraph(std::string_view text);

// G - v plus v_in -> v_out; in-edges of v enter v_in, out-edges leave v_out.
// The new vertices take ids n-1 (v_in) and n (v_out) after the remaining
// vertices, which keep their relative order.
struct SplitResult {
  Digraph graph;
  Vertex v_in = -1;
  Vertex v_out = -1;
  std::vector<Vertex> from_parent;  // old id -> new id (-1 for v)
};
SplitResult split_vertex(const Digraph& g, Vertex v);

// Replaces each planned edge (u,v) by a fresh directed path of the given
// length (number of edges). Fresh vertices are appended in edge order.
Digraph subdivide(const Digraph& g, const std::map<Edge, int>& plan);

std::string to_dot(const Digraph& g);

}  // namespace dtangle
