#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtangle/flow.hpp"

namespace dtangle {

// Certificate of a cylindrical wall (or grid) inside some host digraph.
// Sequences list every vertex, subdivision vertices included.
struct Wall {
  std::vector<Path> cycles;  // C_1..C_m in cycle order, C_1 outermost
  std::vector<Path> rows1;   // P^1_1..P^1_m, each from C_1 inwards to C_m
  std::vector<Path> rows2;   // P^2_1..P^2_m, each from C_m outwards to C_1

  int order() const { return static_cast<int>(cycles.size()); }
  int num_rows() const { return static_cast<int>(rows1.size() + rows2.size()); }
  // Horizontal path P_r in cyclic order: P_{2b} = P^1_{b+1}, P_{2b+1} = P^2_{b+1}.
  const Path& row(int r) const { return r % 2 == 0 ? rows1[r / 2] : rows2[r / 2]; }
  VertexSet vertices(int n) const;

  friend bool operator==(const Wall&, const Wall&) = default;
};

struct WallInstance {
  Digraph graph;
  Wall wall;
};

// G_k: vertices v<i>_<j> with 1 <= i <= k, 0 <= j < 2k.
WallInstance cylindrical_grid(int k);
// W_k: G_k with every v^i_j, 1 < i < k, split into v<i>_<j>.in -> v<i>_<j>.out.
// Throws PreconditionError for k < 3.
WallInstance cylindrical_wall(int k);
// Subdivides the planned edges (see subdivide) and threads the fresh vertices
// into the certificate.
WallInstance subdivide_wall(const WallInstance& w, const std::map<Edge, int>& plan);

struct WallViolation {
  Vertex vertex = -1;
  std::string detail;
};

// Checks disjointness, that every certified step is an edge of g, that each
// horizontal path meets every cycle in one segment in the right order, the
// cyclic order of the paths around each cycle, and the column partition.
std::optional<WallViolation> validate_wall(const Digraph& g, const Wall& w);

// EC_1..EC_m: EC_i holds C_i and the interior vertices of the horizontal path
// pieces between C_i and C_{i+1}; EC_m = C_m.
std::vector<VertexSet> extended_columns(int n, const Wall& w);

// Cycles C_{first+1}..C_{first+count} with bidirected rows 1..count cut down to
// the part between those cycles.
Wall subwall(const Wall& w, int first, int count);

// Wall of order >= 3k, pairs (s_i, t_i) with every s_i the first vertex and
// every t_i the last vertex of some horizontal path, all 2k distinct. Returns
// k paths s_i -> t_i inside the wall with every vertex on at most two of
// them and every terminal on exactly one.
std::vector<Path> route_in_wall(const Wall& w, const std::vector<std::pair<Vertex, Vertex>>& pairs);

enum class LinkageMode {
  DistinctCycles,  // |a| = k on distinct nested cycles
  DistinctRows,    // |a| = 2k+1 on distinct bidirected horizontal paths
};

// k vertex-disjoint paths inside the wall from a to b, where b lies on P^1_1
// on k distinct cycles and the wall has order >= 2k(k+2).
std::vector<Path> wall_linkage(const Digraph& g, const Wall& w, const VertexSet& a,
                               const VertexSet& b, LinkageMode mode);

// m = k(6k^2 + 2k + 3).
int required_wall_order(int k);

struct RoutingOutcome {
  enum class Kind {
    ShieldsSources,    // sep = (B -> A), order < k, S in A
    ShieldsTerminals,  // sep = (B -> A), order < k, T in B
    Linkage,
  } kind;
  DirectedSeparation sep;
  std::vector<Path> paths;  // Linkage: path i from s_i to t_i, congestion <= 2
};

// Throws PreconditionError when the wall order is below required_wall_order
// or the certificate does not validate in g.
RoutingOutcome route_through_wall(const Digraph& g, const std::vector<Vertex>& s,
                                  const std::vector<Vertex>& t, const Wall& w);

// How much of the wall a shielding separation cuts off: the number of cycles
// and of bidirected horizontal paths meeting `near` (the side holding the
// shielded terminals, separator excluded). The far side keeps a large
// subwall when at most k-1 cycles and 2k rows are met.
struct ShieldReport {
  int cycles_met = 0;
  int rows_met = 0;
  bool keeps_subwall(int k) const { return cycles_met <= k - 1 && rows_met <= 2 * k; }
};
ShieldReport shield_report(const Wall& w, const VertexSet& near);

}  // namespace dtangle
