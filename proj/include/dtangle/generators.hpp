#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dtangle/digraph.hpp"
#include "dtangle/tangle.hpp"

namespace dtangle {

using Rng = std::mt19937_64;

// Bidirected complete digraph on n vertices named prefix1..prefixn.
Digraph bidirected_clique(int n, const std::string& prefix = "v");

// Each ordered pair independently with probability p.
Digraph random_digraph(int n, double p, Rng& rng);

// Cluster graph: bidirected cliques plus explicit inter-cluster edges.
// Vertex (c, i) is named <name_c><i+1>.
struct ClusterSpec {
  struct Cluster {
    std::string name;
    int size = 0;
  };
  struct Link {
    int from_cluster = 0, from_index = 0;
    int to_cluster = 0, to_index = 0;
  };
  std::vector<Cluster> clusters;
  std::vector<Link> links;
  int tangle_order = 0;  // order of each emitted cluster tangle
};

struct ClusterGraph {
  Digraph graph;
  std::vector<VertexSet> clusters;
  TangleSet tangles;  // cover-backed, one per cluster
};

ClusterGraph gen_clusters(const ClusterSpec& spec);

// Random spec: `count` clusters of the given size joined by `links` random
// one-way edges, each tangle of order `order`.
ClusterSpec random_cluster_spec(int count, int size, int links, int order, Rng& rng);

// Five bidirected 7-cliques A..E wired so that rank 1
// holds A, D, E and rank 2 holds B, C at order 2. Cluster order A..E.
ClusterSpec five_cluster_spec();

// Four bidirected 8-cliques p, q, r, s. T_p splits off at order 1; the only
// order-2 minimum distinguishers split {p,q}|{r,s} and {p,r}|{q,s}, so no
// tree can have every path edge distinguish its endpoints.
ClusterSpec no_uncross_spec();

// Two cones {a,b} and {c,d} of 7-cliques: order 1 between the cones, order 2
// inside each.
ClusterSpec two_cones_spec();

// Five bidirected 8-cliques r..v, all pairs distinguished at order 2. T_u has
// two independent parents T_s and T_t in the reduced descendant digraph, so
// the uniform construction performs a merge step.
ClusterSpec merge_cluster_spec();

}  // namespace dtangle
