#include "dtangle/generators.hpp"

#include <set>
#include <utility>

#include "dtangle/error.hpp"

namespace dtangle {

Digraph bidirected_clique(int n, const std::string& prefix) {
  std::vector<Edge> es;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    names.push_back(prefix + std::to_string(i + 1));
    for (int j = 0; j < n; ++j)
      if (i != j) es.emplace_back(i, j);
  }
  return Digraph(n, es, std::move(names));
}

Digraph random_digraph(int n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && coin(rng)) es.emplace_back(i, j);
  return Digraph(n, es);
}

ClusterGraph gen_clusters(const ClusterSpec& spec) {
  std::vector<std::string> names;
  std::vector<int> base;
  for (const auto& c : spec.clusters) {
    if (c.size < 1) throw PreconditionError("cluster " + c.name + " must be nonempty");
    base.push_back(static_cast<int>(names.size()));
    for (int i = 0; i < c.size; ++i) names.push_back(c.name + std::to_string(i + 1));
  }
  const int n = static_cast<int>(names.size());
  std::vector<Edge> es;
  for (std::size_t c = 0; c < spec.clusters.size(); ++c)
    for (int i = 0; i < spec.clusters[c].size; ++i)
      for (int j = 0; j < spec.clusters[c].size; ++j)
        if (i != j) es.emplace_back(base[c] + i, base[c] + j);
  for (const auto& l : spec.links) {
    auto check = [&](int c, int i) {
      if (c < 0 || c >= static_cast<int>(spec.clusters.size()) || i < 0 ||
          i >= spec.clusters[c].size)
        throw PreconditionError("cluster link endpoint out of range");
    };
    check(l.from_cluster, l.from_index);
    check(l.to_cluster, l.to_index);
    if (l.from_cluster == l.to_cluster)
      throw PreconditionError("cluster link must join two different clusters");
    es.emplace_back(base[l.from_cluster] + l.from_index, base[l.to_cluster] + l.to_index);
  }
  ClusterGraph out{Digraph(n, es, std::move(names)), {}, {}};
  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    VertexSet members(n);
    for (int i = 0; i < spec.clusters[c].size; ++i) members.insert(base[c] + i);
    out.clusters.push_back(members);
    out.tangles.push_back(Tangle::from_cover(spec.tangle_order, members, spec.clusters[c].name));
  }
  return out;
}

ClusterSpec random_cluster_spec(int count, int size, int links, int order, Rng& rng) {
  ClusterSpec spec;
  spec.tangle_order = order;
  for (int c = 0; c < count; ++c)
    spec.clusters.push_back({std::string(1, static_cast<char>('A' + c)), size});
  if (count < 2) return spec;
  std::uniform_int_distribution<int> pick_cluster(0, count - 1), pick_index(0, size - 1);
  std::set<std::tuple<int, int, int, int>> seen;
  while (static_cast<int>(spec.links.size()) < links) {
    int a = pick_cluster(rng), b = pick_cluster(rng);
    if (a == b) continue;
    int i = pick_index(rng), j = pick_index(rng);
    if (!seen.emplace(a, i, b, j).second) continue;
    spec.links.push_back({a, i, b, j});
  }
  return spec;
}

ClusterSpec five_cluster_spec() {
  ClusterSpec spec;
  spec.tangle_order = 3;
  for (const char* name : {"a", "b", "c", "d", "e"}) spec.clusters.push_back({name, 7});
  enum { A, B, C, D, E };
  // (cluster, 1-based index) pairs.
  auto link = [&](int c1, int i1, int c2, int i2) {
    spec.links.push_back({c1, i1 - 1, c2, i2 - 1});
  };
  link(A, 4, B, 3);  // A leaves only through a4, a5
  link(A, 5, C, 2);
  link(B, 5, D, 3);  // D is entered only at d2, d3
  link(B, 3, D, 3);
  link(D, 2, B, 5);
  link(D, 4, B, 6);
  link(C, 4, D, 2);
  link(C, 2, D, 2);
  link(D, 3, C, 4);
  link(D, 5, C, 6);
  link(B, 1, A, 1);
  link(C, 1, A, 2);
  link(C, 6, E, 1);  // E is entered only at e1, e2
  link(E, 1, C, 6);
  link(C, 5, E, 2);
  link(E, 2, C, 5);
  link(E, 3, C, 7);  // a third exit from E forces the outgoing orientation
  link(D, 6, A, 3);  // a third entry into A forces the incoming orientation
  link(B, 7, A, 6);  // a third exit from B keeps B out of rank 1
  link(C, 3, B, 3);  // a third exit from C rules out an incoming sigma(T_C)
  return spec;
}

namespace {

// Appends k one-way links from cluster a to cluster b, each on fresh vertices.
void fresh_links(ClusterSpec& spec, std::vector<int>& used, int a, int b, int k) {
  for (int i = 0; i < k; ++i) spec.links.push_back({a, used[a]++, b, used[b]++});
}

}  // namespace

ClusterSpec no_uncross_spec() {
  ClusterSpec spec;
  spec.tangle_order = 3;
  for (const char* name : {"p", "q", "r", "s"}) spec.clusters.push_back({name, 8});
  std::vector<int> used(4, 0);
  fresh_links(spec, used, 0, 1, 1);
  fresh_links(spec, used, 1, 0, 1);
  fresh_links(spec, used, 1, 3, 2);
  fresh_links(spec, used, 2, 3, 1);
  fresh_links(spec, used, 2, 0, 2);
  fresh_links(spec, used, 3, 1, 2);
  fresh_links(spec, used, 3, 2, 3);
  return spec;
}

ClusterSpec two_cones_spec() {
  ClusterSpec spec;
  spec.tangle_order = 3;
  for (const char* name : {"a", "b", "c", "d"}) spec.clusters.push_back({name, 7});
  std::vector<int> used(4, 0);
  for (auto [x, y] : {std::pair{0, 1}, std::pair{2, 3}}) {
    fresh_links(spec, used, x, y, 2);
    fresh_links(spec, used, y, x, 2);
  }
  fresh_links(spec, used, 1, 2, 1);
  fresh_links(spec, used, 2, 1, 1);
  return spec;
}

ClusterSpec merge_cluster_spec() {
  ClusterSpec spec;
  spec.tangle_order = 3;
  for (const char* name : {"r", "s", "t", "u", "v"}) spec.clusters.push_back({name, 8});
  enum { R, S, T, U, V };
  std::vector<int> used(5, 0);
  fresh_links(spec, used, S, U, 3);  // S and T leave only into U
  fresh_links(spec, used, T, U, 3);
  fresh_links(spec, used, U, R, 1);  // U and V split off at rank 1
  fresh_links(spec, used, U, V, 1);
  fresh_links(spec, used, R, S, 2);
  fresh_links(spec, used, V, S, 1);
  fresh_links(spec, used, R, T, 1);
  fresh_links(spec, used, V, T, 2);
  fresh_links(spec, used, V, R, 2);
  fresh_links(spec, used, R, V, 1);
  return spec;
}

}  // namespace dtangle
