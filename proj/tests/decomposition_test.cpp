#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dtangle/components.hpp"
#include "dtangle/decomposition.hpp"
#include "dtangle/error.hpp"
#include "dtangle/generators.hpp"
#include "test_support.hpp"

namespace dtangle {
namespace {

using testing::bridged_pair;
using testing::graph_from;
using testing::random_instances;
using testing::set_of;

// Transitive closure by repeated BFS: reach[u][v] when a walk u -> v avoids
// `blocked` (u itself must be unblocked).
std::vector<std::vector<bool>> closure(const Digraph& g, const VertexSet& blocked) {
  const int n = g.num_vertices();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (Vertex s = 0; s < n; ++s) {
    if (blocked.contains(s)) continue;
    std::vector<Vertex> stack{s};
    reach[s][s] = true;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.out(v))
        if (!blocked.contains(w) && !reach[s][w]) {
          reach[s][w] = true;
          stack.push_back(w);
        }
    }
  }
  return reach;
}

VertexSet subtree_of(const DirectedTreeDecomposition& d, int t) { return d.subtree_bags(t); }

// Definition-level check: bags partition V and every head subtree is a strong
// component of G - guard (strict) or a guarded union of them (relaxed).
bool naive_valid(const Digraph& g, const DirectedTreeDecomposition& d, DtdMode mode) {
  const int n = g.num_vertices();
  std::vector<int> seen(n, 0);
  for (const auto& b : d.bags) b.for_each([&](Vertex v) { ++seen[v]; });
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) return false;
  for (int t = 0; t < d.num_nodes(); ++t) {
    if (t == d.root) continue;
    VertexSet s = subtree_of(d, t);
    const VertexSet& x = d.guards[t];
    if (s.intersects(x)) return false;
    auto reach = closure(g, x);
    if (mode == DtdMode::Strict) {
      if (s.empty()) return false;
      Vertex a = s.first();
      for (Vertex v = 0; v < n; ++v) {
        bool strong = !x.contains(v) && reach[a][v] && reach[v][a];
        if (strong != s.contains(v)) return false;
      }
    } else {
      for (Vertex v = 0; v < n; ++v) {
        if (s.contains(v) || x.contains(v)) continue;
        bool from = false, to = false;
        s.for_each([&](Vertex u) {
          from = from || reach[u][v];
          to = to || reach[v][u];
        });
        if (from && to) return false;
      }
    }
  }
  return true;
}

// Random arborescence on n nodes with singleton bags and guards of size <= 1.
DirectedTreeDecomposition random_singleton_dtd(const Digraph& g, Rng& rng) {
  const int n = g.num_vertices();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  DirectedTreeDecomposition d;
  for (int t = 0; t < n; ++t) {
    int p = t == 0 ? -1 : static_cast<int>(rng() % t);
    VertexSet guard = g.empty_set();
    if (t > 0 && rng() % 3 == 0) guard.insert(static_cast<Vertex>(rng() % n));
    d.add_node(p, VertexSet(n, {perm[t]}), guard);
  }
  return d;
}

Digraph random_dag(int n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return Digraph(n, edges);
}

TEST(VerifyDtd, TrivialDecomposition) {
  Digraph g = bidirected_clique(5);
  auto d = trivial_decomposition(g);
  EXPECT_FALSE(verify_dtd(g, d));
  EXPECT_EQ(width(d), 4);
  EXPECT_EQ(edge_width(d), 0);
}

TEST(VerifyDtd, MatchesDefinitionOnSmallDigraphs) {
  Rng rng(5);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Digraph g = trial % 2 ? random_digraph(6, 0.3, rng) : random_dag(6, 0.4, rng);
    auto d = random_singleton_dtd(g, rng);
    for (auto mode : {DtdMode::Strict, DtdMode::Relaxed}) {
      bool want = naive_valid(g, d, mode);
      EXPECT_EQ(!verify_dtd(g, d, mode), want) << "trial " << trial;
      (want ? accepted : rejected)++;
    }
  }
  EXPECT_GT(accepted, 20);
  EXPECT_GT(rejected, 20);
}

TEST(VerifyDtd, DagWithSingletonBags) {
  // A star DAG: every leaf is its own component below the empty guard.
  Digraph g = graph_from({"r", "a", "b", "c"}, {{"r", "a"}, {"r", "b"}, {"r", "c"}});
  DirectedTreeDecomposition d;
  d.add_node(-1, set_of(g, {"r"}), g.empty_set());
  for (const char* v : {"a", "b", "c"}) d.add_node(0, set_of(g, {v}), g.empty_set());
  EXPECT_FALSE(verify_dtd(g, d));
  EXPECT_EQ(width(d), 0);
  // A path r -> a -> b stacked the other way round puts a and b together.
  Digraph p = graph_from({"r", "a", "b"}, {{"r", "a"}, {"a", "b"}});
  DirectedTreeDecomposition q;
  q.add_node(-1, set_of(p, {"r"}), p.empty_set());
  q.add_node(0, set_of(p, {"a"}), p.empty_set());
  q.add_node(1, set_of(p, {"b"}), p.empty_set());
  auto v = verify_dtd(p, q);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->kind, DtdViolation::Kind::NotStrong);
  EXPECT_FALSE(verify_dtd(p, q, DtdMode::Relaxed));
}

TEST(VerifyDtd, GuardTooSmallGivesWitnessWalk) {
  Digraph g = graph_from({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
  DirectedTreeDecomposition d;
  d.add_node(-1, set_of(g, {"a"}), g.empty_set());
  d.add_node(0, set_of(g, {"b", "c"}), g.empty_set());
  for (auto mode : {DtdMode::Strict, DtdMode::Relaxed}) {
    auto v = verify_dtd(g, d, mode);
    ASSERT_TRUE(v);
    EXPECT_EQ(v->kind, DtdViolation::Kind::EscapingWalk);
    EXPECT_EQ(v->node, 1);
    EXPECT_EQ(v->vertex, *g.find("a"));
    const auto& w = v->walk;
    ASSERT_GE(w.size(), 3u);
    VertexSet sub = set_of(g, {"b", "c"});
    EXPECT_TRUE(sub.contains(w.front()));
    EXPECT_TRUE(sub.contains(w.back()));
    EXPECT_NE(std::find(w.begin(), w.end(), v->vertex), w.end());
    for (std::size_t i = 0; i + 1 < w.size(); ++i) EXPECT_TRUE(g.has_edge(w[i], w[i + 1]));
  }
  d.guards[1] = set_of(g, {"b"});
  auto v = verify_dtd(g, d);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->kind, DtdViolation::Kind::GuardedSetMeetsGuard);
}

TEST(VerifyDtd, PartitionViolations) {
  Digraph g = graph_from({"a", "b"}, {{"a", "b"}});
  DirectedTreeDecomposition d;
  d.add_node(-1, set_of(g, {"a", "b"}), g.empty_set());
  d.add_node(0, set_of(g, {"b"}), g.empty_set());
  auto v = verify_dtd(g, d);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->kind, DtdViolation::Kind::NotPartition);
  d.bags[0] = g.empty_set();
  v = verify_dtd(g, d);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->kind, DtdViolation::Kind::NotPartition);
  EXPECT_EQ(v->vertex, *g.find("a"));
}

// Two 4-cycles; the only edge back into A goes through a1.
Digraph two_cycles() {
  return graph_from({"a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"},
                    {{"a1", "a2"}, {"a2", "a3"}, {"a3", "a4"}, {"a4", "a1"},
                     {"b1", "b2"}, {"b2", "b3"}, {"b3", "b4"}, {"b4", "b1"},
                     {"a1", "b1"}, {"b2", "a2"}});
}

TEST(Width, HandComputedGamma) {
  Digraph g = two_cycles();
  DirectedTreeDecomposition d;
  d.add_node(-1, set_of(g, {"a1", "a2", "a3", "a4"}), g.empty_set());
  d.add_node(0, set_of(g, {"b1", "b2", "b3", "b4"}), set_of(g, {"a1"}));
  ASSERT_FALSE(verify_dtd(g, d));
  EXPECT_EQ(d.gamma(0).size(), 4u);
  EXPECT_EQ(d.gamma(1).size(), 5u);
  EXPECT_EQ(width(d), 4);
  EXPECT_EQ(edge_width(d), 1);
  d.guards[1] = g.empty_set();
  EXPECT_TRUE(verify_dtd(g, d));
}

TEST(MakeNice, AlreadyNiceIsUnchanged) {
  Digraph g = two_cycles();
  DirectedTreeDecomposition d;
  d.add_node(-1, set_of(g, {"a1", "a2", "a3", "a4"}), g.empty_set());
  d.add_node(0, set_of(g, {"b1", "b2", "b3", "b4"}), set_of(g, {"a1"}));
  std::vector<int> origin;
  auto n = make_nice(g, d, &origin);
  EXPECT_EQ(n.parent, d.parent);
  EXPECT_EQ(n.bags, d.bags);
  EXPECT_EQ(n.guards, d.guards);
  EXPECT_EQ(origin, (std::vector<int>{0, 1}));
}

TEST(MakeNice, SplitsSubtreeSpanningTwoComponents) {
  // A feeds the separate cycles B and C; the relaxed input stacks C under B.
  Digraph g = graph_from({"a1", "a2", "b1", "b2", "c1", "c2"},
                         {{"a1", "a2"}, {"a2", "a1"}, {"b1", "b2"}, {"b2", "b1"},
                          {"c1", "c2"}, {"c2", "c1"}, {"a1", "b1"}, {"a2", "c1"}});
  DirectedTreeDecomposition d;
  d.add_node(-1, set_of(g, {"a1", "a2"}), g.empty_set());
  d.add_node(0, set_of(g, {"b1", "b2"}), g.empty_set());
  d.add_node(1, set_of(g, {"c1", "c2"}), g.empty_set());
  ASSERT_TRUE(verify_dtd(g, d));
  ASSERT_FALSE(verify_dtd(g, d, DtdMode::Relaxed));
  std::vector<int> origin;
  auto n = make_nice(g, d, &origin);
  EXPECT_FALSE(verify_dtd(g, n));
  ASSERT_EQ(n.num_nodes(), 4);
  EXPECT_EQ(origin, (std::vector<int>{0, 1, 1, 2}));
  EXPECT_EQ(n.bags[1], set_of(g, {"b1", "b2"}));
  EXPECT_TRUE(n.bags[2].empty());
  EXPECT_EQ(n.parent[3], 2);
  EXPECT_EQ(n.bags[3], set_of(g, {"c1", "c2"}));
  EXPECT_EQ(width(n), width(d));
}

// Relaxed decomposition built top down: each child subtree is an antichain of
// strong components of G - guard inside the parent's remaining set.
DirectedTreeDecomposition random_relaxed_dtd(const Digraph& g, Rng& rng) {
  const int n = g.num_vertices();
  DirectedTreeDecomposition d;
  d.add_node(-1, g.empty_set(), g.empty_set());
  std::vector<VertexSet> sub{g.all()};
  for (std::size_t t = 0; t < sub.size() && sub.size() < 8; ++t) {
    VertexSet rest = sub[t];
    for (int tries = 0; tries < 3; ++tries) {
      VertexSet guard = g.empty_set();
      for (int i = static_cast<int>(rng() % 3); i > 0; --i)
        guard.insert(static_cast<Vertex>(rng() % n));
      guard -= rest;
      auto reach = closure(g, guard);
      VertexSet allowed = g.all() - guard;
      VertexSet pick = g.empty_set();
      for (const auto& c : strong_components(g, &allowed)) {
        if (!c.is_subset_of(rest) || rng() % 2) continue;
        Vertex a = c.first();
        bool free = true;
        pick.for_each([&](Vertex u) { free = free && !reach[a][u] && !reach[u][a]; });
        if (free) pick |= c;
      }
      if (pick.empty() || pick == sub[t]) continue;
      rest -= pick;
      d.add_node(static_cast<int>(t), g.empty_set(), guard);
      sub.push_back(pick);
    }
    d.bags[t] = rest;
  }
  for (std::size_t t = 0; t < sub.size(); ++t) {
    VertexSet rest = sub[t];
    for (int c = 0; c < d.num_nodes(); ++c)
      if (d.parent[c] == static_cast<int>(t)) rest -= sub[c];
    d.bags[t] = rest;
  }
  return d;
}

TEST(MakeNice, RandomRelaxedBecomeStrict) {
  Rng rng(11);
  int checked = 0, split = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Digraph g = random_digraph(4 + trial % 7, 0.25, rng);
    auto d = random_relaxed_dtd(g, rng);
    ASSERT_FALSE(verify_dtd(g, d, DtdMode::Relaxed)) << "trial " << trial;
    std::vector<int> origin;
    auto n = make_nice(g, d, &origin);
    EXPECT_FALSE(verify_dtd(g, n)) << "trial " << trial;
    EXPECT_LE(width(n), width(d));
    EXPECT_EQ(edge_width(n), edge_width(d));
    for (int t = 0; t < n.num_nodes(); ++t) {
      EXPECT_EQ(n.guards[t], d.guards[origin[t]]);
      EXPECT_TRUE(n.bags[t].is_subset_of(d.bags[origin[t]]));
    }
    ++checked;
    if (n.num_nodes() > d.num_nodes()) ++split;
  }
  EXPECT_EQ(checked, 300);
  EXPECT_GT(split, 10);
}

TangleSet restricted(const TangleSet& ts, int k) {
  TangleSet out;
  for (const auto& t : ts) out.push_back(restrict_tangle(t, k));
  return out;
}

// Tree path between two nodes of a decomposition, as the list of nodes whose
// incoming edge lies on it.
std::vector<int> dtd_path(const DirectedTreeDecomposition& d, int a, int b) {
  auto up = [&](int t) {
    std::vector<int> chain;
    for (; t >= 0; t = d.parent[t]) chain.push_back(t);
    return chain;
  };
  auto pa = up(a), pb = up(b);
  while (pa.size() > 0 && pb.size() > 0 && pa.back() == pb.back()) {
    pa.pop_back();
    pb.pop_back();
  }
  pa.insert(pa.end(), pb.begin(), pb.end());
  return pa;
}

::testing::AssertionResult sound(const ClusterGraph& cg, int k) {
  const Digraph& g = cg.graph;
  TreeLabelling lab = build_labelling(g, cg.tangles);
  DecompositionTrace tr;
  auto d = decomposition_from_labelling(g, lab, k, &tr);
  if (auto v = verify_distinguishing(g, d, restricted(cg.tangles, k)))
    return ::testing::AssertionFailure() << v->detail;
  if (d.edge_width() > k * k + 2 * k)
    return ::testing::AssertionFailure() << "edge width " << d.edge_width();
  if (!tr.asymmetric_conflicts.empty() || !tr.independent_conflicts.empty() ||
      !tr.dependent_violations.empty())
    return ::testing::AssertionFailure() << "trace lists a broken invariant";
  std::vector<int> sorted(d.tau);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return ::testing::AssertionFailure() << "tau is not injective";
  return ::testing::AssertionSuccess();
}

TEST(DecompositionFromLabelling, OneTangleIsTrivial) {
  ClusterGraph cg = bridged_pair();
  cg.tangles.resize(1);
  TreeLabelling lab = build_labelling(cg.graph, cg.tangles);
  auto d = decomposition_from_labelling(cg.graph, lab, 2);
  EXPECT_EQ(d.dtd.num_nodes(), 1);
  EXPECT_EQ(d.dtd.bags[0], cg.graph.all());
  EXPECT_EQ(d.edge_width(), 0);
  EXPECT_EQ(d.tau, std::vector<int>{0});
  EXPECT_TRUE(sound(cg, 2));
}

TEST(DecompositionFromLabelling, BridgedPair) {
  ClusterGraph cg = bridged_pair();
  const Digraph& g = cg.graph;
  TreeLabelling lab = build_labelling(g, cg.tangles);
  ASSERT_EQ(lab.edges.size(), 1u);
  auto d = decomposition_from_labelling(g, lab, 2);
  ASSERT_EQ(d.dtd.num_nodes(), 2);
  int child = 1 - d.dtd.root;
  EXPECT_EQ(d.dtd.guards[child], lab.edges[0].sep.separator());
  EXPECT_LE(d.edge_width(), 8);
  EXPECT_TRUE(sound(cg, 2));
}

TEST(DecompositionFromLabelling, FiveClusterPathMinima) {
  ClusterGraph cg = gen_clusters(five_cluster_spec());
  const Digraph& g = cg.graph;
  ASSERT_TRUE(sound(cg, 2));
  TreeLabelling lab = build_labelling(g, cg.tangles);
  auto d = decomposition_from_labelling(g, lab, 2);
  const int n = static_cast<int>(cg.tangles.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      auto md = min_distinguisher(g, cg.tangles[a], cg.tangles[b]);
      ASSERT_TRUE(md);
      int low_sep = 1 << 20, low_guard = 1 << 20;
      for (int t : dtd_path(d.dtd, d.tau[a], d.tau[b])) {
        ASSERT_TRUE(d.labels[t]) << "path leaves the labelling at node " << t;
        low_sep = std::min(low_sep, d.labels[t]->sep.order());
        low_guard = std::min(low_guard, static_cast<int>(d.dtd.guards[t].size()));
      }
      EXPECT_EQ(low_sep, md->sep.order()) << a << " " << b;
      EXPECT_GE(low_guard, md->sep.order());
    }
}

TEST(DecompositionFromLabelling, SuiteInstances) {
  EXPECT_TRUE(sound(gen_clusters(two_cones_spec()), 2));
  EXPECT_TRUE(sound(gen_clusters(no_uncross_spec()), 2));
  EXPECT_TRUE(sound(gen_clusters(merge_cluster_spec()), 2));
}

TEST(DecompositionFromLabelling, MergeInstanceNeedsSplitting) {
  ClusterGraph cg = gen_clusters(merge_cluster_spec());
  TreeLabelling lab = build_labelling(cg.graph, cg.tangles);
  DecompositionTrace tr;
  decomposition_from_labelling(cg.graph, lab, 2, &tr);
  EXPECT_GT(tr.split_nodes, 0);
}

TEST(DecompositionFromLabelling, NoUncrossInstanceResolvesDependentConflict) {
  ClusterGraph cg = gen_clusters(no_uncross_spec());
  TreeLabelling lab = build_labelling(cg.graph, cg.tangles);
  DecompositionTrace tr;
  auto d = decomposition_from_labelling(cg.graph, lab, 2, &tr);
  EXPECT_EQ(tr.resolved.size(), 1u);
  EXPECT_GT(d.dtd.num_nodes(), static_cast<int>(cg.tangles.size()));
}

TEST(DecompositionFromLabelling, RandomInstances) {
  for (const auto& inst : random_instances(30, 3, false)) EXPECT_TRUE(sound(inst.cg, 2));
}

TEST(DecompositionFromLabelling, EdgeOrderAboveKThrows) {
  ClusterGraph cg = gen_clusters(five_cluster_spec());
  TreeLabelling lab = build_labelling(cg.graph, cg.tangles);
  EXPECT_THROW(decomposition_from_labelling(cg.graph, lab, 1), PreconditionError);
}

TEST(VerifyDistinguishing, TruncatedGuardFails) {
  ClusterGraph cg = gen_clusters(five_cluster_spec());
  const Digraph& g = cg.graph;
  TreeLabelling lab = build_labelling(g, cg.tangles);
  auto d = decomposition_from_labelling(g, lab, 2);
  auto ts = restricted(cg.tangles, 2);
  ASSERT_FALSE(verify_distinguishing(g, d, ts));
  for (int t = 0; t < d.dtd.num_nodes(); ++t) {
    if (!d.labels[t]) continue;
    auto broken = d;
    broken.dtd.guards[t] -= VertexSet(g.num_vertices(), {d.labels[t]->sep.separator().first()});
    EXPECT_TRUE(verify_distinguishing(g, broken, ts)) << "node " << t;
  }
}

}  // namespace
}  // namespace dtangle
