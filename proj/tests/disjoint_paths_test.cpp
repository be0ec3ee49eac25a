#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "dtangle/disjoint_paths.hpp"
#include "dtangle/generators.hpp"
#include "test_support.hpp"

namespace dtangle {
namespace {

using testing::graph_from;

// Two sources funnel through a -> b before splitting to the terminals.
Digraph crossing_gadget() {
  return graph_from({"s1", "s2", "a", "b", "t1", "t2"},
                    {{"s1", "a"}, {"s2", "a"}, {"a", "b"}, {"b", "t1"}, {"b", "t2"}});
}

PairList named_pairs(const Digraph& g,
                     const std::vector<std::pair<std::string, std::string>>& names) {
  PairList out;
  for (const auto& [s, t] : names) out.emplace_back(*g.find(s), *g.find(t));
  return out;
}

// Every simple s -> t path avoiding `blocked`.
void all_paths(const Digraph& g, Vertex s, Vertex t, const VertexSet& blocked,
               const std::function<void(const Path&)>& f) {
  Path p{s};
  VertexSet on(g.num_vertices(), {s});
  std::function<void()> go = [&] {
    if (p.back() == t) {
      f(p);
      return;
    }
    for (Vertex w : g.out(p.back())) {
      if (on.contains(w) || blocked.contains(w)) continue;
      p.push_back(w);
      on.insert(w);
      go();
      on.erase(w);
      p.pop_back();
    }
  };
  if (!blocked.contains(s)) go();
}

// Brute force for two pairs: some path for pair 1 and a disjoint one for pair 2.
bool naive_two_pairs(const Digraph& g, const PairList& pairs) {
  const int n = g.num_vertices();
  bool found = false;
  VertexSet t2(n, {pairs[1].first, pairs[1].second});
  all_paths(g, pairs[0].first, pairs[0].second, t2, [&](const Path& p1) {
    if (found) return;
    VertexSet used(n, p1);
    VertexSet other(n, {pairs[0].first, pairs[0].second});
    all_paths(g, pairs[1].first, pairs[1].second, used | other, [&](const Path&) { found = true; });
  });
  return found;
}

PairList random_pairs(int n, int k, Rng& rng) {
  std::vector<Vertex> vs(n);
  for (int i = 0; i < n; ++i) vs[i] = i;
  std::shuffle(vs.begin(), vs.end(), rng);
  PairList out;
  for (int i = 0; i < k; ++i) out.emplace_back(vs[2 * i], vs[2 * i + 1]);
  return out;
}

TEST(ExactDisjointPaths, SinglePairIsShortestPathOrNone) {
  Digraph g = graph_from({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  auto r = exact_disjoint_paths(g, named_pairs(g, {{"a", "c"}}));
  ASSERT_TRUE(r);
  EXPECT_FALSE(verify_half_integral(g, named_pairs(g, {{"a", "c"}}), *r));
  EXPECT_FALSE(exact_disjoint_paths(g, named_pairs(g, {{"c", "a"}})));
  EXPECT_FALSE(exact_disjoint_paths(g, named_pairs(g, {{"a", "d"}})));
}

TEST(ExactDisjointPaths, CrossingGadgetHasNone) {
  Digraph g = crossing_gadget();
  EXPECT_EQ(g.num_vertices(), 6);
  auto pairs = named_pairs(g, {{"s1", "t1"}, {"s2", "t2"}});
  EXPECT_FALSE(exact_disjoint_paths(g, pairs));
  // Each pair alone is routable.
  EXPECT_TRUE(exact_disjoint_paths(g, {pairs[0]}));
  EXPECT_TRUE(exact_disjoint_paths(g, {pairs[1]}));
}

TEST(ExactDisjointPaths, TwoDisjointPaths) {
  Digraph g = graph_from({"a1", "a2", "a3", "b1", "b2", "b3"},
                         {{"a1", "a2"}, {"a2", "a3"}, {"b1", "b2"}, {"b2", "b3"}});
  auto pairs = named_pairs(g, {{"a1", "a3"}, {"b1", "b3"}});
  auto r = exact_disjoint_paths(g, pairs);
  ASSERT_TRUE(r);
  EXPECT_EQ((*r)[0], (Path{0, 1, 2}));
  EXPECT_EQ((*r)[1], (Path{3, 4, 5}));
}

TEST(ExactDisjointPaths, OneVertexPairsAndTerminalAvoidance) {
  // The only a -> c route passes through b, which is a terminal of pair 2.
  Digraph g = graph_from({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  EXPECT_FALSE(exact_disjoint_paths(g, named_pairs(g, {{"a", "c"}, {"b", "b"}})));
  auto r = exact_disjoint_paths(g, named_pairs(g, {{"a", "b"}, {"c", "c"}}));
  ASSERT_TRUE(r);
  EXPECT_EQ((*r)[1], (Path{2}));
  EXPECT_THROW(exact_disjoint_paths(g, named_pairs(g, {{"a", "b"}, {"b", "c"}})), PreconditionError);
}

TEST(ExactDisjointPaths, MatchesPathEnumeration) {
  Rng rng(3);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Digraph g = random_digraph(7, 0.3, rng);
    auto pairs = random_pairs(7, 2, rng);
    auto r = exact_disjoint_paths(g, pairs);
    ASSERT_EQ(r.has_value(), naive_two_pairs(g, pairs)) << "trial " << trial;
    if (r) {
      EXPECT_FALSE(verify_half_integral(g, pairs, *r));
      EXPECT_EQ(congestion(*r), 1);
      ++yes;
    } else {
      ++no;
    }
  }
  EXPECT_GT(yes, 20);
  EXPECT_GT(no, 20);
}

TEST(ExactDisjointPaths, SizeGuards) {
  Rng rng(1);
  Digraph g = random_digraph(30, 0.2, rng);
  auto pairs = random_pairs(30, 2, rng);
  EXPECT_THROW(exact_disjoint_paths(g, pairs, ExactLimits{20, 1000}), SizeGuardError);
  Digraph dense = bidirected_clique(12);
  // Distinct last vertices force a full search for an impossible third pair.
  PairList ps{{0, 1}, {2, 3}, {4, 5}};
  EXPECT_THROW(exact_disjoint_paths(dense, ps, ExactLimits{64, 3}), SizeGuardError);
}

TEST(VerifyHalfIntegral, Contract) {
  Digraph g = graph_from({"s1", "s2", "s3", "x", "t1", "t2", "t3"},
                         {{"s1", "x"}, {"s2", "x"}, {"s3", "x"}, {"x", "t1"}, {"x", "t2"}, {"x", "t3"}});
  auto pairs = named_pairs(g, {{"s1", "t1"}, {"s2", "t2"}, {"s3", "t3"}});
  Vertex x = *g.find("x");
  std::vector<Path> ps{{0, x, 4}, {1, x, 5}};
  PairList two(pairs.begin(), pairs.begin() + 2);
  EXPECT_FALSE(verify_half_integral(g, two, ps));
  ps.push_back({2, x, 6});
  auto v = verify_half_integral(g, pairs, ps);
  ASSERT_TRUE(v);
  EXPECT_NE(v->find("lies on 3 paths"), std::string::npos);
  EXPECT_TRUE(verify_half_integral(g, two, {{0, x, 5}, {1, x, 4}}));
  EXPECT_TRUE(verify_half_integral(g, two, {{0, 4}, {1, x, 5}}));
  EXPECT_TRUE(verify_half_integral(g, two, {{0, x, 4}}));
}

TEST(PatternGraphs, SingleTerminalPathsWithoutSeparator) {
  auto ps = enumerate_pattern_graphs(PatternType::RightToLeft, 1, 0);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].paths, (std::vector<std::string>{"L"}));
  EXPECT_EQ(ps[1].paths, (std::vector<std::string>{"LL"}));
  auto qs = enumerate_pattern_graphs(PatternType::LeftToRight, 1, 0);
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[1].paths, (std::vector<std::string>{"RR"}));
}

TEST(PatternGraphs, ConditionsAndBoundsHold) {
  for (auto x : {PatternType::RightToLeft, PatternType::LeftToRight})
    for (int k = 1; k <= 3; ++k)
      for (int t = 0; t <= 2; ++t) {
        auto ps = enumerate_pattern_graphs(x, k, t);
        auto [bl, br] = pattern_bounds(x, k, t);
        std::set<std::vector<std::string>> seen;
        for (const auto& h : ps) {
          EXPECT_FALSE(pattern_violation(h)) << h.to_string();
          EXPECT_LE(h.count('L'), bl);
          EXPECT_LE(h.count('R'), br);
          EXPECT_TRUE(std::is_sorted(h.paths.begin(), h.paths.end(),
                                     [](const std::string& a, const std::string& b) {
                                       return a.size() != b.size() ? a.size() < b.size() : a < b;
                                     }));
          EXPECT_TRUE(seen.insert(h.paths).second) << "duplicate " << h.to_string();
          EXPECT_EQ(static_cast<int>(h.edges().size()), h.num_vertices() - k);
        }
      }
}

TEST(PatternGraphs, CountMatchesGenerateAndFilter) {
  EXPECT_EQ(enumerate_pattern_graphs(PatternType::RightToLeft, 1, 1).size(),
            testing::naive_pattern_count(true, 1, 7));
  EXPECT_EQ(enumerate_pattern_graphs(PatternType::LeftToRight, 1, 1).size(),
            testing::naive_pattern_count(false, 1, 7));
  EXPECT_EQ(enumerate_pattern_graphs(PatternType::RightToLeft, 1, 0).size(),
            testing::naive_pattern_count(true, 0, 5));
}

TEST(PatternGraphs, ViolationsAreNamed) {
  PatternGraph h{PatternType::RightToLeft, 1, 1, {"RML"}};
  EXPECT_TRUE(pattern_violation(h));
  h.paths = {"LR"};
  EXPECT_TRUE(pattern_violation(h));
  h.paths = {"LLL"};
  EXPECT_TRUE(pattern_violation(h));
  h.paths = {"LMM"};
  EXPECT_TRUE(pattern_violation(h));
  h.paths = {"LMRL"};
  EXPECT_FALSE(pattern_violation(h));
  // The conditions alone allow two R vertices after one M; the size bound
  // is what rules the pattern out of the enumeration.
  h.paths = {"LMRR"};
  EXPECT_FALSE(pattern_violation(h));
  EXPECT_GT(h.count('R'), pattern_bounds(h.type, 1, 1).second);
}

// Order-1 separation at m: A = {s1, a1, a3, t1, s2, a2, t2, m}, B = {m, b1..b4}.
// Pair 1 must leave A through m and come back over the edge b3 -> a3.
Digraph shield_instance() {
  return graph_from({"s1", "a1", "a3", "t1", "s2", "a2", "t2", "m", "b1", "b2", "b3", "b4"},
                    {{"s1", "a1"}, {"a1", "m"}, {"m", "b1"}, {"b1", "b2"}, {"b2", "b3"},
                     {"b3", "a3"}, {"a3", "t1"}, {"s2", "a2"}, {"a2", "t2"}, {"a2", "m"},
                     {"b1", "b4"}, {"b4", "b3"}, {"a1", "a2"}, {"a3", "a2"}});
}

DirectedSeparation shield_sep(const Digraph& g) {
  auto a = testing::set_of(g, {"s1", "a1", "a3", "t1", "s2", "a2", "t2", "m"});
  auto b = testing::set_of(g, {"m", "b1", "b2", "b3", "b4"});
  return DirectedSeparation{b, a};
}

TEST(SpliceAcross, OrderOneShield) {
  Digraph g = shield_instance();
  EXPECT_EQ(g.num_vertices(), 12);
  auto sep = shield_sep(g);
  ASSERT_FALSE(validate_separation(g, sep));
  EXPECT_EQ(sep.order(), 1);
  auto pairs = named_pairs(g, {{"s1", "t1"}, {"s2", "t2"}});
  auto r = splice_across(g, pairs, sep);
  ASSERT_EQ(r.verdict, HalfIntegralOutcome::Verdict::Paths);
  EXPECT_EQ(r.decided_by, "splice");
  EXPECT_FALSE(verify_half_integral(g, pairs, r.paths));
  EXPECT_TRUE(exact_disjoint_paths(g, pairs));
  // Pair 1 crosses the separator once and returns over the fixed edge.
  const Path& p = r.paths[0];
  EXPECT_NE(std::find(p.begin(), p.end(), *g.find("m")), p.end());
  auto b3 = std::find(p.begin(), p.end(), *g.find("b3"));
  ASSERT_NE(b3, p.end());
  EXPECT_EQ(*(b3 + 1), *g.find("a3"));
}

TEST(SpliceAcross, TooManyCrossingsHaveNoIntegralSolution) {
  Digraph g = shield_instance();
  // Both pairs need to reach B, but only m leads there.
  auto pairs = named_pairs(g, {{"s1", "b2"}, {"s2", "b4"}});
  auto r = splice_across(g, pairs, shield_sep(g));
  EXPECT_EQ(r.verdict, HalfIntegralOutcome::Verdict::NoIntegral);
  EXPECT_FALSE(exact_disjoint_paths(g, pairs));
  EXPECT_THROW(splice_across(g, named_pairs(g, {{"b1", "t1"}}), shield_sep(g)), PreconditionError);
}

// Random digraph on parts A \ B, A n B, B \ A with no edge from A \ B to B \ A.
struct SeparatedInstance {
  Digraph g;
  DirectedSeparation sep;
};

SeparatedInstance random_separated(int na, int nm, int nb, double p, Rng& rng) {
  const int n = na + nm + nb;
  auto part = [&](int v) { return v < na ? 0 : v < na + nm ? 1 : 2; };
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && !(part(u) == 0 && part(v) == 2) && coin(rng)) edges.emplace_back(u, v);
  VertexSet a(n), b(n);
  for (int v = 0; v < n; ++v) {
    if (part(v) <= 1) a.insert(v);
    if (part(v) >= 1) b.insert(v);
  }
  return {Digraph(n, edges), DirectedSeparation{b, a}};
}

TEST(SpliceAcross, AgreesWithOracleOnRandomSeparatedInstances) {
  Rng rng(11);
  int spliced = 0, refused = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto inst = random_separated(5, 1 + trial % 2, 4, 0.3, rng);
    const int n = inst.g.num_vertices();
    const int k = 2 + trial % 2;
    // Sources in A, terminals anywhere.
    std::vector<Vertex> a = inst.sep.in.to_vector();
    std::shuffle(a.begin(), a.end(), rng);
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < n; ++v)
      if (std::find(a.begin(), a.begin() + k, v) == a.begin() + k) rest.push_back(v);
    std::shuffle(rest.begin(), rest.end(), rng);
    PairList pairs;
    for (int i = 0; i < k; ++i) pairs.emplace_back(a[i], rest[i]);
    auto r = splice_across(inst.g, pairs, inst.sep);
    bool integral = exact_disjoint_paths(inst.g, pairs).has_value();
    if (r.verdict == HalfIntegralOutcome::Verdict::Paths) {
      EXPECT_FALSE(verify_half_integral(inst.g, pairs, r.paths)) << "trial " << trial;
      ++spliced;
    } else {
      EXPECT_FALSE(integral) << "trial " << trial;
      ++refused;
    }
  }
  EXPECT_GT(spliced, 10);
  EXPECT_GT(refused, 10);
}

TEST(HalfOrNoLeaf, BaseCaseAndDisconnectedPairs) {
  Digraph g = crossing_gadget();
  auto pairs = named_pairs(g, {{"s1", "t1"}, {"s2", "t2"}});
  auto r = half_or_no_leaf(g, pairs);
  ASSERT_EQ(r.verdict, HalfIntegralOutcome::Verdict::Paths);
  EXPECT_EQ(r.decided_by, "base-case");
  EXPECT_EQ(r.congestion, 2);
  EXPECT_FALSE(verify_half_integral(g, pairs, r.paths));
  auto back = half_or_no_leaf(g, named_pairs(g, {{"t1", "s1"}}));
  EXPECT_EQ(back.verdict, HalfIntegralOutcome::Verdict::NoIntegral);
  EXPECT_EQ(back.decided_by, "disconnected");
}

TEST(HalfOrNoLeaf, LargeInstanceWithoutCertificateAborts) {
  auto w = cylindrical_wall(10);
  const Path& c = w.wall.cycles[0];
  PairList pairs{{c[0], c[5]}, {c[1], c[6]}, {c[2], c[7]}};
  EXPECT_THROW(half_or_no_leaf(w.graph, pairs), NeedsCertificateError);
}

TEST(HalfOrNoLeaf, LinkageThroughWall) {
  auto w = cylindrical_wall(189);
  const Path& c = w.wall.cycles[0];
  PairList pairs{{c[0], c[40]}, {c[10], c[50]}, {c[20], c[60]}};
  HalfOrNoOptions opts;
  opts.wall = &w.wall;
  auto r = half_or_no_leaf(w.graph, pairs, opts);
  ASSERT_EQ(r.verdict, HalfIntegralOutcome::Verdict::Paths);
  EXPECT_EQ(r.decided_by, "wall-linkage");
  EXPECT_FALSE(verify_half_integral(w.graph, pairs, r.paths));
}

// The order-189 wall plus s1, s2, s3, z1, z2, y. Sources side: s1 and s2
// reach the wall only through z1 and z2, s3 only reaches y. Terminals side:
// the added edges point the other way and y also has an edge into the wall,
// so every source reaches the wall but s1, s2, s3 are entered only from z1,
// z2 and y.
struct ShieldedWall {
  Digraph g;
  PairList pairs;
};

ShieldedWall shielded_wall(const WallInstance& w, bool terminals) {
  const int n = w.graph.num_vertices();
  auto edges = w.graph.edges();
  auto names = w.graph.names();
  for (const char* x : {"s1", "s2", "s3", "z1", "z2", "y"}) names.push_back(x);
  const Vertex s1 = n, s2 = n + 1, s3 = n + 2, z1 = n + 3, z2 = n + 4, y = n + 5;
  const Path& c = w.wall.cycles[0];
  std::vector<Edge> extra{{s1, z1}, {s2, z2}, {s1, z2}, {s3, y}, {z1, c[0]}, {z2, c[7]}};
  PairList pairs{{s1, c[30]}, {s2, c[60]}, {s3, y}};
  if (terminals) {
    for (auto& e : extra) std::swap(e.first, e.second);
    extra.emplace_back(y, c[100]);
    pairs = {{c[30], s1}, {c[60], s2}, {y, s3}};
  }
  edges.insert(edges.end(), extra.begin(), extra.end());
  return {Digraph(n + 6, edges, names), pairs};
}

TEST(HalfOrNoLeaf, ShieldedTerminalsAreSpliced) {
  auto w = cylindrical_wall(189);
  HalfOrNoOptions opts;
  opts.wall = &w.wall;
  for (bool terminals : {false, true}) {
    auto inst = shielded_wall(w, terminals);
    std::vector<Vertex> s, t;
    for (auto [a, b] : inst.pairs) {
      s.push_back(a);
      t.push_back(b);
    }
    auto route = route_through_wall(inst.g, s, t, w.wall);
    EXPECT_EQ(route.kind, terminals ? RoutingOutcome::Kind::ShieldsTerminals
                                    : RoutingOutcome::Kind::ShieldsSources);
    auto r = half_or_no_leaf(inst.g, inst.pairs, opts);
    ASSERT_EQ(r.verdict, HalfIntegralOutcome::Verdict::Paths) << "terminals " << terminals;
    EXPECT_EQ(r.decided_by, "splice");
    EXPECT_FALSE(verify_half_integral(inst.g, inst.pairs, r.paths));
  }
}

TEST(HalfOrNo, CrossingGadgetIsNoIntegral) {
  Digraph g = crossing_gadget();
  auto pairs = named_pairs(g, {{"s1", "t1"}, {"s2", "t2"}});
  auto r = half_or_no(g, pairs);
  EXPECT_EQ(r.verdict, HalfIntegralOutcome::Verdict::NoIntegral);
  HalfOrNoOptions loose;
  loose.confirm_with_oracle = false;
  auto h = half_or_no(g, pairs, loose);
  EXPECT_EQ(h.verdict, HalfIntegralOutcome::Verdict::Paths);
  EXPECT_EQ(h.congestion, 2);
}

TEST(HalfOrNo, SingleAndEmptyPairLists) {
  Digraph g = crossing_gadget();
  EXPECT_EQ(half_or_no(g, {}).verdict, HalfIntegralOutcome::Verdict::Paths);
  auto one = half_or_no(g, named_pairs(g, {{"s1", "t2"}}));
  ASSERT_EQ(one.verdict, HalfIntegralOutcome::Verdict::Paths);
  EXPECT_EQ(one.congestion, 1);
  EXPECT_EQ(half_or_no(g, named_pairs(g, {{"t2", "s1"}})).verdict,
            HalfIntegralOutcome::Verdict::NoIntegral);
}

TEST(HalfOrNo, SoundOnRandomSmallInstances) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 6 + trial % 5;
    const int k = 1 + trial % 3;
    Digraph g = random_digraph(n, 0.25, rng);
    auto pairs = random_pairs(n, k, rng);
    auto r = half_or_no(g, pairs);
    bool integral = exact_disjoint_paths(g, pairs).has_value();
    EXPECT_EQ(r.verdict == HalfIntegralOutcome::Verdict::NoIntegral, !integral) << "trial " << trial;
    if (r.verdict == HalfIntegralOutcome::Verdict::Paths) {
      EXPECT_FALSE(verify_half_integral(g, pairs, r.paths));
    }
  }
}

TEST(HalfOrNo, DecompositionDpOnBridgedClusters) {
  auto cg = testing::bridged_pair();
  const Digraph& g = cg.graph;
  HalfOrNoOptions opts;
  opts.tangles = &cg.tangles;
  opts.confirm_with_oracle = false;
  auto pairs = named_pairs(g, {{"L2", "R3"}, {"L4", "L5"}, {"R6", "R2"}});
  auto r = half_or_no(g, pairs, opts);
  ASSERT_EQ(r.verdict, HalfIntegralOutcome::Verdict::Paths);
  EXPECT_EQ(r.decided_by, "dp");
  EXPECT_LE(r.congestion, 2);
  EXPECT_FALSE(verify_half_integral(g, pairs, r.paths));
  EXPECT_TRUE(exact_disjoint_paths(g, pairs));
  // Both directions across the single bridge need m twice.
  auto clash = named_pairs(g, {{"L2", "R3"}, {"R4", "L5"}});
  EXPECT_FALSE(exact_disjoint_paths(g, clash));
  EXPECT_EQ(half_or_no(g, clash, opts).verdict, HalfIntegralOutcome::Verdict::NoIntegral);
}

TEST(HalfOrNo, DecompositionDpIsSoundOnClusterInstances) {
  auto instances = testing::random_instances(6, 41, false);
  ASSERT_GE(instances.size(), 4u);
  Rng rng(43);
  int decided = 0;
  for (const auto& inst : instances) {
    const Digraph& g = inst.cg.graph;
    HalfOrNoOptions opts;
    opts.tangles = &inst.cg.tangles;
    opts.confirm_with_oracle = false;
    for (int trial = 0; trial < 4; ++trial) {
      auto pairs = random_pairs(g.num_vertices(), 1 + trial % 3, rng);
      HalfIntegralOutcome r;
      try {
        r = half_or_no(g, pairs, opts);
      } catch (const SizeGuardError&) {
        continue;
      }
      ++decided;
      bool integral = exact_disjoint_paths(g, pairs).has_value();
      if (r.verdict == HalfIntegralOutcome::Verdict::NoIntegral) {
        EXPECT_FALSE(integral);
      } else {
        EXPECT_FALSE(verify_half_integral(g, pairs, r.paths));
      }
    }
  }
  EXPECT_GT(decided, 10);
}

}  // namespace
}  // namespace dtangle
