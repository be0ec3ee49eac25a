#include <gtest/gtest.h>

#include "dtangle/components.hpp"
#include "dtangle/digraph.hpp"
#include "dtangle/error.hpp"
#include "test_support.hpp"

namespace dtangle {
namespace {

using testing::graph_from;

TEST(ParseDigraph, JsonEcho) {
  Digraph g = parse_digraph(R"({"vertices":["a","b"],"edges":[["a","b"]]})");
  EXPECT_EQ(g.num_vertices(), 2);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_TRUE(g.has_edge(*g.find("a"), *g.find("b")));
}

TEST(ParseDigraph, EmptyGraph) {
  Digraph g = parse_digraph(R"({"vertices":[],"edges":[]})");
  EXPECT_EQ(g.num_vertices(), 0);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(ParseDigraph, DanglingEndpointNamed) {
  try {
    parse_digraph(R"({"vertices":["a","b"],"edges":[["a","c"]]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("dangling endpoint c"), std::string::npos);
  }
}

TEST(ParseDigraph, RejectsSelfLoopAndDuplicate) {
  EXPECT_THROW(parse_digraph(R"({"vertices":["a"],"edges":[["a","a"]]})"), ParseError);
  EXPECT_THROW(parse_digraph(R"({"vertices":["a","b"],"edges":[["a","b"],["a","b"]]})"),
               ParseError);
  EXPECT_THROW(parse_digraph("a a\n"), ParseError);
}

TEST(ParseDigraph, EdgeListKeepsFirstSeenOrder) {
  Digraph g = parse_digraph("x y\n# comment\ny z\n");
  ASSERT_EQ(g.num_vertices(), 3);
  EXPECT_EQ(g.name(0), "x");
  EXPECT_EQ(g.name(2), "z");
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(SplitVertex, PathThroughV) {
  Digraph g = graph_from({"a", "v", "b"}, {{"a", "v"}, {"v", "b"}});
  SplitResult r = split_vertex(g, *g.find("v"));
  EXPECT_EQ(r.graph.num_vertices(), 4);
  EXPECT_EQ(r.graph.num_edges(), 3u);
  EXPECT_TRUE(r.graph.has_edge(r.from_parent[0], r.v_in));
  EXPECT_TRUE(r.graph.has_edge(r.v_in, r.v_out));
  EXPECT_TRUE(r.graph.has_edge(r.v_out, r.from_parent[2]));
}

TEST(SplitVertex, IsolatedVertex) {
  Digraph g = graph_from({"v"}, {});
  SplitResult r = split_vertex(g, 0);
  EXPECT_EQ(r.graph.num_vertices(), 2);
  EXPECT_EQ(r.graph.num_edges(), 1u);
}

TEST(SplitVertex, DegreeTwoTwoCounts) {
  // v has in-neighbours a, b and out-neighbours c, d; plus a -> c.
  Digraph g = graph_from({"a", "b", "v", "c", "d"},
                         {{"a", "v"}, {"b", "v"}, {"v", "c"}, {"v", "d"}, {"a", "c"}});
  SplitResult r = split_vertex(g, *g.find("v"));
  EXPECT_EQ(r.graph.num_vertices(), 6);
  EXPECT_EQ(r.graph.num_edges(), 6u);
  EXPECT_THROW(split_vertex(g, 9), PreconditionError);
}

TEST(StrongComponents, TriangleAndPendant) {
  Digraph tri = bidirected_clique(3);
  EXPECT_EQ(strong_components(tri).size(), 1u);
  Digraph g = graph_from({"a", "b", "c", "s"},
                         {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "s"}});
  auto comps = strong_components(g);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 3u);
  EXPECT_EQ(comps[1].size(), 1u);
}

TEST(StrongComponents, MatchesClosureOracle) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Digraph g = random_digraph(10, 0.18, rng);
    auto got = strong_components(g);
    auto want = testing::naive_strong_components(g);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], want[i]);
  }
}

TEST(ComponentDag, StronglyConnectedRemainder) {
  Digraph g = bidirected_clique(4);
  ComponentDag d(g, VertexSet(4, {0}));
  EXPECT_EQ(d.size(), 1);
  EXPECT_EQ(d.height(0), 0);
}

TEST(ComponentDag, PathHeights) {
  Digraph g = graph_from({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  ComponentDag d(g, g.empty_set());
  ASSERT_EQ(d.size(), 3);
  EXPECT_EQ(d.height(d.component_of(0)), 2);
  EXPECT_EQ(d.height(d.component_of(1)), 1);
  EXPECT_EQ(d.height(d.component_of(2)), 0);
  EXPECT_EQ(d.topo_order().front(), d.component_of(2));
  EXPECT_EQ(d.topo_order().back(), d.component_of(0));
}

TEST(ComponentDag, HeightsDecreaseAlongEdges) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Digraph g = random_digraph(9, 0.2, rng);
    ComponentDag d(g, VertexSet(9, {0}));
    VertexSet seen(9);
    for (const auto& c : d.components()) {
      EXPECT_FALSE(c.intersects(seen));
      seen |= c;
    }
    EXPECT_EQ(seen, g.all() - VertexSet(9, {0}));
    for (int c = 0; c < d.size(); ++c)
      for (int e : d.out(c)) EXPECT_GT(d.height(c), d.height(e));
  }
}

// Downwards closed component sets are exactly those whose vertex union is
// closed under out-neighbours in G - X.
TEST(ComponentDag, DownwardsClosedMatchesVertexClosure) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    Digraph g = random_digraph(8, 0.2, rng);
    ComponentDag d(g, g.empty_set());
    const int l = d.size();
    if (l > 12) continue;
    int enumerated = 0;
    d.for_each_downwards_closed([&](const std::vector<bool>&) {
      ++enumerated;
      return true;
    });
    int brute = 0;
    for (int mask = 0; mask < (1 << l); ++mask) {
      std::vector<bool> m(l);
      for (int i = 0; i < l; ++i) m[i] = (mask >> i) & 1;
      VertexSet vs = d.vertices_of(m);
      bool closed = true;
      vs.for_each([&](Vertex v) {
        for (Vertex w : g.out(v))
          if (!vs.contains(w)) closed = false;
      });
      EXPECT_EQ(closed, d.is_downwards_closed(m));
      brute += closed;
    }
    EXPECT_EQ(enumerated, brute);
  }
}

TEST(ComponentDag, LexOrder) {
  Digraph g = graph_from({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  ComponentDag d(g, g.empty_set());
  std::vector<bool> sink(3, false), mid(3, false);
  sink[d.component_of(2)] = true;
  mid[d.component_of(1)] = true;
  EXPECT_TRUE(d.lex_less(sink, mid));
  EXPECT_FALSE(d.lex_less(mid, sink));
  EXPECT_FALSE(d.lex_less(sink, sink));
}

TEST(Subdivide, EmptyPlanAndLengthThree) {
  Digraph g = graph_from({"u", "v"}, {{"u", "v"}});
  Digraph same = subdivide(g, {});
  EXPECT_EQ(same.num_vertices(), 2);
  EXPECT_EQ(same.num_edges(), 1u);
  Digraph sub = subdivide(g, {{{0, 1}, 3}});
  EXPECT_EQ(sub.num_vertices(), 4);
  EXPECT_EQ(sub.num_edges(), 3u);
  EXPECT_THROW(subdivide(g, {{{1, 0}, 2}}), PreconditionError);
}

}  // namespace
}  // namespace dtangle
