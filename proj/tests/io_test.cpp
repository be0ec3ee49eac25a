#include <gtest/gtest.h>

#include "dtangle/error.hpp"
#include "dtangle/generators.hpp"
#include "dtangle/io.hpp"
#include "test_support.hpp"

namespace dtangle {
namespace {

using io::Json;
using testing::set_of;

// Serialized text of the reparsed value equals the original text.
template <typename T, typename Read>
void expect_round_trip(const Digraph& g, const T& x, Read read) {
  Json j = io::to_json(g, x);
  Json back = io::to_json(g, read(g, io::parse_json(j.dump())));
  EXPECT_EQ(j.dump(), back.dump());
}

TEST(Io, DigraphRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Digraph g = random_digraph(9, 0.3, rng);
    Digraph h = io::digraph_from_json(io::parse_json(io::to_json(g).dump()));
    EXPECT_EQ(h.names(), g.names());
    EXPECT_EQ(h.edges(), g.edges());
  }
  Digraph empty = io::digraph_from_json(io::parse_json(R"({"vertices": [], "edges": []})"));
  EXPECT_EQ(empty.num_vertices(), 0);
}

TEST(Io, SetsSeparationsPairsPaths) {
  Digraph g = testing::graph_from({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  expect_round_trip(g, set_of(g, {"d", "a"}), io::vertex_set_from_json);
  EXPECT_EQ(io::to_json(g, set_of(g, {"d", "a"})).dump(), R"(["a","d"])");
  DirectedSeparation s{set_of(g, {"c", "d"}), set_of(g, {"a", "b", "c"})};
  expect_round_trip(g, s, io::separation_from_json);
  PairList pairs{{0, 2}, {1, 3}};
  expect_round_trip(g, pairs, io::pairs_from_json);
  EXPECT_EQ(io::to_json(g, pairs).dump(), R"([["a","c"],["b","d"]])");
  std::vector<Path> ps{{0, 1, 2}, {3}};
  EXPECT_EQ(io::paths_from_json(g, io::paths_to_json(g, ps)), ps);
}

TEST(Io, WallRoundTrip) {
  auto w = cylindrical_wall(4);
  Json j = io::to_json(w.graph, w.wall);
  EXPECT_EQ(j["order"], 4);
  EXPECT_EQ(io::wall_from_json(w.graph, io::parse_json(j.dump())), w.wall);
  j["order"] = 5;
  EXPECT_THROW(io::wall_from_json(w.graph, j), ParseError);
}

TEST(Io, BrambleAndTangles) {
  Digraph g = bidirected_clique(5);
  Bramble b{{set_of(g, {"v1", "v2"}), set_of(g, {"v2", "v3"})}};
  expect_round_trip(g, b, io::bramble_from_json);
  Tangle cover = Tangle::from_cover(2, set_of(g, {"v1", "v2", "v3"}), "A");
  expect_round_trip(g, cover, io::tangle_from_json);
  // Explicit tangles come back with the same orientation on every separation.
  TangleSet ts = find_tangles(g, 2);
  ASSERT_FALSE(ts.empty());
  for (const auto& t : ts) {
    Tangle back = io::tangle_from_json(g, io::parse_json(io::to_json(g, t).dump()));
    EXPECT_EQ(back.order(), t.order());
    for (const auto& s : enumerate_separations(g, 1)) EXPECT_EQ(back.orient(s), t.orient(s));
  }
  Tangle from_bramble = Tangle::from_bramble(1, b.elements);
  EXPECT_THROW(io::to_json(g, from_bramble), PreconditionError);
}

TEST(Io, LabellingAndDecompositionRoundTrip) {
  ClusterGraph cg = gen_clusters(five_cluster_spec());
  const Digraph& g = cg.graph;
  TreeLabelling lab = build_labelling(g, cg.tangles);
  expect_round_trip(g, lab, io::labelling_from_json);
  auto d = decomposition_from_labelling(g, lab, lab.order());
  Json j = io::to_json(g, d.dtd, d.tau);
  auto doc = io::decomposition_from_json(g, io::parse_json(j.dump()));
  EXPECT_EQ(doc.dtd.root, d.dtd.root);
  EXPECT_EQ(doc.dtd.parent, d.dtd.parent);
  EXPECT_EQ(doc.dtd.bags, d.dtd.bags);
  EXPECT_EQ(doc.dtd.guards, d.dtd.guards);
  EXPECT_EQ(doc.anchors, d.tau);
  EXPECT_EQ(io::to_json(g, doc.dtd, doc.anchors).dump(), j.dump());
  EXPECT_NE(io::labelling_to_dot(g, lab, cg.tangles).find("->"), std::string::npos);
  EXPECT_NE(io::decomposition_to_dot(d.dtd).find("digraph"), std::string::npos);
}

TEST(Io, OutcomeRoundTrip) {
  Digraph g = testing::graph_from({"s", "a", "t"}, {{"s", "a"}, {"a", "t"}});
  HalfIntegralOutcome yes{HalfIntegralOutcome::Verdict::Paths, {{0, 1, 2}}, 1, "base-case"};
  expect_round_trip(g, yes, io::outcome_from_json);
  HalfIntegralOutcome no{HalfIntegralOutcome::Verdict::NoIntegral, {}, 0, "oracle"};
  Json j = io::to_json(g, no);
  EXPECT_EQ(j["verdict"], "no-integral");
  EXPECT_FALSE(j.contains("congestion"));
  expect_round_trip(g, no, io::outcome_from_json);
}

TEST(Io, ErrorsNameTheToken) {
  Digraph g = testing::graph_from({"a", "b"}, {{"a", "b"}});
  auto message = [&](auto f) {
    try {
      f();
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message([&] { io::vertex_set_from_json(g, Json::parse(R"(["a","zz"])")); }),
            "unknown vertex zz");
  EXPECT_NE(message([&] { io::pairs_from_json(g, Json::parse(R"([["a","b"],["b","a"]])")); }),
            "no error");
  EXPECT_NE(message([&] { io::separation_from_json(g, Json::parse(R"({"out": []})")); })
                .find("\"in\""),
            std::string::npos);
  EXPECT_NE(message([] { io::parse_json("{"); }).find("malformed"), std::string::npos);
  EXPECT_NE(message([&] { io::digraph_from_json(Json::parse(R"({"vertices":["a"],"edges":[["a","c"]]})")); })
                .find("dangling endpoint c"),
            std::string::npos);
}

}  // namespace
}  // namespace dtangle
