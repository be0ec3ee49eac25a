#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dtangle/bramble.hpp"
#include "dtangle/decomposition.hpp"
#include "dtangle/digraph.hpp"
#include "dtangle/disjoint_paths.hpp"
#include "dtangle/labelling.hpp"
#include "dtangle/separation.hpp"
#include "dtangle/tangle.hpp"
#include "dtangle/walls.hpp"

// JSON is the canonical exchange format. Vertices travel by name; every
// reader resolves names against a graph and throws ParseError naming the
// offending token. Sets are written sorted by vertex id.
namespace dtangle::io {

using Json = nlohmann::json;

Json parse_json(std::string_view text);

Json to_json(const Digraph& g);
Digraph digraph_from_json(const Json& j);

Json to_json(const Digraph& g, const VertexSet& s);
VertexSet vertex_set_from_json(const Digraph& g, const Json& j);

Json path_to_json(const Digraph& g, const Path& p);
Path path_from_json(const Digraph& g, const Json& j);
Json paths_to_json(const Digraph& g, const std::vector<Path>& ps);
std::vector<Path> paths_from_json(const Digraph& g, const Json& j);

// {"out": [...], "in": [...]}
Json to_json(const Digraph& g, const DirectedSeparation& s);
DirectedSeparation separation_from_json(const Digraph& g, const Json& j);

// [["s1", "t1"], ...]; checked with check_pairs.
Json to_json(const Digraph& g, const PairList& pairs);
PairList pairs_from_json(const Digraph& g, const Json& j);

// {"order": m, "cycles": [...], "paths": {"P1": [...], "P2": [...]}}
Json to_json(const Digraph& g, const Wall& w);
Wall wall_from_json(const Digraph& g, const Json& j);

// {"elements": [[...], ...]}
Json to_json(const Digraph& g, const Bramble& b);
Bramble bramble_from_json(const Digraph& g, const Json& j);

// Tangle certificate {"k": order, "cover": [...], "label": name}. Explicit
// tangles list the big strong component for every separator set of size
// below k under "orientation" instead of "cover"; reading one back
// enumerates the separations of order < k. Bramble-backed tangles throw
// PreconditionError.
Json to_json(const Digraph& g, const Tangle& t);
Tangle tangle_from_json(const Digraph& g, const Json& j);
Json to_json(const Digraph& g, const TangleSet& ts);
TangleSet tangles_from_json(const Digraph& g, const Json& j);

// {"root", "num_nodes", "exact", "edges": [{"tail", "head", "order", "out",
// "in", "head_side"}]}
Json to_json(const Digraph& g, const TreeLabelling& lab);
TreeLabelling labelling_from_json(const Digraph& g, const Json& j);

// {"root", "edges": [[parent, child]], "bags", "guards", "anchors"}; anchors
// map tangle index to node and are empty for a plain decomposition.
Json to_json(const Digraph& g, const DirectedTreeDecomposition& d,
             const std::vector<int>& anchors = {});
struct DecompositionDocument {
  DirectedTreeDecomposition dtd;
  std::vector<int> anchors;
};
DecompositionDocument decomposition_from_json(const Digraph& g, const Json& j);

// {"verdict": "half-integral" | "no-integral", "paths", "congestion",
// "decided_by"}; congestion is omitted for no-integral.
Json to_json(const Digraph& g, const HalfIntegralOutcome& r);
HalfIntegralOutcome outcome_from_json(const Digraph& g, const Json& j);

std::string labelling_to_dot(const Digraph& g, const TreeLabelling& lab,
                             const TangleSet& ts);
std::string decomposition_to_dot(const DirectedTreeDecomposition& d);

}  // namespace dtangle::io
