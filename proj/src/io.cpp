#include "dtangle/io.hpp"

#include <map>
#include <sstream>

#include "dtangle/error.hpp"

namespace dtangle::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array: " + j.dump());
  return j;
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer: " + j.dump());
  return j.get<int>();
}

Vertex vertex(const Digraph& g, const Json& j) {
  if (!j.is_string()) throw ParseError("vertex must be a name: " + j.dump());
  auto v = g.find(j.get<std::string>());
  if (!v) throw ParseError("unknown vertex " + j.get<std::string>());
  return *v;
}

int node(const Json& j, int n, const char* what) {
  int x = integer(j, what);
  if (x < 0 || x >= n) throw ParseError(std::string(what) + " out of range: " + j.dump());
  return x;
}

Json names(const Digraph& g, const std::vector<Vertex>& vs) {
  Json out = Json::array();
  for (Vertex v : vs) out.push_back(g.name(v));
  return out;
}

std::vector<Path> rows_from_json(const Digraph& g, const Json& j, const char* what) {
  array(j, what);
  return paths_from_json(g, j);
}

const char* side_name(Side s) { return s == Side::Out ? "out" : "in"; }

Side side_from_json(const Json& j) {
  if (j == "out") return Side::Out;
  if (j == "in") return Side::In;
  throw ParseError("side must be \"out\" or \"in\": " + j.dump());
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Json to_json(const Digraph& g) {
  Json es = Json::array();
  for (auto [u, v] : g.edges()) es.push_back({g.name(u), g.name(v)});
  return {{"vertices", g.names()}, {"edges", es}};
}

Digraph digraph_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("graph must be a JSON object");
  return parse_digraph(j.dump());
}

Json to_json(const Digraph& g, const VertexSet& s) { return names(g, s.to_vector()); }

VertexSet vertex_set_from_json(const Digraph& g, const Json& j) {
  VertexSet s = g.empty_set();
  for (const auto& x : array(j, "vertex set")) s.insert(vertex(g, x));
  return s;
}

Json path_to_json(const Digraph& g, const Path& p) { return names(g, p); }

Path path_from_json(const Digraph& g, const Json& j) {
  Path p;
  for (const auto& x : array(j, "path")) p.push_back(vertex(g, x));
  return p;
}

Json paths_to_json(const Digraph& g, const std::vector<Path>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(path_to_json(g, p));
  return out;
}

std::vector<Path> paths_from_json(const Digraph& g, const Json& j) {
  std::vector<Path> out;
  for (const auto& x : array(j, "path list")) out.push_back(path_from_json(g, x));
  return out;
}

Json to_json(const Digraph& g, const DirectedSeparation& s) {
  return {{"out", to_json(g, s.out)}, {"in", to_json(g, s.in)}};
}

DirectedSeparation separation_from_json(const Digraph& g, const Json& j) {
  return {vertex_set_from_json(g, field(j, "out")), vertex_set_from_json(g, field(j, "in"))};
}

Json to_json(const Digraph& g, const PairList& pairs) {
  Json out = Json::array();
  for (auto [s, t] : pairs) out.push_back({g.name(s), g.name(t)});
  return out;
}

PairList pairs_from_json(const Digraph& g, const Json& j) {
  PairList pairs;
  for (const auto& x : array(j, "pair list")) {
    if (!x.is_array() || x.size() != 2) throw ParseError("pair must be [source, terminal]: " + x.dump());
    pairs.emplace_back(vertex(g, x[0]), vertex(g, x[1]));
  }
  try {
    check_pairs(g, pairs);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
  return pairs;
}

Json to_json(const Digraph& g, const Wall& w) {
  return {{"order", w.order()},
          {"cycles", paths_to_json(g, w.cycles)},
          {"paths", {{"P1", paths_to_json(g, w.rows1)}, {"P2", paths_to_json(g, w.rows2)}}}};
}

Wall wall_from_json(const Digraph& g, const Json& j) {
  Wall w;
  int order = integer(field(j, "order"), "order");
  w.cycles = rows_from_json(g, field(j, "cycles"), "cycles");
  const Json& ps = field(j, "paths");
  w.rows1 = rows_from_json(g, field(ps, "P1"), "P1");
  w.rows2 = rows_from_json(g, field(ps, "P2"), "P2");
  if (w.order() != order)
    throw ParseError("order " + std::to_string(order) + " does not match " +
                     std::to_string(w.order()) + " cycles");
  return w;
}

Json to_json(const Digraph& g, const Bramble& b) {
  Json es = Json::array();
  for (const auto& e : b.elements) es.push_back(to_json(g, e));
  return {{"elements", es}};
}

Bramble bramble_from_json(const Digraph& g, const Json& j) {
  Bramble b;
  for (const auto& x : array(field(j, "elements"), "elements"))
    b.elements.push_back(vertex_set_from_json(g, x));
  return b;
}

Json to_json(const Digraph& g, const Tangle& t) {
  Json out = {{"k", t.order()}};
  if (t.origin() == Tangle::Origin::Cover) {
    out["cover"] = to_json(g, t.cover());
  } else if (t.origin() == Tangle::Origin::Explicit) {
    // One entry per separator set: the strong component of G - X on the big side.
    Json orient = Json::array();
    for_each_subset_up_to(g.num_vertices(), t.order() - 1, [&](const std::vector<Vertex>& xs) {
      VertexSet x(g.num_vertices(), xs);
      if (x.size() == static_cast<std::size_t>(g.num_vertices())) return true;
      orient.push_back({{"separator", to_json(g, x)},
                        {"big", to_json(g, unique_big_component(g, t, x))}});
      return true;
    });
    out["orientation"] = orient;
  } else {
    throw PreconditionError("bramble-backed tangles serialize through their bramble");
  }
  if (!t.label().empty()) out["label"] = t.label();
  return out;
}

Tangle tangle_from_json(const Digraph& g, const Json& j) {
  int k = integer(field(j, "k"), "k");
  if (k < 1) throw ParseError("tangle order must be positive");
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : "";
  if (j.contains("cover"))
    return Tangle::from_cover(k, vertex_set_from_json(g, j.at("cover")), std::move(label));
  std::map<std::vector<Vertex>, VertexSet> big;
  for (const auto& x : array(field(j, "orientation"), "orientation"))
    big[vertex_set_from_json(g, field(x, "separator")).to_vector()] =
        vertex_set_from_json(g, field(x, "big"));
  Tangle::Map m;
  VertexSet root = g.empty_set();
  if (auto it = big.find({}); it != big.end()) root = it->second;
  for (const auto& s : enumerate_separations(g, k - 1)) {
    auto it = big.find(s.separator().to_vector());
    if (it == big.end())
      throw ParseError("orientation misses separator " + to_string(g, s.separator()));
    m.emplace(s, it->second.is_subset_of(s.out - s.in) ? Side::Out : Side::In);
  }
  return Tangle::from_map(k, std::move(m), root, std::move(label));
}

Json to_json(const Digraph& g, const TangleSet& ts) {
  Json out = Json::array();
  for (const auto& t : ts) out.push_back(to_json(g, t));
  return out;
}

TangleSet tangles_from_json(const Digraph& g, const Json& j) {
  TangleSet ts;
  for (const auto& x : array(j, "tangle list")) ts.push_back(tangle_from_json(g, x));
  return ts;
}

Json to_json(const Digraph& g, const TreeLabelling& lab) {
  Json es = Json::array();
  for (const auto& e : lab.edges)
    es.push_back({{"tail", e.tail},
                  {"head", e.head},
                  {"order", e.sep.order()},
                  {"out", to_json(g, e.sep.out)},
                  {"in", to_json(g, e.sep.in)},
                  {"head_side", side_name(e.head_side)}});
  return {{"root", lab.root}, {"num_nodes", lab.num_nodes}, {"exact", lab.exact}, {"edges", es}};
}

TreeLabelling labelling_from_json(const Digraph& g, const Json& j) {
  TreeLabelling lab;
  lab.num_nodes = integer(field(j, "num_nodes"), "num_nodes");
  if (lab.num_nodes < 0) throw ParseError("num_nodes must be non-negative");
  lab.root = lab.num_nodes == 0 ? integer(field(j, "root"), "root")
                                : node(field(j, "root"), lab.num_nodes, "root");
  lab.exact = j.value("exact", true);
  for (const auto& x : array(field(j, "edges"), "edges")) {
    LabelledEdge e;
    e.tail = node(field(x, "tail"), lab.num_nodes, "tail");
    e.head = node(field(x, "head"), lab.num_nodes, "head");
    e.sep = separation_from_json(g, x);
    e.head_side = side_from_json(field(x, "head_side"));
    if (x.contains("order") && integer(x.at("order"), "order") != e.sep.order())
      throw ParseError("edge order does not match its separation");
    lab.edges.push_back(std::move(e));
  }
  return lab;
}

Json to_json(const Digraph& g, const DirectedTreeDecomposition& d,
             const std::vector<int>& anchors) {
  Json es = Json::array(), bags = Json::array(), guards = Json::array();
  for (int t = 0; t < d.num_nodes(); ++t) {
    if (d.parent[t] >= 0) es.push_back({d.parent[t], t});
    bags.push_back(to_json(g, d.bags[t]));
    guards.push_back(to_json(g, d.guards[t]));
  }
  return {{"root", d.root}, {"edges", es}, {"bags", bags}, {"guards", guards}, {"anchors", anchors}};
}

DecompositionDocument decomposition_from_json(const Digraph& g, const Json& j) {
  DecompositionDocument doc;
  auto& d = doc.dtd;
  for (const auto& x : array(field(j, "bags"), "bags")) d.bags.push_back(vertex_set_from_json(g, x));
  for (const auto& x : array(field(j, "guards"), "guards"))
    d.guards.push_back(vertex_set_from_json(g, x));
  const int n = static_cast<int>(d.bags.size());
  if (static_cast<int>(d.guards.size()) != n) throw ParseError("bags and guards differ in length");
  d.root = node(field(j, "root"), n, "root");
  d.parent.assign(n, -1);
  for (const auto& x : array(field(j, "edges"), "edges")) {
    if (!x.is_array() || x.size() != 2) throw ParseError("edge must be [parent, child]: " + x.dump());
    int p = node(x[0], n, "parent"), c = node(x[1], n, "child");
    if (d.parent[c] != -1 || c == d.root) throw ParseError("node " + std::to_string(c) + " has two parents");
    d.parent[c] = p;
  }
  if (j.contains("anchors"))
    for (const auto& x : array(j.at("anchors"), "anchors")) doc.anchors.push_back(node(x, n, "anchor"));
  return doc;
}

Json to_json(const Digraph& g, const HalfIntegralOutcome& r) {
  Json out = {{"verdict", r.verdict == HalfIntegralOutcome::Verdict::Paths ? "half-integral" : "no-integral"},
              {"paths", paths_to_json(g, r.paths)},
              {"decided_by", r.decided_by}};
  if (r.verdict == HalfIntegralOutcome::Verdict::Paths) out["congestion"] = r.congestion;
  return out;
}

HalfIntegralOutcome outcome_from_json(const Digraph& g, const Json& j) {
  HalfIntegralOutcome r;
  const Json& v = field(j, "verdict");
  if (v == "half-integral") {
    r.verdict = HalfIntegralOutcome::Verdict::Paths;
    r.congestion = integer(field(j, "congestion"), "congestion");
  } else if (v == "no-integral") {
    r.verdict = HalfIntegralOutcome::Verdict::NoIntegral;
  } else {
    throw ParseError("unknown verdict " + v.dump());
  }
  r.paths = paths_from_json(g, field(j, "paths"));
  r.decided_by = j.value("decided_by", "");
  return r;
}

std::string labelling_to_dot(const Digraph& g, const TreeLabelling& lab, const TangleSet& ts) {
  std::ostringstream os;
  os << "digraph labelling {\n";
  for (int i = 0; i < lab.num_nodes; ++i) {
    std::string name = i < static_cast<int>(ts.size()) && !ts[i].label().empty()
                           ? ts[i].label()
                           : "T" + std::to_string(i);
    os << "  " << i << " [label=\"" << name << "\"" << (i == lab.root ? ", shape=box" : "") << "];\n";
  }
  for (const auto& e : lab.edges)
    os << "  " << e.tail << " -> " << e.head << " [label=\"" << e.sep.order() << ": "
       << to_string(g, e.sep.separator()) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string decomposition_to_dot(const DirectedTreeDecomposition& d) {
  std::ostringstream os;
  os << "digraph decomposition {\n";
  for (int t = 0; t < d.num_nodes(); ++t)
    os << "  " << t << " [label=\"" << t << " |B|=" << d.bags[t].size() << "\"];\n";
  for (int t = 0; t < d.num_nodes(); ++t)
    if (d.parent[t] >= 0)
      os << "  " << d.parent[t] << " -> " << t << " [label=\"" << d.guards[t].size() << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace dtangle::io
