#include "dtangle/digraph.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

#include "dtangle/error.hpp"

namespace dtangle {

Digraph::Digraph(int n, const std::vector<Edge>& edges,
                 std::vector<std::string> names)
    : out_(n), in_(n), names_(std::move(names)) {
  if (names_.empty()) {
    names_.reserve(n);
    for (int i = 0; i < n; ++i) names_.push_back(std::to_string(i));
  }
  if (static_cast<int>(names_.size()) != n)
    throw PreconditionError("name table size differs from vertex count");
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw PreconditionError("edge endpoint out of range");
    if (u == v) throw PreconditionError("self-loop at " + names_[u]);
    out_[u].push_back(v);
    in_[v].push_back(u);
  }
  for (int v = 0; v < n; ++v) {
    for (auto* adj : {&out_[v], &in_[v]}) {
      std::sort(adj->begin(), adj->end());
      adj->erase(std::unique(adj->begin(), adj->end()), adj->end());
    }
    num_edges_ += out_[v].size();
  }
  for (int v = 0; v < n; ++v) index_.emplace(names_[v], v);
}

bool Digraph::has_edge(Vertex u, Vertex v) const {
  return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> es;
  es.reserve(num_edges_);
  for (int u = 0; u < num_vertices(); ++u)
    for (Vertex v : out_[u]) es.emplace_back(u, v);
  return es;
}

std::optional<Vertex> Digraph::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Digraph Digraph::reversed() const {
  std::vector<Edge> es;
  es.reserve(num_edges_);
  for (int u = 0; u < num_vertices(); ++u)
    for (Vertex v : out_[u]) es.emplace_back(v, u);
  return Digraph(num_vertices(), es, names_);
}

InducedSubgraph induced_subgraph(const Digraph& g, const VertexSet& keep) {
  InducedSubgraph r;
  r.from_parent.assign(g.num_vertices(), -1);
  std::vector<std::string> names;
  keep.for_each([&](Vertex v) {
    r.from_parent[v] = static_cast<Vertex>(r.to_parent.size());
    r.to_parent.push_back(v);
    names.push_back(g.name(v));
  });
  std::vector<Edge> es;
  for (Vertex u : r.to_parent)
    for (Vertex v : g.out(u))
      if (r.from_parent[v] >= 0) es.emplace_back(r.from_parent[u], r.from_parent[v]);
  r.graph = Digraph(static_cast<int>(r.to_parent.size()), es, std::move(names));
  return r;
}

namespace {

std::string json_token(const nlohmann::json& j) {
  return j.is_string() ? j.get<std::string>() : j.dump();
}

Digraph parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
    throw ParseError("graph JSON needs a \"vertices\" array");
  std::vector<std::string> names;
  std::map<std::string, Vertex, std::less<>> ids;
  for (const auto& jv : doc["vertices"]) {
    std::string name = json_token(jv);
    if (!ids.emplace(name, static_cast<Vertex>(names.size())).second)
      throw ParseError("duplicate vertex " + name);
    names.push_back(name);
  }
  std::vector<Edge> es;
  std::map<Edge, bool> seen;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("\"edges\" must be an array");
    for (const auto& je : doc["edges"]) {
      if (!je.is_array() || je.size() != 2)
        throw ParseError("edge must be a [tail, head] pair: " + je.dump());
      std::string t = json_token(je[0]), h = json_token(je[1]);
      auto it = ids.find(t);
      if (it == ids.end()) throw ParseError("dangling endpoint " + t);
      auto jt = ids.find(h);
      if (jt == ids.end()) throw ParseError("dangling endpoint " + h);
      if (it->second == jt->second) throw ParseError("self-loop " + t);
      Edge e{it->second, jt->second};
      if (seen.count(e)) throw ParseError("duplicate edge " + t + " " + h);
      seen[e] = true;
      es.push_back(e);
    }
  }
  const int n = static_cast<int>(names.size());
  return Digraph(n, es, std::move(names));
}

Digraph parse_edge_list(std::string_view text) {
  std::vector<std::string> names;
  std::map<std::string, Vertex, std::less<>> ids;
  auto id_of = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<Vertex>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  };
  std::vector<Edge> es;
  std::map<Edge, bool> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string t, h, extra;
    if (!(ls >> t)) continue;
    if (!(ls >> h)) throw ParseError("edge line needs two tokens: " + line);
    if (ls >> extra) throw ParseError("unexpected token " + extra);
    if (t == h) throw ParseError("self-loop " + t);
    Edge e{id_of(t), id_of(h)};
    if (seen.count(e)) throw ParseError("duplicate edge " + t + " " + h);
    seen[e] = true;
    es.push_back(e);
  }
  const int n = static_cast<int>(names.size());
  return Digraph(n, es, std::move(names));
}

}  // namespace

Digraph parse_digraph(std::string_view text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string_view::npos && text[pos] == '{') return parse_json(text);
  return parse_edge_list(text);
}

SplitResult split_vertex(const Digraph& g, Vertex v) {
  if (v < 0 || v >= g.num_vertices())
    throw PreconditionError("split_vertex: vertex not found");
  const int n = g.num_vertices();
  SplitResult r;
  r.from_parent.assign(n, -1);
  std::vector<std::string> names;
  for (int u = 0; u < n; ++u) {
    if (u == v) continue;
    r.from_parent[u] = static_cast<Vertex>(names.size());
    names.push_back(g.name(u));
  }
  r.v_in = n - 1;
  r.v_out = n;
  names.push_back(g.name(v) + "_in");
  names.push_back(g.name(v) + "_out");
  std::vector<Edge> es{{r.v_in, r.v_out}};
  for (int u = 0; u < n; ++u)
    for (Vertex w : g.out(u)) {
      Vertex a = u == v ? r.v_out : r.from_parent[u];
      Vertex b = w == v ? r.v_in : r.from_parent[w];
      es.emplace_back(a, b);
    }
  r.graph = Digraph(n + 1, es, std::move(names));
  return r;
}

Digraph subdivide(const Digraph& g, const std::map<Edge, int>& plan) {
  std::vector<std::string> names = g.names();
  std::vector<Edge> es;
  int next = g.num_vertices();
  for (const auto& [e, len] : plan) {
    if (!g.has_edge(e.first, e.second))
      throw PreconditionError("subdivide: unknown edge " + g.name(e.first) +
                              " " + g.name(e.second));
    if (len < 1) throw PreconditionError("subdivide: length must be >= 1");
  }
  for (auto [u, v] : g.edges()) {
    auto it = plan.find({u, v});
    int len = it == plan.end() ? 1 : it->second;
    Vertex prev = u;
    for (int i = 1; i < len; ++i) {
      names.push_back(g.name(u) + "~" + g.name(v) + "~" + std::to_string(i));
      es.emplace_back(prev, next);
      prev = next++;
    }
    es.emplace_back(prev, v);
  }
  return Digraph(next, es, std::move(names));
}

std::string to_dot(const Digraph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < g.num_vertices(); ++v)
    os << "  " << v << " [label=\"" << g.name(v) << "\"];\n";
  for (auto [u, v] : g.edges()) os << "  " << u << " -> " << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace dtangle
