// dtangle: command-line front end. Every artifact is JSON; DOT is export
// only. Exit codes: 0 decided, 1 verify found a violation, 2 input error,
// 3 size or budget abort. Errors go to stderr as one JSON object.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dtangle/bramble.hpp"
#include "dtangle/decomposition.hpp"
#include "dtangle/disjoint_paths.hpp"
#include "dtangle/error.hpp"
#include "dtangle/flow.hpp"
#include "dtangle/generators.hpp"
#include "dtangle/io.hpp"
#include "dtangle/labelling.hpp"
#include "dtangle/walls.hpp"

namespace {

using namespace dtangle;
using io::Json;

// Unreadable files and bad flag values; reported like parse errors.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string out;
  std::string dot;
  int threads = 1;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

Json read_json(const std::string& path) { return io::parse_json(read_file(path)); }

Digraph load_graph(const std::string& path) { return parse_digraph(read_file(path)); }

// Artifact to -o (summary on stdout) or to stdout (summary on stderr).
void emit(const Globals& gl, const Json& artifact, const std::string& summary) {
  std::string text = artifact.dump(2) + "\n";
  if (gl.out.empty()) {
    std::cout << text;
    std::cerr << summary << "\n";
  } else {
    write_file(gl.out, text);
    std::cout << summary << "\n";
  }
}

void emit_dot(const Globals& gl, const std::string& dot) {
  if (!gl.dot.empty()) write_file(gl.dot, dot);
}

VertexSet vertex_list(const Digraph& g, const std::string& csv) {
  VertexSet s = g.empty_set();
  std::stringstream ss(csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    auto v = g.find(name);
    if (!v) throw ParseError("unknown vertex " + name);
    s.insert(*v);
  }
  return s;
}

std::string counts(const Digraph& g) {
  return std::to_string(g.num_vertices()) + " vertices, " + std::to_string(g.num_edges()) +
         " edges";
}

int gen_wall(const Globals& gl, int k, bool grid, const std::string& graph_out) {
  WallInstance w = grid ? cylindrical_grid(k) : cylindrical_wall(k);
  if (!graph_out.empty()) write_file(graph_out, io::to_json(w.graph).dump(2) + "\n");
  emit_dot(gl, to_dot(w.graph));
  emit(gl, io::to_json(w.graph, w.wall),
       std::string(grid ? "grid" : "wall") + " of order " + std::to_string(w.wall.order()) +
           ": " + counts(w.graph));
  return 0;
}

// {"clusters": [{"name", "size"}], "links": [[from, i, to, j]], "tangle_order"}
// with 1-based indices and clusters named.
ClusterSpec cluster_spec_from_json(const Json& j) {
  ClusterSpec spec;
  std::map<std::string, int> index;
  try {
    for (const auto& c : j.at("clusters")) {
      std::string name = c.at("name").get<std::string>();
      index[name] = static_cast<int>(spec.clusters.size());
      spec.clusters.push_back({name, c.at("size").get<int>()});
    }
    auto cluster = [&](const Json& x) {
      auto it = index.find(x.get<std::string>());
      if (it == index.end()) throw ParseError("unknown cluster " + x.dump());
      return it->second;
    };
    for (const auto& l : j.value("links", Json::array())) {
      if (!l.is_array() || l.size() != 4) throw ParseError("link must be [from, i, to, j]: " + l.dump());
      spec.links.push_back({cluster(l[0]), l[1].get<int>() - 1, cluster(l[2]), l[3].get<int>() - 1});
    }
    spec.tangle_order = j.value("tangle_order", 0);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed cluster spec: ") + e.what());
  }
  for (const auto& l : spec.links)
    if (l.from_index < 0 || l.from_index >= spec.clusters[l.from_cluster].size ||
        l.to_index < 0 || l.to_index >= spec.clusters[l.to_cluster].size)
      throw ParseError("link index outside its cluster");
  return spec;
}

struct ClusterFlags {
  std::string spec_path, preset, tangles_out;
  int count = 3, size = 6, links = 4, order = 2;
};

int gen_clusters(const Globals& gl, const ClusterFlags& f) {
  ClusterSpec spec;
  if (!f.spec_path.empty()) {
    spec = cluster_spec_from_json(read_json(f.spec_path));
  } else if (f.preset == "five") {
    spec = five_cluster_spec();
  } else if (f.preset == "no-uncross") {
    spec = no_uncross_spec();
  } else if (f.preset == "two-cones") {
    spec = two_cones_spec();
  } else if (f.preset == "merge") {
    spec = merge_cluster_spec();
  } else if (f.preset.empty()) {
    if (f.count < 1 || f.size < 1) throw InputError("--count and --size must be positive");
    if (f.count > 1 && f.links > f.count * (f.count - 1) * f.size * f.size)
      throw InputError("--links exceeds the available cluster pairs");
    Rng rng(gl.seed);
    spec = random_cluster_spec(f.count, f.size, f.links, f.order, rng);
  } else {
    throw InputError("unknown preset " + f.preset);
  }
  ClusterGraph cg = gen_clusters(spec);
  if (!f.tangles_out.empty())
    write_file(f.tangles_out, io::to_json(cg.graph, cg.tangles).dump(2) + "\n");
  emit_dot(gl, to_dot(cg.graph));
  emit(gl, io::to_json(cg.graph),
       std::to_string(cg.clusters.size()) + " clusters: " + counts(cg.graph));
  return 0;
}

int min_sep(const Globals& gl, const std::string& graph, const std::string& from,
            const std::string& to, int bound) {
  Digraph g = load_graph(graph);
  VertexSet s = vertex_list(g, from), t = vertex_list(g, to);
  int value = 0;
  auto sep = min_separation(g, s, t, bound, &value);
  Json out = {{"separation", sep ? io::to_json(g, *sep) : Json(nullptr)}};
  if (sep) out["order"] = sep->order();
  emit(gl, out,
       sep ? "separation of order " + std::to_string(sep->order())
           : "no separation of order <= " + std::to_string(bound));
  return 0;
}

int tangles(const Globals& gl, const std::string& graph, int k, int max_results) {
  Digraph g = load_graph(graph);
  TangleSet ts = find_tangles(g, k, static_cast<std::size_t>(max_results));
  emit(gl, io::to_json(g, ts), std::to_string(ts.size()) + " tangles of order " + std::to_string(k));
  return 0;
}

int label(const Globals& gl, const std::string& graph, const std::string& tangle_path) {
  Digraph g = load_graph(graph);
  TangleSet ts = io::tangles_from_json(g, read_json(tangle_path));
  TreeLabelling lab = build_labelling(g, ts);
  emit_dot(gl, io::labelling_to_dot(g, lab, ts));
  emit(gl, io::to_json(g, lab),
       "labelling of " + std::to_string(lab.num_nodes) + " tangles, order " +
           std::to_string(lab.order()));
  return 0;
}

int decompose(const Globals& gl, const std::string& graph, const std::string& tangle_path, int k) {
  Digraph g = load_graph(graph);
  TangleSet ts = io::tangles_from_json(g, read_json(tangle_path));
  TreeLabelling lab = build_labelling(g, ts);
  auto d = decomposition_from_labelling(g, lab, k > 0 ? k : lab.order());
  emit_dot(gl, io::decomposition_to_dot(d.dtd));
  emit(gl, io::to_json(g, d.dtd, d.tau),
       "decomposition with " + std::to_string(d.dtd.num_nodes()) + " nodes, edge-width " +
           std::to_string(d.edge_width()));
  return 0;
}

int route(const Globals& gl, const std::string& graph, const std::string& wall_path,
          const std::string& pairs_path, bool in_wall) {
  Digraph g = load_graph(graph);
  Wall w = io::wall_from_json(g, read_json(wall_path));
  if (auto v = validate_wall(g, w)) throw ParseError("invalid wall certificate: " + v->detail);
  PairList pairs = io::pairs_from_json(g, read_json(pairs_path));
  Json out;
  if (in_wall) {
    auto paths = route_in_wall(w, pairs);
    out = {{"outcome", "linkage"}, {"paths", io::paths_to_json(g, paths)},
           {"congestion", congestion(paths)}};
  } else {
    std::vector<Vertex> s, t;
    for (auto [a, b] : pairs) {
      s.push_back(a);
      t.push_back(b);
    }
    RoutingOutcome r = route_through_wall(g, s, t, w);
    if (r.kind == RoutingOutcome::Kind::Linkage) {
      out = {{"outcome", "linkage"}, {"paths", io::paths_to_json(g, r.paths)},
             {"congestion", congestion(r.paths)}};
    } else {
      out = {{"outcome", r.kind == RoutingOutcome::Kind::ShieldsSources ? "shields-sources"
                                                                         : "shields-terminals"},
             {"separation", io::to_json(g, r.sep)}};
    }
  }
  emit(gl, out, "route: " + out["outcome"].get<std::string>());
  return 0;
}

struct HndpFlags {
  std::string graph, pairs, wall;
  int tangle_order = 0;
  std::size_t budget = 100'000;
};

int hndp(const Globals& gl, const HndpFlags& f) {
  Digraph g = load_graph(f.graph);
  PairList pairs = io::pairs_from_json(g, read_json(f.pairs));
  Wall w;
  HalfOrNoOptions opts;
  if (!f.wall.empty()) {
    w = io::wall_from_json(g, read_json(f.wall));
    if (auto v = validate_wall(g, w)) throw ParseError("invalid wall certificate: " + v->detail);
    opts.wall = &w;
  }
  opts.tangle_order = f.tangle_order;
  opts.budget = f.budget;
  opts.threads = gl.threads;
  try {
    HalfIntegralOutcome r = half_or_no(g, pairs, opts);
    emit(gl, io::to_json(g, r), "verdict " + io::to_json(g, r)["verdict"].get<std::string>() +
                                    " (" + r.decided_by + ")");
    return 0;
  } catch (const SizeGuardError& e) {
    emit(gl, {{"verdict", "aborted"}, {"reason", e.what()}}, "verdict aborted");
    throw;
  } catch (const BudgetError& e) {
    emit(gl, {{"verdict", "aborted"}, {"reason", e.what()}}, "verdict aborted");
    throw;
  }
}

struct VerifyFlags {
  std::string what, graph, cert, pairs, tangles;
};

int verify(const Globals& gl, const VerifyFlags& f) {
  Digraph g = load_graph(f.graph);
  Json cert = read_json(f.cert);
  std::optional<std::string> violation;
  if (f.what == "wall") {
    if (auto v = validate_wall(g, io::wall_from_json(g, cert))) violation = v->detail;
  } else if (f.what == "separation") {
    if (auto v = validate_separation(g, io::separation_from_json(g, cert))) violation = v->describe(g);
  } else if (f.what == "bramble") {
    violation = validate_bramble(g, io::bramble_from_json(g, cert));
  } else if (f.what == "tangle") {
    TangleSet ts = cert.is_array() ? io::tangles_from_json(g, cert)
                                   : TangleSet{io::tangle_from_json(g, cert)};
    for (const auto& t : ts)
      if (auto v = check_tangle_axioms(g, t)) {
        violation = v->describe(g);
        break;
      }
  } else if (f.what == "labelling") {
    if (f.tangles.empty()) throw InputError("--what labelling needs --tangles");
    TangleSet ts = io::tangles_from_json(g, read_json(f.tangles));
    if (auto v = verify_labelling(g, ts, io::labelling_from_json(g, cert))) violation = v->detail;
  } else if (f.what == "decomposition") {
    if (auto v = verify_dtd(g, io::decomposition_from_json(g, cert).dtd)) violation = v->detail;
  } else if (f.what == "paths") {
    if (f.pairs.empty()) throw InputError("--what paths needs --pairs");
    PairList pairs = io::pairs_from_json(g, read_json(f.pairs));
    auto paths = cert.is_array() ? io::paths_from_json(g, cert)
                                 : io::outcome_from_json(g, cert).paths;
    violation = verify_half_integral(g, pairs, paths);
  } else {
    throw InputError("unknown --what " + f.what);
  }
  Json out = {{"ok", !violation}};
  if (violation) out["violation"] = *violation;
  emit(gl, out, violation ? "violation: " + *violation : "ok");
  return violation ? 1 : 0;
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed separations, tangles, decompositions and half-integral linkage"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  app.add_option("-o,--output", gl.out, "artifact path (default stdout)");
  app.add_option("--dot", gl.dot, "DOT export path, where the subcommand has one");
  app.add_option("--threads", gl.threads, "cap on internal parallelism")->check(CLI::PositiveNumber);
  app.add_option("--seed", gl.seed, "seed for generators");
  std::function<int()> run;

  int k = 3;
  std::string graph_out;
  for (bool grid : {false, true}) {
    auto* sub = app.add_subcommand(grid ? "gen-grid" : "gen-wall",
                                   grid ? "cylindrical grid and its certificate"
                                        : "cylindrical wall and its certificate");
    sub->add_option("--k", k, "order")->required();
    sub->add_option("--graph-out", graph_out, "write the host graph here");
    sub->callback([&, grid] { run = [&, grid] { return gen_wall(gl, k, grid, graph_out); }; });
  }

  ClusterFlags cf;
  auto* clusters = app.add_subcommand("gen-clusters", "bidirected cliques with tangle certificates");
  clusters->add_option("--spec", cf.spec_path, "cluster spec JSON");
  clusters->add_option("--preset", cf.preset, "five | no-uncross | two-cones | merge");
  clusters->add_option("--count", cf.count, "random: number of clusters");
  clusters->add_option("--size", cf.size, "random: clique size");
  clusters->add_option("--links", cf.links, "random: one-way inter-cluster edges");
  clusters->add_option("--order", cf.order, "random: tangle order");
  clusters->add_option("--tangles-out", cf.tangles_out, "write tangle certificates here");
  clusters->callback([&] { run = [&] { return gen_clusters(gl, cf); }; });

  std::string graph, from, to, tangle_path, wall_path, pairs_path;
  int bound = 0, max_results = 16;
  auto* ms = app.add_subcommand("min-sep", "minimum separation from S to T");
  ms->add_option("--graph", graph)->required();
  ms->add_option("--from", from, "comma-separated sources")->required();
  ms->add_option("--to", to, "comma-separated sinks")->required();
  ms->add_option("--bound", bound, "largest order of interest")->required();
  ms->callback([&] { run = [&] { return min_sep(gl, graph, from, to, bound); }; });

  auto* tg = app.add_subcommand("tangles", "all tangles of the given order");
  tg->add_option("--graph", graph)->required();
  tg->add_option("--k", k)->required();
  tg->add_option("--max", max_results, "stop after this many");
  tg->callback([&] { run = [&] { return tangles(gl, graph, k, max_results); }; });

  auto* lb = app.add_subcommand("label", "canonical tangle tree-labelling");
  lb->add_option("--graph", graph)->required();
  lb->add_option("--tangles", tangle_path)->required();
  lb->callback([&] { run = [&] { return label(gl, graph, tangle_path); }; });

  int dk = 0;
  auto* dc = app.add_subcommand("decompose", "directed tree-decomposition distinguishing the tangles");
  dc->add_option("--graph", graph)->required();
  dc->add_option("--tangles", tangle_path)->required();
  dc->add_option("--k", dk, "order bound (default: labelling order)");
  dc->callback([&] { run = [&] { return decompose(gl, graph, tangle_path, dk); }; });

  bool in_wall = false;
  auto* rt = app.add_subcommand("route", "congestion-2 routing through a wall");
  rt->add_option("--graph", graph)->required();
  rt->add_option("--wall", wall_path)->required();
  rt->add_option("--pairs", pairs_path)->required();
  rt->add_flag("--in-wall", in_wall, "terminals lie on the wall; route inside it");
  rt->callback([&] { run = [&] { return route(gl, graph, wall_path, pairs_path, in_wall); }; });

  HndpFlags hf;
  auto* hn = app.add_subcommand("hndp", "half-integral disjoint paths or no integral solution");
  hn->add_option("--graph", hf.graph)->required();
  hn->add_option("--pairs", hf.pairs)->required();
  hn->add_option("--wall", hf.wall, "wall certificate for the leaf case");
  hn->add_option("--tangle-order", hf.tangle_order, "m (default k(6k^2+2k+3))");
  hn->add_option("--budget", hf.budget, "boundary guesses per decomposition node");
  hn->callback([&] { run = [&] { return hndp(gl, hf); }; });

  VerifyFlags vf;
  auto* vr = app.add_subcommand("verify", "check a certificate against a graph");
  vr->add_option("--what", vf.what,
                 "wall | separation | bramble | tangle | labelling | decomposition | paths")
      ->required();
  vr->add_option("--graph", vf.graph)->required();
  vr->add_option("--cert", vf.cert)->required();
  vr->add_option("--pairs", vf.pairs);
  vr->add_option("--tangles", vf.tangles);
  vr->callback([&] { run = [&] { return verify(gl, vf); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }
  try {
    return run();
  } catch (const ParseError& e) {
    return fail("parse", e.what(), 2);
  } catch (const PreconditionError& e) {
    return fail("precondition", e.what(), 2);
  } catch (const InputError& e) {
    return fail("input", e.what(), 2);
  } catch (const SizeGuardError& e) {
    return fail("size-guard", e.what(), 3);
  } catch (const BudgetError& e) {
    return fail("budget", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 4);
  }
}
