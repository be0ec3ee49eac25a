#include "dtangle/walls.hpp"

#include <algorithm>
#include <stdexcept>

#include "dtangle/error.hpp"

namespace dtangle {

VertexSet Wall::vertices(int n) const {
  VertexSet out(n);
  for (const auto* group : {&cycles, &rows1, &rows2})
    for (const auto& seq : *group)
      for (Vertex v : seq) out.insert(v);
  return out;
}

namespace {

int max_id(const Wall& w) {
  int n = 0;
  for (const auto* group : {&w.cycles, &w.rows1, &w.rows2})
    for (const auto& seq : *group)
      for (Vertex v : seq) n = std::max(n, v + 1);
  return n;
}

// Position lookups for a wall whose vertex ids are below n.
struct WallIndex {
  std::vector<int> cycle_of, cycle_pos, row_of, row_pos;
  // first_on[r][c] / last_on[r][c]: positions along row r of its first and
  // last vertex on cycle c, -1 when the row misses the cycle.
  std::vector<std::vector<int>> first_on, last_on;

  WallIndex(int n, const Wall& w)
      : cycle_of(n, -1), cycle_pos(n, -1), row_of(n, -1), row_pos(n, -1) {
    for (int c = 0; c < w.order(); ++c)
      for (int i = 0; i < static_cast<int>(w.cycles[c].size()); ++i) {
        cycle_of[w.cycles[c][i]] = c;
        cycle_pos[w.cycles[c][i]] = i;
      }
    first_on.assign(w.num_rows(), std::vector<int>(w.order(), -1));
    last_on = first_on;
    for (int r = 0; r < w.num_rows(); ++r) {
      const Path& p = w.row(r);
      for (int i = 0; i < static_cast<int>(p.size()); ++i) {
        row_of[p[i]] = r;
        row_pos[p[i]] = i;
        int c = cycle_of[p[i]];
        if (c < 0) continue;
        if (first_on[r][c] < 0) first_on[r][c] = i;
        last_on[r][c] = i;
      }
    }
  }
};

// Cycle vertices from position a to position b, following the cycle.
void append_cycle(Path& walk, const Path& cycle, int a, int b) {
  const int len = static_cast<int>(cycle.size());
  for (int i = a;; i = (i + 1) % len) {
    walk.push_back(cycle[i]);
    if (i == b) break;
  }
}

void append_row(Path& walk, const Path& row, int a, int b) {
  for (int i = a; i <= b; ++i) walk.push_back(row[i]);
}

// Joins pieces that share their junction vertices.
Path join(const std::vector<Path>& pieces) {
  Path walk;
  for (const auto& piece : pieces)
    for (std::size_t i = 0; i < piece.size(); ++i)
      if (i > 0 || walk.empty() || walk.back() != piece[0]) walk.push_back(piece[i]);
  return shortcut(walk);
}

std::string vname(const Digraph& g, Vertex v) { return g.name(v); }

}  // namespace

WallInstance cylindrical_grid(int k) {
  if (k < 1) throw PreconditionError("cylindrical_grid: k must be >= 1");
  const int width = 2 * k;
  auto id = [&](int i, int j) { return (i - 1) * width + j; };
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i)
    for (int j = 0; j < width; ++j) names.push_back("v" + std::to_string(i) + "_" + std::to_string(j));
  std::vector<Edge> edges;
  for (int i = 1; i <= k; ++i)
    for (int j = 0; j < width; ++j) edges.emplace_back(id(i, j), id(i, (j + 1) % width));
  for (int i = 1; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      edges.emplace_back(id(i, 2 * j), id(i + 1, 2 * j));
      edges.emplace_back(id(i + 1, 2 * j + 1), id(i, 2 * j + 1));
    }
  WallInstance out{Digraph(k * width, edges, names), {}};
  for (int i = 1; i <= k; ++i) {
    Path c;
    for (int j = 0; j < width; ++j) c.push_back(id(i, j));
    out.wall.cycles.push_back(c);
  }
  for (int j = 0; j < k; ++j) {
    Path p1, p2;
    for (int i = 1; i <= k; ++i) p1.push_back(id(i, 2 * j));
    for (int i = k; i >= 1; --i) p2.push_back(id(i, 2 * j + 1));
    out.wall.rows1.push_back(p1);
    out.wall.rows2.push_back(p2);
  }
  return out;
}

WallInstance cylindrical_wall(int k) {
  if (k < 3) throw PreconditionError("cylindrical_wall: k must be >= 3");
  WallInstance grid = cylindrical_grid(k);
  const Digraph& gk = grid.graph;
  const int n = gk.num_vertices();
  // Grid vertex v becomes in_of[v] -> out_of[v], one vertex when unsplit.
  std::vector<Vertex> in_of(n), out_of(n);
  std::vector<std::string> names;
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) {
    int i = v / (2 * k) + 1;
    in_of[v] = static_cast<Vertex>(names.size());
    if (i > 1 && i < k) {
      names.push_back(gk.name(v) + ".in");
      names.push_back(gk.name(v) + ".out");
      out_of[v] = in_of[v] + 1;
      edges.emplace_back(in_of[v], out_of[v]);
    } else {
      names.push_back(gk.name(v));
      out_of[v] = in_of[v];
    }
  }
  for (auto [u, v] : gk.edges()) edges.emplace_back(out_of[u], in_of[v]);
  auto lift = [&](const Path& p) {
    Path q;
    for (Vertex v : p) {
      q.push_back(in_of[v]);
      if (out_of[v] != in_of[v]) q.push_back(out_of[v]);
    }
    return q;
  };
  WallInstance out{Digraph(static_cast<int>(names.size()), edges, names), {}};
  for (const auto& c : grid.wall.cycles) out.wall.cycles.push_back(lift(c));
  for (const auto& p : grid.wall.rows1) out.wall.rows1.push_back(lift(p));
  for (const auto& p : grid.wall.rows2) out.wall.rows2.push_back(lift(p));
  return out;
}

WallInstance subdivide_wall(const WallInstance& w, const std::map<Edge, int>& plan) {
  WallInstance out{subdivide(w.graph, plan), {}};
  const Digraph& old = w.graph;
  auto thread = [&](const Path& p, bool closed) {
    Path q;
    const std::size_t len = p.size();
    for (std::size_t i = 0; i < len; ++i) {
      q.push_back(p[i]);
      if (!closed && i + 1 == len) break;
      Vertex u = p[i], v = p[(i + 1) % len];
      auto it = plan.find({u, v});
      if (it == plan.end()) continue;
      for (int s = 1; s < it->second; ++s)
        q.push_back(*out.graph.find(old.name(u) + "~" + old.name(v) + "~" + std::to_string(s)));
    }
    return q;
  };
  for (const auto& c : w.wall.cycles) out.wall.cycles.push_back(thread(c, true));
  for (const auto& p : w.wall.rows1) out.wall.rows1.push_back(thread(p, false));
  for (const auto& p : w.wall.rows2) out.wall.rows2.push_back(thread(p, false));
  return out;
}

std::optional<WallViolation> validate_wall(const Digraph& g, const Wall& w) {
  const int n = g.num_vertices();
  const int m = w.order();
  if (m < 1) return WallViolation{-1, "no cycles"};
  if (static_cast<int>(w.rows1.size()) != m || static_cast<int>(w.rows2.size()) != m)
    return WallViolation{-1, "expected " + std::to_string(m) + " horizontal paths of each kind"};
  for (const auto* group : {&w.cycles, &w.rows1, &w.rows2})
    for (const auto& seq : *group) {
      if (seq.empty()) return WallViolation{-1, "empty sequence"};
      for (Vertex v : seq)
        if (v < 0 || v >= n) return WallViolation{v, "vertex id out of range"};
    }
  std::vector<int> on_cycle(n, -1), on_row(n, -1);
  for (int c = 0; c < m; ++c) {
    const Path& cyc = w.cycles[c];
    if (cyc.size() < 2) return WallViolation{cyc[0], "cycle shorter than 2"};
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      Vertex v = cyc[i], next = cyc[(i + 1) % cyc.size()];
      if (on_cycle[v] >= 0) return WallViolation{v, vname(g, v) + " lies on two cycles"};
      on_cycle[v] = c;
      if (!g.has_edge(v, next))
        return WallViolation{v, "missing cycle edge " + vname(g, v) + " -> " + vname(g, next)};
    }
  }
  for (int r = 0; r < w.num_rows(); ++r) {
    const Path& p = w.row(r);
    for (std::size_t i = 0; i < p.size(); ++i) {
      Vertex v = p[i];
      if (on_row[v] >= 0)
        return WallViolation{v, vname(g, v) + " lies on two horizontal paths"};
      on_row[v] = r;
      if (i + 1 < p.size() && !g.has_edge(v, p[i + 1]))
        return WallViolation{v, "missing path edge " + vname(g, v) + " -> " + vname(g, p[i + 1])};
    }
  }
  WallIndex idx(n, w);
  for (int r = 0; r < w.num_rows(); ++r) {
    const Path& p = w.row(r);
    const bool inward = r % 2 == 0;
    auto expected = [&](int seg) { return inward ? seg : m - 1 - seg; };
    if (on_cycle[p.front()] != expected(0))
      return WallViolation{p.front(), "horizontal path does not start on its first cycle"};
    if (on_cycle[p.back()] != expected(m - 1))
      return WallViolation{p.back(), "horizontal path does not end on its last cycle"};
    int seg = -1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      int c = on_cycle[p[i]];
      if (c < 0) continue;
      bool continues = i > 0 && on_cycle[p[i - 1]] == c;
      if (continues) {
        const int len = static_cast<int>(w.cycles[c].size());
        if (idx.cycle_pos[p[i]] != (idx.cycle_pos[p[i - 1]] + 1) % len)
          return WallViolation{p[i], "path and cycle disagree on a shared segment"};
        continue;
      }
      ++seg;
      if (seg >= m || expected(seg) != c)
        return WallViolation{p[i], "horizontal path meets cycle " + std::to_string(c + 1) +
                                       " out of order"};
    }
    if (seg != m - 1) return WallViolation{p.back(), "horizontal path misses a cycle"};
  }
  for (int c = 0; c < m; ++c) {
    int descents = 0;
    const int rows = w.num_rows();
    for (int r = 0; r < rows; ++r) {
      int a = idx.cycle_pos[w.row(r)[idx.first_on[r][c]]];
      int b = idx.cycle_pos[w.row((r + 1) % rows)[idx.first_on[(r + 1) % rows][c]]];
      if (b < a) ++descents;
    }
    if (descents != 1)
      return WallViolation{w.cycles[c][0], "horizontal paths cross cycle " + std::to_string(c + 1) +
                                               " out of cyclic order"};
  }
  std::vector<int> col(n, -1);
  auto ec = extended_columns(n, w);
  for (int c = 0; c < m; ++c) {
    std::optional<WallViolation> bad;
    ec[c].for_each([&](Vertex v) {
      if (col[v] >= 0 && !bad) bad = WallViolation{v, vname(g, v) + " lies in two extended columns"};
      col[v] = c;
    });
    if (bad) return bad;
  }
  std::optional<WallViolation> bad;
  w.vertices(n).for_each([&](Vertex v) {
    if (col[v] < 0 && !bad) bad = WallViolation{v, vname(g, v) + " lies in no extended column"};
  });
  return bad;
}

std::vector<VertexSet> extended_columns(int n, const Wall& w) {
  const int m = w.order();
  WallIndex idx(n, w);
  std::vector<VertexSet> ec(m, VertexSet(n));
  for (int c = 0; c < m; ++c)
    for (Vertex v : w.cycles[c]) ec[c].insert(v);
  for (int r = 0; r < w.num_rows(); ++r) {
    const Path& p = w.row(r);
    for (int c = 0; c + 1 < m; ++c) {
      // Inward paths run C_c -> C_{c+1}, outward ones C_{c+1} -> C_c.
      int from = r % 2 == 0 ? idx.last_on[r][c] : idx.last_on[r][c + 1];
      int to = r % 2 == 0 ? idx.first_on[r][c + 1] : idx.first_on[r][c];
      for (int i = from + 1; i < to; ++i) ec[c].insert(p[i]);
    }
  }
  return ec;
}

Wall subwall(const Wall& w, int first, int count) {
  if (first < 0 || count < 1 || first + count > w.order())
    throw PreconditionError("subwall: cycle range outside the wall");
  WallIndex idx(max_id(w), w);
  const int last = first + count - 1;
  Wall out;
  for (int c = first; c <= last; ++c) out.cycles.push_back(w.cycles[c]);
  for (int b = 0; b < count; ++b) {
    const Path& p1 = w.rows1[b];
    const Path& p2 = w.rows2[b];
    int r1 = 2 * b, r2 = 2 * b + 1;
    out.rows1.emplace_back(p1.begin() + idx.first_on[r1][first], p1.begin() + idx.last_on[r1][last] + 1);
    out.rows2.emplace_back(p2.begin() + idx.first_on[r2][last], p2.begin() + idx.last_on[r2][first] + 1);
  }
  return out;
}

std::vector<Path> route_in_wall(const Wall& w, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  const int k = static_cast<int>(pairs.size());
  const int m = w.order();
  if (k < 1) return {};
  if (m < 3 * k)
    throw PreconditionError("route_in_wall: wall order " + std::to_string(m) + " is below 3k = " +
                            std::to_string(3 * k));
  WallIndex idx(max_id(w), w);
  const int n = static_cast<int>(idx.cycle_of.size());
  std::vector<Vertex> terms;
  for (auto [s, t] : pairs) terms.push_back(s);
  for (auto [s, t] : pairs) terms.push_back(t);
  std::vector<bool> seen(n, false);
  for (int x = 0; x < 2 * k; ++x) {
    Vertex v = terms[x];
    bool source = x < k;
    if (v < 0 || v >= n || idx.row_of[v] < 0)
      throw PreconditionError("route_in_wall: vertex " + std::to_string(v) + " is not on a horizontal path");
    const Path& p = w.row(idx.row_of[v]);
    if (source ? p.front() != v : p.back() != v)
      throw PreconditionError("route_in_wall: vertex " + std::to_string(v) + " is not the " +
                              (source ? "first" : "last") + " vertex of a horizontal path");
    if (seen[v]) throw PreconditionError("route_in_wall: vertex " + std::to_string(v) + " repeats");
    seen[v] = true;
  }
  // f sends terminals on C_1 to C_2, C_3, ... and those on C_m to C_{m-1},
  // C_{m-2}, ...; the two ranges cannot meet since 2k < m - 1.
  std::vector<int> f(2 * k);
  int m1 = 0, m2 = 0;
  for (int x = 0; x < 2 * k; ++x) f[x] = idx.cycle_of[terms[x]] == 0 ? ++m1 : m - 1 - ++m2;
  std::vector<bool> busy(w.num_rows(), false);
  for (Vertex v : terms) busy[idx.row_of[v]] = true;
  std::vector<int> z1, z2;
  for (int r = 0; r < w.num_rows(); ++r)
    if (!busy[r]) (r % 2 == 0 ? z1 : z2).push_back(r);
  std::size_t used1 = 0, used2 = 0;
  std::vector<Path> out;
  for (int i = 0; i < k; ++i) {
    const int fs = f[i], ft = f[k + i];
    const int rs = idx.row_of[terms[i]], rt = idx.row_of[terms[k + i]];
    int rg;
    if (fs < ft) {
      if (used1 == z1.size()) throw PreconditionError("route_in_wall: too few free inward rows");
      rg = z1[used1++];
    } else {
      if (used2 == z2.size()) throw PreconditionError("route_in_wall: too few free outward rows");
      rg = z2[used2++];
    }
    const Path& ps = w.row(rs);
    const Path& pg = w.row(rg);
    const Path& pt = w.row(rt);
    const Path& cs = w.cycles[fs];
    const Path& ct = w.cycles[ft];
    std::vector<Path> pieces(5);
    append_row(pieces[0], ps, 0, idx.first_on[rs][fs]);
    append_cycle(pieces[1], cs, idx.cycle_pos[ps[idx.first_on[rs][fs]]],
                 idx.cycle_pos[pg[idx.first_on[rg][fs]]]);
    append_row(pieces[2], pg, idx.first_on[rg][fs], idx.first_on[rg][ft]);
    append_cycle(pieces[3], ct, idx.cycle_pos[pg[idx.first_on[rg][ft]]],
                 idx.cycle_pos[pt[idx.first_on[rt][ft]]]);
    append_row(pieces[4], pt, idx.first_on[rt][ft], static_cast<int>(pt.size()) - 1);
    out.push_back(join(pieces));
  }
  return out;
}

std::vector<Path> wall_linkage(const Digraph& g, const Wall& w, const VertexSet& a,
                               const VertexSet& b, LinkageMode mode) {
  const int n = g.num_vertices();
  const int k = static_cast<int>(b.size());
  if (w.order() < 2 * k * (k + 2))
    throw PreconditionError("wall_linkage: wall order below 2k(k+2)");
  WallIndex idx(n, w);
  VertexSet top(n, w.rows1[0]);
  std::vector<bool> cycle_used(w.order(), false);
  b.for_each([&](Vertex v) {
    int c = idx.cycle_of[v];
    if (!top.contains(v) || c < 0 || cycle_used[c])
      throw PreconditionError("wall_linkage: targets must sit on P^1_1 on distinct cycles");
    cycle_used[c] = true;
  });
  if (mode == LinkageMode::DistinctCycles) {
    if (static_cast<int>(a.size()) != k) throw PreconditionError("wall_linkage: |a| must equal |b|");
    std::fill(cycle_used.begin(), cycle_used.end(), false);
    a.for_each([&](Vertex v) {
      int c = idx.cycle_of[v];
      if (c < 0 || cycle_used[c])
        throw PreconditionError("wall_linkage: sources must lie on distinct cycles");
      cycle_used[c] = true;
    });
  } else {
    if (static_cast<int>(a.size()) != 2 * k + 1)
      throw PreconditionError("wall_linkage: distinct-rows mode needs 2k+1 sources");
    std::vector<bool> row_used(w.order(), false);
    a.for_each([&](Vertex v) {
      int r = idx.row_of[v];
      if (r < 0 || row_used[r / 2])
        throw PreconditionError("wall_linkage: sources must lie on distinct bidirected rows");
      row_used[r / 2] = true;
    });
  }
  VertexSet inside = w.vertices(n);
  VertexFlow flow = vertex_disjoint_paths(g, a, b, k, &inside);
  if (flow.value < k) throw std::logic_error("wall_linkage: the wall holds fewer than k disjoint paths");
  return flow.paths;
}

int required_wall_order(int k) { return k * (6 * k * k + 2 * k + 3); }

namespace {

// Claim loop on h: k rounds, each linking `sources` to fresh columns and
// truncating the paths until only reserved columns are met. Returns the
// Menger cut of the first failing round; marks reserved columns in `used`.
std::optional<DirectedSeparation> reserve_columns(const Digraph& h, const Wall& w,
                                                  const std::vector<int>& col_of,
                                                  const WallIndex& idx, const VertexSet& sources,
                                                  int k, std::vector<bool>& used) {
  const int m = w.order();
  const Path& top = w.rows1[0];
  for (int round = 0; round < k; ++round) {
    VertexSet x(h.num_vertices());
    for (int c = 0, picked = 0; c < m && picked < k; ++c)
      if (!used[c]) {
        x.insert(top[idx.first_on[0][c]]);
        ++picked;
      }
    VertexFlow flow = vertex_disjoint_paths(h, sources, x, k);
    if (!flow.saturated) return flow.cut;
    std::vector<Path> paths = std::move(flow.paths);
    // Cut a path at an earlier vertex in a fresh column no other path ends
    // in; each cut shortens the linkage, so this stops.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < paths.size() && !changed; ++i) {
        for (std::size_t p = 0; p + 1 < paths[i].size(); ++p) {
          int c = col_of[paths[i][p]];
          if (c < 0 || used[c]) continue;
          bool taken = false;
          for (std::size_t j = 0; j < paths.size(); ++j)
            if (j != i && col_of[paths[j].back()] == c) taken = true;
          if (taken) continue;
          paths[i].resize(p + 1);
          changed = true;
          break;
        }
      }
    }
    for (const auto& p : paths) used[col_of[p.back()]] = true;
  }
  return std::nullopt;
}

}  // namespace

RoutingOutcome route_through_wall(const Digraph& g, const std::vector<Vertex>& s,
                                  const std::vector<Vertex>& t, const Wall& w) {
  const int k = static_cast<int>(s.size());
  const int n = g.num_vertices();
  const int m = w.order();
  if (k < 1 || static_cast<int>(t.size()) != k)
    throw PreconditionError("route_through_wall: need k >= 1 sources and as many terminals");
  if (m < required_wall_order(k))
    throw PreconditionError("route_through_wall: wall order " + std::to_string(m) +
                            " is below k(6k^2+2k+3) = " + std::to_string(required_wall_order(k)));
  if (auto v = validate_wall(g, w)) throw PreconditionError("route_through_wall: " + v->detail);
  VertexSet ss(n, s), ts(n, t);
  if (static_cast<int>(ss.size()) != k || static_cast<int>(ts.size()) != k)
    throw PreconditionError("route_through_wall: sources and terminals must be distinct");

  WallIndex idx(n, w);
  auto ec = extended_columns(n, w);
  std::vector<int> col_of(n, -1);
  for (int c = 0; c < m; ++c) ec[c].for_each([&](Vertex v) { col_of[v] = c; });

  std::vector<bool> used_s(m, false), used_t(m, false);
  if (auto cut = reserve_columns(g, w, col_of, idx, ss, k, used_s))
    return {RoutingOutcome::Kind::ShieldsSources, *cut, {}};
  if (auto cut = reserve_columns(g.reversed(), w, col_of, idx, ts, k, used_t))
    return {RoutingOutcome::Kind::ShieldsTerminals, DirectedSeparation{cut->in, cut->out}, {}};

  // 3k consecutive columns no reserved linkage touches, least start first.
  const int span = 3 * k;
  int lo = -1;
  for (int c = 0, run = 0; c < m; ++c) {
    run = used_s[c] || used_t[c] ? 0 : run + 1;
    if (run == span) {
      lo = c - span + 1;
      break;
    }
  }
  if (lo < 0) throw std::logic_error("route_through_wall: no 3k free consecutive columns");
  VertexSet h(n);
  for (int c = lo; c < lo + span - 1; ++c) h |= ec[c];
  h |= VertexSet(n, w.cycles[lo + span - 1]);
  Wall sub = subwall(w, lo, span);
  // Nails: inward rows start on the first cycle and end on the last one,
  // outward rows the other way round.
  VertexSet x(n), y(n);
  for (int b = 0; b < k; ++b) {
    x.insert(sub.rows1[b].front());
    x.insert(sub.rows2[b].front());
    y.insert(sub.rows1[b].back());
    y.insert(sub.rows2[b].back());
  }
  VertexSet allow_x = g.all() - (h - x);
  VertexSet allow_y = g.all() - (h - y);
  VertexFlow in = vertex_disjoint_paths(g, ss, x, k, &allow_x);
  VertexFlow out = vertex_disjoint_paths(g, y, ts, k, &allow_y);
  if (in.value < k || out.value < k)
    throw std::logic_error("route_through_wall: the reserved linkages do not reach the subwall");
  std::vector<Path> head(k), tail(k);
  for (auto& p : in.paths) head[std::find(s.begin(), s.end(), p.front()) - s.begin()] = std::move(p);
  for (auto& p : out.paths) tail[std::find(t.begin(), t.end(), p.back()) - t.begin()] = std::move(p);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (int i = 0; i < k; ++i) pairs.emplace_back(head[i].back(), tail[i].front());
  auto middle = route_in_wall(sub, pairs);
  RoutingOutcome r{RoutingOutcome::Kind::Linkage, {}, {}};
  for (int i = 0; i < k; ++i) r.paths.push_back(join({head[i], middle[i], tail[i]}));
  return r;
}

ShieldReport shield_report(const Wall& w, const VertexSet& near) {
  ShieldReport r;
  auto meets = [&](const Path& p) {
    return std::any_of(p.begin(), p.end(), [&](Vertex v) { return near.contains(v); });
  };
  for (const auto& c : w.cycles) r.cycles_met += meets(c);
  for (int b = 0; b < static_cast<int>(w.rows1.size()); ++b)
    r.rows_met += meets(w.rows1[b]) || meets(w.rows2[b]);
  return r;
}

}  // namespace dtangle
