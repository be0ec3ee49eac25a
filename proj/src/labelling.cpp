#include "dtangle/labelling.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "dtangle/error.hpp"
#include "dtangle/flow.hpp"

namespace dtangle {

int TreeLabelling::order() const {
  int best = 0;
  for (const auto& e : edges) best = std::max(best, e.sep.order());
  return best;
}

namespace {

bool distinguishes(const Tangle& a, const Tangle& b, const DirectedSeparation& s) {
  auto x = a.orient(s), y = b.orient(s);
  return x && y && *x != *y;
}

// Every separation of order exactly l with its orientation by each tangle.
struct SeparationTable {
  std::vector<DirectedSeparation> seps;
  std::vector<std::vector<std::optional<Side>>> big;  // [separation][tangle]

  SeparationTable(const Digraph& g, const TangleSet& ts, int l,
                  const EnumerationLimits& limits) {
    for_each_separation(g, l, [&](const DirectedSeparation& s) {
      if (s.order() != l) return true;
      std::vector<std::optional<Side>> row;
      row.reserve(ts.size());
      for (const auto& t : ts) row.push_back(t.orient(s));
      seps.push_back(s);
      big.push_back(std::move(row));
      return true;
    }, limits);
  }
};

// Smallest side first, then lexicographic, then canonical separation order.
bool better_side(const VertexSet& b, const DirectedSeparation& s, const VertexSet* best_b,
                 const DirectedSeparation* best_s) {
  if (!best_b) return true;
  if (b.size() != best_b->size()) return b.size() < best_b->size();
  if (b != *best_b) return lex_less(b, *best_b);
  return canonical_less(s, *best_s);
}

void check_uniform_precondition(const Digraph& g, const TangleSet& ts, int l,
                                const EnumerationLimits& limits) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].order() <= l)
      throw PreconditionError("tangle " + std::to_string(i) + " has order " +
                              std::to_string(ts[i].order()) + ", needs more than " +
                              std::to_string(l));
    for (std::size_t j = 0; j < i; ++j) {
      if (l > 0)
        if (auto w = find_distinguisher(g, ts[i], ts[j], l - 1, limits))
          throw PreconditionError("tangles " + std::to_string(j) + " and " +
                                  std::to_string(i) + " are already distinguished by " +
                                  to_string(g, *w));
      if (!find_distinguisher(g, ts[i], ts[j], l, limits))
        throw PreconditionError("tangles " + std::to_string(j) + " and " + std::to_string(i) +
                                " are not distinguished at order " + std::to_string(l));
    }
  }
}

RankAssignment ranks_from_table(const Digraph& g, const TangleSet& ts, int l,
                                const SeparationTable& table) {
  const int n = static_cast<int>(ts.size());
  RankAssignment ra;
  ra.l = l;
  ra.rank.assign(n, 0);
  ra.sigma.assign(n, DirectedSeparation{g.empty_set(), g.all()});
  ra.big.assign(n, Side::In);
  std::vector<bool> placed(n, false);
  for (;;) {
    std::vector<int> residue;
    for (int t = 0; t < n; ++t)
      if (!placed[t]) residue.push_back(t);
    if (residue.size() <= 1) {
      if (!residue.empty()) {
        ra.levels.push_back(residue);
        ra.rank[residue[0]] = static_cast<int>(ra.levels.size());
      }
      break;
    }
    std::vector<int> best(n, -1);
    std::vector<Side> best_side(n, Side::In);
    for (std::size_t s = 0; s < table.seps.size(); ++s) {
      for (Side side : {Side::Out, Side::In}) {
        int holder = -1, count = 0;
        for (int t : residue)
          if (table.big[s][t] == side) {
            holder = t;
            ++count;
          }
        if (count != 1) continue;
        const VertexSet& b = table.seps[s].side(side);
        const int cur = best[holder];
        if (better_side(b, table.seps[s],
                        cur < 0 ? nullptr : &table.seps[cur].side(best_side[holder]),
                        cur < 0 ? nullptr : &table.seps[cur])) {
          best[holder] = static_cast<int>(s);
          best_side[holder] = side;
        }
      }
    }
    std::vector<int> level;
    for (int t : residue)
      if (best[t] >= 0) level.push_back(t);
    if (level.empty())
      throw PreconditionError("ranks: no separation of order " + std::to_string(l) +
                              " splits off a single tangle");
    for (int t : level) {
      placed[t] = true;
      ra.sigma[t] = table.seps[best[t]];
      ra.big[t] = best_side[t];
      ra.rank[t] = static_cast<int>(ra.levels.size()) + 1;
    }
    ra.levels.push_back(level);
  }
  ra.root = ra.levels.back().front();
  ra.rank[ra.root] = static_cast<int>(ra.levels.size()) + 1;
  return ra;
}

// Reachability in a digraph on n nodes given by adjacency lists.
std::vector<std::vector<bool>> reachability(const std::vector<std::vector<int>>& out) {
  const int n = static_cast<int>(out.size());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    reach[s][s] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : out[v])
        if (!reach[s][w]) {
          reach[s][w] = true;
          stack.push_back(w);
        }
    }
  }
  return reach;
}

// Drops every edge (a, b) with a longer a-b path. Throws on a cycle.
std::vector<std::vector<int>> transitive_reduction(const std::vector<std::vector<int>>& out) {
  const int n = static_cast<int>(out.size());
  auto reach = reachability(out);
  for (int a = 0; a < n; ++a)
    for (int b : out[a])
      if (reach[b][a]) throw std::logic_error("descendant digraph has a cycle");
  std::vector<std::vector<int>> red(n);
  for (int a = 0; a < n; ++a)
    for (int b : out[a]) {
      bool implied = false;
      for (int c : out[a])
        if (c != b && reach[c][b]) implied = true;
      if (!implied) red[a].push_back(b);
    }
  return red;
}

}  // namespace

std::optional<MinDistinguisher> min_distinguisher(const Digraph& g, const Tangle& t1,
                                                  const Tangle& t2,
                                                  const EnumerationLimits& limits) {
  const int top = std::min(t1.order(), t2.order()) - 1;
  if (top < 0) return std::nullopt;
  std::optional<DirectedSeparation> cand;
  if (!t1.cover().empty() && !t2.cover().empty() && t1.cover() != t2.cover()) {
    for (int dir = 0; dir < 2; ++dir) {
      const VertexSet& a = dir == 0 ? t1.cover() : t2.cover();
      const VertexSet& b = dir == 0 ? t2.cover() : t1.cover();
      auto s = min_separation(g, a, b, top + 1);
      if (s && distinguishes(t1, t2, *s) && (!cand || s->order() < cand->order())) cand = s;
    }
  }
  try {
    auto e = find_distinguisher(g, t1, t2, cand ? cand->order() : top, limits);
    if (e) return MinDistinguisher{*e, true};
    return std::nullopt;
  } catch (const SizeGuardError&) {
    if (cand) return MinDistinguisher{*cand, false};
    throw;
  }
}

RankAssignment ranks(const Digraph& g, const TangleSet& ts, int l,
                     const EnumerationLimits& limits) {
  if (ts.empty()) throw PreconditionError("ranks: empty tangle set");
  check_uniform_precondition(g, ts, l, limits);
  SeparationTable table(g, ts, l, limits);
  return ranks_from_table(g, ts, l, table);
}

bool is_descendant(const TangleSet& ts, const RankAssignment& ra, int t, int t_prime) {
  if (t == t_prime || t_prime == ra.root) return false;
  if (t == ra.root) return true;
  return ts[t_prime].orient(ra.sigma[t]) == ra.big[t] &&
         ts[t].orient(ra.sigma[t_prime]) == opposite(ra.big[t_prime]);
}

TreeLabelling build_uniform_labelling(const Digraph& g, const TangleSet& ts, int l,
                                      const EnumerationLimits& limits, UniformTrace* trace) {
  if (ts.empty()) throw PreconditionError("build_uniform_labelling: empty tangle set");
  const int n = static_cast<int>(ts.size());
  TreeLabelling lab;
  lab.num_nodes = n;
  if (n == 1) {
    if (trace) trace->ranks = RankAssignment{l, {{0}}, {1}, {}, {}, 0};
    return lab;
  }
  check_uniform_precondition(g, ts, l, limits);
  SeparationTable table(g, ts, l, limits);
  RankAssignment ra = ranks_from_table(g, ts, l, table);
  lab.root = ra.root;

  std::vector<std::vector<int>> d(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (is_descendant(ts, ra, a, b)) d[a].push_back(b);
  std::vector<std::vector<int>> cur = transitive_reduction(d);
  if (trace) {
    trace->ranks = ra;
    trace->descendant_edges.clear();
    trace->reduced_edges.clear();
    for (int a = 0; a < n; ++a) {
      for (int b : d[a]) trace->descendant_edges.emplace_back(a, b);
      for (int b : cur[a]) trace->reduced_edges.emplace_back(a, b);
    }
  }

  // Label of the edges into each node (all in-edges share it).
  std::vector<DirectedSeparation> sep = ra.sigma;
  std::vector<Side> side = ra.big;
  const int m = ra.rank[ra.root];
  auto indegrees = [&] {
    std::vector<std::vector<int>> in(n);
    for (int a = 0; a < n; ++a)
      for (int b : cur[a]) in[b].push_back(a);
    return in;
  };
  auto conflict = [&](const std::vector<std::vector<int>>& in) {
    long c = 0;
    for (int t = 0; t < n; ++t)
      if (in[t].size() > 1) c += static_cast<long>(n) * (m - ra.rank[t]) + in[t].size();
    return c;
  };

  std::vector<std::vector<int>> in = indegrees();
  long c = conflict(in);
  if (trace) trace->conflict_numbers = {c};
  while (c > 0) {
    int t = -1;
    for (int v = 0; v < n; ++v)
      if (in[v].size() > 1 && (t < 0 || ra.rank[v] < ra.rank[t])) t = v;
    std::vector<int> parents = in[t];
    std::sort(parents.begin(), parents.end());
    const int t1 = parents[0], t2 = parents[1];
    if (t1 == ra.root || t2 == ra.root)
      throw std::logic_error("merge step reached the root tangle");

    auto reach = reachability(cur);
    std::vector<bool> inside(n);
    for (int v = 0; v < n; ++v) inside[v] = reach[t1][v] || reach[t2][v];
    int best = -1;
    Side best_side = Side::In;
    for (std::size_t s = 0; s < table.seps.size(); ++s)
      for (Side sd : {Side::Out, Side::In}) {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v)
          ok = table.big[s][v] == (inside[v] ? sd : opposite(sd));
        if (!ok) continue;
        if (better_side(table.seps[s].side(sd), table.seps[s],
                        best < 0 ? nullptr : &table.seps[best].side(best_side),
                        best < 0 ? nullptr : &table.seps[best])) {
          best = static_cast<int>(s);
          best_side = sd;
        }
      }
    if (best < 0)
      throw std::logic_error("no order-" + std::to_string(l) +
                             " separation splits off the merged branches");

    // Parents of t1 now point at t2, which takes the merged separation and
    // becomes the parent of t1.
    for (int p : in[t1]) {
      cur[p].erase(std::find(cur[p].begin(), cur[p].end(), t1));
      if (std::find(cur[p].begin(), cur[p].end(), t2) == cur[p].end()) cur[p].push_back(t2);
    }
    cur[t2].push_back(t1);
    sep[t2] = table.seps[best];
    side[t2] = best_side;
    cur = transitive_reduction(cur);
    in = indegrees();
    long next = conflict(in);
    if (trace) trace->conflict_numbers.push_back(next);
    if (next >= c) throw std::logic_error("merge step did not lower the conflict number");
    c = next;
  }

  for (int b = 0; b < n; ++b) {
    if (b == ra.root) {
      if (!in[b].empty()) throw std::logic_error("root tangle has a parent");
      continue;
    }
    if (in[b].size() != 1) throw std::logic_error("merge loop left a node without a parent");
    lab.edges.push_back({in[b][0], b, sep[b], side[b]});
  }
  return lab;
}

TreeLabelling reroot(const TreeLabelling& lab, int root) {
  TreeLabelling out = lab;
  out.root = root;
  out.edges.clear();
  std::vector<std::vector<int>> inc(lab.num_nodes);
  for (std::size_t i = 0; i < lab.edges.size(); ++i) {
    inc[lab.edges[i].tail].push_back(static_cast<int>(i));
    inc[lab.edges[i].head].push_back(static_cast<int>(i));
  }
  std::vector<bool> seen(lab.num_nodes, false);
  std::vector<int> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int i : inc[v]) {
      LabelledEdge e = lab.edges[i];
      int w = e.tail == v ? e.head : e.tail;
      if (seen[w]) continue;
      seen[w] = true;
      if (e.tail != v) e = {v, w, e.sep, opposite(e.head_side)};
      out.edges.push_back(e);
      stack.push_back(w);
    }
  }
  return out;
}

namespace {

// A node of `lab` all of whose edges point toward it, orienting each edge
// toward the side the tangles in `others` choose. Edges none of them orient
// point toward their head.
int sink_toward(const TreeLabelling& lab, const TangleSet& others) {
  std::vector<int> outdeg(lab.num_nodes, 0);
  for (const auto& e : lab.edges) {
    bool to_head = true;
    for (const auto& t : others)
      if (auto s = t.orient(e.sep)) {
        to_head = *s == e.head_side;
        break;
      }
    ++outdeg[to_head ? e.tail : e.head];
  }
  for (int v = 0; v < lab.num_nodes; ++v)
    if (outdeg[v] == 0) return v;
  throw std::logic_error("oriented inner tree has no sink");
}

struct LabellingBuilder {
  const Digraph& g;
  const TangleSet& ts;
  const EnumerationLimits& limits;
  bool exact = true;

  // Labelling of the tangles `c` (indices into ts), which pairwise agree on
  // every separation of order below l. Node i of the result is c[i].
  TreeLabelling build(const std::vector<int>& c, int l) {
    TreeLabelling lab;
    lab.num_nodes = static_cast<int>(c.size());
    if (c.size() == 1) return lab;
    std::vector<std::vector<int>> classes;
    for (int t : c) {
      bool placed = false;
      for (auto& cls : classes)
        if (agree_up_to(g, ts[cls.front()], ts[t], l, limits)) {
          cls.push_back(t);
          placed = true;
          break;
        }
      if (!placed) classes.push_back({t});
    }
    if (classes.size() == 1) return build(c, l + 1);

    TangleSet reps;
    for (const auto& cls : classes) reps.push_back(restrict_tangle(ts[cls.front()], l));
    TreeLabelling outer = build_uniform_labelling(g, reps, l, limits);

    std::vector<TreeLabelling> inner;
    std::vector<int> offset;
    std::vector<int> order;  // local position of each global node in c
    for (const auto& cls : classes) {
      offset.push_back(static_cast<int>(order.size()));
      inner.push_back(build(cls, l + 1));
      for (int t : cls) order.push_back(t);
    }
    TreeLabelling joined;
    joined.num_nodes = static_cast<int>(order.size());
    for (std::size_t i = 0; i < classes.size(); ++i)
      for (auto e : inner[i].edges) {
        e.tail += offset[i];
        e.head += offset[i];
        joined.edges.push_back(e);
      }
    auto members = [&](int cls) {
      TangleSet out;
      for (int t : classes[cls]) out.push_back(ts[t]);
      return out;
    };
    for (const auto& e : outer.edges) {
      int u = sink_toward(inner[e.tail], members(e.head));
      int v = sink_toward(inner[e.head], members(e.tail));
      joined.edges.push_back({u + offset[e.tail], v + offset[e.head], e.sep, e.head_side});
    }
    joined = reroot(joined, offset[outer.root] + inner[outer.root].root);

    // Renumber from the class-major order back to the order of c.
    std::vector<int> local(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      local[i] = static_cast<int>(std::find(c.begin(), c.end(), order[i]) - c.begin());
    lab.root = local[joined.root];
    for (auto e : joined.edges) {
      e.tail = local[e.tail];
      e.head = local[e.head];
      lab.edges.push_back(e);
    }
    return lab;
  }
};

}  // namespace

TreeLabelling build_labelling(const Digraph& g, const TangleSet& ts,
                              const EnumerationLimits& limits) {
  if (ts.empty()) throw PreconditionError("build_labelling: empty tangle set");
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!find_distinguisher(g, ts[i], ts[j], std::min(ts[i].order(), ts[j].order()) - 1,
                              limits))
        throw PreconditionError("tangles " + std::to_string(j) + " and " + std::to_string(i) +
                                " are indistinguishable");
  std::vector<int> all(ts.size());
  std::iota(all.begin(), all.end(), 0);
  LabellingBuilder b{g, ts, limits};
  return b.build(all, 0);
}

std::vector<int> tree_path_edges(const TreeLabelling& lab, int a, int b) {
  std::vector<std::vector<int>> inc(lab.num_nodes);
  for (std::size_t i = 0; i < lab.edges.size(); ++i) {
    inc[lab.edges[i].tail].push_back(static_cast<int>(i));
    inc[lab.edges[i].head].push_back(static_cast<int>(i));
  }
  std::vector<int> via(lab.num_nodes, -2);
  std::vector<int> queue{a};
  via[a] = -1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int v = queue[q];
    for (int i : inc[v]) {
      int w = lab.edges[i].tail == v ? lab.edges[i].head : lab.edges[i].tail;
      if (via[w] != -2) continue;
      via[w] = i;
      queue.push_back(w);
    }
  }
  std::vector<int> path;
  if (via[b] == -2) return path;
  for (int v = b; v != a;) {
    int i = via[v];
    path.push_back(i);
    v = lab.edges[i].tail == v ? lab.edges[i].head : lab.edges[i].tail;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<LabellingViolation> verify_labelling(const Digraph& g, const TangleSet& ts,
                                                   const TreeLabelling& lab,
                                                   const EnumerationLimits& limits) {
  using Kind = LabellingViolation::Kind;
  const int n = static_cast<int>(ts.size());
  if (lab.num_nodes != n)
    return LabellingViolation{Kind::NotBijective, -1, {-1, -1},
                              "labelling has " + std::to_string(lab.num_nodes) +
                                  " nodes for " + std::to_string(n) + " tangles"};
  if (static_cast<int>(lab.edges.size()) != n - 1)
    return LabellingViolation{Kind::NotTree, -1, {-1, -1}, "edge count is not n-1"};
  for (const auto& e : lab.edges)
    if (e.tail < 0 || e.head < 0 || e.tail >= n || e.head >= n || e.tail == e.head)
      return LabellingViolation{Kind::NotTree, -1, {-1, -1}, "edge endpoint out of range"};
  for (int v = 1; v < n; ++v)
    if (tree_path_edges(lab, 0, v).empty())
      return LabellingViolation{Kind::NotTree, -1, {0, v}, "tree is disconnected"};

  std::vector<std::vector<int>> md(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      auto d = min_distinguisher(g, ts[a], ts[b], limits);
      if (!d)
        return LabellingViolation{Kind::NotBijective, -1, {a, b},
                                  "two nodes carry indistinguishable tangles"};
      md[a][b] = md[b][a] = d->sep.order();
    }

  std::vector<bool> justified(lab.edges.size(), false);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> path = tree_path_edges(lab, a, b);
      int low = -1;
      for (int i : path) {
        int o = lab.edges[i].sep.order();
        if (low < 0 || o < low) low = o;
      }
      for (int i : path) {
        const DirectedSeparation& s = lab.edges[i].sep;
        bool minimum = distinguishes(ts[a], ts[b], s) && s.order() == md[a][b];
        if (minimum) justified[i] = true;
        if (s.order() == low && !minimum)
          return LabellingViolation{Kind::MinimumEdge, i, {a, b},
                                    "edge " + to_string(g, s) +
                                        " is not a minimum order distinguisher"};
      }
    }
  for (std::size_t i = 0; i < justified.size(); ++i)
    if (!justified[i])
      return LabellingViolation{Kind::UnjustifiedEdge, static_cast<int>(i), {-1, -1},
                                "edge " + to_string(g, lab.edges[i].sep) +
                                    " distinguishes no straddling pair at minimum order"};
  return std::nullopt;
}

}  // namespace dtangle
