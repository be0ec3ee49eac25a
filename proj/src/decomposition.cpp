#include "dtangle/decomposition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "dtangle/components.hpp"
#include "dtangle/error.hpp"

namespace dtangle {

std::vector<std::vector<int>> DirectedTreeDecomposition::children() const {
  std::vector<std::vector<int>> out(parent.size());
  for (int t = 0; t < num_nodes(); ++t)
    if (parent[t] >= 0) out[parent[t]].push_back(t);
  return out;
}

VertexSet DirectedTreeDecomposition::subtree_bags(int t) const {
  auto ch = children();
  VertexSet out = bags[t];
  std::vector<int> stack{t};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int c : ch[u]) {
      out |= bags[c];
      stack.push_back(c);
    }
  }
  return out;
}

VertexSet DirectedTreeDecomposition::gamma(int t) const {
  VertexSet out = bags[t] | guards[t];
  for (int c = 0; c < num_nodes(); ++c)
    if (parent[c] == t) out |= guards[c];
  return out;
}

int DirectedTreeDecomposition::add_node(int p, VertexSet bag, VertexSet guard) {
  parent.push_back(p);
  bags.push_back(std::move(bag));
  guards.push_back(std::move(guard));
  return num_nodes() - 1;
}

DirectedTreeDecomposition trivial_decomposition(const Digraph& g) {
  DirectedTreeDecomposition d;
  d.add_node(-1, g.all(), g.empty_set());
  return d;
}

namespace {

// BFS inside `allowed` from `from`, forwards or backwards; via[v] is the
// predecessor on a shortest path, -1 at sources, -2 when unreached.
std::vector<Vertex> bfs(const Digraph& g, const VertexSet& from, const VertexSet& allowed,
                        bool forward) {
  std::vector<Vertex> via(g.num_vertices(), -2);
  std::vector<Vertex> queue;
  from.for_each([&](Vertex v) {
    via[v] = -1;
    queue.push_back(v);
  });
  for (std::size_t q = 0; q < queue.size(); ++q) {
    Vertex v = queue[q];
    for (Vertex w : forward ? g.out(v) : g.in(v))
      if (allowed.contains(w) && via[w] == -2) {
        via[w] = v;
        queue.push_back(w);
      }
  }
  return via;
}

std::vector<VertexSet> all_subtree_bags(const DirectedTreeDecomposition& d) {
  auto ch = d.children();
  std::vector<VertexSet> out(d.bags);
  // Parents precede children in no particular order, so sum bottom-up.
  std::vector<int> order{d.root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (d.parent[*it] >= 0) out[d.parent[*it]] |= out[*it];
  return out;
}

}  // namespace

std::optional<DtdViolation> verify_dtd(const Digraph& g, const DirectedTreeDecomposition& d,
                                       DtdMode mode) {
  using Kind = DtdViolation::Kind;
  const int m = d.num_nodes();
  const int n = g.num_vertices();
  if (m == 0 || static_cast<int>(d.bags.size()) != m || static_cast<int>(d.guards.size()) != m)
    return DtdViolation{Kind::NotArborescence, -1, -1, {}, "node arrays differ in size"};
  if (d.root < 0 || d.root >= m || d.parent[d.root] != -1)
    return DtdViolation{Kind::NotArborescence, d.root, -1, {}, "root must have no parent"};
  for (int t = 0; t < m; ++t) {
    if (t != d.root && (d.parent[t] < 0 || d.parent[t] >= m))
      return DtdViolation{Kind::NotArborescence, t, -1, {}, "parent out of range"};
    int u = t;
    for (int steps = 0; u != d.root; ++steps) {
      if (steps > m) return DtdViolation{Kind::NotArborescence, t, -1, {}, "parent cycle"};
      u = d.parent[u];
    }
    if (static_cast<int>(d.bags[t].universe()) != n ||
        static_cast<int>(d.guards[t].universe()) != n)
      return DtdViolation{Kind::NotArborescence, t, -1, {}, "set over the wrong universe"};
  }
  std::vector<int> owner(n, -1);
  for (int t = 0; t < m; ++t) {
    std::optional<DtdViolation> bad;
    d.bags[t].for_each([&](Vertex v) {
      if (owner[v] >= 0 && !bad)
        bad = DtdViolation{Kind::NotPartition, t, v, {},
                           g.name(v) + " lies in two bags"};
      owner[v] = t;
    });
    if (bad) return bad;
  }
  for (Vertex v = 0; v < n; ++v)
    if (owner[v] < 0)
      return DtdViolation{Kind::NotPartition, -1, v, {}, g.name(v) + " lies in no bag"};

  auto sub = all_subtree_bags(d);
  for (int t = 0; t < m; ++t) {
    if (t == d.root) continue;
    const VertexSet& u = sub[t];
    const VertexSet& guard = d.guards[t];
    if (u.intersects(guard)) {
      Vertex v = (u & guard).first();
      return DtdViolation{Kind::GuardedSetMeetsGuard, t, v, {},
                          g.name(v) + " is in the subtree and in its guard"};
    }
    VertexSet allowed = g.all() - guard;
    auto fwd = bfs(g, u, allowed, true);
    auto bwd = bfs(g, u, allowed, false);
    for (Vertex v = 0; v < n; ++v) {
      if (u.contains(v) || fwd[v] == -2 || bwd[v] == -2) continue;
      std::vector<Vertex> walk;
      for (Vertex x = v; x != -1; x = fwd[x]) walk.push_back(x);
      std::reverse(walk.begin(), walk.end());
      for (Vertex x = bwd[v]; x != -1; x = bwd[x]) walk.push_back(x);
      return DtdViolation{Kind::EscapingWalk, t, v, walk,
                          "a walk avoiding the guard leaves the subtree through " + g.name(v) +
                              " and returns"};
    }
    if (mode == DtdMode::Strict) {
      if (u.empty()) return DtdViolation{Kind::NotStrong, t, -1, {}, "empty subtree"};
      auto comps = strong_components(g, &u);
      if (comps.size() != 1)
        return DtdViolation{Kind::NotStrong, t, -1, {},
                            "subtree spans " + std::to_string(comps.size()) +
                                " strong components"};
    }
  }
  return std::nullopt;
}

int width(const DirectedTreeDecomposition& d) {
  int best = 0;
  for (int t = 0; t < d.num_nodes(); ++t)
    best = std::max(best, static_cast<int>(d.gamma(t).size()));
  return best - 1;
}

int edge_width(const DirectedTreeDecomposition& d) {
  int best = 0;
  for (int t = 0; t < d.num_nodes(); ++t)
    if (t != d.root) best = std::max(best, static_cast<int>(d.guards[t].size()));
  return best;
}

DirectedTreeDecomposition make_nice(const Digraph& g, const DirectedTreeDecomposition& d,
                                    std::vector<int>* origin) {
  auto ch = d.children();
  auto sub = all_subtree_bags(d);
  DirectedTreeDecomposition out;
  std::vector<int> from;
  // Copies node u restricted to `mask` under new parent p.
  std::function<void(int, const VertexSet&, int)> emit = [&](int u, const VertexSet& mask,
                                                              int p) {
    int t = out.add_node(p, d.bags[u] & mask, d.guards[u]);
    from.push_back(u);
    for (int c : ch[u]) {
      VertexSet part = sub[c] & mask;
      VertexSet allowed = g.all() - d.guards[c];
      for (const auto& comp : strong_components(g, &allowed))
        if (comp.intersects(part)) emit(c, mask & comp, t);
    }
  };
  out.root = 0;
  emit(d.root, g.all(), -1);
  if (origin) *origin = std::move(from);
  return out;
}

namespace {

bool overlap(const VertexSet& a, const VertexSet& b) {
  return a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a);
}

std::vector<VertexSet> components_without(const Digraph& g, const VertexSet& x) {
  VertexSet allowed = g.all() - x;
  return strong_components(g, &allowed);
}

VertexSet union_of(const Digraph& g, const std::vector<VertexSet>& sets) {
  VertexSet out = g.empty_set();
  for (const auto& s : sets) out |= s;
  return out;
}

}  // namespace

DecompositionForTangles decomposition_from_labelling(const Digraph& g, const TreeLabelling& in,
                                                     int k, DecompositionTrace* trace) {
  const int n = in.num_nodes;
  if (n <= 0) throw PreconditionError("decomposition_from_labelling: empty labelling");
  for (const auto& e : in.edges)
    if (e.sep.order() > k)
      throw PreconditionError("labelling edge of order " + std::to_string(e.sep.order()) +
                              " exceeds k = " + std::to_string(k));
  if (static_cast<int>(in.edges.size()) != n - 1)
    throw PreconditionError("decomposition_from_labelling: labelling is not a tree");
  const TreeLabelling lab = reroot(in, in.root);
  const int root = lab.root;

  std::vector<int> par(n, -1);
  std::vector<int> into(n, -1);
  for (std::size_t i = 0; i < lab.edges.size(); ++i) {
    par[lab.edges[i].head] = lab.edges[i].tail;
    into[lab.edges[i].head] = static_cast<int>(i);
  }
  // Big side, orientation and boundary of sigma(t_j) for every non-root j.
  std::vector<VertexSet> big(n, g.empty_set()), bd(n, g.empty_set());
  std::vector<bool> outgoing(n, false);
  for (int j = 0; j < n; ++j) {
    if (j == root) continue;
    const LabelledEdge& e = lab.edges[into[j]];
    big[j] = e.sep.side(e.head_side);
    outgoing[j] = e.head_side == Side::Out;
    bd[j] = boundary(g, big[j], outgoing[j] ? Dir::Out : Dir::In);
  }

  // DFS pre-order; siblings by least interior vertex, then node id.
  std::vector<std::vector<int>> ch(n);
  for (int j = 0; j < n; ++j)
    if (j != root) ch[par[j]].push_back(j);
  auto key = [&](int j) {
    Vertex v = (big[j] - bd[j]).first();
    return std::pair{v < 0 ? g.num_vertices() : v, j};
  };
  for (auto& c : ch)
    std::sort(c.begin(), c.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<int> order, pos(n);
  std::function<void(int)> visit = [&](int u) {
    pos[u] = static_cast<int>(order.size());
    order.push_back(u);
    for (int c : ch[u]) visit(c);
  };
  visit(root);

  std::vector<std::vector<bool>> anc(n, std::vector<bool>(n, false));
  for (int j = 0; j < n; ++j)
    for (int u = par[j]; u >= 0; u = par[u]) anc[u][j] = true;
  auto independent = [&](int i, int j) {
    return i != j && i != root && j != root && !anc[i][j] && !anc[j][i];
  };
  std::vector<int> nodes;  // non-root nodes in DFS order
  for (int u : order)
    if (u != root) nodes.push_back(u);

  // Components inside each big side, pruned against independent indices.
  std::vector<std::vector<VertexSet>> c0(n), cs(n);
  for (int j : nodes)
    for (auto& c : components_without(g, bd[j]))
      if (c.is_subset_of(big[j])) c0[j].push_back(std::move(c));
  for (int i : nodes)
    for (const auto& c : c0[i]) {
      bool drop = false;
      for (int j : nodes) {
        if (!independent(i, j)) continue;
        for (const auto& cj : c0[j])
          if ((c.is_subset_of(cj) && c != cj) || (c == cj && pos[j] < pos[i])) drop = true;
      }
      if (!drop) cs[i].push_back(c);
    }
  std::vector<VertexSet> inner(n, g.empty_set());
  for (int j : nodes) inner[j] = union_of(g, cs[j]);

  // kappa(B_j, a): independent i with a component holding a that overlaps
  // one of j's components.
  std::vector<std::vector<int>> kappa(n), rho(n);
  for (int j : nodes)
    bd[j].for_each([&](Vertex a) {
      int best = -1;
      for (int i : nodes) {
        if (!independent(i, j)) continue;
        bool hit = false;
        for (const auto& c : cs[i]) {
          if (!c.contains(a)) continue;
          for (const auto& cj : cs[j])
            if (overlap(c, cj)) hit = true;
        }
        if (!hit) continue;
        if (std::find(kappa[j].begin(), kappa[j].end(), i) == kappa[j].end())
          kappa[j].push_back(i);
        if (best < 0 || pos[i] < pos[best]) best = i;
      }
      if (best >= 0 && std::find(rho[j].begin(), rho[j].end(), best) == rho[j].end())
        rho[j].push_back(best);
    });

  DecompositionTrace local;
  DecompositionTrace& tr = trace ? *trace : local;
  tr = DecompositionTrace{};
  tr.order = order;
  tr.boundary = bd;
  tr.resolvants = rho;
  for (int j : nodes)
    for (int l : kappa[j])
      if (std::find(kappa[l].begin(), kappa[l].end(), j) == kappa[l].end())
        tr.asymmetric_conflicts.emplace_back(j, l);

  std::vector<VertexSet> omega(n, g.empty_set());
  for (int j : nodes) {
    omega[j] = bd[j];
    for (int i : rho[j]) omega[j] |= bd[i];
  }
  std::vector<std::vector<VertexSet>> dp(n), ds(n);
  for (int j : nodes)
    for (auto& c : components_without(g, omega[j]))
      for (const auto& cj : cs[j])
        if (c.is_subset_of(cj)) {
          dp[j].push_back(std::move(c));
          break;
        }
  for (int i : nodes)
    for (const auto& c : dp[i]) {
      bool drop = false;
      for (int j : nodes) {
        if (!independent(i, j)) continue;
        for (const auto& cj : dp[j])
          if (c.is_subset_of(cj) && (c != cj || pos[j] < pos[i])) drop = true;
      }
      if (!drop) ds[i].push_back(c);
    }
  std::vector<VertexSet> dset(n, g.empty_set());
  for (int j : nodes) dset[j] = union_of(g, ds[j]);

  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      int i = nodes[a], j = nodes[b];
      if (!independent(i, j)) continue;
      bool bad = false;
      for (const auto& c : ds[i])
        for (const auto& cj : ds[j])
          if (c.intersects(cj)) bad = true;
      if (bad) tr.independent_conflicts.emplace_back(i, j);
    }

  // Ancestor pairs: differing orientation and a smaller boundary whenever
  // the lower big side leaves the upper one.
  for (int j : nodes)
    for (int i = par[j]; i >= 0 && i != root; i = par[i]) {
      VertexSet rest = big[j] - big[i];
      if (rest.empty()) continue;
      VertexSet b = boundary(g, rest, outgoing[i] ? Dir::In : Dir::Out);
      if (outgoing[i] == outgoing[j] || b.size() >= bd[j].size())
        tr.dependent_violations.emplace_back(i, j);
    }

  DirectedTreeDecomposition d;
  d.root = root;
  d.parent = par;
  d.guards.assign(n, g.empty_set());
  std::vector<VertexSet> pre(n, g.empty_set());  // bags before subtraction
  pre[root] = g.all();
  for (int j : nodes) {
    pre[j] = dset[j];
    d.guards[j] = omega[j];
  }
  // Dependent conflicts, ancestors first so their final sets are used.
  for (int j : nodes) {
    int top = -1;
    for (int i = par[j]; i >= 0 && i != root; i = par[i])
      if (!pre[j].is_subset_of(pre[i])) top = i;
    if (top < 0) continue;
    int p = top;
    for (int i = par[j]; i >= 0; i = par[i]) {
      if (outgoing[i] != outgoing[j]) {
        p = i;
        break;
      }
      if (i == top) break;
    }
    tr.resolved.emplace_back(j, p);
    VertexSet guard = omega[j] | bd[p];
    VertexSet keep = g.empty_set();
    std::vector<std::pair<int, VertexSet>> moved;  // (new parent, part)
    for (const auto& c : components_without(g, guard)) {
      bool inside = false;
      for (const auto& cj : ds[j])
        if (c.is_subset_of(cj)) inside = true;
      if (!inside) continue;
      if (c.is_subset_of(pre[p])) {
        keep |= c;
        continue;
      }
      // The new sibling hangs below the deepest ancestor holding the part.
      int a = par[j];
      while (a != root && !c.is_subset_of(pre[a])) a = par[a];
      auto it = std::find_if(moved.begin(), moved.end(), [&](auto& x) { return x.first == a; });
      if (it == moved.end()) {
        moved.emplace_back(a, c);
      } else {
        it->second |= c;
      }
    }
    pre[j] = keep;
    d.guards[j] = guard;
    for (auto& [a, part] : moved) {
      d.add_node(a, g.empty_set(), guard);
      pre.push_back(std::move(part));
    }
  }
  const int m = d.num_nodes();
  d.bags = pre;
  for (int t = 0; t < m; ++t)
    if (d.parent[t] >= 0) d.bags[d.parent[t]] -= pre[t];

  // Subtrees may still span several components; split them and pick, for
  // every tangle, the copy that keeps the labelling nodes connected.
  std::vector<int> origin;
  DecompositionForTangles out;
  out.dtd = make_nice(g, d, &origin);
  const int mm = out.dtd.num_nodes();
  tr.split_nodes = mm - m;
  auto nch = out.dtd.children();
  std::vector<bool> feasible(mm, false);
  for (int x = mm - 1; x >= 0; --x) {  // children are created after parents
    const int u = origin[x];
    if (u >= n) continue;
    bool ok = true;
    for (int c : ch[u]) {
      bool found = false;
      for (int y : nch[x])
        if (origin[y] == c && feasible[y]) found = true;
      ok = ok && found;
    }
    feasible[x] = ok;
  }
  if (!feasible[out.dtd.root])
    throw std::logic_error("no copy of the labelling survives splitting into components");
  out.tau.assign(n, -1);
  out.tau[root] = out.dtd.root;
  for (int u : order)
    for (int c : ch[u])
      for (int y : nch[out.tau[u]])
        if (origin[y] == c && feasible[y]) {
          out.tau[c] = y;
          break;
        }
  out.labels.assign(mm, std::nullopt);
  for (int j : nodes) out.labels[out.tau[j]] = lab.edges[into[j]];
  return out;
}

std::optional<DistinguishingViolation> verify_distinguishing(const Digraph& g,
                                                             const DecompositionForTangles& d,
                                                             const TangleSet& ts,
                                                             const EnumerationLimits& limits) {
  using Kind = DistinguishingViolation::Kind;
  const int n = static_cast<int>(ts.size());
  if (static_cast<int>(d.tau.size()) != n)
    return DistinguishingViolation{Kind::Labelling, -1, "tau does not cover the tangle set"};
  std::vector<int> node_of(d.dtd.num_nodes(), -1);
  for (int i = 0; i < n; ++i) {
    int t = d.tau[i];
    if (t < 0 || t >= d.dtd.num_nodes() || node_of[t] >= 0)
      return DistinguishingViolation{Kind::Labelling, t, "tau is not injective"};
    node_of[t] = i;
  }
  // The tree induced on tau's image, with the labelling separations.
  TreeLabelling lab;
  lab.num_nodes = n;
  lab.root = node_of[d.dtd.root] >= 0 ? node_of[d.dtd.root] : 0;
  for (int t = 0; t < d.dtd.num_nodes(); ++t) {
    int p = d.dtd.parent[t];
    if (p < 0 || node_of[t] < 0 || node_of[p] < 0) continue;
    if (!d.labels[t])
      return DistinguishingViolation{Kind::Labelling, t, "labelling edge without separation"};
    LabelledEdge e = *d.labels[t];
    e.tail = node_of[p];
    e.head = node_of[t];
    lab.edges.push_back(e);
  }
  if (auto v = verify_labelling(g, ts, lab, limits))
    return DistinguishingViolation{Kind::Labelling, -1, v->detail};
  if (auto v = verify_dtd(g, d.dtd, DtdMode::Strict))
    return DistinguishingViolation{Kind::Decomposition, v->node, v->detail};
  for (int t = 0; t < d.dtd.num_nodes(); ++t)
    if (d.labels[t] && !d.labels[t]->sep.separator().is_subset_of(d.dtd.guards[t]))
      return DistinguishingViolation{Kind::SeparatorNotGuarded, t,
                                     "separator " + to_string(g, d.labels[t]->sep.separator()) +
                                         " is not inside the guard"};
  return std::nullopt;
}

}  // namespace dtangle
