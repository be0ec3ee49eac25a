#include "dtangle/separation.hpp"

#include <sstream>

#include "dtangle/error.hpp"

namespace dtangle {

bool canonical_less(const DirectedSeparation& a, const DirectedSeparation& b) {
  VertexSet sa = a.separator(), sb = b.separator();
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  if (sa != sb) return lex_less(sa, sb);
  if (a.out != b.out) return lex_less(a.out, b.out);
  return lex_less(a.in, b.in);
}

VertexSet boundary(const Digraph& g, const VertexSet& a, Dir dir) {
  VertexSet r(g.num_vertices());
  a.for_each([&](Vertex v) {
    const auto& nbrs = dir == Dir::Out ? g.in(v) : g.out(v);
    for (Vertex u : nbrs)
      if (!a.contains(u)) {
        r.insert(v);
        break;
      }
  });
  return r;
}

DirectedSeparation induced_separation(const Digraph& g, const VertexSet& a, Dir dir) {
  VertexSet rest = g.all() - a;
  if (dir == Dir::Out) return {a, boundary(g, a, Dir::Out) | rest};
  return {boundary(g, a, Dir::In) | rest, a};
}

std::string SeparationViolation::describe(const Digraph& g) const {
  if (kind == Kind::Uncovered) return "uncovered vertex " + g.name(vertex);
  return "cross edge " + g.name(edge.first) + "->" + g.name(edge.second) +
         " from in-side to out-side";
}

std::optional<SeparationViolation> validate_separation(const Digraph& g,
                                                       const DirectedSeparation& s) {
  const int n = g.num_vertices();
  for (Vertex v = 0; v < n; ++v)
    if (!s.out.contains(v) && !s.in.contains(v))
      return SeparationViolation{SeparationViolation::Kind::Uncovered, v, {-1, -1}};
  VertexSet in_only = s.in - s.out;
  VertexSet out_only = s.out - s.in;
  std::optional<SeparationViolation> bad;
  in_only.for_each([&](Vertex u) {
    if (bad) return;
    for (Vertex w : g.out(u))
      if (out_only.contains(w)) {
        bad = SeparationViolation{SeparationViolation::Kind::CrossEdge, -1, {u, w}};
        return;
      }
  });
  return bad;
}

namespace {

bool has_edge_between(const Digraph& g, const VertexSet& from, const VertexSet& to) {
  bool found = false;
  from.for_each([&](Vertex u) {
    if (found) return;
    for (Vertex w : g.out(u))
      if (to.contains(w)) {
        found = true;
        return;
      }
  });
  return found;
}

}  // namespace

DirectedSeparation make_separation(const Digraph& g, const VertexSet& a,
                                   const VertexSet& b) {
  if (!(a | b).is_subset_of(g.all()) || (a | b) != g.all())
    throw PreconditionError("sides do not cover the vertex set");
  VertexSet a_only = a - b, b_only = b - a;
  bool ab = has_edge_between(g, a_only, b_only);
  bool ba = has_edge_between(g, b_only, a_only);
  if (ab && ba) throw PreconditionError("cross edges in both directions");
  if (ab) return {a, b};
  if (ba) return {b, a};
  Vertex fa = a_only.first(), fb = b_only.first();
  bool a_first = fa != -1 && (fb == -1 || fa < fb);
  if (fa == -1 && fb == -1) a_first = true;
  return a_first ? DirectedSeparation{a, b} : DirectedSeparation{b, a};
}

QuadrantDecomposition quadrants(const DirectedSeparation& x,
                                const DirectedSeparation& y) {
  QuadrantDecomposition q;
  q.top = x.out & y.out;
  q.left = x.out & y.in;
  q.right = x.in & y.out;
  q.bottom = x.in & y.in;
  VertexSet seps = x.separator() | y.separator();
  q.top_corner = seps & q.top;
  q.left_corner = seps & q.left;
  q.right_corner = seps & q.right;
  q.bottom_corner = seps & q.bottom;
  return q;
}

Uncrossed uncross(const DirectedSeparation& x, const DirectedSeparation& y) {
  return {{x.out & y.out, x.in | y.in}, {x.out | y.out, x.in & y.in}};
}

bool are_uncrossed(const DirectedSeparation& x, const DirectedSeparation& y) {
  for (Side sx : {Side::Out, Side::In})
    for (Side sy : {Side::Out, Side::In}) {
      const VertexSet& a = x.side(sx);
      const VertexSet& b = x.side(opposite(sx));
      const VertexSet& a2 = y.side(sy);
      const VertexSet& b2 = y.side(opposite(sy));
      if (a2.is_subset_of(a) && b.is_subset_of(b2)) return true;
    }
  return false;
}

void for_each_subset_up_to(int n, int k,
                           const std::function<bool(const std::vector<Vertex>&)>& f) {
  std::vector<Vertex> cur;
  for (int size = 0; size <= std::min(k, n); ++size) {
    cur.resize(size);
    for (int i = 0; i < size; ++i) cur[i] = i;
    while (true) {
      if (!f(cur)) return;
      int i = size - 1;
      while (i >= 0 && cur[i] == n - size + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
}

std::size_t separator_count(int n, int k) {
  constexpr double cap = 1e18;
  double total = 0, c = 1;
  for (int i = 0; i <= std::min(k, n) && total < cap; ++i) {
    total += c;
    c = c * (n - i) / (i + 1);
  }
  return static_cast<std::size_t>(std::min(total, cap) + 0.5);
}

void for_each_separation(const Digraph& g, int max_order,
                         const std::function<bool(const DirectedSeparation&)>& f,
                         const EnumerationLimits& limits) {
  const int n = g.num_vertices();
  if (!limits.force && separator_count(n, max_order) > limits.max_separators)
    throw SizeGuardError("enumerate_separations: too many candidate separators (" +
                         std::to_string(n) + " vertices, order " +
                         std::to_string(max_order) + ")");
  for_each_subset_up_to(n, max_order, [&](const std::vector<Vertex>& xs) {
    VertexSet x(n, xs);
    ComponentDag dag(g, x);
    if (!limits.force && dag.size() > limits.max_components)
      throw SizeGuardError("enumerate_separations: component dag too large");
    return dag.for_each_downwards_closed([&](const std::vector<bool>& members) {
      std::vector<bool> rest(members.size());
      for (std::size_t i = 0; i < members.size(); ++i) rest[i] = !members[i];
      DirectedSeparation s{x | dag.vertices_of(rest), x | dag.vertices_of(members)};
      if (dag.is_downwards_closed(rest)) {
        // No cross edges: both orientations arise; keep the canonical one.
        Vertex fo = (s.out - s.in).first(), fi = (s.in - s.out).first();
        bool out_first = fo != -1 && (fi == -1 || fo < fi);
        if (fo == -1 && fi == -1) out_first = true;
        if (!out_first) return true;
      }
      return f(s);
    });
  });
}

std::vector<DirectedSeparation> enumerate_separations(const Digraph& g, int max_order,
                                                      const EnumerationLimits& limits) {
  std::vector<DirectedSeparation> all;
  for_each_separation(g, max_order, [&](const DirectedSeparation& s) {
    all.push_back(s);
    return true;
  }, limits);
  return all;
}

std::string to_string(const Digraph& g, const VertexSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  s.for_each([&](Vertex v) {
    os << (first ? "" : ",") << g.name(v);
    first = false;
  });
  os << '}';
  return os.str();
}

std::string to_string(const Digraph& g, const DirectedSeparation& s) {
  return "(" + to_string(g, s.out) + " -> " + to_string(g, s.in) + ")";
}

}  // namespace dtangle
