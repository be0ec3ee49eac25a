#include "dtangle/bramble.hpp"

#include <algorithm>

#include "dtangle/components.hpp"
#include "dtangle/error.hpp"

namespace dtangle {

std::optional<std::string> validate_bramble(const Digraph& g, const Bramble& b) {
  for (std::size_t i = 0; i < b.elements.size(); ++i) {
    const VertexSet& e = b.elements[i];
    if (e.empty()) return "element " + std::to_string(i) + " is empty";
    if (strong_components(g, &e).size() != 1)
      return "element " + to_string(g, e) + " is not strongly connected";
    for (std::size_t j = 0; j < i; ++j)
      if (!e.intersects(b.elements[j]))
        return "elements " + to_string(g, e) + " and " + to_string(g, b.elements[j]) +
               " are disjoint";
  }
  return std::nullopt;
}

namespace {

struct HittingSearch {
  const std::vector<VertexSet>& elements;
  std::size_t max_nodes;
  std::size_t nodes = 0;
  VertexSet best;
  int best_size;

  void run(VertexSet& chosen, int size) {
    if (++nodes > max_nodes) throw SizeGuardError("bramble_order: search too large");
    if (size >= best_size) return;
    const VertexSet* pick = nullptr;
    for (const auto& e : elements)
      if (!e.intersects(chosen) && (!pick || e.size() < pick->size())) pick = &e;
    if (!pick) {
      best = chosen;
      best_size = size;
      return;
    }
    if (size + 1 >= best_size) return;
    for (Vertex v : pick->to_vector()) {
      chosen.insert(v);
      run(chosen, size + 1);
      chosen.erase(v);
    }
  }
};

}  // namespace

BrambleOrder bramble_order(const Digraph& g, const Bramble& b, std::size_t max_nodes) {
  if (auto bad = validate_bramble(g, b)) throw PreconditionError("invalid bramble: " + *bad);
  std::vector<VertexSet> elems = b.elements;
  std::sort(elems.begin(), elems.end(),
            [](const VertexSet& x, const VertexSet& y) { return x.size() < y.size(); });
  HittingSearch s{elems, max_nodes, 0, g.empty_set(), g.num_vertices() + 1};
  VertexSet chosen = g.empty_set();
  s.run(chosen, 0);
  return {static_cast<int>(s.best.size()), s.best};
}

Bramble bramble_from_tangle(const Digraph& g, const Tangle& t) {
  Bramble b;
  std::vector<VertexSet> seen;
  if (t.order() <= 0) return b;
  for_each_subset_up_to(g.num_vertices(), t.order() - 1, [&](const std::vector<Vertex>& xs) {
    VertexSet c = unique_big_component(g, t, VertexSet(g.num_vertices(), xs));
    if (std::find(b.elements.begin(), b.elements.end(), c) == b.elements.end())
      b.elements.push_back(std::move(c));
    return true;
  });
  return b;
}

Tangle tangle_from_bramble(const Digraph& g, const Bramble& b, int k) {
  BrambleOrder ord = bramble_order(g, b);
  if (ord.order < k)
    throw PreconditionError("tangle_from_bramble: bramble order " + std::to_string(ord.order) +
                            " is below " + std::to_string(k));
  Tangle t = Tangle::from_bramble(k / 3, b.elements);
  return t;
}

bool is_well_linked(const Digraph& g, const VertexSet& w) {
  const std::vector<Vertex> ws = w.to_vector();
  const int m = static_cast<int>(ws.size());
  if (m > 12) throw SizeGuardError("is_well_linked: set too large for subset-pair search");
  const int n = g.num_vertices();
  for (int size = 1; size <= m; ++size) {
    std::vector<VertexSet> subsets;
    for_each_subset_up_to(m, size, [&](const std::vector<Vertex>& idx) {
      if (static_cast<int>(idx.size()) != size) return true;
      VertexSet s(n);
      for (int i : idx) s.insert(ws[i]);
      subsets.push_back(std::move(s));
      return true;
    });
    for (const auto& a : subsets)
      for (const auto& b : subsets) {
        VertexSet allowed = g.all() - (w - (a | b));
        VertexFlow f = vertex_disjoint_paths(g, a, b, size, &allowed);
        if (f.value < size) return false;
      }
  }
  return true;
}

std::vector<VertexSet> enumerate_well_linked_sets(const Digraph& g, int m,
                                                  std::size_t max_candidates) {
  const int n = g.num_vertices();
  double count = 1;
  for (int i = 0; i < m; ++i) count = count * (n - i) / (i + 1);
  if (count > static_cast<double>(max_candidates))
    throw SizeGuardError("enumerate_well_linked_sets: too many candidates");
  std::vector<VertexSet> out;
  for_each_subset_up_to(n, m, [&](const std::vector<Vertex>& xs) {
    if (static_cast<int>(xs.size()) != m) return true;
    VertexSet w(n, xs);
    if (is_well_linked(g, w)) out.push_back(std::move(w));
    return true;
  });
  return out;
}

std::optional<DirectedSeparation> distinguish_brambles(const Digraph& g,
                                                       const VertexSet& cover1,
                                                       const VertexSet& cover2, int k) {
  if (cover1 == cover2) return std::nullopt;
  const int bound = 3 * k - 2;
  auto a = min_separation(g, cover1, cover2, bound);
  auto b = min_separation(g, cover2, cover1, bound);
  if (a && b) return a->order() <= b->order() ? a : b;
  return a ? a : b;
}

}  // namespace dtangle
