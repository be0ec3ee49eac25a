#include "dtangle/tangle.hpp"

#include <algorithm>
#include <map>

#include "dtangle/error.hpp"

namespace dtangle {

namespace {

class CoverOrienter : public Orienter {
 public:
  explicit CoverOrienter(VertexSet cover) : cover_(std::move(cover)) {}
  std::optional<Side> big_side(const DirectedSeparation& s) const override {
    std::size_t o = (cover_ & (s.out - s.in)).size();
    std::size_t i = (cover_ & (s.in - s.out)).size();
    if (o == i) return std::nullopt;
    return o > i ? Side::Out : Side::In;
  }

 private:
  VertexSet cover_;
};

// An element avoiding the separator is strongly connected in G - sep, so it
// lies in one exclusive side; pairwise intersection makes the side unique.
class BrambleOrienter : public Orienter {
 public:
  explicit BrambleOrienter(std::vector<VertexSet> elements)
      : elements_(std::move(elements)) {}
  std::optional<Side> big_side(const DirectedSeparation& s) const override {
    VertexSet sep = s.separator();
    for (const auto& e : elements_) {
      if (e.intersects(sep)) continue;
      if (e.is_subset_of(s.out)) return Side::Out;
      if (e.is_subset_of(s.in)) return Side::In;
      return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  std::vector<VertexSet> elements_;
};

class MapOrienter : public Orienter {
 public:
  explicit MapOrienter(Tangle::Map m) : map_(std::move(m)) {}
  std::optional<Side> big_side(const DirectedSeparation& s) const override {
    auto it = map_.find(s);
    if (it != map_.end()) return it->second;
    // Without cross edges only one orientation is stored.
    it = map_.find(DirectedSeparation{s.in, s.out});
    if (it != map_.end()) return opposite(it->second);
    return std::nullopt;
  }
  const Tangle::Map& map() const { return map_; }

 private:
  Tangle::Map map_;
};

}  // namespace

Tangle Tangle::from_cover(int k, VertexSet cover, std::string label) {
  Tangle t;
  t.k_ = k;
  t.origin_ = Origin::Cover;
  t.orienter_ = std::make_shared<CoverOrienter>(cover);
  t.cover_ = std::move(cover);
  t.label_ = std::move(label);
  return t;
}

Tangle Tangle::from_bramble(int k, std::vector<VertexSet> elements, std::string label) {
  Tangle t;
  t.k_ = k;
  t.origin_ = Origin::Bramble;
  if (!elements.empty()) {
    VertexSet all_members(elements.front().universe());
    for (const auto& e : elements) all_members |= e;
    t.cover_ = all_members;
  }
  t.orienter_ = std::make_shared<BrambleOrienter>(std::move(elements));
  t.label_ = std::move(label);
  return t;
}

Tangle Tangle::from_map(int k, Map orientation, VertexSet cover, std::string label) {
  Tangle t;
  t.k_ = k;
  t.origin_ = Origin::Explicit;
  t.orienter_ = std::make_shared<MapOrienter>(std::move(orientation));
  t.cover_ = std::move(cover);
  t.label_ = std::move(label);
  return t;
}

std::optional<Side> Tangle::orient(const DirectedSeparation& s) const {
  if (!orienter_ || s.order() >= k_) return std::nullopt;
  return orienter_->big_side(s);
}

Side Tangle::big_side(const DirectedSeparation& s) const {
  auto side = orient(s);
  if (!side)
    throw PreconditionError("tangle " + label_ + " does not orient a separation of order " +
                            std::to_string(s.order()));
  return *side;
}

Tangle Tangle::with_order(int new_order) const {
  if (new_order > k_) throw PreconditionError("with_order: cannot raise the order");
  Tangle t = *this;
  t.k_ = new_order;
  return t;
}

Tangle Tangle::materialize(const Digraph& g, const EnumerationLimits& limits) const {
  Map m;
  if (k_ > 0)
    for_each_separation(g, k_ - 1, [&](const DirectedSeparation& s) {
      if (auto side = orient(s)) m.emplace(s, *side);
      return true;
    }, limits);
  Tangle t = from_map(k_, std::move(m), cover_, label_);
  return t;
}

Tangle Tangle::flipped(const DirectedSeparation& s) const {
  auto* mo = dynamic_cast<const MapOrienter*>(orienter_.get());
  if (!mo) throw PreconditionError("flipped: tangle must be explicit");
  Map m = mo->map();
  auto it = m.find(s);
  if (it == m.end()) throw PreconditionError("flipped: separation not oriented");
  it->second = opposite(it->second);
  return from_map(k_, std::move(m), cover_, label_);
}

std::string TangleWitness::describe(const Digraph& g) const {
  std::string out;
  switch (kind) {
    case Kind::Unoriented: out = "unoriented separation"; break;
    case Kind::CoveringTriple: out = "three small sides cover V"; break;
    case Kind::NoBigComponent: out = "no unique big component"; break;
  }
  for (const auto& s : separations) out += " " + to_string(g, s);
  return out;
}

std::optional<TangleWitness> check_tangle_axioms(const Digraph& g, const Tangle& t,
                                                 const EnumerationLimits& limits) {
  if (t.order() <= 0) return std::nullopt;
  std::vector<std::pair<VertexSet, DirectedSeparation>> small;
  std::optional<TangleWitness> bad;
  for_each_separation(g, t.order() - 1, [&](const DirectedSeparation& s) {
    auto side = t.orient(s);
    if (!side) {
      bad = TangleWitness{TangleWitness::Kind::Unoriented, {s}};
      return false;
    }
    small.emplace_back(s.side(opposite(*side)), s);
    return true;
  }, limits);
  if (bad) return bad;

  // Keep inclusion-maximal small sides only.
  std::sort(small.begin(), small.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return lex_less(a.first, b.first);
  });
  std::vector<std::pair<VertexSet, DirectedSeparation>> maximal;
  for (auto& cand : small) {
    bool dominated = false;
    for (const auto& m : maximal)
      if (cand.first.is_subset_of(m.first)) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(std::move(cand));
  }
  const VertexSet all = g.all();
  const std::size_t m = maximal.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      VertexSet rest = all - (maximal[i].first | maximal[j].first);
      for (std::size_t l = j; l < m; ++l)
        if (rest.is_subset_of(maximal[l].first))
          return TangleWitness{TangleWitness::Kind::CoveringTriple,
                               {maximal[i].second, maximal[j].second, maximal[l].second}};
    }
  return std::nullopt;
}

VertexSet unique_big_component(const Digraph& g, const Tangle& t, const VertexSet& x) {
  if (static_cast<int>(x.size()) >= t.order())
    throw PreconditionError("unique_big_component: |X| must be below the tangle order");
  ComponentDag dag(g, x);
  const int l = dag.size();
  std::vector<bool> in_s(l, false);
  auto sep_for = [&](const std::vector<bool>& members) {
    std::vector<bool> rest(l);
    for (int i = 0; i < l; ++i) rest[i] = !members[i];
    return DirectedSeparation{x | dag.vertices_of(rest), x | dag.vertices_of(members)};
  };
  // D(S) is the in-side; it is small when the tangle picks the out-side.
  auto small_if_added = [&](int c) {
    std::vector<bool> trial = in_s;
    trial[c] = true;
    return t.big_side(sep_for(trial)) == Side::Out;
  };
  bool grew = true;
  while (grew) {
    grew = false;
    for (int c : dag.topo_order()) {
      if (in_s[c]) continue;
      bool sink = true;
      for (int d : dag.out(c))
        if (!in_s[d]) sink = false;
      if (sink && small_if_added(c)) {
        in_s[c] = true;
        grew = true;
        break;
      }
    }
  }
  std::vector<int> sinks;
  for (int c = 0; c < l; ++c) {
    if (in_s[c]) continue;
    bool sink = true;
    for (int d : dag.out(c))
      if (!in_s[d]) sink = false;
    if (sink) sinks.push_back(c);
  }
  if (sinks.size() == 1) return dag.component(sinks[0]);
  TangleWitness w{TangleWitness::Kind::NoBigComponent, {sep_for(in_s)}};
  if (sinks.size() >= 2) {
    w.kind = TangleWitness::Kind::CoveringTriple;
    for (int idx = 0; idx < 2; ++idx) {
      std::vector<bool> trial = in_s;
      trial[sinks[idx]] = true;
      w.separations.push_back(sep_for(trial));
    }
  }
  throw TangleAxiomError("tangle " + t.label() + " has no unique big component for " +
                             to_string(g, x),
                         std::move(w));
}

Tangle restrict_tangle(const Tangle& t, int l) {
  return t.with_order(std::min(t.order(), l + 1));
}

std::optional<DirectedSeparation> find_distinguisher(const Digraph& g, const Tangle& t1,
                                                     const Tangle& t2, int max_order,
                                                     const EnumerationLimits& limits) {
  int top = std::min({max_order, t1.order() - 1, t2.order() - 1});
  if (top < 0) return std::nullopt;
  std::optional<DirectedSeparation> found;
  for_each_separation(g, top, [&](const DirectedSeparation& s) {
    auto a = t1.orient(s), b = t2.orient(s);
    if (a && b && *a != *b) {
      found = s;
      return false;
    }
    return true;
  }, limits);
  return found;
}

bool agree_up_to(const Digraph& g, const Tangle& t1, const Tangle& t2, int l,
                 const EnumerationLimits& limits) {
  return !find_distinguisher(g, t1, t2, l, limits).has_value();
}

Cone cones(const Digraph& g, const TangleSet& ts, const Tangle& t, int l,
           const EnumerationLimits& limits) {
  Cone c;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i].order() >= l + 1 && agree_up_to(g, ts[i], t, l, limits))
      c.members.push_back(static_cast<int>(i));
  for (int i : c.members) {
    Tangle r = restrict_tangle(ts[i], l + 1);
    bool dup = false;
    for (const auto& s : c.strict)
      if (s.order() == r.order() && agree_up_to(g, s, r, l + 1, limits)) dup = true;
    if (!dup) c.strict.push_back(r);
  }
  return c;
}

namespace {

struct TangleSearch {
  const Digraph& g;
  int k;
  std::size_t max_results;
  std::vector<VertexSet> separators;
  std::map<std::vector<Vertex>, int> index;
  std::vector<std::vector<VertexSet>> candidates;
  std::vector<VertexSet> chosen;
  std::vector<DirectedSeparation> all_seps;
  TangleSet found;
  std::size_t steps = 0;

  void run(std::size_t i) {
    if (found.size() >= max_results) return;
    if (++steps > 2000000) throw SizeGuardError("find_tangles: search too large");
    if (i == separators.size()) {
      emit();
      return;
    }
    const VertexSet& x = separators[i];
    VertexSet allowed = g.all() - x;
    x.for_each([&](Vertex v) {
      VertexSet y = x;
      y.erase(v);
      allowed &= chosen[index.at(y.to_vector())];
    });
    for (const auto& c : candidates[i]) {
      if (!c.is_subset_of(allowed)) continue;
      chosen[i] = c;
      run(i + 1);
    }
  }

  void emit() {
    Tangle::Map m;
    for (const auto& s : all_seps) {
      const VertexSet& c = chosen[index.at(s.separator().to_vector())];
      m.emplace(s, c.is_subset_of(s.out - s.in) ? Side::Out : Side::In);
    }
    Tangle t = Tangle::from_map(k, std::move(m), chosen[0]);
    if (!check_tangle_axioms(g, t)) found.push_back(std::move(t));
  }
};

}  // namespace

TangleSet find_tangles(const Digraph& g, int k, std::size_t max_results,
                       const EnumerationLimits& limits) {
  if (k <= 0) return {Tangle::from_map(0, {}, g.empty_set())};
  if (!limits.force && separator_count(g.num_vertices(), k - 1) > limits.max_separators)
    throw SizeGuardError("find_tangles: too many candidate separators (" +
                         std::to_string(g.num_vertices()) + " vertices, order " +
                         std::to_string(k) + ")");
  TangleSearch search{g, k, max_results, {}, {}, {}, {}, {}, {}, 0};
  for_each_subset_up_to(g.num_vertices(), k - 1, [&](const std::vector<Vertex>& xs) {
    search.index[xs] = static_cast<int>(search.separators.size());
    search.separators.emplace_back(g.num_vertices(), xs);
    VertexSet allowed = g.all() - search.separators.back();
    search.candidates.push_back(strong_components(g, &allowed));
    return true;
  });
  search.chosen.assign(search.separators.size(), g.empty_set());
  search.all_seps = enumerate_separations(g, k - 1, limits);
  search.run(0);
  return search.found;
}

}  // namespace dtangle
