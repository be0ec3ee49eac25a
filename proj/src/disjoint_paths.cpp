#include "dtangle/disjoint_paths.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "dtangle/decomposition.hpp"
#include "dtangle/labelling.hpp"

namespace dtangle {

void check_pairs(const Digraph& g, const PairList& pairs) {
  const int n = g.num_vertices();
  VertexSet seen(n);
  auto claim = [&](Vertex v) {
    if (seen.contains(v))
      throw PreconditionError("pairs: vertex " + g.name(v) + " is a terminal of two pairs");
    seen.insert(v);
  };
  for (auto [s, t] : pairs) {
    if (s < 0 || s >= n || t < 0 || t >= n)
      throw PreconditionError("pairs: vertex id out of range");
    claim(s);
    if (t != s) claim(t);
  }
}

namespace {

// Shortest path from s to t through `open`, which must hold both ends.
std::optional<Path> bfs_path(const Digraph& g, Vertex s, Vertex t, const VertexSet& open) {
  if (!open.contains(s) || !open.contains(t)) return std::nullopt;
  std::vector<Vertex> pred(g.num_vertices(), -1);
  pred[s] = s;
  std::deque<Vertex> queue{s};
  while (!queue.empty() && pred[t] < 0) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : g.out(v))
      if (open.contains(w) && pred[w] < 0) {
        pred[w] = v;
        queue.push_back(w);
      }
  }
  if (pred[t] < 0) return std::nullopt;
  Path p{t};
  while (p.back() != s) p.push_back(pred[p.back()]);
  std::reverse(p.begin(), p.end());
  return p;
}

VertexSet reach_from(const Digraph& g, Vertex s, const VertexSet& open, bool forward) {
  VertexSet seen(g.num_vertices());
  if (!open.contains(s)) return seen;
  seen.insert(s);
  std::vector<Vertex> stack{s};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : forward ? g.out(v) : g.in(v))
      if (open.contains(w) && !seen.contains(w)) {
        seen.insert(w);
        stack.push_back(w);
      }
  }
  return seen;
}

struct ExactSearch {
  const Digraph& g;
  const PairList& pairs;
  VertexSet region;
  VertexSet terminals;
  std::size_t max_nodes;
  std::vector<int> order;
  std::vector<std::unordered_set<VertexSet, VertexSetHash>> failed;
  std::vector<Path> chosen;
  VertexSet used;
  std::size_t nodes = 0;

  VertexSet open_for(int i) const {
    VertexSet open = region - used - terminals;
    open.insert(pairs[i].first);
    open.insert(pairs[i].second);
    return open;
  }

  bool run(std::size_t pos) {
    if (pos == order.size()) return true;
    if (failed[pos].count(used)) return false;
    for (std::size_t q = pos; q < order.size(); ++q) {
      int j = order[q];
      if (!bfs_path(g, pairs[j].first, pairs[j].second, open_for(j))) {
        failed[pos].insert(used);
        return false;
      }
    }
    const int i = order[pos];
    VertexSet open = open_for(i);
    Path path{pairs[i].first};
    open.erase(pairs[i].first);
    if (extend(pos, i, path, open)) return true;
    failed[pos].insert(used);
    return false;
  }

  // `open` excludes the vertices already on `path`.
  bool extend(std::size_t pos, int i, Path& path, VertexSet& open) {
    if (++nodes > max_nodes) throw SizeGuardError("exact_disjoint_paths: search node limit reached");
    const Vertex v = path.back(), t = pairs[i].second;
    if (v == t) {
      for (Vertex x : path) used.insert(x);
      chosen[i] = path;
      if (run(pos + 1)) return true;
      for (Vertex x : path) used.erase(x);
      return false;
    }
    VertexSet ahead = open;
    ahead.insert(v);
    if (!reach_from(g, v, ahead, true).contains(t)) return false;
    for (Vertex w : g.out(v)) {
      if (!open.contains(w)) continue;
      path.push_back(w);
      open.erase(w);
      bool ok = extend(pos, i, path, open);
      open.insert(w);
      path.pop_back();
      if (ok) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<std::vector<Path>> exact_disjoint_paths(const Digraph& g, const PairList& pairs,
                                                      const ExactLimits& limits,
                                                      const VertexSet* allowed) {
  check_pairs(g, pairs);
  const int n = g.num_vertices();
  const int k = static_cast<int>(pairs.size());
  VertexSet region = allowed ? *allowed : g.all();
  for (auto [s, t] : pairs)
    if (!region.contains(s) || !region.contains(t)) return std::nullopt;
  if (k >= 2 && static_cast<int>(region.size()) > limits.max_vertices)
    throw SizeGuardError("exact_disjoint_paths: " + std::to_string(region.size()) +
                         " vertices exceed the guard of " + std::to_string(limits.max_vertices));
  VertexSet terminals(n);
  for (auto [s, t] : pairs) {
    terminals.insert(s);
    terminals.insert(t);
  }
  ExactSearch search{g, pairs, region, terminals, limits.max_nodes, {}, {}, {}, VertexSet(n)};
  // Most constrained first: fewest vertices on some s_i -> t_i walk.
  std::vector<std::size_t> room(k);
  for (int i = 0; i < k; ++i) {
    VertexSet open = search.open_for(i);
    room[i] = (reach_from(g, pairs[i].first, open, true) &
               reach_from(g, pairs[i].second, open, false)).size();
  }
  search.order.resize(k);
  std::iota(search.order.begin(), search.order.end(), 0);
  std::stable_sort(search.order.begin(), search.order.end(),
                   [&](int a, int b) { return room[a] < room[b]; });
  search.failed.resize(k);
  search.chosen.resize(k);
  if (!search.run(0)) return std::nullopt;
  return search.chosen;
}

std::optional<std::string> verify_half_integral(const Digraph& g, const PairList& pairs,
                                                const std::vector<Path>& paths) {
  if (paths.size() != pairs.size())
    return "expected " + std::to_string(pairs.size()) + " paths, got " +
           std::to_string(paths.size());
  const int n = g.num_vertices();
  std::vector<int> load(n, 0);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    const std::string which = "path " + std::to_string(i + 1);
    if (p.empty()) return which + " is empty";
    for (Vertex v : p)
      if (v < 0 || v >= n) return which + " has a vertex id out of range";
    if (p.front() != pairs[i].first || p.back() != pairs[i].second)
      return which + " does not link " + g.name(pairs[i].first) + " to " + g.name(pairs[i].second);
    VertexSet on(n);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (on.contains(p[j])) return which + " repeats " + g.name(p[j]);
      on.insert(p[j]);
      if (j + 1 < p.size() && !g.has_edge(p[j], p[j + 1]))
        return which + " uses a missing edge " + g.name(p[j]) + " -> " + g.name(p[j + 1]);
    }
    on.for_each([&](Vertex v) { ++load[v]; });
  }
  for (Vertex v = 0; v < n; ++v)
    if (load[v] > 2) return "vertex " + g.name(v) + " lies on " + std::to_string(load[v]) + " paths";
  return std::nullopt;
}

// Pattern graphs.

int PatternGraph::count(char part) const {
  int c = 0;
  for (const auto& w : paths) c += static_cast<int>(std::count(w.begin(), w.end(), part));
  return c;
}

int PatternGraph::num_vertices() const {
  int c = 0;
  for (const auto& w : paths) c += static_cast<int>(w.size());
  return c;
}

std::vector<char> PatternGraph::parts() const {
  std::vector<char> out;
  for (const auto& w : paths) out.insert(out.end(), w.begin(), w.end());
  return out;
}

std::vector<Edge> PatternGraph::edges() const {
  std::vector<Edge> out;
  int base = 0;
  for (const auto& w : paths) {
    for (int i = 0; i + 1 < static_cast<int>(w.size()); ++i) out.emplace_back(base + i, base + i + 1);
    base += static_cast<int>(w.size());
  }
  return out;
}

std::string PatternGraph::to_string() const {
  std::string s = type == PatternType::RightToLeft ? "(R->L)" : "(L->R)";
  for (const auto& w : paths) s += " " + w;
  return s;
}

std::pair<int, int> pattern_bounds(PatternType x, int k, int t) {
  int big = 4 * t + 2 * k;
  return x == PatternType::RightToLeft ? std::pair{big, t} : std::pair{t, big};
}

namespace {

char forbidden_start(PatternType x) { return x == PatternType::RightToLeft ? 'R' : 'L'; }

// The edge direction between L and R that the type rules out, as a word.
std::string forbidden_step(PatternType x) { return x == PatternType::RightToLeft ? "LR" : "RL"; }

std::optional<std::string> word_violation(PatternType x, const std::string& w) {
  if (w.empty()) return "empty path";
  for (char c : w)
    if (c != 'L' && c != 'M' && c != 'R') return "unknown part letter";
  if (w.front() == forbidden_start(x)) return "path starts in the forbidden part";
  if (w.find(forbidden_step(x)) != std::string::npos) return "edge in the forbidden direction";
  for (std::size_t i = 0; i + 2 < w.size(); ++i)
    if (w[i] != 'M' && w[i] == w[i + 1] && w[i + 1] == w[i + 2])
      return std::string("edge inside ") + w[i] + " that is not an isolated edge";
  return std::nullopt;
}

bool word_less(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

}  // namespace

std::optional<std::string> pattern_violation(const PatternGraph& h) {
  if (static_cast<int>(h.paths.size()) != h.k) return "not a union of k paths";
  if (h.count('M') > h.t) return "|M| exceeds t";
  for (const auto& w : h.paths)
    if (auto v = word_violation(h.type, w)) return v;
  return std::nullopt;
}

std::vector<PatternGraph> enumerate_pattern_graphs(PatternType x, int k, int t) {
  auto [max_l, max_r] = pattern_bounds(x, k, t);
  // All single words within the part budgets, grown letter by letter.
  std::vector<std::string> words;
  std::string w;
  std::function<void(int, int, int)> grow = [&](int l, int m, int r) {
    if (!w.empty() && !word_violation(x, w)) words.push_back(w);
    for (char c : {'L', 'M', 'R'}) {
      int nl = l + (c == 'L'), nm = m + (c == 'M'), nr = r + (c == 'R');
      if (nl > max_l || nm > t || nr > max_r) continue;
      w.push_back(c);
      // Runs and forbidden steps never heal, so prune on the prefix.
      bool dead = false;
      if (w.size() == 1 && c == forbidden_start(x)) dead = true;
      if (w.size() >= 2 && w.compare(w.size() - 2, 2, forbidden_step(x)) == 0) dead = true;
      if (w.size() >= 3 && c != 'M' && w[w.size() - 2] == c && w[w.size() - 3] == c) dead = true;
      if (!dead) grow(nl, nm, nr);
      w.pop_back();
    }
  };
  grow(0, 0, 0);
  std::sort(words.begin(), words.end(), word_less);

  std::vector<PatternGraph> out;
  std::vector<int> pick;
  std::function<void(std::size_t, int, int, int)> choose = [&](std::size_t from, int l, int m,
                                                               int r) {
    if (static_cast<int>(pick.size()) == k) {
      PatternGraph h{x, k, t, {}};
      for (int i : pick) h.paths.push_back(words[i]);
      out.push_back(std::move(h));
      return;
    }
    for (std::size_t i = from; i < words.size(); ++i) {
      const std::string& u = words[i];
      int nl = l + static_cast<int>(std::count(u.begin(), u.end(), 'L'));
      int nm = m + static_cast<int>(std::count(u.begin(), u.end(), 'M'));
      int nr = r + static_cast<int>(std::count(u.begin(), u.end(), 'R'));
      if (nl > max_l || nm > t || nr > max_r) continue;
      pick.push_back(static_cast<int>(i));
      choose(i, nl, nm, nr);
      pick.pop_back();
    }
  };
  choose(0, 0, 0, 0);
  std::stable_sort(out.begin(), out.end(), [](const PatternGraph& a, const PatternGraph& b) {
    return a.num_vertices() < b.num_vertices();
  });
  return out;
}

// Solvers.

namespace {

HalfIntegralOutcome paths_outcome(std::vector<Path> paths, std::string decided_by) {
  HalfIntegralOutcome o;
  o.verdict = HalfIntegralOutcome::Verdict::Paths;
  o.congestion = congestion(paths);
  o.paths = std::move(paths);
  o.decided_by = std::move(decided_by);
  return o;
}

HalfIntegralOutcome no_integral(std::string decided_by) {
  HalfIntegralOutcome o;
  o.decided_by = std::move(decided_by);
  return o;
}

PairList reversed_pairs(const PairList& pairs) {
  PairList out;
  for (auto [s, t] : pairs) out.emplace_back(t, s);
  return out;
}

void reverse_paths(std::vector<Path>& paths) {
  for (auto& p : paths) std::reverse(p.begin(), p.end());
}

// Runs `solve` on G[keep] with the pairs renumbered and maps the answer back.
template <typename Solve>
HalfIntegralOutcome on_induced(const Digraph& g, const VertexSet& keep, const PairList& pairs,
                               Solve&& solve) {
  InducedSubgraph sub = induced_subgraph(g, keep);
  PairList local;
  for (auto [s, t] : pairs) local.emplace_back(sub.from_parent[s], sub.from_parent[t]);
  HalfIntegralOutcome o = solve(sub.graph, local);
  for (auto& p : o.paths)
    for (auto& v : p) v = sub.to_parent[v];
  return o;
}

bool fits_oracle(int vertices, int k, const ExactLimits& limits) {
  return k <= 1 || vertices <= limits.max_vertices;
}

// Guess counter shared by the loops of one call.
struct Budget {
  std::size_t left;
  void spend(const char* where) {
    if (left == 0) throw BudgetError(std::string(where) + ": guess budget exhausted");
    --left;
  }
};

// One path of a pattern split into the pieces the two sides solve.
struct Piece {
  bool left = true;  // solved in G[A]; false for G[B]
  int from = 0;      // word positions, inclusive
  int to = 0;
};

std::vector<Piece> pieces_of(const std::string& w) {
  std::vector<Piece> out;
  const int len = static_cast<int>(w.size());
  std::vector<bool> covered(len, false);
  for (bool left : {true, false}) {
    const char own = left ? 'L' : 'R';
    int i = 0;
    while (i < len) {
      if (w[i] != own && w[i] != 'M') {
        ++i;
        continue;
      }
      int j = i;
      while (j + 1 < len && (w[j + 1] == own || w[j + 1] == 'M') &&
             !(w[j] == 'M' && w[j + 1] == 'M'))
        ++j;
      if (!(i == j && w[i] == 'M')) {
        out.push_back({left, i, j});
        for (int p = i; p <= j; ++p) covered[p] = true;
      }
      i = j + 1;
    }
  }
  // M vertices isolated on both sides stand alone between fixed edges.
  for (int p = 0; p < len; ++p)
    if (!covered[p]) out.push_back({true, p, p});
  std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) { return a.from < b.from; });
  return out;
}

struct SpliceSearch {
  const Digraph& g;
  const PairList& pairs;
  const DirectedSeparation& sep;
  const HalfOrNoOptions& options;
  VertexSet a_only, b_only, mid;
  Budget budget;
  std::map<std::pair<PairList, std::vector<Vertex>>, std::optional<std::vector<Path>>> left_memo;
  std::map<std::pair<PairList, std::vector<Vertex>>, HalfIntegralOutcome> right_memo;

  char part_of(Vertex v) const { return mid.contains(v) ? 'M' : a_only.contains(v) ? 'L' : 'R'; }

  std::optional<std::vector<Path>> try_assignment(const std::vector<std::string>& words);
  std::optional<std::vector<Path>> try_embedding(const std::vector<std::string>& words,
                                                 const std::vector<std::vector<Vertex>>& img);
};

std::optional<std::vector<Path>> SpliceSearch::try_assignment(
    const std::vector<std::string>& words) {
  const int k = static_cast<int>(words.size());
  // img[i][p]: image of position p of word i, -1 while open or for
  // positions whose image neither side's instance reads.
  std::vector<std::vector<Vertex>> img(k);
  VertexSet taken(g.num_vertices());
  for (int i = 0; i < k; ++i) {
    const std::string& w = words[i];
    const int last = static_cast<int>(w.size()) - 1;
    auto [s, t] = pairs[i];
    if ((s == t) != (last == 0)) return std::nullopt;
    if (part_of(s) != w.front() || part_of(t) != w.back()) return std::nullopt;
    img[i].assign(w.size(), -1);
    img[i][0] = s;
    img[i][last] = t;
    taken.insert(s);
    taken.insert(t);
  }
  // Open slots: every M position, and each R -> L step (one crossing edge).
  struct Slot {
    int word, pos;
    bool edge;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < k; ++i) {
    const std::string& w = words[i];
    for (int p = 0; p < static_cast<int>(w.size()); ++p) {
      if (w[p] == 'M' && img[i][p] < 0) slots.push_back({i, p, false});
      if (p + 1 < static_cast<int>(w.size()) && w[p] == 'R' && w[p + 1] == 'L')
        slots.push_back({i, p, true});
    }
  }
  std::vector<Edge> crossing;
  b_only.for_each([&](Vertex u) {
    for (Vertex v : g.out(u))
      if (a_only.contains(v)) crossing.emplace_back(u, v);
  });
  const std::vector<Vertex> seps = mid.to_vector();

  std::optional<std::vector<Path>> found;
  std::function<bool(std::size_t)> fill = [&](std::size_t si) -> bool {
    if (si == slots.size()) {
      // Every H[M] edge must be an edge of G.
      for (int i = 0; i < k; ++i)
        for (std::size_t p = 0; p + 1 < words[i].size(); ++p)
          if (words[i][p] == 'M' && words[i][p + 1] == 'M' &&
              !g.has_edge(img[i][p], img[i][p + 1]))
            return false;
      budget.spend("splice_across");
      found = try_embedding(words, img);
      return found.has_value();
    }
    const Slot& sl = slots[si];
    auto& row = img[sl.word];
    if (!sl.edge) {
      for (Vertex v : seps) {
        if (taken.contains(v)) continue;
        row[sl.pos] = v;
        taken.insert(v);
        bool ok = fill(si + 1);
        taken.erase(v);
        row[sl.pos] = -1;
        if (ok) return true;
      }
      return false;
    }
    const Vertex fixed_u = row[sl.pos], fixed_v = row[sl.pos + 1];
    for (auto [u, v] : crossing) {
      if (fixed_u >= 0 && u != fixed_u) continue;
      if (fixed_v >= 0 && v != fixed_v) continue;
      if ((fixed_u < 0 && taken.contains(u)) || (fixed_v < 0 && taken.contains(v))) continue;
      if (fixed_u < 0 && fixed_v < 0 && u == v) continue;
      row[sl.pos] = u;
      row[sl.pos + 1] = v;
      if (fixed_u < 0) taken.insert(u);
      if (fixed_v < 0) taken.insert(v);
      bool ok = fill(si + 1);
      if (fixed_u < 0) taken.erase(u);
      if (fixed_v < 0) taken.erase(v);
      row[sl.pos] = fixed_u;
      row[sl.pos + 1] = fixed_v;
      if (ok) return true;
    }
    return false;
  };
  fill(0);
  return found;
}

std::optional<std::vector<Path>> SpliceSearch::try_embedding(
    const std::vector<std::string>& words, const std::vector<std::vector<Vertex>>& img) {
  const int n = g.num_vertices();
  const int k = static_cast<int>(words.size());
  VertexSet used_mid(n);
  PairList left_pairs, right_pairs;
  VertexSet in_left(n), in_right(n);
  std::vector<std::vector<Piece>> pieces(k);
  for (int i = 0; i < k; ++i) {
    for (std::size_t p = 0; p < words[i].size(); ++p)
      if (words[i][p] == 'M') used_mid.insert(img[i][p]);
    pieces[i] = pieces_of(words[i]);
    for (const Piece& pc : pieces[i]) {
      if (pc.from == pc.to && words[i][pc.from] == 'M') continue;
      Vertex a = img[i][pc.from], b = img[i][pc.to];
      (pc.left ? left_pairs : right_pairs).emplace_back(a, b);
      for (int p = pc.from; p <= pc.to; ++p)
        if (words[i][p] == 'M') (pc.left ? in_left : in_right).insert(img[i][p]);
    }
  }
  // Separator vertices off every pattern path, and M vertices not on a
  // side's pieces, are closed to that side.
  VertexSet left_open = (a_only | (mid & in_left));
  VertexSet right_open = (b_only | (mid & in_right));

  auto key = [](const PairList& ps, const VertexSet& open) {
    return std::pair{ps, open.to_vector()};
  };
  auto lk = key(left_pairs, left_open);
  auto lit = left_memo.find(lk);
  if (lit == left_memo.end())
    lit = left_memo.emplace(lk, exact_disjoint_paths(g, left_pairs, options.exact, &left_open)).first;
  if (!lit->second) return std::nullopt;

  auto rk = key(right_pairs, right_open);
  auto rit = right_memo.find(rk);
  if (rit == right_memo.end()) {
    HalfOrNoOptions inner = options;
    inner.wall = nullptr;
    inner.confirm_with_oracle = false;
    HalfIntegralOutcome r =
        right_pairs.empty()
            ? paths_outcome({}, "base-case")
            : on_induced(g, right_open, right_pairs, [&](const Digraph& h, const PairList& ps) {
                return half_or_no_leaf(h, ps, inner);
              });
    rit = right_memo.emplace(rk, std::move(r)).first;
  }
  if (rit->second.verdict != HalfIntegralOutcome::Verdict::Paths) return std::nullopt;

  // Concatenate the pieces of each pattern path in order.
  const auto& lp = *lit->second;
  const auto& rp = rit->second.paths;
  std::size_t li = 0, ri = 0;
  std::vector<Path> out(k);
  for (int i = 0; i < k; ++i) {
    Path walk;
    int end = -1;
    for (const Piece& pc : pieces[i]) {
      Path part;
      if (pc.from == pc.to && words[i][pc.from] == 'M')
        part = {img[i][pc.from]};
      else
        part = pc.left ? lp[li++] : rp[ri++];
      // Pieces share their M end vertex or meet along a fixed edge.
      if (pc.from == end) part.erase(part.begin());
      walk.insert(walk.end(), part.begin(), part.end());
      end = pc.to;
    }
    out[i] = shortcut(walk);
  }
  if (auto bad = verify_half_integral(g, pairs, out))
    throw std::logic_error("splice_across: spliced paths break the contract: " + *bad);
  return out;
}

}  // namespace

HalfIntegralOutcome splice_across(const Digraph& g, const PairList& pairs,
                                  const DirectedSeparation& sep, const HalfOrNoOptions& options) {
  check_pairs(g, pairs);
  if (auto v = validate_separation(g, sep))
    throw PreconditionError("splice_across: " + v->describe(g));
  for (auto [s, t] : pairs)
    if (!sep.in.contains(s))
      throw PreconditionError("splice_across: source " + g.name(s) + " lies outside A");
  const int k = static_cast<int>(pairs.size());
  const int t = sep.order();
  SpliceSearch search{g, pairs, sep, options, sep.in - sep.out, sep.out - sep.in,
                      sep.separator(), Budget{options.budget}, {}, {}};
  for (const PatternGraph& h : enumerate_pattern_graphs(PatternType::RightToLeft, k, t)) {
    // Every distinct assignment of the pattern's paths to the pairs.
    std::vector<std::string> words = h.paths;
    std::sort(words.begin(), words.end());
    do {
      if (auto paths = search.try_assignment(words)) return paths_outcome(std::move(*paths), "splice");
    } while (std::next_permutation(words.begin(), words.end()));
  }
  return no_integral("splice");
}

HalfIntegralOutcome half_or_no_leaf(const Digraph& g, const PairList& pairs,
                                    const HalfOrNoOptions& options) {
  check_pairs(g, pairs);
  const int n = g.num_vertices();
  const int k = static_cast<int>(pairs.size());
  std::vector<Path> direct;
  for (auto [s, t] : pairs) {
    auto p = bfs_path(g, s, t, g.all());
    if (!p) return no_integral("disconnected");
    direct.push_back(std::move(*p));
  }
  if (k <= 2) return paths_outcome(std::move(direct), "base-case");

  if (options.wall) {
    std::vector<Vertex> s, t;
    for (auto [a, b] : pairs) {
      s.push_back(a);
      t.push_back(b);
    }
    RoutingOutcome r = route_through_wall(g, s, t, *options.wall);
    switch (r.kind) {
      case RoutingOutcome::Kind::Linkage:
        return paths_outcome(std::move(r.paths), "wall-linkage");
      case RoutingOutcome::Kind::ShieldsSources:
        return splice_across(g, pairs, r.sep, options);
      case RoutingOutcome::Kind::ShieldsTerminals: {
        HalfIntegralOutcome o = splice_across(g.reversed(), reversed_pairs(pairs),
                                              DirectedSeparation{r.sep.in, r.sep.out}, options);
        reverse_paths(o.paths);
        return o;
      }
    }
  }
  if (!fits_oracle(n, k, options.exact))
    throw NeedsCertificateError("half_or_no_leaf: " + std::to_string(n) +
                                " vertices exceed the oracle guard and no wall certificate was given");
  auto exact = exact_disjoint_paths(g, pairs, options.exact);
  if (!exact) return no_integral("oracle");
  return paths_outcome(std::move(*exact), "oracle");
}

namespace {

// Bottom-up DP over a directed tree-decomposition. solve(node, pairs) works
// inside the union of the subtree's bags.
struct DecompositionDp {
  const Digraph& g;
  const DirectedTreeDecomposition& d;
  const HalfOrNoOptions& options;
  std::vector<std::vector<int>> kids;
  std::vector<VertexSet> region;
  std::map<std::pair<int, PairList>, HalfIntegralOutcome> memo;

  DecompositionDp(const Digraph& graph, const DirectedTreeDecomposition& dtd,
                  const HalfOrNoOptions& opts)
      : g(graph), d(dtd), options(opts), kids(dtd.children()) {
    for (int t = 0; t < d.num_nodes(); ++t) region.push_back(d.subtree_bags(t));
  }

  HalfIntegralOutcome solve(int node, const PairList& pairs) {
    auto key = std::pair{node, pairs};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    HalfIntegralOutcome o;
    if (pairs.empty()) {
      o = paths_outcome({}, "dp");
    } else if (kids[node].empty()) {
      HalfOrNoOptions leaf = options;
      leaf.wall = nullptr;
      leaf.confirm_with_oracle = false;
      o = on_induced(g, region[node], pairs, [&](const Digraph& h, const PairList& ps) {
        return half_or_no_leaf(h, ps, leaf);
      });
    } else {
      try {
        Budget budget{options.budget};
        o = combine(node, pairs, budget);
      } catch (const BudgetError&) {
        const int size = static_cast<int>(region[node].size());
        if (!fits_oracle(size, static_cast<int>(pairs.size()), options.exact)) throw;
        auto exact = exact_disjoint_paths(g, pairs, options.exact, &region[node]);
        o = exact ? paths_outcome(std::move(*exact), "oracle") : no_integral("oracle");
      }
    }
    memo.emplace(std::move(key), o);
    return o;
  }

  // Candidate piece lists for child c: each piece (entry, exit) is the
  // stretch of one solution path inside the child's region.
  std::vector<PairList> piece_sets(int c, const VertexSet& outer, const PairList& pairs,
                                   Budget& budget) {
    const VertexSet& inside = region[c];
    const VertexSet outside = outer - inside;
    const int n = g.num_vertices();
    VertexSet forced_in(n), forced_out(n), entries(n), exits(n);
    for (auto [s, t] : pairs) {
      if (inside.contains(s)) forced_in.insert(s);
      if (inside.contains(t)) forced_out.insert(t);
    }
    inside.for_each([&](Vertex v) {
      for (Vertex u : g.in(v))
        if (outside.contains(u)) entries.insert(v);
      for (Vertex w : g.out(v))
        if (outside.contains(w)) exits.insert(v);
    });
    entries |= forced_in;
    exits |= forced_out;
    const int cap = std::min<int>({static_cast<int>(entries.size()), static_cast<int>(exits.size()),
                                   static_cast<int>(pairs.size() + d.guards[c].size())});
    const std::vector<Vertex> ev = entries.to_vector(), xv = exits.to_vector();
    std::vector<PairList> out;
    for (int p = static_cast<int>(std::max(forced_in.size(), forced_out.size())); p <= cap; ++p) {
      for_each_subset_up_to(static_cast<int>(ev.size()), p, [&](const std::vector<Vertex>& ei) {
        if (static_cast<int>(ei.size()) != p) return true;
        VertexSet chosen_in(n);
        for (int i : ei) chosen_in.insert(ev[i]);
        if (!forced_in.is_subset_of(chosen_in)) return true;
        for_each_subset_up_to(static_cast<int>(xv.size()), p, [&](const std::vector<Vertex>& xi) {
          if (static_cast<int>(xi.size()) != p) return true;
          VertexSet chosen_out(n);
          for (int i : xi) chosen_out.insert(xv[i]);
          if (!forced_out.is_subset_of(chosen_out)) return true;
          std::vector<Vertex> outs;
          for (int i : xi) outs.push_back(xv[i]);
          do {
            bool ok = true;
            PairList ps;
            for (int j = 0; j < p && ok; ++j) {
              Vertex a = ev[ei[j]], b = outs[j];
              // Pieces are disjoint; a vertex that is both an entry and an
              // exit is a one-vertex piece.
              if (a != b && (chosen_out.contains(a) || chosen_in.contains(b))) ok = false;
              ps.emplace_back(a, b);
            }
            if (ok) {
              budget.spend("half_or_no");
              out.push_back(std::move(ps));
            }
          } while (std::next_permutation(outs.begin(), outs.end()));
          return true;
        });
        return true;
      });
    }
    return out;
  }

  HalfIntegralOutcome combine(int node, const PairList& pairs, Budget& budget) {
    const VertexSet& outer = region[node];
    const std::vector<int>& cs = kids[node];
    std::vector<std::vector<PairList>> options_per_child;
    for (int c : cs) options_per_child.push_back(piece_sets(c, outer, pairs, budget));
    std::vector<std::size_t> pick(cs.size(), 0);
    for (const auto& list : options_per_child)
      if (list.empty()) return no_integral("dp");
    while (true) {
      budget.spend("half_or_no");
      if (auto paths = try_combination(node, pairs, pick, options_per_child))
        return paths_outcome(std::move(*paths), "dp");
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == options_per_child[i].size()) pick[i++] = 0;
      if (i == pick.size()) return no_integral("dp");
    }
  }

  std::optional<std::vector<Path>> try_combination(
      int node, const PairList& pairs, const std::vector<std::size_t>& pick,
      const std::vector<std::vector<PairList>>& lists) {
    const int n = g.num_vertices();
    const std::vector<int>& cs = kids[node];
    std::vector<HalfIntegralOutcome> sub;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      sub.push_back(solve(cs[i], lists[i][pick[i]]));
      if (sub.back().verdict != HalfIntegralOutcome::Verdict::Paths) return std::nullopt;
    }
    // Quotient: outside vertices, plus the piece ends of each child joined
    // by a matching edge; a stub keeps only the edges crossing its region.
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < cs.size(); ++i) region[cs[i]].for_each([&](Vertex v) { owner[v] = static_cast<int>(i); });
    VertexSet keep = region[node], entry(n), exit(n);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      keep -= region[cs[i]];
      for (auto [a, b] : lists[i][pick[i]]) {
        keep.insert(a);
        keep.insert(b);
        entry.insert(a);
        exit.insert(b);
      }
    }
    std::vector<Vertex> ids = keep.to_vector();
    std::vector<Vertex> local(n, -1);
    for (std::size_t i = 0; i < ids.size(); ++i) local[ids[i]] = static_cast<Vertex>(i);
    std::vector<Edge> edges;
    std::map<Edge, Path> expand;
    for (Vertex u : ids)
      for (Vertex v : g.out(u)) {
        if (local[v] < 0) continue;
        if (owner[u] >= 0 && (!exit.contains(u) || owner[v] == owner[u])) continue;
        if (owner[v] >= 0 && (!entry.contains(v) || owner[u] == owner[v])) continue;
        edges.emplace_back(local[u], local[v]);
      }
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const PairList& ps = lists[i][pick[i]];
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (ps[j].first == ps[j].second) continue;
        edges.emplace_back(local[ps[j].first], local[ps[j].second]);
        expand[{ps[j].first, ps[j].second}] = sub[i].paths[j];
      }
    }
    Digraph q(static_cast<int>(ids.size()), edges);
    PairList qpairs;
    for (auto [s, t] : pairs) qpairs.emplace_back(local[s], local[t]);
    auto linkage = exact_disjoint_paths(q, qpairs, options.exact);
    if (!linkage) return std::nullopt;
    std::vector<Path> out;
    for (const Path& qp : *linkage) {
      Path walk{ids[qp.front()]};
      for (std::size_t j = 0; j + 1 < qp.size(); ++j) {
        Vertex a = ids[qp[j]], b = ids[qp[j + 1]];
        auto it = expand.find({a, b});
        if (it != expand.end() && owner[a] >= 0 && owner[a] == owner[b])
          walk.insert(walk.end(), it->second.begin() + 1, it->second.end());
        else
          walk.push_back(b);
      }
      out.push_back(shortcut(walk));
    }
    return out;
  }
};

}  // namespace

HalfIntegralOutcome half_or_no(const Digraph& g, const PairList& pairs,
                               const HalfOrNoOptions& options) {
  check_pairs(g, pairs);
  const int n = g.num_vertices();
  const int k = static_cast<int>(pairs.size());
  if (k == 0) return paths_outcome({}, "base-case");
  const int m = options.tangle_order > 0 ? options.tangle_order : required_wall_order(k);

  TangleSet found;
  const TangleSet* ts = options.tangles;
  if (!ts && n >= 3 * m) {
    // A bramble of order 3m needs 3m vertices, so smaller graphs are leaves.
    try {
      found = find_tangles(g, 3 * m, 16);
    } catch (const SizeGuardError&) {
      found.clear();
    }
    ts = &found;
  }

  HalfIntegralOutcome out;
  if (!ts || ts->size() < 2) {
    HalfOrNoOptions leaf = options;
    leaf.confirm_with_oracle = false;
    out = half_or_no_leaf(g, pairs, leaf);
  } else {
    TreeLabelling lab = build_labelling(g, *ts);
    DecompositionForTangles dec = decomposition_from_labelling(g, lab, lab.order());
    DecompositionDp dp(g, dec.dtd, options);
    out = dp.solve(dec.dtd.root, pairs);
  }

  if (options.confirm_with_oracle && out.verdict == HalfIntegralOutcome::Verdict::Paths &&
      out.congestion > 1 && fits_oracle(n, k, options.exact)) {
    try {
      if (!exact_disjoint_paths(g, pairs, options.exact)) return no_integral("oracle");
    } catch (const SizeGuardError&) {
      // Too hard to confirm: the half-integral answer stands.
    }
  }
  if (out.verdict == HalfIntegralOutcome::Verdict::Paths)
    if (auto bad = verify_half_integral(g, pairs, out.paths))
      throw std::logic_error("half_or_no: output breaks the contract: " + *bad);
  return out;
}

}  // namespace dtangle
