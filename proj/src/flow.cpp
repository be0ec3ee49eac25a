#include "dtangle/flow.hpp"

#include <algorithm>
#include <unordered_map>

namespace dtangle {

namespace {

// Vertex-split residual network: v_in = 2v, v_out = 2v+1, plus a super
// source and sink. Graph edges and terminal arcs get capacity `big` so that
// every finite cut consists of vertex arcs only.
class SplitNetwork {
 public:
  SplitNetwork(const Digraph& g, const VertexSet& sources, const VertexSet& sinks,
               const VertexSet* allowed)
      : n_(g.num_vertices()), src_(2 * n_), snk_(2 * n_ + 1), adj_(2 * n_ + 2) {
    const int big = n_ + 1;
    auto ok = [&](Vertex v) { return !allowed || allowed->contains(v); };
    for (Vertex v = 0; v < n_; ++v) {
      if (!ok(v)) continue;
      add_arc(2 * v, 2 * v + 1, 1);
      for (Vertex w : g.out(v))
        if (ok(w)) add_arc(2 * v + 1, 2 * w, big);
      if (sources.contains(v)) add_arc(src_, 2 * v, big);
      if (sinks.contains(v)) add_arc(2 * v + 1, snk_, big);
    }
  }

  // One BFS augmentation; returns false when no augmenting path exists.
  bool augment() {
    std::vector<int> via(adj_.size(), -1);
    std::vector<int> queue{src_};
    via[src_] = -2;
    for (std::size_t h = 0; h < queue.size() && via[snk_] == -1; ++h) {
      int x = queue[h];
      for (int a : adj_[x]) {
        int y = to_[a];
        if (cap_[a] > 0 && via[y] == -1) {
          via[y] = a;
          queue.push_back(y);
        }
      }
    }
    if (via[snk_] == -1) return false;
    for (int y = snk_; y != src_; y = to_[via[y] ^ 1]) {
      cap_[via[y]] -= 1;
      cap_[via[y] ^ 1] += 1;
    }
    return true;
  }

  // Nodes from which the sink is reachable in the residual network.
  std::vector<bool> reaches_sink() const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<int> queue{snk_};
    seen[snk_] = true;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      int y = queue[h];
      // Arc x->y with residual capacity appears as the reverse of y->x.
      for (int a : adj_[y]) {
        int x = to_[a];
        if (!seen[x] && cap_[a ^ 1] > 0) {
          seen[x] = true;
          queue.push_back(x);
        }
      }
    }
    return seen;
  }

  std::vector<Path> paths() {
    std::vector<Path> out;
    for (int a : adj_[src_]) {
      if (a % 2 != 0 || flow_on(a) <= 0) continue;
      Path p;
      int x = to_[a];
      while (x != snk_) {
        Vertex v = x / 2;
        p.push_back(v);
        int next = -1;
        for (int b : adj_[2 * v + 1])
          if (b % 2 == 0 && flow_on(b) > 0) {
            next = b;
            break;
          }
        consume(next);
        x = to_[next];
      }
      out.push_back(std::move(p));
    }
    return out;
  }

 private:
  void add_arc(int x, int y, int c) {
    adj_[x].push_back(static_cast<int>(to_.size()));
    to_.push_back(y);
    cap_.push_back(c);
    orig_.push_back(c);
    adj_[y].push_back(static_cast<int>(to_.size()));
    to_.push_back(x);
    cap_.push_back(0);
    orig_.push_back(0);
  }
  int flow_on(int a) const { return orig_[a] - cap_[a]; }
  void consume(int a) { cap_[a] += 1; }

  int n_, src_, snk_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> to_, cap_, orig_;
};

}  // namespace

VertexFlow vertex_disjoint_paths(const Digraph& g, const VertexSet& sources,
                                 const VertexSet& sinks, int limit,
                                 const VertexSet* allowed) {
  SplitNetwork net(g, sources, sinks, allowed);
  VertexFlow r;
  while (r.value < limit && net.augment()) ++r.value;
  r.saturated = r.value >= limit;
  if (!r.saturated && !allowed) {
    const int n = g.num_vertices();
    auto reach = net.reaches_sink();
    r.cut.out = VertexSet(n);
    r.cut.in = VertexSet(n);
    for (Vertex v = 0; v < n; ++v) {
      bool in_node = reach[2 * v], out_node = reach[2 * v + 1];
      if (in_node) {
        r.cut.out.insert(v);
      } else if (out_node) {
        r.cut.out.insert(v);
        r.cut.in.insert(v);
      } else {
        r.cut.in.insert(v);
      }
    }
  }
  r.paths = net.paths();
  return r;
}

std::optional<DirectedSeparation> min_separation(const Digraph& g,
                                                 const VertexSet& s,
                                                 const VertexSet& t, int bound,
                                                 int* flow_value) {
  VertexFlow f = vertex_disjoint_paths(g, s, t, bound);
  if (flow_value) *flow_value = f.value;
  if (f.saturated) return std::nullopt;
  return f.cut;
}

Path shortcut(const Path& walk) {
  std::unordered_map<Vertex, std::size_t> last;
  for (std::size_t i = 0; i < walk.size(); ++i) last[walk[i]] = i;
  Path out;
  for (std::size_t i = 0; i < walk.size(); i = last[walk[i]] + 1) out.push_back(walk[i]);
  return out;
}

int congestion(const std::vector<Path>& paths) {
  std::unordered_map<Vertex, int> count;
  int best = 0;
  for (const auto& p : paths)
    for (Vertex v : p) best = std::max(best, ++count[v]);
  return best;
}

}  // namespace dtangle
