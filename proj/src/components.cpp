#include "dtangle/components.hpp"

#include <algorithm>
#include <numeric>

namespace dtangle {

// Iterative Tarjan; walls reach ~10^5 vertices so recursion is avoided.
std::vector<VertexSet> strong_components(const Digraph& g,
                                         const VertexSet* allowed) {
  const int n = g.num_vertices();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::size_t>> call;
  std::vector<VertexSet> comps;
  int counter = 0;
  auto ok = [&](Vertex v) { return !allowed || allowed->contains(v); };

  for (Vertex root = 0; root < n; ++root) {
    if (!ok(root) || index[root] != -1) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto& nbrs = g.out(v);
      if (pos < nbrs.size()) {
        Vertex w = nbrs[pos++];
        if (!ok(w)) continue;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      Vertex done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        VertexSet c(n);
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.insert(w);
        } while (w != done);
        comps.push_back(std::move(c));
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const VertexSet& a, const VertexSet& b) { return a.first() < b.first(); });
  return comps;
}

ComponentDag::ComponentDag(const Digraph& g, const VertexSet& x) {
  const int n = g.num_vertices();
  VertexSet allowed = g.all() - x;
  components_ = strong_components(g, &allowed);
  const int l = static_cast<int>(components_.size());
  comp_of_.assign(n, -1);
  for (int i = 0; i < l; ++i)
    components_[i].for_each([&](Vertex v) { comp_of_[v] = i; });
  out_.assign(l, {});
  in_.assign(l, {});
  for (int i = 0; i < l; ++i) {
    components_[i].for_each([&](Vertex v) {
      for (Vertex w : g.out(v)) {
        int j = comp_of_[w];
        if (j >= 0 && j != i) out_[i].push_back(j);
      }
    });
    std::sort(out_[i].begin(), out_[i].end());
    out_[i].erase(std::unique(out_[i].begin(), out_[i].end()), out_[i].end());
    for (int j : out_[i]) in_[j].push_back(i);
  }
  // Heights by memoised DFS over the dag (depth is bounded by l; done
  // iteratively in reverse topological order via Kahn on out-degrees).
  height_.assign(l, 0);
  std::vector<int> outdeg(l);
  std::vector<int> queue;
  for (int i = 0; i < l; ++i) {
    outdeg[i] = static_cast<int>(out_[i].size());
    if (outdeg[i] == 0) queue.push_back(i);
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int c = queue[h];
    for (int p : in_[c]) {
      height_[p] = std::max(height_[p], height_[c] + 1);
      if (--outdeg[p] == 0) queue.push_back(p);
    }
  }
  topo_.resize(l);
  std::iota(topo_.begin(), topo_.end(), 0);
  std::stable_sort(topo_.begin(), topo_.end(),
                   [&](int a, int b) { return height_[a] < height_[b]; });
  topo_pos_.assign(l, 0);
  for (int i = 0; i < l; ++i) topo_pos_[topo_[i]] = i;
}

bool ComponentDag::is_downwards_closed(const std::vector<bool>& members) const {
  for (int i = 0; i < size(); ++i)
    if (members[i])
      for (int j : out_[i])
        if (!members[j]) return false;
  return true;
}

bool ComponentDag::is_upwards_closed(const std::vector<bool>& members) const {
  for (int i = 0; i < size(); ++i)
    if (members[i])
      for (int j : in_[i])
        if (!members[j]) return false;
  return true;
}

bool ComponentDag::lex_less(const std::vector<bool>& a,
                            const std::vector<bool>& b) const {
  std::size_t pa = 0, pb = 0;
  const std::size_t l = topo_.size();
  while (true) {
    while (pa < l && !a[topo_[pa]]) ++pa;
    while (pb < l && !b[topo_[pb]]) ++pb;
    if (pa == l && pb == l) return false;
    if (pa != pb) return pa < pb;
    ++pa;
    ++pb;
  }
}

VertexSet ComponentDag::vertices_of(const std::vector<bool>& members) const {
  VertexSet s(comp_of_.size());
  for (int i = 0; i < size(); ++i)
    if (members[i]) s |= components_[i];
  return s;
}

}  // namespace dtangle
