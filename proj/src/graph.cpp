#include "smtitp/graph.hpp"

#include <algorithm>
#include <sstream>

namespace smtitp {

int ConstraintGraph::add_vertex() { return nverts_++; }

void ConstraintGraph::ensure_vertices(int n) { nverts_ = std::max(nverts_, n); }

int ConstraintGraph::add_edge(int u, int v, const Delta& w, int tag) {
  ensure_vertices(std::max(u, v) + 1);
  edges_.push_back({u, v, w, tag});
  return static_cast<int>(edges_.size()) - 1;
}

bool ConstraintGraph::negative_cycle(std::vector<int>& cycle) const {
  cycle.clear();
  int n = nverts_;
  std::vector<Delta> d(n);
  std::vector<int> pred(n, -1);
  int hit = -1;
  for (int pass = 0; pass <= n; ++pass) {
    hit = -1;
    for (size_t i = 0; i < edges_.size(); ++i) {
      const GraphEdge& e = edges_[i];
      Delta cand = d[e.u] + e.w;
      if (cand < d[e.v]) {
        d[e.v] = cand;
        pred[e.v] = static_cast<int>(i);
        if (hit < 0) hit = e.v;
      }
    }
    if (hit < 0) return false;
  }
  // hit was relaxed in pass n, so walking back n steps lands on the cycle
  int x = hit;
  for (int i = 0; i < n; ++i) x = edges_[pred[x]].u;
  int y = x;
  do {
    cycle.push_back(pred[y]);
    y = edges_[pred[y]].u;
  } while (y != x);
  std::reverse(cycle.begin(), cycle.end());
  return true;
}

std::vector<Delta> ConstraintGraph::potentials() const {
  std::vector<Delta> d(nverts_);
  for (int pass = 0; pass < nverts_; ++pass) {
    bool changed = false;
    for (const GraphEdge& e : edges_) {
      Delta cand = d[e.u] + e.w;
      if (cand < d[e.v]) {
        d[e.v] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d;
}

ConstraintGraph::AllPairs ConstraintGraph::all_pairs() const {
  int n = nverts_;
  AllPairs ap;
  ap.dist.assign(n, std::vector<Rational>(n));
  ap.next.assign(n, std::vector<int>(n, -1));
  ap.reach.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < edges_.size(); ++i) {
    const GraphEdge& e = edges_[i];
    if (e.u == e.v) continue;
    if (!ap.reach[e.u][e.v] || e.w.r < ap.dist[e.u][e.v]) {
      ap.reach[e.u][e.v] = true;
      ap.dist[e.u][e.v] = e.w.r;
      ap.next[e.u][e.v] = static_cast<int>(i);
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (!ap.reach[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (!ap.reach[k][j] || i == j) continue;
        Rational c = ap.dist[i][k] + ap.dist[k][j];
        if (!ap.reach[i][j] || c < ap.dist[i][j]) {
          ap.reach[i][j] = true;
          ap.dist[i][j] = c;
          ap.next[i][j] = ap.next[i][k];
        }
      }
    }
  return ap;
}

std::vector<int> ConstraintGraph::AllPairs::path(int u, int v, const ConstraintGraph& g) const {
  std::vector<int> out;
  int x = u;
  while (x != v) {
    int e = next[x][v];
    if (e < 0) throw Error("no path in constraint graph");
    out.push_back(e);
    x = g.edge(e).v;
    if (out.size() > g.num_edges() + 1) throw Error("cyclic path reconstruction");
  }
  return out;
}

std::string ConstraintGraph::dot(const std::function<std::string(int)>& vertex_name,
                                 const std::function<std::string(const GraphEdge&)>& edge_color) const {
  std::ostringstream os;
  os << "digraph G {\n";
  for (int v = 0; v < nverts_; ++v) os << "  v" << v << " [label=\"" << vertex_name(v) << "\"];\n";
  for (const GraphEdge& e : edges_)
    os << "  v" << e.u << " -> v" << e.v << " [label=\"" << to_string(e.w) << "\", color=" << edge_color(e)
       << "];\n";
  os << "}\n";
  return os.str();
}

std::vector<PathSummary> maximal_runs(const ConstraintGraph& g, const std::vector<int>& walk,
                                      const std::function<bool(int)>& in_run, const std::vector<size_t>& cuts) {
  size_t m = walk.size();
  std::vector<PathSummary> runs;
  if (m == 0) return runs;
  auto is_cut = [&](size_t pos) { return std::find(cuts.begin(), cuts.end(), pos % m) != cuts.end(); };
  // a run may only start where the previous position is outside or a cut sits
  size_t start = m;
  for (size_t i = 0; i < m; ++i) {
    size_t prev = (i + m - 1) % m;
    if (in_run(static_cast<int>(i)) && (!in_run(static_cast<int>(prev)) || is_cut(i))) {
      start = i;
      break;
    }
  }
  if (start == m) {
    // every edge in the run set with no cut: the whole cycle is one closed run
    bool all = true;
    for (size_t i = 0; i < m; ++i) all = all && in_run(static_cast<int>(i));
    if (!all) return runs;
    PathSummary s{g.edge(walk[0]).u, g.edge(walk[0]).u, Delta(0), {}};
    for (int e : walk) {
      s.w += g.edge(e).w;
      s.edges.push_back(e);
    }
    runs.push_back(s);
    return runs;
  }
  PathSummary cur;
  bool open = false;
  for (size_t k = 0; k < m; ++k) {
    size_t i = (start + k) % m;
    bool in = in_run(static_cast<int>(i));
    if (open && (!in || is_cut(i))) {
      runs.push_back(cur);
      open = false;
    }
    if (in) {
      if (!open) {
        cur = PathSummary{g.edge(walk[i]).u, g.edge(walk[i]).u, Delta(0), {}};
        open = true;
      }
      cur.w += g.edge(walk[i]).w;
      cur.to = g.edge(walk[i]).v;
      cur.edges.push_back(walk[i]);
    }
  }
  if (open) runs.push_back(cur);
  auto first_tag = [&](const PathSummary& s) { return g.edge(s.edges.front()).tag; };
  auto best = std::min_element(runs.begin(), runs.end(),
                               [&](const PathSummary& a, const PathSummary& b) { return first_tag(a) < first_tag(b); });
  std::rotate(runs.begin(), best, runs.end());
  return runs;
}

}  // namespace smtitp
