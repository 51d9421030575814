#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smtitp/rational.hpp"

namespace smtitp {

// Edge u -> v of weight w stands for 0 <= v - u + w.
struct GraphEdge {
  int u, v;
  Delta w;
  int tag;  // caller data, usually an index into a literal table
};

class ConstraintGraph {
 public:
  int add_vertex();
  void ensure_vertices(int n);
  int num_vertices() const { return nverts_; }
  int add_edge(int u, int v, const Delta& w, int tag);
  const GraphEdge& edge(int i) const { return edges_[i]; }
  size_t num_edges() const { return edges_.size(); }
  // drop edges added after the first `keep`
  void truncate(size_t keep) { edges_.resize(keep); }

  // Bellman-Ford from a virtual source; on a negative cycle fills its edges in walk order
  bool negative_cycle(std::vector<int>& cycle) const;
  // shortest distances from the virtual source; valid when there is no negative cycle
  std::vector<Delta> potentials() const;

  // all-pairs distances over edges with zero epsilon part; next[u][v] is the first edge on a shortest path
  struct AllPairs {
    std::vector<std::vector<Rational>> dist;
    std::vector<std::vector<int>> next;
    std::vector<std::vector<bool>> reach;
    std::vector<int> path(int u, int v, const ConstraintGraph& g) const;
  };
  AllPairs all_pairs() const;

  std::string dot(const std::function<std::string(int)>& vertex_name,
                  const std::function<std::string(const GraphEdge&)>& edge_color) const;

 private:
  int nverts_ = 0;
  std::vector<GraphEdge> edges_;
};

// A run of consecutive cycle edges and the summary constraint it induces.
struct PathSummary {
  int from, to;
  Delta w;
  std::vector<int> edges;
};

// Maximal runs of edges satisfying `in_run` along a closed walk. A run never continues
// through a position in `cuts` (index i means the vertex where edge i starts).
// Runs are rotated to start at the run whose first tag is smallest.
std::vector<PathSummary> maximal_runs(const ConstraintGraph& g, const std::vector<int>& walk,
                                      const std::function<bool(int)>& in_run, const std::vector<size_t>& cuts = {});

}  // namespace smtitp
