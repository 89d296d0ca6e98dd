#pragma once

#include <vector>

#include "popmatch/types.hpp"

namespace popmatch {

// A bipartite graph over dense vertex indices [0, n_left) x [0, n_right).
// Edge order is preserved from construction so parallel per-edge arrays
// (weights, labels) can be indexed by position. Subgraph builders record the
// originating edge id of each edge in `source_id`.
struct Graph {
  int n_left = 0;
  int n_right = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj_left;   // edge ids incident to each left vertex
  std::vector<std::vector<int>> adj_right;  // edge ids incident to each right vertex
  std::vector<int> source_id;               // empty, or per-edge id in the parent graph

  static Graph from_edges(int n_left, int n_right, std::vector<Edge> edges,
                          std::vector<int> source_id = {});

  int edge_id(int left, int right) const;  // -1 if absent
  bool has_edge(int left, int right) const { return edge_id(left, right) >= 0; }
  int degree(VertexId v) const {
    return int(v.side == Side::Left ? adj_left[v.index].size() : adj_right[v.index].size());
  }
};

}  // namespace popmatch
