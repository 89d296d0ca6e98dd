#include "popmatch/graph.hpp"

#include <set>

namespace popmatch {

Graph Graph::from_edges(int n_left, int n_right, std::vector<Edge> edges,
                        std::vector<int> source_id) {
  Graph g;
  g.n_left = n_left;
  g.n_right = n_right;
  g.edges = std::move(edges);
  g.source_id = std::move(source_id);
  if (!g.source_id.empty() && g.source_id.size() != g.edges.size())
    throw InternalError("graph: source_id length mismatch");
  g.adj_left.assign(n_left, {});
  g.adj_right.assign(n_right, {});
  std::set<Edge> seen;
  for (int id = 0; id < int(g.edges.size()); ++id) {
    const Edge& e = g.edges[id];
    if (e.left < 0 || e.left >= n_left || e.right < 0 || e.right >= n_right)
      throw InternalError("graph: edge endpoint out of range");
    if (!seen.insert(e).second) throw InternalError("graph: duplicate edge");
    g.adj_left[e.left].push_back(id);
    g.adj_right[e.right].push_back(id);
  }
  return g;
}

int Graph::edge_id(int left, int right) const {
  for (int id : adj_left[left])
    if (edges[id].right == right) return id;
  return -1;
}

}  // namespace popmatch
