#pragma once

#include <array>
#include <vector>

#include "popmatch/graph.hpp"
#include "popmatch/matching.hpp"
#include "popmatch/types.hpp"

namespace popmatch {

// Maximum-cardinality matching by augmenting paths, deterministic: left
// vertices and adjacency are scanned in index order.
Matching maximum_matching(const Graph& g);

// Same result size, different tie-breaking: left vertices processed in the
// given order (a permutation of [0, n_left)). Used to probe invariance of
// derived structures under the choice of maximum matching.
Matching maximum_matching_ordered(const Graph& g, const std::vector<int>& left_order);

// Minimum vertex cover from a maximum matching (alternating reachability from
// the unmatched left vertices; cover = unreached left + reached right).
// |cover| == |m| is asserted. Throws NotMaximum.
std::vector<VertexId> konig_cover(const Graph& g, const Matching& m);

// Dulmage–Mendelsohn style vertex labels w.r.t. a maximum matching:
//   Even  - reachable by an even-length alternating path from some unmatched vertex
//   Odd   - reachable by an odd-length alternating path
//   Unreachable - neither
// Labels are invariant under the choice of maximum matching. Throws NotMaximum.
enum class DMLabel { Even, Odd, Unreachable };

struct DMLabels {
  std::vector<DMLabel> left, right;

  DMLabel of(VertexId v) const { return v.side == Side::Left ? left[v.index] : right[v.index]; }
  friend bool operator==(const DMLabels& a, const DMLabels& b) {
    return a.left == b.left && a.right == b.right;
  }
};

DMLabels dm_labels(const Graph& g, const Matching& m);

enum class EdgeKind { Matched, Unmatched };

inline EdgeKind other(EdgeKind k) {
  return k == EdgeKind::Matched ? EdgeKind::Unmatched : EdgeKind::Matched;
}

// Alternating-walk reachability: BFS over (vertex, kind-of-last-edge) states.
// Start vertices are reached at length 0; the first step must use an edge of
// `first_edge` kind and subsequent edges alternate. Walks may revisit a
// vertex at the other parity in general; with a single-side start set and a
// fixed first kind each vertex occurs at one parity only, so reconstructed
// walks are vertex-simple paths.
class AltReach {
 public:
  AltReach(int n_left, int n_right);

  bool reached(VertexId v, EdgeKind last) const;
  bool reached_any(VertexId v) const;  // any parity, or start
  bool is_start(VertexId v) const;
  std::vector<VertexId> all_reached() const;  // starts included; left side first

  // The alternating walk from some start vertex to (v, last); edges in walk
  // order. Requires reached(v, last).
  std::vector<Edge> walk_to(VertexId v, EdgeKind last) const;

 private:
  friend AltReach alternating_reachable(const Graph& g, const Matching& m,
                                        const std::vector<VertexId>& start, EdgeKind first_edge);

  static int kind_index(EdgeKind k) { return k == EdgeKind::Matched ? 0 : 1; }
  struct Parent {
    int vertex = -1;          // previous vertex, on the other side
    signed char last = -1;    // previous state's last-edge kind; -1 = start state
  };

  int n_left_, n_right_;
  std::vector<std::array<char, 2>> seen_left_, seen_right_;
  std::vector<std::array<Parent, 2>> par_left_, par_right_;
  std::vector<char> start_left_, start_right_;
};

AltReach alternating_reachable(const Graph& g, const Matching& m,
                               const std::vector<VertexId>& start, EdgeKind first_edge);

// Flip a single alternating path or cycle: result = (m \ alt) + (alt \ m).
// `alt` must form one vertex-simple path or cycle whose edges alternate
// w.r.t. m, and a path must absorb the matched edges of its endpoints (else
// the flip would double-match them). Throws NotAlternating, WouldDoubleMatch.
Matching symmetric_difference(const Matching& m, const std::vector<Edge>& alt);

}  // namespace popmatch
