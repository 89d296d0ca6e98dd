#include "popmatch/matching_core.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

namespace popmatch {

Matching maximum_matching_ordered(const Graph& g, const std::vector<int>& left_order) {
  {
    std::vector<char> seen(g.n_left, 0);
    for (int a : left_order) {
      if (a < 0 || a >= g.n_left || seen[a]) throw BadParameters("left_order is not a permutation");
      seen[a] = 1;
    }
    if (int(left_order.size()) != g.n_left)
      throw BadParameters("left_order is not a permutation");
  }

  std::vector<int> match_l(g.n_left, -1), match_r(g.n_right, -1);
  std::vector<char> used(g.n_right, 0);
  std::function<bool(int)> augment = [&](int a) -> bool {
    for (int id : g.adj_left[a]) {
      int h = g.edges[id].right;
      if (used[h]) continue;
      used[h] = 1;
      if (match_r[h] == -1 || augment(match_r[h])) {
        match_l[a] = h;
        match_r[h] = a;
        return true;
      }
    }
    return false;
  };
  for (int a : left_order) {
    std::fill(used.begin(), used.end(), 0);
    augment(a);
  }

  Matching m(g.n_left, g.n_right);
  for (int a = 0; a < g.n_left; ++a)
    if (match_l[a] != -1) m.add(a, match_l[a]);
  return m;
}

Matching maximum_matching(const Graph& g) {
  std::vector<int> order(g.n_left);
  std::iota(order.begin(), order.end(), 0);
  return maximum_matching_ordered(g, order);
}

// ---------------------------------------------------------------------------

AltReach::AltReach(int n_left, int n_right)
    : n_left_(n_left),
      n_right_(n_right),
      seen_left_(n_left, {0, 0}),
      seen_right_(n_right, {0, 0}),
      par_left_(n_left),
      par_right_(n_right),
      start_left_(n_left, 0),
      start_right_(n_right, 0) {}

bool AltReach::reached(VertexId v, EdgeKind last) const {
  const auto& seen = v.side == Side::Left ? seen_left_ : seen_right_;
  return seen[v.index][kind_index(last)] != 0;
}

bool AltReach::is_start(VertexId v) const {
  return (v.side == Side::Left ? start_left_ : start_right_)[v.index] != 0;
}

bool AltReach::reached_any(VertexId v) const {
  return is_start(v) || reached(v, EdgeKind::Matched) || reached(v, EdgeKind::Unmatched);
}

std::vector<VertexId> AltReach::all_reached() const {
  std::vector<VertexId> out;
  for (int a = 0; a < n_left_; ++a)
    if (reached_any(left_vertex(a))) out.push_back(left_vertex(a));
  for (int h = 0; h < n_right_; ++h)
    if (reached_any(right_vertex(h))) out.push_back(right_vertex(h));
  return out;
}

std::vector<Edge> AltReach::walk_to(VertexId v, EdgeKind last) const {
  if (!reached(v, last)) throw BadParameters("walk_to: state not reached");
  std::vector<Edge> walk;
  Side side = v.side;
  int vertex = v.index;
  signed char k = (signed char)kind_index(last);
  while (k != -1) {
    const Parent& p = (side == Side::Left ? par_left_ : par_right_)[vertex][k];
    Edge e = side == Side::Left ? Edge{vertex, p.vertex} : Edge{p.vertex, vertex};
    walk.push_back(e);
    side = side == Side::Left ? Side::Right : Side::Left;
    vertex = p.vertex;
    k = p.last;
  }
  std::reverse(walk.begin(), walk.end());
  return walk;
}

AltReach alternating_reachable(const Graph& g, const Matching& m,
                               const std::vector<VertexId>& start, EdgeKind first_edge) {
  if (m.n_left() != g.n_left || m.n_right() != g.n_right)
    throw BadParameters("alternating_reachable: matching size mismatch");
  AltReach r(g.n_left, g.n_right);

  // State = (vertex, kind of last edge); start states expand with first_edge.
  struct Item {
    Side side;
    int vertex;
    signed char last;  // -1 start
  };
  std::deque<Item> queue;
  std::vector<VertexId> starts = start;
  std::sort(starts.begin(), starts.end());
  for (VertexId v : starts) {
    if (v.index < 0 || v.index >= (v.side == Side::Left ? g.n_left : g.n_right))
      throw BadParameters("alternating_reachable: start vertex out of range");
    auto& flag = (v.side == Side::Left ? r.start_left_ : r.start_right_)[v.index];
    if (flag) continue;
    flag = 1;
    queue.push_back(Item{v.side, v.index, -1});
  }

  auto matched_edge = [&](const Edge& e) { return m.contains(e.left, e.right); };

  while (!queue.empty()) {
    Item it = queue.front();
    queue.pop_front();
    EdgeKind need = it.last == -1 ? first_edge
                                  : other(it.last == 0 ? EdgeKind::Matched : EdgeKind::Unmatched);
    const auto& adj = it.side == Side::Left ? g.adj_left[it.vertex] : g.adj_right[it.vertex];
    for (int id : adj) {
      const Edge& e = g.edges[id];
      bool em = matched_edge(e);
      if ((need == EdgeKind::Matched) != em) continue;
      Side nside = it.side == Side::Left ? Side::Right : Side::Left;
      int nvertex = it.side == Side::Left ? e.right : e.left;
      auto& seen = (nside == Side::Left ? r.seen_left_ : r.seen_right_)[nvertex];
      int ki = AltReach::kind_index(need);
      if (seen[ki]) continue;
      seen[ki] = 1;
      (nside == Side::Left ? r.par_left_ : r.par_right_)[nvertex][ki] =
          AltReach::Parent{it.vertex, it.last};
      queue.push_back(Item{nside, nvertex, (signed char)ki});
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Alternating reachability from the unmatched left vertices; the basis of
// both the cover construction and the left->right half of the labels.
AltReach sweep_from_unmatched(const Graph& g, const Matching& m, Side side) {
  std::vector<VertexId> starts;
  if (side == Side::Left) {
    for (int a = 0; a < g.n_left; ++a)
      if (!m.left_partner(a)) starts.push_back(left_vertex(a));
  } else {
    for (int h = 0; h < g.n_right; ++h)
      if (!m.right_partner(h)) starts.push_back(right_vertex(h));
  }
  return alternating_reachable(g, m, starts, EdgeKind::Unmatched);
}

void require_maximum(const Graph& g, const Matching& m, const AltReach& left_sweep) {
  for (int h = 0; h < g.n_right; ++h)
    if (!m.right_partner(h) && left_sweep.reached_any(right_vertex(h)))
      throw NotMaximum("matching admits an augmenting path");
}

}  // namespace

std::vector<VertexId> konig_cover(const Graph& g, const Matching& m) {
  AltReach sweep = sweep_from_unmatched(g, m, Side::Left);
  require_maximum(g, m, sweep);

  std::vector<VertexId> cover;
  for (int a = 0; a < g.n_left; ++a)
    if (!sweep.reached_any(left_vertex(a))) cover.push_back(left_vertex(a));
  for (int h = 0; h < g.n_right; ++h)
    if (sweep.reached_any(right_vertex(h))) cover.push_back(right_vertex(h));

  if (int(cover.size()) != m.size()) throw InternalError("cover size != matching size");
  std::vector<char> in_cover_l(g.n_left, 0), in_cover_r(g.n_right, 0);
  for (VertexId v : cover) (v.side == Side::Left ? in_cover_l : in_cover_r)[v.index] = 1;
  for (const Edge& e : g.edges)
    if (!in_cover_l[e.left] && !in_cover_r[e.right]) throw InternalError("uncovered edge");
  return cover;
}

DMLabels dm_labels(const Graph& g, const Matching& m) {
  AltReach from_left = sweep_from_unmatched(g, m, Side::Left);
  require_maximum(g, m, from_left);
  AltReach from_right = sweep_from_unmatched(g, m, Side::Right);

  DMLabels out;
  out.left.assign(g.n_left, DMLabel::Unreachable);
  out.right.assign(g.n_right, DMLabel::Unreachable);
  for (int a = 0; a < g.n_left; ++a) {
    bool even = from_left.reached_any(left_vertex(a));
    bool odd = from_right.reached_any(left_vertex(a));
    if (even && odd) throw InternalError("conflicting labels at a left vertex");
    if (even) out.left[a] = DMLabel::Even;
    else if (odd) out.left[a] = DMLabel::Odd;
  }
  for (int h = 0; h < g.n_right; ++h) {
    bool odd = from_left.reached_any(right_vertex(h));
    bool even = from_right.reached_any(right_vertex(h));
    if (even && odd) throw InternalError("conflicting labels at a right vertex");
    if (even) out.right[h] = DMLabel::Even;
    else if (odd) out.right[h] = DMLabel::Odd;
  }
  return out;
}

// ---------------------------------------------------------------------------

Matching symmetric_difference(const Matching& m, const std::vector<Edge>& alt) {
  if (alt.empty()) throw NotAlternating("empty edge set");

  std::map<VertexId, std::vector<int>> incident;  // vertex -> positions in alt
  for (int i = 0; i < int(alt.size()); ++i) {
    const Edge& e = alt[i];
    for (int j = 0; j < i; ++j)
      if (alt[j] == e) throw NotAlternating("duplicate edge in flip set");
    incident[left_vertex(e.left)].push_back(i);
    incident[right_vertex(e.right)].push_back(i);
  }
  for (const auto& [v, ids] : incident)
    if (ids.size() > 2) throw NotAlternating("vertex incident to three flip edges");

  // Single component: walk from a degree-1 vertex (path) or anywhere (cycle).
  VertexId walk_start = incident.begin()->first;
  for (const auto& [v, ids] : incident)
    if (ids.size() == 1) {
      walk_start = v;
      break;
    }
  std::vector<char> visited(alt.size(), 0);
  VertexId at = walk_start;
  int steps = 0;
  int incoming = -1;
  while (true) {
    int next = -1;
    for (int i : incident[at])
      if (i != incoming && !visited[i]) {
        next = i;
        break;
      }
    if (next == -1) break;
    visited[next] = 1;
    ++steps;
    const Edge& e = alt[next];
    at = at.side == Side::Left ? right_vertex(e.right) : left_vertex(e.left);
    incoming = next;
  }
  if (steps != int(alt.size())) throw NotAlternating("flip set is not a single path or cycle");

  auto is_matched = [&](const Edge& e) { return m.contains(e.left, e.right); };
  for (const auto& [v, ids] : incident) {
    if (ids.size() == 2) {
      if (is_matched(alt[ids[0]]) == is_matched(alt[ids[1]]))
        throw NotAlternating("consecutive flip edges of equal matched status at " +
                             std::to_string(v.index));
    } else {
      // Path endpoint: flipping must not give it a second partner.
      const Edge& e = alt[ids[0]];
      if (!is_matched(e) && m.matched(v)) {
        throw WouldDoubleMatch("endpoint keeps a matched edge outside the flip set");
      }
    }
  }

  Matching out = m;
  for (const Edge& e : alt)
    if (is_matched(e)) out.remove(e.left, e.right);
  for (const Edge& e : alt)
    if (!is_matched(e)) out.add(e.left, e.right);
  return out;
}

}  // namespace popmatch
