#include "popmatch/oracle.hpp"

#include <climits>

namespace popmatch {

namespace {

struct Enumerator {
  const Graph& g;
  bool left_perfect;
  const std::function<bool(const Matching&)>& cb;
  Matching cur;
  std::vector<char> right_used;
  bool stopped = false;
  long long yielded = 0;

  Enumerator(const Graph& g_, bool lp, const std::function<bool(const Matching&)>& cb_)
      : g(g_), left_perfect(lp), cb(cb_), cur(g_.n_left, g_.n_right), right_used(g_.n_right, 0) {}

  void rec(int a) {
    if (stopped) return;
    if (a == g.n_left) {
      ++yielded;
      if (!cb(cur)) stopped = true;
      return;
    }
    if (!left_perfect) rec(a + 1);  // "unmatched" sorts before any partner
    for (int id : g.adj_left[a]) {
      int h = g.edges[id].right;
      if (right_used[h]) continue;
      right_used[h] = 1;
      cur.add(a, h);
      rec(a + 1);
      cur.remove(a, h);
      right_used[h] = 0;
      if (stopped) return;
    }
  }
};

}  // namespace

void enumerate_matchings(const Graph& g, bool left_perfect,
                         const std::function<bool(const Matching&)>& cb) {
  Enumerator e(g, left_perfect, cb);
  e.rec(0);
  if (left_perfect && !e.stopped && e.yielded == 0)
    throw Infeasible("no left-perfect matching exists");
}

std::vector<Matching> enumerate_matchings(const Graph& g, bool left_perfect) {
  std::vector<Matching> out;
  enumerate_matchings(g, left_perfect, [&](const Matching& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

DeltaValue delta(const Instance& inst, const Matching& m, const Matching& n) {
  if (m.n_left() != inst.n_left() || m.n_right() != inst.n_right() ||
      n.n_left() != inst.n_left() || n.n_right() != inst.n_right())
    throw BadParameters("delta: matching size mismatch");

  DeltaValue d;
  auto vote = [&d](int rank_m, int rank_n) {
    if (rank_m < rank_n) ++d.prefers_m;
    else if (rank_n < rank_m) ++d.prefers_n;
  };
  auto rank_of = [](int r) { return r == -1 ? INT_MAX : r; };

  for (int a = 0; a < inst.n_left(); ++a) {
    auto pm = m.left_partner(a), pn = n.left_partner(a);
    vote(pm ? rank_of(inst.rank_left(a, *pm)) : INT_MAX,
         pn ? rank_of(inst.rank_left(a, *pn)) : INT_MAX);
  }
  if (inst.variant() == Variant::SMI) {
    for (int h = 0; h < inst.n_right(); ++h) {
      auto pm = m.right_partner(h), pn = n.right_partner(h);
      vote(pm ? rank_of(inst.rank_right(h, *pm)) : INT_MAX,
           pn ? rank_of(inst.rank_right(h, *pn)) : INT_MAX);
    }
  }
  d.value = d.prefers_m - d.prefers_n;
  return d;
}

BruteForceVerdict is_popular_bruteforce(const Instance& inst, const Matching& m,
                                        int guard_edges) {
  const bool one_sided = inst.variant() != Variant::SMI;
  if (one_sided && !inst.augmented())
    throw BadParameters("is_popular_bruteforce: one-sided instance must be augmented");
  if (one_sided && !is_left_perfect(m))
    throw NotLeftPerfect("is_popular_bruteforce: one-sided matchings are left-perfect");
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("is_popular_bruteforce: matching uses a non-edge");

  Graph g = inst.graph();
  if (int(g.edges.size()) > guard_edges)
    throw TooLarge("brute-force guard: " + std::to_string(g.edges.size()) + " edges > " +
                   std::to_string(guard_edges));

  BruteForceVerdict verdict;
  int worst_margin = 0;
  enumerate_matchings(g, one_sided, [&](const Matching& rival) {
    ++verdict.rivals_checked;
    // Literal definition; the subtraction equals 2 * delta(m, rival).value.
    int lhs = delta(inst, m, rival).value - delta(inst, rival, m).value;
    if (lhs < 0) {
      verdict.popular = false;
      int margin = delta(inst, rival, m).value;
      if (margin > worst_margin) {
        worst_margin = margin;
        verdict.rival = rival;
        verdict.margin = margin;
      }
    }
    return true;
  });
  return verdict;
}

long long max_weight_bruteforce(const Graph& g, const EdgeWeights& w, bool left_perfect,
                                int guard_edges) {
  if (w.w.size() != g.edges.size()) throw BadParameters("max_weight_bruteforce: weight size");
  if (int(g.edges.size()) > guard_edges)
    throw TooLarge("brute-force guard: " + std::to_string(g.edges.size()) + " edges > " +
                   std::to_string(guard_edges));
  long long best = LLONG_MIN;
  enumerate_matchings(g, left_perfect, [&](const Matching& m) {
    long long total = 0;
    for (int a = 0; a < g.n_left; ++a) {
      auto p = m.left_partner(a);
      if (p) total += w[g.edge_id(a, *p)];
    }
    if (total > best) best = total;
    return true;
  });
  return best;
}

}  // namespace popmatch
