#pragma once

// Shared fixture texts and slow, independent reference implementations used
// to pin down expected values. These deliberately use different algorithms
// from the library (bitmask DP, subset scans, matching enumeration) so the
// two sides can cross-validate each other.

#include <algorithm>
#include <string>
#include <vector>

#include "popmatch/graph.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/matching.hpp"

namespace support {

inline const char* kI1 = R"(problem: ha
left: a1 a2
right: h1 h2
pref a1: h1 > h2
pref a2: h1 > h2
)";

inline const char* kI2 = R"(problem: ha
left: a1 a2 a3
right: h1 h2 h3
pref a1: h1 > h2 > h3
pref a2: h1 > h2 > h3
pref a3: h1 > h2 > h3
)";

inline const char* kI3 = R"(problem: hat
left: a1 a2
right: h1 h2
pref a1: (h1 h2)
pref a2: h1 > h2
)";

inline const char* kI4 = R"(problem: smi
left: u1 u2
right: v1 v2
pref u1: v1 > v2
pref u2: v1 > v2
pref v1: u1 > u2
pref v2: u1 > u2
)";

inline popmatch::Instance mk(const std::string& text) { return popmatch::parse_instance(text); }

inline popmatch::Instance aug(const std::string& text) {
  return popmatch::add_last_resorts(popmatch::parse_instance(text));
}

inline popmatch::Matching mk_matching(int nl, int nr,
                                      const std::vector<std::pair<int, int>>& pairs) {
  popmatch::Matching m(nl, nr);
  for (auto [l, r] : pairs) m.add(l, r);
  return m;
}

// Number of matchings by bitmask DP over left vertices (counts the empty
// matching when left_perfect is false). Requires n_right <= 20.
inline long long count_matchings(const popmatch::Graph& g, bool left_perfect) {
  std::vector<long long> dp(std::size_t(1) << g.n_right, 0);
  dp[0] = 1;
  for (int a = 0; a < g.n_left; ++a) {
    std::vector<long long> next(dp.size(), 0);
    for (std::size_t mask = 0; mask < dp.size(); ++mask) {
      if (!dp[mask]) continue;
      if (!left_perfect) next[mask] += dp[mask];
      for (int id : g.adj_left[a]) {
        int h = g.edges[id].right;
        if (!(mask >> h & 1)) next[mask | (std::size_t(1) << h)] += dp[mask];
      }
    }
    dp.swap(next);
  }
  long long total = 0;
  for (long long c : dp) total += c;
  return total;
}

// All matchings of g, by straightforward recursion (small graphs only).
inline std::vector<popmatch::Matching> all_matchings(const popmatch::Graph& g) {
  std::vector<popmatch::Matching> out;
  popmatch::Matching cur(g.n_left, g.n_right);
  std::vector<char> used(g.n_right, 0);
  auto rec = [&](auto&& self, int a) -> void {
    if (a == g.n_left) {
      out.push_back(cur);
      return;
    }
    self(self, a + 1);
    for (int id : g.adj_left[a]) {
      int h = g.edges[id].right;
      if (used[h]) continue;
      used[h] = 1;
      cur.add(a, h);
      self(self, a + 1);
      cur.remove(a, h);
      used[h] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

inline int max_matching_size(const popmatch::Graph& g) {
  int best = 0;
  for (const auto& m : all_matchings(g)) best = std::max(best, m.size());
  return best;
}

// Even vertices are exactly those some maximum matching leaves unmatched;
// odd vertices the rest of the neighborhood of the even set.
struct BruteLabels {
  std::vector<char> left_even, left_odd, right_even, right_odd;
};

inline BruteLabels brute_labels(const popmatch::Graph& g) {
  BruteLabels out;
  out.left_even.assign(g.n_left, 0);
  out.left_odd.assign(g.n_left, 0);
  out.right_even.assign(g.n_right, 0);
  out.right_odd.assign(g.n_right, 0);
  int nu = max_matching_size(g);
  for (const auto& m : all_matchings(g)) {
    if (m.size() != nu) continue;
    for (int a = 0; a < g.n_left; ++a)
      if (!m.left_partner(a)) out.left_even[a] = 1;
    for (int h = 0; h < g.n_right; ++h)
      if (!m.right_partner(h)) out.right_even[h] = 1;
  }
  for (const popmatch::Edge& e : g.edges) {
    if (out.right_even[e.right] && !out.left_even[e.left]) out.left_odd[e.left] = 1;
    if (out.left_even[e.left] && !out.right_even[e.right]) out.right_odd[e.right] = 1;
  }
  return out;
}

// Minimum vertex cover size by subset scan (n_left + n_right <= ~20).
inline int brute_min_cover(const popmatch::Graph& g) {
  int n = g.n_left + g.n_right;
  int best = n;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    bool covers = true;
    for (const popmatch::Edge& e : g.edges) {
      if (!(mask >> e.left & 1) && !(mask >> (g.n_left + e.right) & 1)) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    best = std::min(best, int(__builtin_popcountll(mask)));
  }
  return best;
}

}  // namespace support
