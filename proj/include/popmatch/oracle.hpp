#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "popmatch/graph.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/matching.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

// Every matching of g (every left-perfect one if requested), in lexicographic
// order of the per-left-vertex choice sequence (left vertices ascending;
// "unmatched" sorts before any partner; partners ascending). The count equals
// the straightforward recursive count. Throws Infeasible if left_perfect is
// requested but impossible.
std::vector<Matching> enumerate_matchings(const Graph& g, bool left_perfect);

// Streaming variant; stops early when the callback returns false.
void enumerate_matchings(const Graph& g, bool left_perfect,
                         const std::function<bool(const Matching&)>& cb);

// Head-to-head vote between two matchings. One-sided variants: each left
// vertex votes by comparing its partners' tie-group ranks (synthetic last
// resorts rank via the augmented list; unmatched is worst of all). SMI: both
// sides vote. value == prefers_m - prefers_n, and delta(m, n) == -delta(n, m).
struct DeltaValue {
  int value = 0;
  int prefers_m = 0;
  int prefers_n = 0;
};

DeltaValue delta(const Instance& inst, const Matching& m, const Matching& n);

struct BruteForceVerdict {
  bool popular = true;
  std::optional<Matching> rival;  // a maximally-winning rival when unpopular
  std::optional<int> margin;      // its winning margin
  long long rivals_checked = 0;
};

// Popular iff delta(m, n).value - delta(n, m).value >= 0 for every rival n
// (rivals: all left-perfect matchings for one-sided variants, all matchings
// for SMI). The subtraction is kept literal (it equals 2 * delta(m, n).value)
// so this stays an independent statement of the definition. `guard_edges`
// bounds the enumerated graph's edge count; throws TooLarge beyond it.
BruteForceVerdict is_popular_bruteforce(const Instance& inst, const Matching& m,
                                        int guard_edges = 24);

// Maximum of w over enumerated matchings. Throws TooLarge past the guard.
long long max_weight_bruteforce(const Graph& g, const EdgeWeights& w, bool left_perfect,
                                int guard_edges = 24);

}  // namespace popmatch
