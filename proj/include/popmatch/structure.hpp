#pragma once

#include <vector>

#include "popmatch/instance.hpp"
#include "popmatch/matching_core.hpp"

namespace popmatch {

// First/second choice structure of a one-sided strict instance (augmented):
// f(a) = a's top choice; image(f) = rights that are someone's top choice;
// s(a) = a's most preferred right outside image(f). s is always defined: the
// last resort of a has degree 1, so it is nobody's top choice (a itself
// prefers its original neighbor(s)), hence outside image(f).
struct FirstSecondHA {
  std::vector<int> f;
  std::vector<int> s;
  std::vector<char> in_f_image;  // per right vertex
};

FirstSecondHA compute_fs_ha(const Instance& inst);

// First/second choice structure with ties (augmented HAT; strict lists work
// as the degenerate case). f(a) = top tie group. g_f = the subgraph of
// first-choice edges over all vertices; labels = DM labels of g_f w.r.t. a
// maximum matching of it (label choice is matching-invariant). s(a) = the
// Even rights in a's most preferred tie group containing an Even right
// (nonempty: last resorts are isolated in g_f, hence Even).
struct FirstSecondHAT {
  std::vector<std::vector<int>> f;  // sorted by index
  std::vector<std::vector<int>> s;  // sorted by index
  Graph g_f;                        // source_id = instance edge ids
  Matching mm_f;                    // one maximum matching of g_f
  DMLabels labels;

  bool in_f(int a, int h) const;
  bool in_s(int a, int h) const;
};

FirstSecondHAT compute_fs_hat(const Instance& inst);

}  // namespace popmatch
