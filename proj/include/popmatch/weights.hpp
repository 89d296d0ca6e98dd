#pragma once

#include <vector>

#include "popmatch/graph.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/matching.hpp"

namespace popmatch {

// Integer edge weights indexed by instance edge id.
struct EdgeWeights {
  std::vector<long long> w;

  long long of_matching(const Instance& inst, const Matching& m) const;
  long long operator[](int edge_id) const { return w[edge_id]; }
};

// One-sided strict weights relative to matching m (which must be
// left-perfect): w(a,h) = 2 if a prefers h to its partner, 1 if h is the
// partner, 0 otherwise. Throws NotLeftPerfect / BadParameters (wrong variant).
EdgeWeights weight_ha(const Instance& inst, const Matching& m);

// One-sided weights with ties: as weight_ha, but 1 whenever h is tied with
// the partner (the partner itself included).
EdgeWeights weight_hat(const Instance& inst, const Matching& m);

enum class VoteSign : signed char { Minus = -1, Zero = 0, Plus = 1 };

// Two-sided per-endpoint edge labels relative to matching m.
//
// For edge e = (u, v): alpha is u's vote (+ if u is unmatched or prefers v to
// its partner, 0 if e is matched, - otherwise); beta is v's vote, symmetric.
// phi/psi are the shifted counterparts used by the weight function:
// phi = 2 if u is matched and prefers v, 1 if e is matched or u is unmatched,
// 0 otherwise; w = phi + psi. The two scales differ at unmatched endpoints
// (vote + but shifted value 1), so both are kept.
struct SMIEdgeLabels {
  std::vector<VoteSign> alpha, beta;   // by edge id
  std::vector<signed char> phi, psi;  // {0,1,2}
  EdgeWeights w;                      // phi + psi, in {0,..,4} off-matching, 2 on it
};

SMIEdgeLabels labels_smi(const Instance& inst, const Matching& m);

// The subgraph of edges with (alpha, beta) != (-,-); source_id maps back to
// instance edge ids.
Graph g_m_plus(const Instance& inst, const SMIEdgeLabels& labels);

}  // namespace popmatch
