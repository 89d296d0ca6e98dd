#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "popmatch/duals.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/matching.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

enum class Method { Structural, Optimization, BruteForce };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Structural: return "structural";
    case Method::Optimization: return "optimization";
    case Method::BruteForce: return "brute_force";
  }
  return "?";
}

enum class WitnessKind {
  UnmatchedFImageRight,    // HA: a first-choice-image right is unmatched
  BadPartner,              // HA/HAT: some partner outside f(a) (+ s(a))
  FirstChoiceNotMaximum,   // HAT: matched first-choice edges not maximum in g_f
  PlusPlusCycle,           // SMI: alternating cycle through a (+,+) edge
  PlusPlusPathFromUnmatched,  // SMI: alternating path, unmatched endpoint, one (+,+) edge
  TwoPlusPlusPath,         // SMI: alternating path through two (+,+) edges
};

const char* to_string(WitnessKind k);

// Disproof of popularity by the structural characterizations. `path` is a
// flippable payload for the SMI kinds (an alternating path/cycle listed in
// walk order, endpoint matched edges included) and an augmenting path of the
// first-choice graph for FirstChoiceNotMaximum.
struct StructuralWitness {
  WitnessKind kind;
  std::optional<VertexId> vertex;  // offending vertex for the first three kinds
  std::vector<Edge> path;
  std::vector<Edge> plus_edges;    // the (+,+) edges involved (SMI kinds)
};

struct DeltaValue;  // oracle.hpp

// Verdict of one method on one (instance, matching) pair, with its
// certificate: a dual for optimization-true, a witness for structural-false,
// a strictly heavier matching for optimization-false, a rival that wins the
// head-to-head vote for brute-force-false.
struct Verdict {
  bool popular = false;
  Method method = Method::Structural;
  std::optional<DualVector> dual;
  std::optional<StructuralWitness> witness;
  std::optional<Matching> rival;
  std::optional<long long> rival_weight;  // optimization-false: weight of rival under w_m
  std::optional<int> rival_margin;        // brute-force-false: votes rival wins by
};

nlohmann::json verdict_json(const Instance& inst, const Verdict& v);
nlohmann::json witness_json(const Instance& inst, const StructuralWitness& w);

// ---------------------------------------------------------------------------
// Structural checks. All require a left-perfect matching for HA/HAT
// (NotLeftPerfect) and an augmented instance.

// Popular iff every f-image right is matched and every partner is f(a) or s(a).
Verdict structural_check_ha(const Instance& inst, const Matching& m);

// Popular iff the matched first-choice edges form a maximum matching of the
// first-choice graph and every partner lies in f(a) or s(a).
Verdict structural_check_hat(const Instance& inst, const Matching& m);

// Popular iff the reduced graph has no alternating cycle through a (+,+)
// edge, no alternating path with an unmatched endpoint through a (+,+) edge,
// and no alternating path through two (+,+) edges.
Verdict structural_check_smi(const Instance& inst, const Matching& m,
                             const SMIEdgeLabels& labels, const Graph& gplus);

// Popular iff m attains the maximum weight under its own weight system
// (mode LeftPerfect for one-sided variants, value n_left; mode Free for
// two-sided, value 2|m|). True verdicts carry the solver dual, false ones the
// heavier matching.
Verdict optimization_check(const Instance& inst, const Matching& m, const EdgeWeights& w,
                           SolveMode mode);

// Flip a structural witness into a strictly better matching. The payload is
// re-validated from scratch (InvalidWitness), the flip result is checked, and
// the weight gain under the *input* matching's weights is asserted: >= 1 for
// PlusPlusPathFromUnmatched, >= 2 for PlusPlusCycle and TwoPlusPlusPath.
struct Improvement {
  Matching improved;
  long long gain = 0;
};
Improvement improve_matching_smi(const Instance& inst, const Matching& m,
                                 const StructuralWitness& witness);

// Construct a popular matching or decide none exists (exact, and certified
// against the oracle at test scale). HA: maximum matching on the f/s edge
// set, then alternating repair until every f-image right is matched. HAT:
// maximum-weight left-perfect matching on the f/s edge set scoring 1 per
// first-choice edge; popular iff feasible with score = max matching of g_f.
std::optional<Matching> find_popular_ha(const Instance& inst);
std::optional<Matching> find_popular_hat(const Instance& inst);

// Left-proposing deferred acceptance; the result is stable, hence popular.
Matching gale_shapley_smi(const Instance& inst);

// ---------------------------------------------------------------------------
// Variant dispatchers shared by the front ends.

// structural_check_{ha,hat,smi} depending on the variant (labels and reduced
// graph computed internally for SMI).
Verdict structural_check(const Instance& inst, const Matching& m);

// The candidate's own weight system: weight_ha / weight_hat / labels_smi(m).w.
EdgeWeights candidate_weights(const Instance& inst, const Matching& m);

// LeftPerfect for the one-sided variants, Free for SMI.
SolveMode candidate_mode(const Instance& inst);

// is_popular_bruteforce wrapped as a Verdict (rival and margin on rejection).
Verdict bruteforce_check(const Instance& inst, const Matching& m, int guard_edges = 24);

// find_popular_ha / find_popular_hat / gale_shapley_smi (never empty for SMI).
std::optional<Matching> find_popular(const Instance& inst);

}  // namespace popmatch
