#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "popmatch/graph.hpp"
#include "popmatch/matching.hpp"
#include "popmatch/structure.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

// Sign regime of a dual vector.
//   Free        - covers max-weight matching over all matchings: y >= 0 everywhere.
//   LeftPerfect - covers max-weight left-perfect matching: left rows are
//                 equalities, so left values are sign-free; y >= 0 on rights.
enum class Regime { Free, LeftPerfect };

inline const char* to_string(Regime r) {
  return r == Regime::Free ? "free" : "left_perfect";
}

struct DualVector {
  Regime regime = Regime::Free;
  std::vector<long long> left, right;

  long long objective() const;
  long long of(VertexId v) const { return v.side == Side::Left ? left[v.index] : right[v.index]; }
};

// First failed check, empty when ok.
struct CheckReport {
  bool ok = true;
  std::string first_violation;
};

// y(u) + y(v) >= w(e) on every edge, plus the regime sign constraints.
CheckReport dual_feasible(const Graph& g, const EdgeWeights& w, const DualVector& y);

// Complementary slackness for the pair (m, y): every matched edge is tight,
// every right vertex with positive y is matched, and in the Free regime the
// same for left vertices.
CheckReport check_cs(const Graph& g, const EdgeWeights& w, const Matching& m,
                     const DualVector& y);

enum class SolveMode { Free, LeftPerfect };

struct SolveResult {
  Matching matching;
  DualVector dual;
  long long value = 0;  // = dual.objective(), strong duality asserted
};

// Maximum-weight matching (left-perfect if requested) with an integral
// optimal dual of the corresponding regime. Hungarian method on a zero-padded
// square matrix; potentials are normalized so the Free dual is nonnegative
// everywhere (LeftPerfect mode shifts the left potentials by the weight
// offset that enforces left-perfection). Ties break toward lower indices.
// Requires integer weights >= 0 aligned with g.edges. Throws Infeasible when
// left-perfection is requested but impossible, BadParameters on negative
// weights.
SolveResult max_weight_matching(const Graph& g, const EdgeWeights& w, SolveMode mode);

// ---------------------------------------------------------------------------
// Forward direction: structural partition -> explicit dual certificate.

// Partition of the left side under the HA characterization: every partner is
// f(a) or s(a); in_a_s marks the s-partnered lefts.
struct StructuralPartitionHA {
  FirstSecondHA fs;
  std::vector<char> in_a_s;
};

// Throws StructuralPreconditionViolated if m violates the characterization
// (some partner outside {f(a), s(a)} or some f-image right unmatched).
StructuralPartitionHA make_partition_ha(const Instance& inst, const Matching& m);

// y = 0 on f-partnered lefts, 1 on s-partnered lefts, 1 on f-image rights,
// 0 on other rights. Feasibility, integrality and objective == n_left are
// asserted (objective uses |image(f)| = |f-partnered lefts|).
DualVector build_dual_ha(const Instance& inst, const Matching& m,
                         const StructuralPartitionHA& part);

// Partition under the HAT characterization, carrying the first-choice graph
// labels: partner in f(a) (A_f) or in s(a) \ f(a) (A_s); the matched
// first-choice edges m_f form a maximum matching of g_f.
struct StructuralPartitionHAT {
  FirstSecondHAT fs;
  std::vector<char> in_a_s;
};

StructuralPartitionHAT make_partition_hat(const Instance& inst, const Matching& m);

// y(a) = 0 if a is Unreachable in g_f or (Even and f-partnered); 1 if Odd or
// (Even and s-partnered). y(h) = 0 if Even, 1 if Odd or Unreachable.
// Feasibility and objective == n_left asserted.
DualVector build_dual_hat(const Instance& inst, const Matching& m,
                          const StructuralPartitionHAT& part);

// Vertex sets of the two-sided certificate: for each (+,+) edge of the
// reduced graph, the vertices reachable from its endpoints by alternating
// paths starting with a matched edge, split by side and by which endpoint.
struct SMIPathPartition {
  std::vector<char> u_even, u_odd;  // left vertices: y = 2 / y = 0
  std::vector<char> v_even, v_odd;  // right vertices: y = 2 / y = 0
  std::vector<Edge> plus_plus;      // the (+,+) edges processed
};

// y = 2 on even-side vertices, 0 on odd-side, 1 on matched vertices off the
// paths, 0 on unmatched. Requires m to satisfy the structural
// characterization; disjointness of the sets, feasibility and
// objective == 2|m| are asserted. Throws StructuralPreconditionViolated.
std::pair<SMIPathPartition, DualVector> build_dual_smi(const Instance& inst, const Matching& m,
                                                       const SMIEdgeLabels& labels,
                                                       const Graph& gplus);

// ---------------------------------------------------------------------------
// Reverse direction: optimal dual -> structural facts.

struct DeriveReportHA {
  bool y_is_01 = false;        // every value in {0,1}
  bool zero_lefts_take_f = false;
  bool one_lefts_take_f_or_s = false;
  bool f_image_matched = false;
  std::string detail;          // first failure, empty when all pass

  bool all() const { return y_is_01 && zero_lefts_take_f && one_lefts_take_f_or_s && f_image_matched; }
};

struct DerivedPartitionHA {
  std::vector<int> a0, a1;  // lefts with y = 0 / y = 1
  std::vector<int> h1;      // rights with y = 1
};

// Given an optimal pair (m, y) for the left-perfect LP under weight_ha(m)
// (validated via dual_feasible + check_cs; throws
// OptimalityPreconditionViolated otherwise), derive the structural facts the
// certificate implies and report each one.
std::pair<DerivedPartitionHA, DeriveReportHA> derive_structure_ha(const Instance& inst,
                                                                  const Matching& m,
                                                                  const DualVector& y);

struct DeriveReportHAT {
  bool y_is_01 = false;
  bool zero_lefts_take_f = false;      // y(a)=0 => partner in f(a)
  bool one_lefts_take_f_or_s = false;  // y(a)=1 => partner in f(a) or s(a)
  bool cover_of_g_f = false;           // A_1' + H_1 covers every first-choice edge
  bool m_f_count_matches_cover = false;  // |m_f| == |A_1'| + |H_1|  (=> m_f maximum)
  std::string detail;

  bool all() const {
    return y_is_01 && zero_lefts_take_f && one_lefts_take_f_or_s && cover_of_g_f &&
           m_f_count_matches_cover;
  }
};

struct DerivedPartitionHAT {
  std::vector<int> a0, a1;
  std::vector<int> a1_prime;  // a in a1 whose f(a) contains a zero-valued right
  std::vector<int> h1;
};

std::pair<DerivedPartitionHAT, DeriveReportHAT> derive_structure_hat(const Instance& inst,
                                                                     const Matching& m,
                                                                     const DualVector& y);

// Certificate JSON: {"regime","y","objective","primal_value","cs_ok"}.
nlohmann::json certificate_json(const Instance& inst, const Matching& m, const EdgeWeights& w,
                                const DualVector& y);

// Variant dispatch over the three structural constructions.  Throws
// StructuralPreconditionViolated when m is not popular.
DualVector build_dual(const Instance& inst, const Matching& m);

}  // namespace popmatch
