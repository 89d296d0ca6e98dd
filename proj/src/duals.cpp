#include "popmatch/duals.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "popmatch/structure.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

long long DualVector::objective() const {
  long long s = 0;
  for (long long v : left) s += v;
  for (long long v : right) s += v;
  return s;
}

CheckReport dual_feasible(const Graph& g, const EdgeWeights& w, const DualVector& y) {
  if (int(y.left.size()) != g.n_left || int(y.right.size()) != g.n_right)
    throw BadParameters("dual vector does not match graph dimensions");
  if (w.w.size() != g.edges.size())
    throw BadParameters("weight vector does not match graph edges");

  auto fail = [](std::string msg) { return CheckReport{false, std::move(msg)}; };
  if (y.regime == Regime::Free) {
    for (int a = 0; a < g.n_left; ++a)
      if (y.left[a] < 0)
        return fail("negative left dual at index " + std::to_string(a));
  }
  for (int h = 0; h < g.n_right; ++h)
    if (y.right[h] < 0)
      return fail("negative right dual at index " + std::to_string(h));
  for (int id = 0; id < int(g.edges.size()); ++id) {
    const Edge& e = g.edges[id];
    if (y.left[e.left] + y.right[e.right] < w.w[id]) {
      std::ostringstream os;
      os << "edge (" << e.left << "," << e.right << ") undercovered: " << y.left[e.left]
         << "+" << y.right[e.right] << " < " << w.w[id];
      return fail(os.str());
    }
  }
  return CheckReport{true, ""};
}

CheckReport check_cs(const Graph& g, const EdgeWeights& w, const Matching& m,
                     const DualVector& y) {
  if (int(y.left.size()) != g.n_left || int(y.right.size()) != g.n_right)
    throw BadParameters("dual vector does not match graph dimensions");
  if (w.w.size() != g.edges.size())
    throw BadParameters("weight vector does not match graph edges");
  if (m.n_left() != g.n_left || m.n_right() != g.n_right)
    throw BadParameters("matching does not match graph dimensions");

  auto fail = [](std::string msg) { return CheckReport{false, std::move(msg)}; };
  for (const Edge& e : m.edges()) {
    int id = g.edge_id(e.left, e.right);
    if (id < 0)
      return fail("matched pair (" + std::to_string(e.left) + "," + std::to_string(e.right) +
                  ") is not a graph edge");
    if (y.left[e.left] + y.right[e.right] != w.w[id]) {
      std::ostringstream os;
      os << "matched edge (" << e.left << "," << e.right << ") not tight: " << y.left[e.left]
         << "+" << y.right[e.right] << " != " << w.w[id];
      return fail(os.str());
    }
  }
  if (y.regime == Regime::Free) {
    for (int a = 0; a < g.n_left; ++a)
      if (y.left[a] > 0 && !m.left_partner(a))
        return fail("positive dual on unmatched left index " + std::to_string(a));
  }
  for (int h = 0; h < g.n_right; ++h)
    if (y.right[h] > 0 && !m.right_partner(h))
      return fail("positive dual on unmatched right index " + std::to_string(h));
  return CheckReport{true, ""};
}

namespace {

// Exact min-cost assignment on a complete square matrix, O(n^3), with integral
// row/column potentials.  Classic successive-shortest-path formulation with
// 1-based auxiliary row/column 0.
struct Assignment {
  std::vector<int> row_of_col;          // 1-based; row assigned to each column
  std::vector<long long> u, v;          // 1-based potentials
};

Assignment hungarian_min(const std::vector<std::vector<long long>>& a) {
  const int n = int(a.size());
  const long long kInf = LLONG_MAX / 4;
  Assignment out;
  out.u.assign(n + 1, 0);
  out.v.assign(n + 1, 0);
  std::vector<int>& p = out.row_of_col;
  p.assign(n + 1, 0);
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      long long delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        long long cur = a[i0 - 1][j - 1] - out.u[i0] - out.v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          out.u[p[j]] += delta;
          out.v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  // The potentials are feasible (u[i] + v[j] <= a[i][j]) once every row has
  // been introduced, and tight on assigned pairs.  Both properties carry the
  // whole correctness argument, so verify them outright.
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (out.u[i] + out.v[j] > a[i - 1][j - 1])
        throw InternalError("assignment potentials infeasible");
  for (int j = 1; j <= n; ++j)
    if (out.u[p[j]] + out.v[j] != a[p[j] - 1][j - 1])
      throw InternalError("assigned pair not tight");
  return out;
}

}  // namespace

SolveResult max_weight_matching(const Graph& g, const EdgeWeights& w, SolveMode mode) {
  if (w.w.size() != g.edges.size())
    throw BadParameters("weight vector does not match graph edges");
  for (long long x : w.w)
    if (x < 0) throw BadParameters("negative edge weight");
  if (mode == SolveMode::LeftPerfect && g.n_left > g.n_right)
    throw Infeasible("more left vertices than right vertices");

  const Regime regime = mode == SolveMode::Free ? Regime::Free : Regime::LeftPerfect;
  const int n = std::max(g.n_left, g.n_right);
  if (n == 0) return SolveResult{Matching(0, 0), DualVector{regime, {}, {}}, 0};

  // Shift every real edge by K so that in left-perfect mode any assignment
  // covering all left vertices with real edges beats any assignment that does
  // not; K = 0 in free mode.  Missing pairs and padding act as weight-0 edges
  // that are discarded on extraction.
  long long shift = 0;
  if (mode == SolveMode::LeftPerfect) {
    shift = 1;
    for (long long x : w.w) shift += x;
  }
  std::vector<std::vector<long long>> cost(n, std::vector<long long>(n, 0));
  for (int id = 0; id < int(g.edges.size()); ++id)
    cost[g.edges[id].left][g.edges[id].right] = -(w.w[id] + shift);

  Assignment asg = hungarian_min(cost);

  // Negate back to maximization potentials, then rebase so the column minimum
  // becomes zero; with a complete nonnegative matrix this keeps feasibility
  // and makes every potential nonnegative.
  std::vector<long long> pl(n), pr(n);
  for (int i = 0; i < n; ++i) pl[i] = -asg.u[i + 1];
  for (int j = 0; j < n; ++j) pr[j] = -asg.v[j + 1];
  long long rebase = *std::min_element(pr.begin(), pr.end());
  for (auto& x : pl) x += rebase;
  for (auto& x : pr) x -= rebase;

  SolveResult res{Matching(g.n_left, g.n_right), DualVector{regime, {}, {}}, 0};
  for (int j = 1; j <= n; ++j) {
    int i = asg.row_of_col[j] - 1;
    int l = i, r = j - 1;
    if (l < g.n_left && r < g.n_right && g.has_edge(l, r)) res.matching.add(l, r);
  }
  if (mode == SolveMode::LeftPerfect) {
    if (!is_left_perfect(res.matching))
      throw Infeasible("no matching covers every left vertex");
    for (int a = 0; a < g.n_left; ++a) pl[a] -= shift;
  }
  res.dual.left.assign(pl.begin(), pl.begin() + g.n_left);
  res.dual.right.assign(pr.begin(), pr.begin() + g.n_right);
  for (const Edge& e : res.matching.edges()) res.value += w.w[g.edge_id(e.left, e.right)];

  CheckReport feas = dual_feasible(g, w, res.dual);
  if (!feas.ok) throw InternalError("solver dual infeasible: " + feas.first_violation);
  if (res.dual.objective() != res.value)
    throw InternalError("solver dual objective does not match primal value");
  CheckReport cs = check_cs(g, w, res.matching, res.dual);
  if (!cs.ok) throw InternalError("solver pair violates slackness: " + cs.first_violation);
  return res;
}

namespace {

void require_one_sided_candidate(const Instance& inst, const Matching& m) {
  if (inst.variant() == Variant::SMI)
    throw BadParameters("one-sided certificate on a two-sided instance");
  if (!inst.augmented()) throw BadParameters("instance must be augmented");
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("matching uses pairs outside the instance");
  if (!is_left_perfect(m)) throw NotLeftPerfect("candidate matching must cover every left vertex");
}

void require_built_dual_optimal(const Instance& inst, const Matching& m, const EdgeWeights& w,
                                const DualVector& y, long long target) {
  const Graph& g = inst.graph();
  CheckReport feas = dual_feasible(g, w, y);
  if (!feas.ok)
    throw StructuralPreconditionViolated("constructed dual infeasible: " + feas.first_violation);
  if (y.objective() != target)
    throw StructuralPreconditionViolated("constructed dual has objective " +
                                         std::to_string(y.objective()) + ", expected " +
                                         std::to_string(target));
  CheckReport cs = check_cs(g, w, m, y);
  if (!cs.ok)
    throw StructuralPreconditionViolated("constructed dual not slack-complementary: " +
                                         cs.first_violation);
}

}  // namespace

StructuralPartitionHA make_partition_ha(const Instance& inst, const Matching& m) {
  require_one_sided_candidate(inst, m);
  StructuralPartitionHA part{compute_fs_ha(inst), {}};
  part.in_a_s.assign(inst.n_left(), 0);
  for (int a = 0; a < inst.n_left(); ++a) {
    int h = *m.left_partner(a);
    if (h == part.fs.f[a])
      part.in_a_s[a] = 0;
    else if (h == part.fs.s[a])
      part.in_a_s[a] = 1;
    else
      throw StructuralPreconditionViolated(inst.left_name(a) +
                                           " is matched outside its first/second choices");
  }
  for (int h = 0; h < inst.n_right(); ++h)
    if (part.fs.in_f_image[h] && !m.right_partner(h))
      throw StructuralPreconditionViolated("first-choice image vertex " + inst.right_name(h) +
                                           " is unmatched");
  return part;
}

DualVector build_dual_ha(const Instance& inst, const Matching& m,
                         const StructuralPartitionHA& part) {
  DualVector y{Regime::LeftPerfect, {}, {}};
  y.left.assign(inst.n_left(), 0);
  y.right.assign(inst.n_right(), 0);
  for (int a = 0; a < inst.n_left(); ++a) y.left[a] = part.in_a_s[a] ? 1 : 0;
  for (int h = 0; h < inst.n_right(); ++h) y.right[h] = part.fs.in_f_image[h] ? 1 : 0;
  require_built_dual_optimal(inst, m, weight_ha(inst, m), y, inst.n_left());
  return y;
}

StructuralPartitionHAT make_partition_hat(const Instance& inst, const Matching& m) {
  require_one_sided_candidate(inst, m);
  StructuralPartitionHAT part{compute_fs_hat(inst), {}};
  part.in_a_s.assign(inst.n_left(), 0);
  for (int a = 0; a < inst.n_left(); ++a) {
    int h = *m.left_partner(a);
    if (part.fs.in_f(a, h))
      part.in_a_s[a] = 0;
    else if (part.fs.in_s(a, h))
      part.in_a_s[a] = 1;
    else
      throw StructuralPreconditionViolated(inst.left_name(a) +
                                           " is matched outside its first/second choices");
  }
  int first_choice_edges = 0;
  for (const Edge& e : m.edges())
    if (inst.rank_left(e.left, e.right) == 0) ++first_choice_edges;
  if (first_choice_edges != int(part.fs.mm_f.size()))
    throw StructuralPreconditionViolated(
        "matching is not maximum on the first-choice subgraph: " +
        std::to_string(first_choice_edges) + " of " + std::to_string(part.fs.mm_f.size()));
  return part;
}

DualVector build_dual_hat(const Instance& inst, const Matching& m,
                          const StructuralPartitionHAT& part) {
  DualVector y{Regime::LeftPerfect, {}, {}};
  y.left.assign(inst.n_left(), 0);
  y.right.assign(inst.n_right(), 0);
  for (int a = 0; a < inst.n_left(); ++a) {
    switch (part.fs.labels.left[a]) {
      case DMLabel::Unreachable:
        y.left[a] = 0;
        break;
      case DMLabel::Even:
        y.left[a] = part.in_a_s[a] ? 1 : 0;
        break;
      case DMLabel::Odd:
        y.left[a] = 1;
        break;
    }
  }
  for (int h = 0; h < inst.n_right(); ++h)
    y.right[h] = part.fs.labels.right[h] == DMLabel::Even ? 0 : 1;
  require_built_dual_optimal(inst, m, weight_hat(inst, m), y, inst.n_left());
  return y;
}

std::pair<SMIPathPartition, DualVector> build_dual_smi(const Instance& inst, const Matching& m,
                                                       const SMIEdgeLabels& labels,
                                                       const Graph& gplus) {
  if (inst.variant() != Variant::SMI)
    throw BadParameters("two-sided certificate on a one-sided instance");
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("matching uses pairs outside the instance");

  SMIPathPartition part;
  part.u_even.assign(inst.n_left(), 0);
  part.u_odd.assign(inst.n_left(), 0);
  part.v_even.assign(inst.n_right(), 0);
  part.v_odd.assign(inst.n_right(), 0);
  for (int id = 0; id < int(inst.edges().size()); ++id)
    if (labels.alpha[id] == VoteSign::Plus && labels.beta[id] == VoteSign::Plus)
      part.plus_plus.push_back(inst.edges()[id]);

  for (const Edge& e : part.plus_plus) {
    if (!m.left_partner(e.left) || !m.right_partner(e.right))
      throw StructuralPreconditionViolated("mutually-improving pair with an unmatched endpoint");
    // Vertices an alternating walk can reach from e.left going matched-first
    // lie on the e.left side of the path family; symmetrically for e.right.
    AltReach from_u =
        alternating_reachable(gplus, m, {left_vertex(e.left)}, EdgeKind::Matched);
    for (int a = 0; a < inst.n_left(); ++a)
      if (from_u.reached_any(left_vertex(a))) part.u_even[a] = 1;
    for (int h = 0; h < inst.n_right(); ++h)
      if (from_u.reached_any(right_vertex(h))) part.v_odd[h] = 1;
    AltReach from_v =
        alternating_reachable(gplus, m, {right_vertex(e.right)}, EdgeKind::Matched);
    for (int h = 0; h < inst.n_right(); ++h)
      if (from_v.reached_any(right_vertex(h))) part.v_even[h] = 1;
    for (int a = 0; a < inst.n_left(); ++a)
      if (from_v.reached_any(left_vertex(a))) part.u_odd[a] = 1;
  }

  for (int a = 0; a < inst.n_left(); ++a) {
    if (part.u_even[a] && part.u_odd[a])
      throw StructuralPreconditionViolated("path sides overlap at " + inst.left_name(a));
    if ((part.u_even[a] || part.u_odd[a]) && !m.left_partner(a))
      throw StructuralPreconditionViolated("path family reaches unmatched " + inst.left_name(a));
  }
  for (int h = 0; h < inst.n_right(); ++h) {
    if (part.v_even[h] && part.v_odd[h])
      throw StructuralPreconditionViolated("path sides overlap at " + inst.right_name(h));
    if ((part.v_even[h] || part.v_odd[h]) && !m.right_partner(h))
      throw StructuralPreconditionViolated("path family reaches unmatched " + inst.right_name(h));
  }

  DualVector y{Regime::Free, {}, {}};
  y.left.assign(inst.n_left(), 0);
  y.right.assign(inst.n_right(), 0);
  for (int a = 0; a < inst.n_left(); ++a) {
    if (part.u_even[a])
      y.left[a] = 2;
    else if (part.u_odd[a])
      y.left[a] = 0;
    else
      y.left[a] = m.left_partner(a) ? 1 : 0;
  }
  for (int h = 0; h < inst.n_right(); ++h) {
    if (part.v_even[h])
      y.right[h] = 2;
    else if (part.v_odd[h])
      y.right[h] = 0;
    else
      y.right[h] = m.right_partner(h) ? 1 : 0;
  }
  require_built_dual_optimal(inst, m, labels.w, y, 2 * (long long)m.size());
  return {part, y};
}

namespace {

bool values_01(const DualVector& y, std::string& detail) {
  for (int a = 0; a < int(y.left.size()); ++a)
    if (y.left[a] != 0 && y.left[a] != 1) {
      detail = "left dual " + std::to_string(a) + " has value " + std::to_string(y.left[a]);
      return false;
    }
  for (int h = 0; h < int(y.right.size()); ++h)
    if (y.right[h] != 0 && y.right[h] != 1) {
      detail = "right dual " + std::to_string(h) + " has value " + std::to_string(y.right[h]);
      return false;
    }
  return true;
}

void require_optimal_pair(const Instance& inst, const Matching& m, const EdgeWeights& w,
                          const DualVector& y) {
  if (y.regime != Regime::LeftPerfect)
    throw BadParameters("structure derivation expects a left-perfect regime dual");
  const Graph& g = inst.graph();
  CheckReport feas = dual_feasible(g, w, y);
  if (!feas.ok) throw OptimalityPreconditionViolated("dual infeasible: " + feas.first_violation);
  CheckReport cs = check_cs(g, w, m, y);
  if (!cs.ok)
    throw OptimalityPreconditionViolated("pair not slack-complementary: " + cs.first_violation);
}

}  // namespace

std::pair<DerivedPartitionHA, DeriveReportHA> derive_structure_ha(const Instance& inst,
                                                                  const Matching& m,
                                                                  const DualVector& y) {
  require_one_sided_candidate(inst, m);
  require_optimal_pair(inst, m, weight_ha(inst, m), y);

  DerivedPartitionHA part;
  DeriveReportHA rep;
  rep.zero_lefts_take_f = rep.one_lefts_take_f_or_s = rep.f_image_matched = true;
  rep.y_is_01 = values_01(y, rep.detail);

  FirstSecondHA fs = compute_fs_ha(inst);
  for (int a = 0; a < inst.n_left(); ++a) {
    int h = *m.left_partner(a);
    if (y.left[a] == 0) {
      part.a0.push_back(a);
      if (h != fs.f[a]) {
        rep.zero_lefts_take_f = false;
        if (rep.detail.empty())
          rep.detail = inst.left_name(a) + " has a zero dual but is not matched to its top choice";
      }
    } else if (y.left[a] == 1) {
      part.a1.push_back(a);
      if (h != fs.f[a] && h != fs.s[a]) {
        rep.one_lefts_take_f_or_s = false;
        if (rep.detail.empty())
          rep.detail = inst.left_name(a) + " has a unit dual but is matched outside f/s";
      }
    }
  }
  for (int h = 0; h < inst.n_right(); ++h) {
    if (y.right[h] == 1) part.h1.push_back(h);
    if (fs.in_f_image[h] && !m.right_partner(h)) {
      rep.f_image_matched = false;
      if (rep.detail.empty())
        rep.detail = "first-choice image vertex " + inst.right_name(h) + " is unmatched";
    }
  }
  return {part, rep};
}

std::pair<DerivedPartitionHAT, DeriveReportHAT> derive_structure_hat(const Instance& inst,
                                                                     const Matching& m,
                                                                     const DualVector& y) {
  require_one_sided_candidate(inst, m);
  require_optimal_pair(inst, m, weight_hat(inst, m), y);

  DerivedPartitionHAT part;
  DeriveReportHAT rep;
  rep.zero_lefts_take_f = rep.one_lefts_take_f_or_s = rep.cover_of_g_f =
      rep.m_f_count_matches_cover = true;
  rep.y_is_01 = values_01(y, rep.detail);

  FirstSecondHAT fs = compute_fs_hat(inst);
  std::vector<char> in_a1(inst.n_left(), 0), in_h1(inst.n_right(), 0);
  for (int a = 0; a < inst.n_left(); ++a) {
    int h = *m.left_partner(a);
    if (y.left[a] == 0) {
      part.a0.push_back(a);
      if (!fs.in_f(a, h)) {
        rep.zero_lefts_take_f = false;
        if (rep.detail.empty())
          rep.detail = inst.left_name(a) + " has a zero dual but is not matched in its top group";
      }
    } else if (y.left[a] == 1) {
      part.a1.push_back(a);
      in_a1[a] = 1;
      if (!fs.in_f(a, h) && !fs.in_s(a, h)) {
        rep.one_lefts_take_f_or_s = false;
        if (rep.detail.empty())
          rep.detail = inst.left_name(a) + " has a unit dual but is matched outside f/s";
      }
    }
  }
  for (int h = 0; h < inst.n_right(); ++h)
    if (y.right[h] == 1) {
      part.h1.push_back(h);
      in_h1[h] = 1;
    }

  // A_1' keeps the unit-dual left vertices with a zero-dual top-group right;
  // together with H_1 it should cover the first-choice subgraph exactly.
  std::vector<char> in_a1p(inst.n_left(), 0);
  for (int a : part.a1) {
    for (int h : fs.f[a])
      if (y.right[h] == 0) {
        in_a1p[a] = 1;
        break;
      }
    if (in_a1p[a]) part.a1_prime.push_back(a);
  }
  for (const Edge& e : fs.g_f.edges) {
    if (!in_a1p[e.left] && !in_h1[e.right]) {
      rep.cover_of_g_f = false;
      if (rep.detail.empty())
        rep.detail = "first-choice edge (" + inst.left_name(e.left) + "," +
                     inst.right_name(e.right) + ") not covered";
      break;
    }
  }
  int first_choice_edges = 0;
  for (const Edge& e : m.edges())
    if (inst.rank_left(e.left, e.right) == 0) ++first_choice_edges;
  if (first_choice_edges != int(part.a1_prime.size() + part.h1.size())) {
    rep.m_f_count_matches_cover = false;
    if (rep.detail.empty())
      rep.detail = "first-choice edge count " + std::to_string(first_choice_edges) +
                   " differs from cover size " +
                   std::to_string(part.a1_prime.size() + part.h1.size());
  }
  return {part, rep};
}

nlohmann::json certificate_json(const Instance& inst, const Matching& m, const EdgeWeights& w,
                                const DualVector& y) {
  nlohmann::json vals = nlohmann::json::object();
  for (int a = 0; a < inst.n_left(); ++a) vals[inst.left_name(a)] = y.left[a];
  for (int h = 0; h < inst.n_right(); ++h) vals[inst.right_name(h)] = y.right[h];
  return nlohmann::json{{"regime", to_string(y.regime)},
                        {"y", std::move(vals)},
                        {"objective", y.objective()},
                        {"primal_value", w.of_matching(inst, m)},
                        {"cs_ok", check_cs(inst.graph(), w, m, y).ok}};
}

DualVector build_dual(const Instance& inst, const Matching& m) {
  switch (inst.variant()) {
    case Variant::HA: return build_dual_ha(inst, m, make_partition_ha(inst, m));
    case Variant::HAT: return build_dual_hat(inst, m, make_partition_hat(inst, m));
    case Variant::SMI: {
      SMIEdgeLabels labels = labels_smi(inst, m);
      return build_dual_smi(inst, m, labels, g_m_plus(inst, labels)).second;
    }
  }
  throw InternalError("unhandled variant");
}

}  // namespace popmatch
