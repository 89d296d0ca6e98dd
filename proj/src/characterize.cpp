#include "popmatch/characterize.hpp"

#include <algorithm>
#include <deque>

#include <nlohmann/json.hpp>

#include "popmatch/matching_core.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/structure.hpp"

namespace popmatch {

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::UnmatchedFImageRight: return "unmatched_f_image_right";
    case WitnessKind::BadPartner: return "bad_partner";
    case WitnessKind::FirstChoiceNotMaximum: return "first_choice_not_maximum";
    case WitnessKind::PlusPlusCycle: return "plus_plus_cycle";
    case WitnessKind::PlusPlusPathFromUnmatched: return "plus_plus_path_from_unmatched";
    case WitnessKind::TwoPlusPlusPath: return "two_plus_plus_path";
  }
  return "?";
}

namespace {

void require_one_sided_candidate(const Instance& inst, const Matching& m) {
  if (inst.variant() == Variant::SMI)
    throw BadParameters("one-sided check on a two-sided instance");
  if (!inst.augmented()) throw BadParameters("instance must be augmented");
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("matching uses pairs outside the instance");
  if (!is_left_perfect(m)) throw NotLeftPerfect("candidate matching must cover every left vertex");
}

Verdict not_popular_with(StructuralWitness w) {
  Verdict v;
  v.popular = false;
  v.method = Method::Structural;
  v.witness = std::move(w);
  return v;
}

}  // namespace

Verdict structural_check_ha(const Instance& inst, const Matching& m) {
  require_one_sided_candidate(inst, m);
  FirstSecondHA fs = compute_fs_ha(inst);
  for (int h = 0; h < inst.n_right(); ++h)
    if (fs.in_f_image[h] && !m.right_partner(h))
      return not_popular_with({WitnessKind::UnmatchedFImageRight, right_vertex(h), {}, {}});
  for (int a = 0; a < inst.n_left(); ++a) {
    int h = *m.left_partner(a);
    if (h != fs.f[a] && h != fs.s[a])
      return not_popular_with({WitnessKind::BadPartner, left_vertex(a), {}, {}});
  }
  Verdict v;
  v.popular = true;
  v.method = Method::Structural;
  return v;
}

Verdict structural_check_hat(const Instance& inst, const Matching& m) {
  require_one_sided_candidate(inst, m);
  FirstSecondHAT fs = compute_fs_hat(inst);

  Matching mf(inst.n_left(), inst.n_right());
  for (const Edge& e : m.edges())
    if (inst.rank_left(e.left, e.right) == 0) mf.add(e.left, e.right);
  if (mf.size() != fs.mm_f.size()) {
    // Not maximum on the first-choice subgraph: surface an augmenting path.
    std::vector<VertexId> starts;
    for (int a = 0; a < inst.n_left(); ++a)
      if (!mf.left_partner(a)) starts.push_back(left_vertex(a));
    AltReach reach = alternating_reachable(fs.g_f, mf, starts, EdgeKind::Unmatched);
    for (int h = 0; h < inst.n_right(); ++h) {
      if (mf.right_partner(h) || !reach.reached(right_vertex(h), EdgeKind::Unmatched)) continue;
      return not_popular_with({WitnessKind::FirstChoiceNotMaximum, right_vertex(h),
                               reach.walk_to(right_vertex(h), EdgeKind::Unmatched), {}});
    }
    throw InternalError("first-choice matching deficient but no augmenting path found");
  }
  for (int a = 0; a < inst.n_left(); ++a) {
    int h = *m.left_partner(a);
    if (!fs.in_f(a, h) && !fs.in_s(a, h))
      return not_popular_with({WitnessKind::BadPartner, left_vertex(a), {}, {}});
  }
  Verdict v;
  v.popular = true;
  v.method = Method::Structural;
  return v;
}

Verdict structural_check_smi(const Instance& inst, const Matching& m,
                             const SMIEdgeLabels& labels, const Graph& gplus) {
  if (inst.variant() != Variant::SMI)
    throw BadParameters("two-sided check on a one-sided instance");
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("matching uses pairs outside the instance");
  if (labels.alpha.size() != inst.edges().size() ||
      gplus.n_left != inst.n_left() || gplus.n_right != inst.n_right())
    throw BadParameters("labels or reduced graph do not fit the instance");

  std::vector<Edge> pp;
  for (int id = 0; id < int(inst.edges().size()); ++id)
    if (labels.alpha[id] == VoteSign::Plus && labels.beta[id] == VoteSign::Plus)
      pp.push_back(inst.edges()[id]);

  auto matched_edge_left = [&](int a) { return Edge{a, *m.left_partner(a)}; };
  auto matched_edge_right = [&](int h) { return Edge{*m.right_partner(h), h}; };

  // A mutually-improving pair with an unmatched endpoint is by itself an
  // alternating path with an unmatched endpoint through a (+,+) edge.
  for (const Edge& e : pp) {
    bool lm = bool(m.left_partner(e.left)), rm = bool(m.right_partner(e.right));
    if (lm && rm) continue;
    std::vector<Edge> path;
    if (lm) path.push_back(matched_edge_left(e.left));
    path.push_back(e);
    if (rm) path.push_back(matched_edge_right(e.right));
    return not_popular_with({WitnessKind::PlusPlusPathFromUnmatched, std::nullopt, std::move(path),
                             {e}});
  }

  // All (+,+) endpoints are matched from here on. Sweep alternating
  // reachability (first edge matched) out of both endpoints of every (+,+)
  // edge; in these single-start sweeps each side sits at a fixed parity, so
  // every reconstructed walk is a vertex-simple path.
  std::vector<AltReach> from_u, from_v;
  from_u.reserve(pp.size());
  from_v.reserve(pp.size());
  for (const Edge& e : pp) {
    from_u.push_back(alternating_reachable(gplus, m, {left_vertex(e.left)}, EdgeKind::Matched));
    from_v.push_back(alternating_reachable(gplus, m, {right_vertex(e.right)}, EdgeKind::Matched));
  }

  // Alternating cycle through a (+,+) edge: close the matched-first walk
  // u -> ... -> v with the edge itself.
  for (int k = 0; k < int(pp.size()); ++k) {
    const Edge& e = pp[k];
    if (!from_u[k].reached(right_vertex(e.right), EdgeKind::Matched)) continue;
    std::vector<Edge> cycle = from_u[k].walk_to(right_vertex(e.right), EdgeKind::Matched);
    cycle.push_back(e);
    return not_popular_with({WitnessKind::PlusPlusCycle, std::nullopt, std::move(cycle), {e}});
  }

  // Alternating path with an unmatched endpoint: an unmatched vertex the
  // sweeps reach. Out of the left endpoint only left vertices can be
  // unmatched (right vertices enter through their matched edge), and
  // symmetrically; reverse the walk and extend across the (+,+) edge to the
  // far endpoint's matched edge.
  for (int k = 0; k < int(pp.size()); ++k) {
    const Edge& e = pp[k];
    for (int a = 0; a < inst.n_left(); ++a) {
      if (m.left_partner(a) || !from_u[k].reached_any(left_vertex(a))) continue;
      std::vector<Edge> path = from_u[k].walk_to(left_vertex(a), EdgeKind::Unmatched);
      std::reverse(path.begin(), path.end());
      path.push_back(e);
      path.push_back(matched_edge_right(e.right));
      return not_popular_with({WitnessKind::PlusPlusPathFromUnmatched, std::nullopt,
                               std::move(path), {e}});
    }
    for (int h = 0; h < inst.n_right(); ++h) {
      if (m.right_partner(h) || !from_v[k].reached_any(right_vertex(h))) continue;
      std::vector<Edge> path = from_v[k].walk_to(right_vertex(h), EdgeKind::Unmatched);
      std::reverse(path.begin(), path.end());
      path.push_back(e);
      path.push_back(matched_edge_left(e.left));
      return not_popular_with({WitnessKind::PlusPlusPathFromUnmatched, std::nullopt,
                               std::move(path), {e}});
    }
  }

  // Alternating path through two (+,+) edges: a matched-first matched-last
  // walk from the right endpoint of one to the left endpoint of the other,
  // extended by both matched endpoint edges. The earlier checks not firing
  // is what keeps this payload vertex-simple.
  for (int i = 0; i < int(pp.size()); ++i) {
    for (int j = 0; j < int(pp.size()); ++j) {
      if (i == j) continue;
      if (!from_v[i].reached(left_vertex(pp[j].left), EdgeKind::Matched)) continue;
      std::vector<Edge> path;
      path.push_back(matched_edge_left(pp[i].left));
      path.push_back(pp[i]);
      std::vector<Edge> seg = from_v[i].walk_to(left_vertex(pp[j].left), EdgeKind::Matched);
      path.insert(path.end(), seg.begin(), seg.end());
      path.push_back(pp[j]);
      path.push_back(matched_edge_right(pp[j].right));
      return not_popular_with({WitnessKind::TwoPlusPlusPath, std::nullopt, std::move(path),
                               {pp[i], pp[j]}});
    }
  }

  Verdict v;
  v.popular = true;
  v.method = Method::Structural;
  return v;
}

Verdict optimization_check(const Instance& inst, const Matching& m, const EdgeWeights& w,
                           SolveMode mode) {
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("matching uses pairs outside the instance");
  if (mode == SolveMode::LeftPerfect && !is_left_perfect(m))
    throw NotLeftPerfect("candidate matching must cover every left vertex");

  const long long own = w.of_matching(inst, m);
  SolveResult solve = max_weight_matching(inst.graph(), w, mode);
  if (solve.value < own)
    throw InternalError("solver value below the candidate's own weight");

  Verdict v;
  v.method = Method::Optimization;
  if (solve.value == own) {
    v.popular = true;
    v.dual = std::move(solve.dual);
  } else {
    v.popular = false;
    v.rival = std::move(solve.matching);
    v.rival_weight = solve.value;
  }
  return v;
}

Improvement improve_matching_smi(const Instance& inst, const Matching& m,
                                 const StructuralWitness& witness) {
  if (inst.variant() != Variant::SMI)
    throw BadParameters("two-sided improvement on a one-sided instance");
  if (!matching_uses_instance_edges(inst, m))
    throw BadParameters("matching uses pairs outside the instance");

  long long need = 0;
  size_t plus_count = 0;
  switch (witness.kind) {
    case WitnessKind::PlusPlusCycle:
    case WitnessKind::TwoPlusPlusPath:
      need = 2;
      plus_count = witness.kind == WitnessKind::TwoPlusPlusPath ? 2 : 1;
      break;
    case WitnessKind::PlusPlusPathFromUnmatched:
      need = 1;
      plus_count = 1;
      break;
    default:
      throw InvalidWitness("witness kind carries no flippable payload");
  }
  if (witness.path.empty()) throw InvalidWitness("empty payload");
  for (const Edge& e : witness.path)
    if (!inst.has_edge(e.left, e.right))
      throw InvalidWitness("payload edge outside the instance");
  if (witness.plus_edges.size() != plus_count)
    throw InvalidWitness("wrong number of mutually-improving edges for the witness kind");

  SMIEdgeLabels labels = labels_smi(inst, m);
  for (const Edge& e : witness.plus_edges) {
    if (std::find(witness.path.begin(), witness.path.end(), e) == witness.path.end())
      throw InvalidWitness("mutually-improving edge not on the payload");
    int id = inst.edge_id(e.left, e.right);
    if (labels.alpha[id] != VoteSign::Plus || labels.beta[id] != VoteSign::Plus)
      throw InvalidWitness("claimed edge is not mutually improving");
  }

  Improvement out;
  try {
    out.improved = symmetric_difference(m, witness.path);
  } catch (const Error& e) {
    throw InvalidWitness(std::string("payload does not flip cleanly: ") + e.what());
  }
  out.gain = labels.w.of_matching(inst, out.improved) - labels.w.of_matching(inst, m);
  if (out.gain < need)
    throw InvalidWitness("flipped matching gains " + std::to_string(out.gain) +
                         ", expected at least " + std::to_string(need));
  return out;
}

std::optional<Matching> find_popular_ha(const Instance& inst) {
  FirstSecondHA fs = compute_fs_ha(inst);
  const int nl = inst.n_left(), nr = inst.n_right();
  std::vector<Edge> edges;
  for (int a = 0; a < nl; ++a) {
    edges.push_back({a, fs.f[a]});
    edges.push_back({a, fs.s[a]});
  }
  Graph g_fs = Graph::from_edges(nl, nr, std::move(edges));
  Matching m = maximum_matching(g_fs);
  if (int(m.size()) != nl) return std::nullopt;

  std::vector<int> first_applicant(nr, -1);
  for (int a = nl - 1; a >= 0; --a) first_applicant[fs.f[a]] = a;

  // Rematching the lowest applicant whose top choice is h frees only that
  // applicant's second choice, which lies outside the first-choice image; so
  // one ascending pass leaves every image vertex matched and keeps the
  // matching left-perfect on first/second choice edges.
  for (int h = 0; h < nr; ++h) {
    if (!fs.in_f_image[h] || m.right_partner(h)) continue;
    int a = first_applicant[h];
    m.remove(a, *m.left_partner(a));
    m.add(a, h);
  }
  if (!structural_check_ha(inst, m).popular)
    throw InternalError("constructed matching failed its own characterization");
  return m;
}

std::optional<Matching> find_popular_hat(const Instance& inst) {
  FirstSecondHAT fs = compute_fs_hat(inst);
  const int nl = inst.n_left(), nr = inst.n_right();
  std::vector<Edge> edges;
  EdgeWeights w;
  for (int a = 0; a < nl; ++a) {
    for (int h : fs.f[a]) {
      edges.push_back({a, h});
      w.w.push_back(1);
    }
    for (int h : fs.s[a]) {
      if (fs.in_f(a, h)) continue;
      edges.push_back({a, h});
      w.w.push_back(0);
    }
  }
  Graph g_fs = Graph::from_edges(nl, nr, std::move(edges));

  // A popular matching is a left-perfect matching on first/second choice
  // edges whose first-choice part is maximum in g_f, i.e. a left-perfect
  // matching of g_fs with first-choice score exactly nu(g_f); and any such
  // matching satisfies the characterization.
  SolveResult solve;
  try {
    solve = max_weight_matching(g_fs, w, SolveMode::LeftPerfect);
  } catch (const Infeasible&) {
    return std::nullopt;
  }
  if (solve.value != (long long)fs.mm_f.size()) return std::nullopt;
  if (!structural_check_hat(inst, solve.matching).popular)
    throw InternalError("constructed matching failed its own characterization");
  return solve.matching;
}

Matching gale_shapley_smi(const Instance& inst) {
  if (inst.variant() != Variant::SMI)
    throw BadParameters("deferred acceptance needs a two-sided instance");
  Matching m(inst.n_left(), inst.n_right());
  std::vector<size_t> next(inst.n_left(), 0);
  std::deque<int> free;
  for (int a = 0; a < inst.n_left(); ++a) free.push_back(a);
  while (!free.empty()) {
    int a = free.front();
    free.pop_front();
    const auto& groups = inst.pref_left(a).groups;
    if (next[a] >= groups.size()) continue;  // exhausted every acceptable partner
    int h = groups[next[a]++][0];
    auto cur = m.right_partner(h);
    if (!cur) {
      m.add(a, h);
    } else if (inst.rank_right(h, a) < inst.rank_right(h, *cur)) {
      m.remove(*cur, h);
      m.add(a, h);
      free.push_back(*cur);
    } else {
      free.push_back(a);
    }
  }
  return m;
}

nlohmann::json witness_json(const Instance& inst, const StructuralWitness& w) {
  auto edge_pair = [&](const Edge& e) {
    return nlohmann::json::array({inst.left_name(e.left), inst.right_name(e.right)});
  };
  nlohmann::json j{{"kind", to_string(w.kind)}};
  j["vertex"] = w.vertex ? nlohmann::json(inst.vertex_name(*w.vertex)) : nlohmann::json(nullptr);
  j["path"] = nlohmann::json::array();
  for (const Edge& e : w.path) j["path"].push_back(edge_pair(e));
  j["plus_edges"] = nlohmann::json::array();
  for (const Edge& e : w.plus_edges) j["plus_edges"].push_back(edge_pair(e));
  return j;
}

nlohmann::json verdict_json(const Instance& inst, const Verdict& v) {
  nlohmann::json j{{"popular", v.popular}, {"method", to_string(v.method)}};
  if (v.dual) {
    nlohmann::json vals = nlohmann::json::object();
    for (int a = 0; a < inst.n_left(); ++a) vals[inst.left_name(a)] = v.dual->left[a];
    for (int h = 0; h < inst.n_right(); ++h) vals[inst.right_name(h)] = v.dual->right[h];
    j["dual"] = {{"regime", to_string(v.dual->regime)},
                 {"y", std::move(vals)},
                 {"objective", v.dual->objective()}};
  }
  if (v.witness) j["witness"] = witness_json(inst, *v.witness);
  if (v.rival) j["rival"] = serialize_matching(inst, *v.rival);
  if (v.rival_weight) j["rival_weight"] = *v.rival_weight;
  if (v.rival_margin) j["rival_margin"] = *v.rival_margin;
  return j;
}

Verdict structural_check(const Instance& inst, const Matching& m) {
  switch (inst.variant()) {
    case Variant::HA: return structural_check_ha(inst, m);
    case Variant::HAT: return structural_check_hat(inst, m);
    case Variant::SMI: {
      SMIEdgeLabels labels = labels_smi(inst, m);
      return structural_check_smi(inst, m, labels, g_m_plus(inst, labels));
    }
  }
  throw InternalError("unhandled variant");
}

EdgeWeights candidate_weights(const Instance& inst, const Matching& m) {
  switch (inst.variant()) {
    case Variant::HA: return weight_ha(inst, m);
    case Variant::HAT: return weight_hat(inst, m);
    case Variant::SMI: return labels_smi(inst, m).w;
  }
  throw InternalError("unhandled variant");
}

SolveMode candidate_mode(const Instance& inst) {
  return inst.variant() == Variant::SMI ? SolveMode::Free : SolveMode::LeftPerfect;
}

Verdict bruteforce_check(const Instance& inst, const Matching& m, int guard_edges) {
  BruteForceVerdict bf = is_popular_bruteforce(inst, m, guard_edges);
  Verdict v;
  v.popular = bf.popular;
  v.method = Method::BruteForce;
  v.rival = std::move(bf.rival);
  v.rival_margin = bf.margin;
  return v;
}

std::optional<Matching> find_popular(const Instance& inst) {
  switch (inst.variant()) {
    case Variant::HA: return find_popular_ha(inst);
    case Variant::HAT: return find_popular_hat(inst);
    case Variant::SMI: return gale_shapley_smi(inst);
  }
  throw InternalError("unhandled variant");
}

}  // namespace popmatch
