#include "popmatch/weights.hpp"

namespace popmatch {

long long EdgeWeights::of_matching(const Instance& inst, const Matching& m) const {
  long long total = 0;
  for (int a = 0; a < m.n_left(); ++a) {
    auto p = m.left_partner(a);
    if (!p) continue;
    int id = inst.edge_id(a, *p);
    if (id < 0) throw BadParameters("matching uses a non-edge");
    total += w[id];
  }
  return total;
}

namespace {

EdgeWeights weight_one_sided(const Instance& inst, const Matching& m) {
  if (inst.variant() == Variant::SMI)
    throw BadParameters("one-sided weights need a one-sided instance");
  if (!inst.augmented()) throw BadParameters("one-sided weights need an augmented instance");
  if (!is_left_perfect(m)) throw NotLeftPerfect("one-sided weights need a left-perfect matching");
  if (!matching_uses_instance_edges(inst, m)) throw BadParameters("matching uses a non-edge");

  EdgeWeights out;
  out.w.resize(inst.edges().size());
  for (int id = 0; id < int(inst.edges().size()); ++id) {
    const Edge& e = inst.edges()[id];
    int r_here = inst.rank_left(e.left, e.right);
    int r_partner = inst.rank_left(e.left, *m.left_partner(e.left));
    if (r_here < r_partner) out.w[id] = 2;
    else if (r_here == r_partner) out.w[id] = 1;  // the partner, or tied with it
    else out.w[id] = 0;
  }
  return out;
}

}  // namespace

EdgeWeights weight_ha(const Instance& inst, const Matching& m) {
  for (int a = 0; a < inst.n_left(); ++a)
    for (const auto& grp : inst.pref_left(a).groups)
      if (grp.size() > 1) throw BadParameters("strict weights need tie-free lists");
  return weight_one_sided(inst, m);
}

EdgeWeights weight_hat(const Instance& inst, const Matching& m) {
  return weight_one_sided(inst, m);
}

SMIEdgeLabels labels_smi(const Instance& inst, const Matching& m) {
  if (inst.variant() != Variant::SMI) throw BadParameters("labels_smi needs an smi instance");
  if (!matching_uses_instance_edges(inst, m)) throw BadParameters("matching uses a non-edge");

  const auto& edges = inst.edges();
  SMIEdgeLabels out;
  out.alpha.resize(edges.size());
  out.beta.resize(edges.size());
  out.phi.resize(edges.size());
  out.psi.resize(edges.size());
  out.w.w.resize(edges.size());

  for (int id = 0; id < int(edges.size()); ++id) {
    const Edge& e = edges[id];
    bool in_m = m.contains(e.left, e.right);

    auto endpoint = [&](bool left_end) -> std::pair<VoteSign, signed char> {
      std::optional<int> partner = left_end ? m.left_partner(e.left) : m.right_partner(e.right);
      if (in_m) return {VoteSign::Zero, 1};
      if (!partner) return {VoteSign::Plus, 1};  // vote + but shifted value 1
      int r_other = left_end ? inst.rank_left(e.left, e.right) : inst.rank_right(e.right, e.left);
      int r_partner = left_end ? inst.rank_left(e.left, *partner) : inst.rank_right(e.right, *partner);
      if (r_other < r_partner) return {VoteSign::Plus, 2};
      return {VoteSign::Minus, 0};
    };

    auto [alpha, phi] = endpoint(true);
    auto [beta, psi] = endpoint(false);
    out.alpha[id] = alpha;
    out.beta[id] = beta;
    out.phi[id] = phi;
    out.psi[id] = psi;
    out.w.w[id] = phi + psi;
  }
  return out;
}

Graph g_m_plus(const Instance& inst, const SMIEdgeLabels& labels) {
  std::vector<Edge> edges;
  std::vector<int> source;
  for (int id = 0; id < int(inst.edges().size()); ++id) {
    if (labels.alpha[id] == VoteSign::Minus && labels.beta[id] == VoteSign::Minus) continue;
    edges.push_back(inst.edges()[id]);
    source.push_back(id);
  }
  return Graph::from_edges(inst.n_left(), inst.n_right(), std::move(edges), std::move(source));
}

}  // namespace popmatch
