#include "popmatch/crosscheck.hpp"

#include <iomanip>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "popmatch/characterize.hpp"
#include "popmatch/duals.hpp"
#include "popmatch/matching_core.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

std::string digest_hex(std::uint64_t digest) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << digest;
  return os.str();
}

void CrosscheckReport::absorb(const CrosscheckReport& other) {
  candidates += other.candidates;
  popular += other.popular;
  disagreements += other.disagreements;
  certificate_failures += other.certificate_failures;
  derivation_failures += other.derivation_failures;
  improver_failures += other.improver_failures;
  infrastructure_failures += other.infrastructure_failures;
  improvements_checked += other.improvements_checked;
  derivations_checked += other.derivations_checked;
  if (first_failure.empty()) first_failure = other.first_failure;
}

namespace {

void note(CrosscheckReport& rep, long long& counter, const std::string& msg) {
  ++counter;
  if (rep.first_failure.empty()) rep.first_failure = "digest=" + rep.digest + " " + msg;
}

// Konig equality and label invariance on one graph; returns a description of
// the first problem, empty when fine.
std::string probe_graph(const Graph& g) {
  Matching mm = maximum_matching(g);
  std::vector<VertexId> cover = konig_cover(g, mm);  // size == |mm| asserted inside
  DMLabels base = dm_labels(g, mm);
  std::vector<int> reversed(g.n_left);
  std::iota(reversed.begin(), reversed.end(), 0);
  std::reverse(reversed.begin(), reversed.end());
  Matching mm2 = maximum_matching_ordered(g, reversed);
  if (mm2.size() != mm.size()) return "maximum matching size depends on scan order";
  if (!(dm_labels(g, mm2) == base)) return "vertex labels depend on the maximum matching";
  (void)cover;
  return "";
}

}  // namespace

CrosscheckReport crosscheck_instance(const Instance& inst, const CrosscheckOptions& opts) {
  const bool one_sided = inst.variant() != Variant::SMI;
  const Instance work =
      one_sided && !inst.augmented() ? add_last_resorts(inst) : inst;

  CrosscheckReport rep;
  rep.digest = digest_hex(instance_digest(inst));
  if (int(work.graph().edges.size()) > opts.guard_edges)
    throw TooLarge("instance has " + std::to_string(work.graph().edges.size()) +
                   " edges, guard is " + std::to_string(opts.guard_edges));

  if (opts.check_infrastructure) {
    std::string msg = probe_graph(work.graph());
    if (msg.empty() && one_sided) msg = probe_graph(compute_fs_hat(work).g_f);
    if (!msg.empty()) note(rep, rep.infrastructure_failures, msg);
  }

  std::vector<Matching> candidates = enumerate_matchings(work.graph(), one_sided);
  for (const Matching& cand : candidates) {
    ++rep.candidates;
    const std::string label = "matching=\"" + serialize_matching(work, cand) + "\"";

    SMIEdgeLabels labels;
    Graph gplus;
    Verdict vs, vo;
    if (one_sided) {
      vs = work.variant() == Variant::HA ? structural_check_ha(work, cand)
                                         : structural_check_hat(work, cand);
      vo = optimization_check(work, cand, weight_hat(work, cand), SolveMode::LeftPerfect);
    } else {
      labels = labels_smi(work, cand);
      gplus = g_m_plus(work, labels);
      vs = structural_check_smi(work, cand, labels, gplus);
      vo = optimization_check(work, cand, labels.w, SolveMode::Free);
    }
    BruteForceVerdict vb = is_popular_bruteforce(work, cand, opts.guard_edges);

    if (vs.popular != vo.popular || vo.popular != vb.popular) {
      std::ostringstream os;
      os << label << " structural=" << vs.popular << " optimization=" << vo.popular
         << " brute=" << vb.popular;
      note(rep, rep.disagreements, os.str());
      continue;
    }

    if (vs.popular) {
      ++rep.popular;
      if (opts.check_certificates) {
        try {
          DualVector y;
          EdgeWeights w;
          if (work.variant() == Variant::HA) {
            w = weight_ha(work, cand);
            y = build_dual_ha(work, cand, make_partition_ha(work, cand));
          } else if (work.variant() == Variant::HAT) {
            w = weight_hat(work, cand);
            y = build_dual_hat(work, cand, make_partition_hat(work, cand));
          } else {
            w = labels.w;
            y = build_dual_smi(work, cand, labels, gplus).second;
          }
          if (!certificate_json(work, cand, w, y).at("cs_ok").get<bool>())
            note(rep, rep.certificate_failures, label + " certificate not slack-complementary");
        } catch (const Error& e) {
          note(rep, rep.certificate_failures, label + " certificate: " + e.what());
        }
      }
      if (opts.check_derivations && one_sided) {
        // Both the solver's optimal dual and the structurally built one must
        // yield the structural facts back.
        auto derive = [&](const DualVector& y) {
          ++rep.derivations_checked;
          try {
            bool all = work.variant() == Variant::HA
                           ? derive_structure_ha(work, cand, y).second.all()
                           : derive_structure_hat(work, cand, y).second.all();
            if (!all) note(rep, rep.derivation_failures, label + " derived facts incomplete");
          } catch (const Error& e) {
            note(rep, rep.derivation_failures, label + " derivation: " + e.what());
          }
        };
        derive(*vo.dual);
        try {
          derive(work.variant() == Variant::HA
                     ? build_dual_ha(work, cand, make_partition_ha(work, cand))
                     : build_dual_hat(work, cand, make_partition_hat(work, cand)));
        } catch (const Error& e) {
          note(rep, rep.derivation_failures, label + " derivation input: " + e.what());
        }
      }
    } else if (!one_sided && opts.check_improver) {
      ++rep.improvements_checked;
      try {
        if (!vs.witness) throw InvalidWitness("structural rejection carries no witness");
        Improvement imp = improve_matching_smi(work, cand, *vs.witness);
        if (!matching_uses_instance_edges(work, imp.improved))
          throw InvalidWitness("improved matching leaves the instance");
        if (delta(work, imp.improved, cand).value - delta(work, cand, imp.improved).value <= 0)
          throw InvalidWitness("improved matching does not beat the candidate");
      } catch (const Error& e) {
        note(rep, rep.improver_failures, label + " improver: " + e.what());
      }
    }
  }
  return rep;
}

}  // namespace popmatch
