#include <algorithm>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "popmatch/characterize.hpp"
#include "popmatch/crosscheck.hpp"
#include "popmatch/oracle.hpp"
#include "support.hpp"

using namespace popmatch;

namespace {

// Two-sided: everyone's favourite is taken by the other pair, so matching
// both to their second choice leaves a mutually-improving alternating cycle.
constexpr const char* kSMICycle = R"(problem: smi
left: u1 u2
right: v1 v2
pref u1: v1 > v2
pref u2: v2 > v1
pref v1: u1 > u2
pref v2: u2 > u1
)";

// Two-sided path graph: matching everyone to their worst choice lines up two
// mutually-improving edges on one alternating path.
constexpr const char* kSMIPath = R"(problem: smi
left: u1 u2 u3
right: v1 v2 v3
pref u1: v2 > v1
pref u2: v3 > v2
pref u3: v3
pref v1: u1
pref v2: u1 > u2
pref v3: u2 > u3
)";

// Two-sided: a mutually-improving edge between matched vertices, reachable
// by an alternating path from the unmatched u0.
constexpr const char* kSMITail = R"(problem: smi
left: u0 u1 u2
right: v1 v2
pref u0: v1
pref u1: v2 > v1
pref u2: v2
pref v1: u1 > u0
pref v2: u1 > u2
)";

// One-sided with one tie: a matching whose first-choice part is maximum can
// still put a2 on its last resort even though s(a2) = h3 is free.
constexpr const char* kHATBad = R"(problem: hat
left: a1 a2 a3
right: h1 h2 h3
pref a1: (h1 h2)
pref a2: h1 > h3
pref a3: h1
)";

Verdict check_smi(const Instance& inst, const Matching& m) {
  SMIEdgeLabels labels = labels_smi(inst, m);
  return structural_check_smi(inst, m, labels, g_m_plus(inst, labels));
}

Improvement improve(const Instance& inst, const Matching& m) {
  Verdict v = check_smi(inst, m);
  REQUIRE(!v.popular);
  return improve_matching_smi(inst, m, *v.witness);
}

}  // namespace

TEST_CASE("one-sided verdicts name the offending vertex") {
  Instance i1 = support::aug(support::kI1);

  CHECK(structural_check_ha(i1, parse_matching(i1, "a1 h1; a2 h2")).popular);
  CHECK(structural_check_ha(i1, parse_matching(i1, "a1 h2; a2 h1")).popular);

  Verdict worst = structural_check_ha(i1, parse_matching(i1, ""));
  REQUIRE(!worst.popular);
  CHECK(worst.method == Method::Structural);
  CHECK(worst.witness->kind == WitnessKind::UnmatchedFImageRight);
  CHECK(*worst.witness->vertex == right_vertex(0));  // h1, the first-choice image
  CHECK(worst.witness->path.empty());

  Verdict bad = structural_check_ha(i1, parse_matching(i1, "a1 h1"));
  REQUIRE(!bad.popular);
  CHECK(bad.witness->kind == WitnessKind::BadPartner);
  CHECK(*bad.witness->vertex == left_vertex(1));  // a2 fell to its last resort

  Instance i2 = support::aug(support::kI2);
  Verdict diag = structural_check_ha(i2, parse_matching(i2, "a1 h1; a2 h2; a3 h3"));
  REQUIRE(!diag.popular);
  CHECK(diag.witness->kind == WitnessKind::BadPartner);
  CHECK(*diag.witness->vertex == left_vertex(2));  // h3 is neither f(a3) nor s(a3)

  CHECK_THROWS_AS(structural_check_ha(i1, support::mk_matching(2, 4, {{0, 0}})),
                  NotLeftPerfect);
  CHECK_THROWS_AS(structural_check_ha(support::mk(support::kI1), Matching(2, 2)), BadParameters);
  CHECK_THROWS_AS(structural_check_ha(support::mk(support::kI4), Matching(2, 2)), BadParameters);
}

TEST_CASE("tie-aware verdicts separate the two failure modes") {
  Instance i3 = support::aug(support::kI3);
  CHECK(structural_check_hat(i3, parse_matching(i3, "a1 h2; a2 h1")).popular);

  Verdict deficient = structural_check_hat(i3, parse_matching(i3, "a1 h1; a2 h2"));
  REQUIRE(!deficient.popular);
  CHECK(deficient.witness->kind == WitnessKind::FirstChoiceNotMaximum);
  CHECK(*deficient.witness->vertex == right_vertex(1));  // h2 ends the augmenting path
  CHECK(deficient.witness->path == std::vector<Edge>{{1, 0}, {0, 0}, {0, 1}});

  Instance hb = support::aug(kHATBad);
  Matching bad = parse_matching(hb, "a1 h2; a3 h1");  // a2 completed to l(a2)
  CHECK(serialize_matching(hb, bad) == "a1 h2; a2 l(a2); a3 h1");
  Verdict v = structural_check_hat(hb, bad);
  REQUIRE(!v.popular);
  CHECK(v.witness->kind == WitnessKind::BadPartner);
  CHECK(*v.witness->vertex == left_vertex(1));  // s(a2) = {h3}, not the last resort
  BruteForceVerdict bf = is_popular_bruteforce(hb, bad);
  CHECK_FALSE(bf.popular);
  CHECK(*bf.margin >= 1);

  Matching good = parse_matching(hb, "a1 h2; a2 h1; a3 l(a3)");
  CHECK(structural_check_hat(hb, good).popular);
  CHECK(is_popular_bruteforce(hb, good).popular);
}

TEST_CASE("two-sided witnesses carry flippable payloads") {
  Instance i4 = support::mk(support::kI4);
  CHECK(check_smi(i4, parse_matching(i4, "u1 v1; u2 v2")).popular);
  CHECK(check_smi(i4, parse_matching(i4, "u1 v2; u2 v1")).popular);
  CHECK(check_smi(i4, Matching(2, 2)).popular == false);

  SUBCASE("a mutually-improving edge with loose ends is its own witness") {
    Verdict v = check_smi(i4, parse_matching(i4, "u1 v1"));
    REQUIRE(!v.popular);
    CHECK(v.witness->kind == WitnessKind::PlusPlusPathFromUnmatched);
    CHECK(v.witness->path == std::vector<Edge>{{1, 1}});
    CHECK(v.witness->plus_edges == std::vector<Edge>{{1, 1}});
  }
  SUBCASE("alternating cycle through a mutually-improving edge") {
    Instance inst = support::mk(kSMICycle);
    Matching m = parse_matching(inst, "u1 v2; u2 v1");
    Verdict v = check_smi(inst, m);
    REQUIRE(!v.popular);
    CHECK(v.witness->kind == WitnessKind::PlusPlusCycle);
    CHECK(v.witness->path == std::vector<Edge>{{0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK(v.witness->plus_edges == std::vector<Edge>{{0, 0}});
    BruteForceVerdict bf = is_popular_bruteforce(inst, m);
    CHECK_FALSE(bf.popular);
    CHECK(*bf.margin == 4);
  }
  SUBCASE("alternating path through two mutually-improving edges") {
    Instance inst = support::mk(kSMIPath);
    Matching m = parse_matching(inst, "u1 v1; u2 v2; u3 v3");
    Verdict v = check_smi(inst, m);
    REQUIRE(!v.popular);
    CHECK(v.witness->kind == WitnessKind::TwoPlusPlusPath);
    CHECK(v.witness->path == std::vector<Edge>{{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}});
    CHECK(v.witness->plus_edges == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(*is_popular_bruteforce(inst, m).margin == 2);
  }
  SUBCASE("alternating path from an unmatched vertex to the improving edge") {
    Instance inst = support::mk(kSMITail);
    Matching m = parse_matching(inst, "u1 v1; u2 v2");
    Verdict v = check_smi(inst, m);
    REQUIRE(!v.popular);
    CHECK(v.witness->kind == WitnessKind::PlusPlusPathFromUnmatched);
    CHECK(v.witness->path == std::vector<Edge>{{0, 0}, {1, 0}, {1, 1}, {2, 1}});
    CHECK(v.witness->plus_edges == std::vector<Edge>{{1, 1}});
    CHECK(*is_popular_bruteforce(inst, m).margin == 1);
  }
  SUBCASE("parameter screening") {
    CHECK_THROWS_AS(check_smi(support::aug(support::kI1), Matching(2, 4)), BadParameters);
    Instance pth = support::mk(kSMIPath);
    Matching gs = parse_matching(i4, "u1 v1; u2 v2");
    SMIEdgeLabels foreign = labels_smi(pth, parse_matching(pth, "u1 v1"));
    CHECK_THROWS_AS(structural_check_smi(i4, gs, foreign, g_m_plus(i4, labels_smi(i4, gs))),
                    BadParameters);  // labels sized for a different instance
  }
}

TEST_CASE("structural witnesses flip into strictly better matchings") {
  Instance i4 = support::mk(support::kI4);
  Instance cyc = support::mk(kSMICycle);
  Instance pth = support::mk(kSMIPath);
  Instance tail = support::mk(kSMITail);

  SUBCASE("gains meet the per-kind thresholds") {
    Improvement a = improve(i4, parse_matching(i4, "u1 v1"));
    CHECK(a.improved == parse_matching(i4, "u1 v1; u2 v2"));
    CHECK(a.gain == 2);

    Improvement b = improve(cyc, parse_matching(cyc, "u1 v2; u2 v1"));
    CHECK(b.improved == parse_matching(cyc, "u1 v1; u2 v2"));
    CHECK(b.gain == 4);

    Improvement c = improve(pth, parse_matching(pth, "u1 v1; u2 v2; u3 v3"));
    CHECK(c.improved == parse_matching(pth, "u1 v2; u2 v3"));
    CHECK(c.gain == 2);

    Improvement d = improve(tail, parse_matching(tail, "u1 v1; u2 v2"));
    CHECK(d.improved == parse_matching(tail, "u0 v1; u1 v2"));
    CHECK(d.gain == 1);
  }
  SUBCASE("the flip beats the input matching in the head-to-head vote") {
    for (const char* text : {"u1 v1", "u1 v2", "u2 v1", "u2 v2", ""}) {
      Matching m = parse_matching(i4, text);
      Verdict v = check_smi(i4, m);
      if (v.popular) continue;
      Improvement imp = improve_matching_smi(i4, m, *v.witness);
      CHECK(delta(i4, imp.improved, m).value > 0);
    }
  }
  SUBCASE("forged witnesses are rejected") {
    Matching mc = parse_matching(cyc, "u1 v2; u2 v1");
    StructuralWitness wc = *check_smi(cyc, mc).witness;

    CHECK_THROWS_AS(improve_matching_smi(cyc, mc,
                                         {WitnessKind::BadPartner, std::nullopt, wc.path, {}}),
                    InvalidWitness);  // kind without a payload contract
    CHECK_THROWS_AS(improve_matching_smi(cyc, mc, {WitnessKind::PlusPlusCycle, std::nullopt,
                                                   {}, {Edge{0, 0}}}),
                    InvalidWitness);  // empty payload
    CHECK_THROWS_AS(improve_matching_smi(pth, parse_matching(pth, "u1 v1; u2 v2; u3 v3"),
                                         {WitnessKind::PlusPlusCycle, std::nullopt,
                                          {Edge{2, 0}}, {Edge{2, 0}}}),
                    InvalidWitness);  // (u3,v1) is not an instance edge
    CHECK_THROWS_AS(improve_matching_smi(cyc, mc, {WitnessKind::PlusPlusCycle, std::nullopt,
                                                   wc.path, {Edge{0, 0}, Edge{1, 1}}}),
                    InvalidWitness);  // wrong number of improving edges for the kind
    CHECK_THROWS_AS(improve_matching_smi(i4, parse_matching(i4, "u1 v1"),
                                         {WitnessKind::PlusPlusPathFromUnmatched, std::nullopt,
                                          {Edge{1, 1}}, {Edge{0, 0}}}),
                    InvalidWitness);  // improving edge off the payload
    CHECK_THROWS_AS(improve_matching_smi(cyc, parse_matching(cyc, "u1 v1; u2 v2"), wc),
                    InvalidWitness);  // edge not improving under this matching
    CHECK_THROWS_AS(improve_matching_smi(cyc, mc, {WitnessKind::PlusPlusPathFromUnmatched,
                                                   std::nullopt, {Edge{0, 0}, Edge{0, 1}},
                                                   {Edge{0, 0}}}),
                    InvalidWitness);  // flip would double-match v1
    StructuralWitness small = *check_smi(tail, parse_matching(tail, "u1 v1; u2 v2")).witness;
    small.kind = WitnessKind::PlusPlusCycle;
    CHECK_THROWS_AS(improve_matching_smi(tail, parse_matching(tail, "u1 v1; u2 v2"), small),
                    InvalidWitness);  // gain 1 is below the cycle threshold
    CHECK_THROWS_AS(improve_matching_smi(support::aug(support::kI1), Matching(2, 4), wc),
                    BadParameters);
  }
}

TEST_CASE("optimization check certifies both answers") {
  Instance i4 = support::mk(support::kI4);
  Matching gs = parse_matching(i4, "u1 v1; u2 v2");
  SMIEdgeLabels lab = labels_smi(i4, gs);
  Verdict yes = optimization_check(i4, gs, lab.w, SolveMode::Free);
  CHECK(yes.popular);
  CHECK(yes.method == Method::Optimization);
  REQUIRE(yes.dual.has_value());
  CHECK(yes.dual->objective() == 2 * gs.size());

  Matching single = parse_matching(i4, "u1 v1");
  SMIEdgeLabels lab2 = labels_smi(i4, single);
  Verdict no = optimization_check(i4, single, lab2.w, SolveMode::Free);
  REQUIRE(!no.popular);
  REQUIRE(no.rival.has_value());
  CHECK(*no.rival_weight > lab2.w.of_matching(i4, single));
  CHECK(delta(i4, *no.rival, single).value > 0);

  Instance i2 = support::aug(support::kI2);
  Matching diag = parse_matching(i2, "a1 h1; a2 h2; a3 h3");
  Verdict one_sided = optimization_check(i2, diag, weight_ha(i2, diag), SolveMode::LeftPerfect);
  REQUIRE(!one_sided.popular);
  CHECK(*one_sided.rival_weight == 4);  // frozen: solver finds weight 4 > n_left = 3
  CHECK_THROWS_AS(optimization_check(i2, support::mk_matching(3, 6, {{0, 0}}),
                                     weight_ha(i2, diag), SolveMode::LeftPerfect),
                  NotLeftPerfect);
}

TEST_CASE("constructors agree with the exhaustive notion of existence") {
  Instance i1 = support::aug(support::kI1);
  std::optional<Matching> m1 = find_popular_ha(i1);
  REQUIRE(m1.has_value());
  CHECK(serialize_matching(i1, *m1) == "a1 h2; a2 h1");
  CHECK(is_popular_bruteforce(i1, *m1).popular);

  CHECK_FALSE(find_popular_ha(support::aug(support::kI2)).has_value());

  Instance i3 = support::aug(support::kI3);
  std::optional<Matching> m3 = find_popular_hat(i3);
  REQUIRE(m3.has_value());
  CHECK(structural_check_hat(i3, *m3).popular);

  Instance hb = support::aug(kHATBad);
  std::optional<Matching> mb = find_popular_hat(hb);
  REQUIRE(mb.has_value());
  CHECK(is_popular_bruteforce(hb, *mb).popular);

  SUBCASE("random one-sided instances, strict lists") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      RandomInstanceParams p;
      p.seed = 1000 + seed;
      p.variant = Variant::HA;
      p.n_left = 1 + int(seed % 3);
      p.n_right = 1 + int((seed / 3) % 3);
      p.edge_density = 0.4 + 0.2 * double(seed % 4);
      Instance inst = add_last_resorts(random_instance(p));
      std::optional<Matching> found = find_popular_ha(inst);
      bool any = false;
      for (const Matching& cand : enumerate_matchings(inst.graph(), true))
        if (is_popular_bruteforce(inst, cand).popular) { any = true; break; }
      REQUIRE(found.has_value() == any);
      if (found) CHECK(is_popular_bruteforce(inst, *found).popular);
    }
  }
  SUBCASE("random one-sided instances with ties") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      RandomInstanceParams p;
      p.seed = 2000 + seed;
      p.variant = Variant::HAT;
      p.n_left = 1 + int(seed % 3);
      p.n_right = 1 + int((seed / 3) % 3);
      p.edge_density = 0.5 + 0.15 * double(seed % 4);
      p.tie_prob = 0.5;
      Instance inst = add_last_resorts(random_instance(p));
      std::optional<Matching> found = find_popular_hat(inst);
      bool any = false;
      for (const Matching& cand : enumerate_matchings(inst.graph(), true))
        if (is_popular_bruteforce(inst, cand).popular) { any = true; break; }
      REQUIRE(found.has_value() == any);
      if (found) CHECK(is_popular_bruteforce(inst, *found).popular);
    }
  }
}

TEST_CASE("deferred acceptance lands on a popular matching") {
  Instance i4 = support::mk(support::kI4);
  CHECK(gale_shapley_smi(i4) == parse_matching(i4, "u1 v1; u2 v2"));
  Instance cyc = support::mk(kSMICycle);
  CHECK(gale_shapley_smi(cyc) == parse_matching(cyc, "u1 v1; u2 v2"));
  Instance tail = support::mk(kSMITail);
  CHECK(gale_shapley_smi(tail) == parse_matching(tail, "u0 v1; u1 v2"));

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomInstanceParams p;
    p.seed = 3000 + seed;
    p.variant = Variant::SMI;
    p.n_left = 1 + int(seed % 4);
    p.n_right = 1 + int((seed / 4) % 4);
    p.edge_density = 0.4 + 0.2 * double(seed % 4);
    Instance inst = random_instance(p);
    Matching gs = gale_shapley_smi(inst);
    CHECK(check_smi(inst, gs).popular);
    CHECK(is_popular_bruteforce(inst, gs).popular);
  }
}

TEST_CASE("verdict and witness serialization") {
  Instance i4 = support::mk(support::kI4);
  Verdict good = check_smi(i4, parse_matching(i4, "u1 v1; u2 v2"));
  nlohmann::json jg = verdict_json(i4, good);
  CHECK(jg.at("popular") == true);
  CHECK(jg.at("method") == "structural");
  CHECK(!jg.contains("witness"));

  Instance cyc = support::mk(kSMICycle);
  Verdict badv = check_smi(cyc, parse_matching(cyc, "u1 v2; u2 v1"));
  nlohmann::json jb = verdict_json(cyc, badv);
  CHECK(jb.at("popular") == false);
  CHECK(jb.at("witness").at("kind") == "plus_plus_cycle");
  CHECK(jb.at("witness").at("vertex").is_null());
  CHECK(jb.at("witness").at("path").size() == 4);
  CHECK(jb.at("witness").at("plus_edges") ==
        nlohmann::json::array({nlohmann::json::array({"u1", "v1"})}));

  Instance i1 = support::aug(support::kI1);
  Verdict ha_bad = structural_check_ha(i1, parse_matching(i1, "a1 h1"));
  nlohmann::json jh = verdict_json(i1, ha_bad);
  CHECK(jh.at("witness").at("kind") == "bad_partner");
  CHECK(jh.at("witness").at("vertex") == "a2");

  Matching gs = parse_matching(i4, "u1 v1; u2 v2");
  Verdict opt = optimization_check(i4, gs, labels_smi(i4, gs).w, SolveMode::Free);
  nlohmann::json jo = verdict_json(i4, opt);
  CHECK(jo.at("dual").at("regime") == "free");
  CHECK(jo.at("dual").at("objective") == 4);
  CHECK(jo.at("dual").at("y").size() == 4);
}

TEST_CASE("the crosscheck engine pits all three methods against each other") {
  CrosscheckOptions opts;

  CrosscheckReport r1 = crosscheck_instance(support::mk(support::kI1), opts);
  CHECK(r1.ok());
  CHECK(r1.candidates == 7);
  CHECK(r1.popular == 2);
  CHECK(r1.digest.size() == 16);
  CHECK(r1.improvements_checked == 0);  // one-sided: no two-sided improver
  CHECK(r1.derivations_checked > 0);

  CrosscheckReport r2 = crosscheck_instance(support::mk(support::kI2), opts);
  CHECK(r2.ok());
  CHECK(r2.candidates == 34);
  CHECK(r2.popular == 0);

  CrosscheckReport r3 = crosscheck_instance(support::mk(support::kI3), opts);
  CHECK(r3.ok());
  CHECK(r3.candidates == 7);
  CHECK(r3.popular == 1);

  CrosscheckReport r4 = crosscheck_instance(support::mk(support::kI4), opts);
  CHECK(r4.ok());
  CHECK(r4.candidates == 7);
  CHECK(r4.popular == 2);
  CHECK(r4.improvements_checked == 5);

  CrosscheckReport total;
  total.absorb(r1);
  total.absorb(r4);
  CHECK(total.candidates == 14);
  CHECK(total.popular == 4);
  CHECK(total.ok());

  CrosscheckOptions tight;
  tight.guard_edges = 3;
  CHECK_THROWS_AS(crosscheck_instance(support::mk(support::kI2), tight), TooLarge);

  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    RandomInstanceParams p;
    p.seed = 4000 + seed;
    p.variant = seed % 3 == 0 ? Variant::HA : (seed % 3 == 1 ? Variant::HAT : Variant::SMI);
    p.n_left = 1 + int(seed % 3);
    p.n_right = 1 + int((seed / 3) % 3);
    p.edge_density = 0.5 + 0.15 * double(seed % 3);
    p.tie_prob = p.variant == Variant::HAT ? 0.4 : 0.0;
    CrosscheckReport r = crosscheck_instance(random_instance(p), opts);
    INFO("seed ", p.seed, ": ", r.first_failure);
    CHECK(r.ok());
    CHECK(r.candidates > 0);
  }
}
