#include "doctest.h"
#include "popmatch/weights.hpp"
#include "support.hpp"

using namespace popmatch;

TEST_CASE("strict one-sided weights relative to a matching") {
  Instance i1 = support::aug(support::kI1);
  // edges: (a1,h1) (a1,h2) (a1,l(a1)) (a2,h1) (a2,h2) (a2,l(a2))
  Matching m = parse_matching(i1, "a1 h1; a2 h2");
  CHECK(weight_ha(i1, m).w == std::vector<long long>{1, 0, 0, 2, 1, 0});
  CHECK(weight_ha(i1, m).of_matching(i1, m) == 2);

  Matching worst = parse_matching(i1, "");  // both on their last resorts
  CHECK(weight_ha(i1, worst).w == std::vector<long long>{2, 2, 1, 2, 2, 1});

  CHECK_THROWS_AS(weight_ha(i1, support::mk_matching(2, 4, {{0, 0}})), NotLeftPerfect);
  CHECK_THROWS_AS(weight_ha(support::mk(support::kI4), m), BadParameters);
}

TEST_CASE("weights with ties score tie-mates like the partner") {
  Instance i3 = support::aug(support::kI3);
  Matching m = parse_matching(i3, "a1 h2; a2 h1");
  CHECK(weight_hat(i3, m).w == std::vector<long long>{1, 1, 0, 1, 0, 0});
  CHECK_THROWS_AS(weight_ha(i3, m), BadParameters);  // strict weights reject ties

  // degenerate: on strict lists both weight systems coincide
  Instance i1 = support::aug(support::kI1);
  Matching m1 = parse_matching(i1, "a1 h2; a2 h1");
  CHECK(weight_hat(i1, m1).w == weight_ha(i1, m1).w);
}

TEST_CASE("two-sided edge labels") {
  Instance i4 = support::mk(support::kI4);
  // edges: (u1,v1) (u1,v2) (u2,v1) (u2,v2)

  SUBCASE("all matched, no mutual improvement") {
    Matching gs = parse_matching(i4, "u1 v1; u2 v2");
    SMIEdgeLabels lab = labels_smi(i4, gs);
    CHECK(lab.alpha == std::vector<VoteSign>{VoteSign::Zero, VoteSign::Minus, VoteSign::Plus,
                                             VoteSign::Zero});
    CHECK(lab.beta == std::vector<VoteSign>{VoteSign::Zero, VoteSign::Plus, VoteSign::Minus,
                                            VoteSign::Zero});
    CHECK(lab.w.w == std::vector<long long>{2, 2, 2, 2});
    CHECK(g_m_plus(i4, lab).edges.size() == 4);  // nothing is (-,-)
  }

  SUBCASE("a mutually-improving pair and a dropped edge") {
    Matching swapped = parse_matching(i4, "u1 v2; u2 v1");
    SMIEdgeLabels lab = labels_smi(i4, swapped);
    CHECK(lab.alpha[0] == VoteSign::Plus);
    CHECK(lab.beta[0] == VoteSign::Plus);
    CHECK(lab.w.w == std::vector<long long>{4, 2, 2, 0});
    Graph gp = g_m_plus(i4, lab);
    REQUIRE(gp.edges.size() == 3);  // (u2,v2) is (-,-)
    CHECK(gp.source_id == std::vector<int>{0, 1, 2});
  }

  SUBCASE("unmatched endpoints vote plus but weigh one") {
    Matching single = parse_matching(i4, "u1 v1");
    SMIEdgeLabels lab = labels_smi(i4, single);
    CHECK(lab.alpha == std::vector<VoteSign>{VoteSign::Zero, VoteSign::Minus, VoteSign::Plus,
                                             VoteSign::Plus});
    CHECK(lab.beta == std::vector<VoteSign>{VoteSign::Zero, VoteSign::Plus, VoteSign::Minus,
                                            VoteSign::Plus});
    CHECK(lab.phi == std::vector<signed char>{1, 0, 1, 1});
    CHECK(lab.psi == std::vector<signed char>{1, 1, 0, 1});
    CHECK(lab.w.w == std::vector<long long>{2, 1, 1, 2});
  }

  CHECK_THROWS_AS(labels_smi(support::aug(support::kI1), Matching(2, 4)), BadParameters);
}
