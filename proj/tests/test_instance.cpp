#include <set>

#include "doctest.h"
#include "popmatch/instance.hpp"
#include "support.hpp"

using namespace popmatch;

TEST_CASE("parse accepts the basic one-sided form") {
  Instance inst = support::mk(support::kI1);
  CHECK(inst.variant() == Variant::HA);
  CHECK(inst.n_left() == 2);
  CHECK(inst.n_right() == 2);
  CHECK(inst.left_name(0) == "a1");
  CHECK(inst.right_name(1) == "h2");
  CHECK(inst.rank_left(0, 0) == 0);
  CHECK(inst.rank_left(0, 1) == 1);
  CHECK(inst.edges().size() == 4);
  CHECK_FALSE(inst.augmented());
}

TEST_CASE("parse handles ties, comments, and order-free sections") {
  Instance inst = support::mk(
      "# comment\n"
      "left: a1 a2\n"
      "pref a1: (h1 h2)   # trailing comment\n"
      "right: h1 h2\n"
      "pref a2: h1 > h2\n"
      "problem: hat\n");
  CHECK(inst.variant() == Variant::HAT);
  CHECK(inst.pref_left(0).groups.size() == 1);
  CHECK(inst.pref_left(0).groups[0] == std::vector<int>{0, 1});
  CHECK(inst.rank_left(0, 0) == 0);
  CHECK(inst.rank_left(0, 1) == 0);
  CHECK(inst.rank_left(1, 1) == 1);
}

TEST_CASE("parse reports the offending line") {
  try {
    support::mk("problem: ha\nleft: a1\nright: h1\nnonsense\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
  }
}

TEST_CASE("parse rejects structural mistakes") {
  CHECK_THROWS_AS(support::mk("left: a1\nright: h1\npref a1: h1\n"), ValidationError);
  CHECK_THROWS_AS(support::mk("problem: ha\nleft: a1\nright: a1\npref a1: a1\n"),
                  ValidationError);
  CHECK_THROWS_AS(support::mk("problem: ha\nleft: a1\nright: h1 h2\npref a1: h1 > h1\n"),
                  ValidationError);
  CHECK_THROWS_AS(support::mk("problem: ha\nleft: a1\nright: h1 h2\npref a1: (h1 h2)\n"),
                  ValidationError);  // ties need hat
  CHECK_THROWS_AS(support::mk("problem: ha\nleft: a1\nright: h1 h2\npref a1: h1\n"),
                  ValidationError);  // h2 isolated
  CHECK_THROWS_AS(
      support::mk("problem: smi\nleft: u1\nright: v1\npref u1: v1\n"),
      ValidationError);  // missing right list
  CHECK_THROWS_AS(
      support::mk(
          "problem: smi\nleft: u1 u2\nright: v1 v2\n"
          "pref u1: v1\npref u2: v2\npref v1: u1 > u2\npref v2: u2\n"),
      ValidationError);  // v1 lists u2 but u2 does not list v1
}

TEST_CASE("serialize then parse is the identity") {
  for (const char* text : {support::kI1, support::kI2, support::kI3, support::kI4}) {
    Instance inst = support::mk(text);
    Instance back = support::mk(serialize_instance(inst));
    CHECK(inst == back);
  }
}

TEST_CASE("augmentation appends one synthetic right per left") {
  Instance inst = support::aug(support::kI1);
  REQUIRE(inst.augmented());
  CHECK(inst.n_right() == 4);
  CHECK(inst.n_original_right() == 2);
  CHECK(inst.right_name(2) == "l(a1)");
  CHECK(inst.is_synthetic(2));
  CHECK_FALSE(inst.is_synthetic(1));
  // strictly last, degree 1
  CHECK(inst.rank_left(0, 2) == 2);
  CHECK(inst.graph().degree(right_vertex(2)) == 1);
  CHECK_THROWS_AS(add_last_resorts(inst), AlreadyAugmented);
  CHECK_THROWS_AS(add_last_resorts(support::mk(support::kI4)), BadParameters);
  // canonical form hides the synthetics
  CHECK(serialize_instance(inst) == serialize_instance(support::mk(support::kI1)));
}

TEST_CASE("digest is stable and augmentation-independent") {
  Instance inst = support::mk(support::kI1);
  CHECK(instance_digest(inst) == instance_digest(support::aug(support::kI1)));
  CHECK(instance_digest(inst) != instance_digest(support::mk(support::kI2)));
  // frozen: any change here means the canonical form changed
  CHECK(instance_digest(inst) == 0xdfc9c5a189c65bb5ULL);
}

TEST_CASE("random instances are deterministic in the seed and valid") {
  RandomInstanceParams p;
  p.seed = 42;
  p.variant = Variant::HAT;
  p.n_left = 4;
  p.n_right = 3;
  p.edge_density = 0.7;
  p.tie_prob = 0.4;
  Instance a = random_instance(p);
  Instance b = random_instance(p);
  CHECK(a == b);
  p.seed = 43;
  CHECK_FALSE(a == random_instance(p));

  // smi stays strict and mutual
  p.variant = Variant::SMI;
  p.tie_prob = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    p.seed = s;
    Instance inst = random_instance(p);  // constructor revalidates
    for (const Edge& e : inst.edges()) {
      CHECK(inst.rank_left(e.left, e.right) >= 0);
      CHECK(inst.rank_right(e.right, e.left) >= 0);
    }
  }
}

TEST_CASE("matching parser completes one-sided candidates with last resorts") {
  Instance inst = support::aug(support::kI1);
  Matching m = parse_matching(inst, "a1 h2");
  CHECK(m.size() == 2);
  CHECK(*m.left_partner(0) == 1);
  CHECK(*m.left_partner(1) == 3);  // l(a2)
  CHECK(serialize_matching(inst, m) == "a1 h2; a2 l(a2)");

  CHECK_THROWS_AS(parse_matching(inst, "a1 h1; a2 h1"), VertexReused);
  CHECK_THROWS_AS(parse_matching(inst, "a1 a2"), ParseError);  // a2 is not a right vertex
  CHECK_THROWS_AS(parse_matching(inst, "a1 l(a2)"), NotAnEdge);
  CHECK_THROWS_AS(parse_matching(inst, "bogus h1"), ParseError);

  Instance smi = support::mk(support::kI4);
  Matching partial = parse_matching(smi, "u2 v1");
  CHECK(partial.size() == 1);
  CHECK_FALSE(partial.left_partner(0));
}
