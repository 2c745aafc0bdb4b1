#include <catch2/catch_amalgamated.hpp>

#include "graphs.hpp"
#include "splitms/beliefs.hpp"
#include "splitms/covers.hpp"
#include "splitms/engine.hpp"
#include "splitms/oracle.hpp"

using namespace splitms;
using namespace testgraphs;

TEST_CASE("disjoint double copies are 2-covers") {
  CoverMap cm = disjoint_double_cover(g1());
  CoverReport rep = verify_cover(cm);
  REQUIRE(rep.ok);
  CHECK(rep.k == 2);
}

TEST_CASE("the 6-cycle covers the triangle") {
  CoverReport rep = verify_cover(g2_six_cycle_cover());
  REQUIRE(rep.ok);
  CHECK(rep.k == 2);
}

TEST_CASE("broken maps are reported") {
  SECTION("two neighbors with the same image") {
    CoverMap cm = g2_six_cycle_cover();
    cm.fac_map[3] = 2;  // variable 4's neighborhood now misses image 2's twin
    CoverReport rep = verify_cover(cm);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());
  }
  SECTION("potential mismatch") {
    CoverMap cm = disjoint_double_cover(g1());
    cm.cover.phi[2] = {0, 5};
    CHECK_FALSE(verify_cover(cm).ok);
  }
  SECTION("scope position not preserved") {
    CoverMap cm = disjoint_double_cover(g2());
    std::swap(cm.cover.factors[3].scope[0], cm.cover.factors[3].scope[1]);
    cm.cover.rebuild_incidence();
    CHECK_FALSE(verify_cover(cm).ok);
  }
}

TEST_CASE("lift_assignment") {
  SECTION("doubles the objective on the disjoint cover") {
    CoverMap cm = disjoint_double_cover(g1());
    Assignment lift = lift_assignment(cm, {0, 0});
    CHECK(evaluate_objective(cm.cover, lift) == 0.0);
    CHECK(lift == Assignment{0, 0, 0, 0});
  }
  SECTION("on the 6-cycle") {
    CoverMap cm = g2_six_cycle_cover();
    Assignment x = {0, 0, 1};
    CHECK(evaluate_objective(cm.target, x) == 1.0);
    Assignment lift = lift_assignment(cm, x);
    CHECK(evaluate_objective(cm.cover, lift) == 2.0);
    // Restricting to the first fiber reproduces the original.
    for (int i = 0; i < 3; ++i) CHECK(lift[i] == x[i]);
  }
}

TEST_CASE("lifted beliefs preserve both residuals") {
  Rng rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    FactorGraph g = random_loopy(rng, 4, 4);
    SplitParams c = make_uniform_params(g);
    MessageState s = random_messages(rng, g);
    BeliefSet b = compute_beliefs(g, c, s);
    CoverMap cm = disjoint_double_cover(g);
    REQUIRE(verify_cover(cm).ok);
    BeliefSet bh = lift_beliefs(cm, b, 2);
    SplitParams ch = lift_params(cm, c);
    CHECK(std::abs(check_admissible(cm.cover, ch, bh) -
                   check_admissible(g, c, b)) < 1e-12);
    CHECK(std::abs(check_min_consistent(cm.cover, bh) -
                   check_min_consistent(g, b)) < 1e-12);
  }
}

TEST_CASE("certificate on the frustrated triangle") {
  FactorGraph g = g2();
  SplitParams c = make_uniform_params(g);
  RunReport rep = run(g, c, {});
  REQUIRE(rep.status == RunStatus::Converged);
  CoverCertificate cert = build_two_cover_certificate(g, rep.beliefs);
  REQUIRE(verify_cover(cert.cover).ok);
  CHECK(verify_cover(cert.cover).k == 2);
  CHECK(cert.claimed_value == Catch::Approx(0.0).margin(1e-9));
  CHECK(brute_force_minimize(cert.cover.cover).value ==
        Catch::Approx(cert.claimed_value).margin(1e-9));
  // The certificate beats every lift: oracle minimum on G is 1.
  CHECK(brute_force_minimize(g).value == 1.0);
}

TEST_CASE("certificate on graphs with unique estimates") {
  for (FactorGraph g : {g1(), g3()}) {
    SplitParams c = make_uniform_params(g);
    RunReport rep = run(g, c, {});
    REQUIRE(rep.status == RunStatus::Converged);
    REQUIRE(rep.estimate.unique);
    CoverCertificate cert = build_two_cover_certificate(g, rep.beliefs);
    REQUIRE(verify_cover(cert.cover).ok);
    for (bool crossed : cert.crossed) CHECK_FALSE(crossed);
    double target_min = brute_force_minimize(g).value;
    CHECK(cert.claimed_value == Catch::Approx(2.0 * target_min).margin(1e-9));
    CHECK(brute_force_minimize(cert.cover.cover).value ==
          Catch::Approx(cert.claimed_value).margin(1e-9));
  }
}

TEST_CASE("certificate rejects inconsistent inputs") {
  FactorGraph g = g2();
  SplitParams c = make_uniform_params(g);
  BeliefSet b = compute_beliefs(g, c, init_messages(g));
  b.b_var[0][0] += 3.0;  // clearly not min-consistent
  CHECK_THROWS_AS(build_two_cover_certificate(g, b), std::invalid_argument);

  FactorGraph g3card;
  g3card.alphabets = {Alphabet{3}, Alphabet{3}};
  g3card.phi = {{0, 0, 0}, {0, 0, 0}};
  g3card.factors = {{{0, 1}, std::vector<double>(9, 0.0)}};
  g3card.rebuild_incidence();
  BeliefSet dummy = compute_beliefs(g3card, make_ones_params(g3card),
                                    init_messages(g3card));
  CHECK_THROWS_AS(build_two_cover_certificate(g3card, dummy),
                  std::invalid_argument);
}

TEST_CASE("certificate dump names the wiring") {
  FactorGraph g = g2();
  RunReport rep = run(g, make_uniform_params(g), {});
  CoverCertificate cert = build_two_cover_certificate(g, rep.beliefs);
  std::string text = dump_certificate(cert);
  CHECK(text.find("value:") != std::string::npos);
  CHECK((text.find("crossed") != std::string::npos ||
         text.find("parallel") != std::string::npos));
}
