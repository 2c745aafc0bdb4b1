#include <catch2/catch_amalgamated.hpp>

#include "graphs.hpp"
#include "splitms/factor_graph.hpp"
#include "splitms/oracle.hpp"

using namespace splitms;
using namespace testgraphs;

TEST_CASE("validate_graph on a single variable with no factors") {
  FactorGraph g;
  g.alphabets = {Alphabet{3}};
  g.phi = {{0, 0, 0}};
  g.rebuild_incidence();
  auto r = validate_graph(g);
  REQUIRE(r.ok);
  CHECK(r.tree);
  CHECK(r.max_degree == 0);
}

TEST_CASE("validate_graph on the triangle") {
  auto r = validate_graph(g2());
  REQUIRE(r.ok);
  CHECK(r.pairwise);
  CHECK(r.binary);
  CHECK_FALSE(r.tree);
  CHECK(r.max_degree == 2);
}

TEST_CASE("validate_graph rejects bad graphs") {
  SECTION("repeated variable in a scope") {
    FactorGraph g = g1();
    g.factors[0].scope = {1, 1};
    g.rebuild_incidence();
    CHECK_FALSE(validate_graph(g).ok);
  }
  SECTION("unknown variable in a scope") {
    FactorGraph g = g1();
    g.factors[0].scope = {0, 7};
    g.rebuild_incidence();
    CHECK_FALSE(validate_graph(g).ok);
  }
  SECTION("table size mismatch") {
    FactorGraph g = g1();
    g.factors[0].values.pop_back();
    CHECK_FALSE(validate_graph(g).ok);
  }
  SECTION("empty graph") { CHECK_FALSE(validate_graph(FactorGraph{}).ok); }
}

TEST_CASE("evaluate_objective on the two-variable example") {
  FactorGraph g = g1();
  CHECK(evaluate_objective(g, {0, 0}) == 0.0);
  CHECK(evaluate_objective(g, {1, 1}) == 3.0);
  g.factors[0].values = {0, 0, 0, kInf};
  CHECK(evaluate_objective(g, {1, 1}) == kInf);
}

TEST_CASE("brute_force_minimize on the hand-built graphs") {
  auto r1 = brute_force_minimize(g1());
  CHECK(r1.value == 0.0);
  REQUIRE(r1.minimizers.size() == 1);
  CHECK(r1.minimizers[0] == Assignment{0, 0});

  auto r2 = brute_force_minimize(g2());
  CHECK(r2.value == 1.0);
  CHECK(r2.minimizers.size() == 6);

  auto rc = brute_force_minimize(g2_six_cycle_cover().cover);
  CHECK(rc.value == 0.0);
  REQUIRE(rc.minimizers.size() == 2);
  CHECK(rc.minimizers[0] == Assignment{0, 1, 0, 1, 0, 1});
  CHECK(rc.minimizers[1] == Assignment{1, 0, 1, 0, 1, 0});
}

TEST_CASE("oracle_min_marginals") {
  auto m = oracle_min_marginals(g1(), 0);
  CHECK(m == std::vector<double>{0, 1});

  FactorGraph lone;
  lone.alphabets = {Alphabet{2}};
  lone.phi = {{1, 0}};
  lone.rebuild_incidence();
  CHECK(oracle_min_marginals(lone, 0) == std::vector<double>{1, 0});

  for (int i = 0; i < 3; ++i)
    CHECK(oracle_min_marginals(g2(), i) == std::vector<double>{1, 1});
}

TEST_CASE("split_factor_graph preserves the objective") {
  FactorGraph g = g1();
  FactorGraph s = split_factor_graph(g, 0, 2);
  REQUIRE(s.num_factors() == 2);
  CHECK(evaluate_objective(s, {1, 1}) == 3.0);

  FactorGraph id = split_factor_graph(g, 0, 1);
  CHECK(id.factors[0].values == g.factors[0].values);

  FactorGraph t = split_factor_graph(g2(), 1, 3);
  Assignment x(3, 0);
  std::vector<int> cards = {2, 2, 2};
  do {
    CHECK(evaluate_objective(t, x) ==
          Catch::Approx(evaluate_objective(g2(), x)).margin(1e-12));
  } while (next_state(x, cards));
}

TEST_CASE("split_variable_graph preserves the minimum") {
  CHECK(split_variable_graph(g1(), 0, 1).num_vars() == 2);

  FactorGraph s = split_variable_graph(g1(), 0, 2);
  REQUIRE(s.num_vars() == 3);
  auto r = brute_force_minimize(s);
  CHECK(r.value == 0.0);
  for (const auto& x : r.minimizers) CHECK(x[0] == x[2]);

  CHECK(brute_force_minimize(split_variable_graph(g2(), 0, 2)).value == 1.0);
}

TEST_CASE("splitting transforms on random graphs") {
  Rng rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    FactorGraph g = random_loopy(rng, 4, 5, 3);
    double base = brute_force_minimize(g).value;
    int a = static_cast<int>(rng() % g.num_factors());
    int i = static_cast<int>(rng() % g.num_vars());
    for (int k = 1; k <= 3; ++k) {
      FactorGraph fs = split_factor_graph(g, a, k);
      Assignment x(g.num_vars(), 0);
      std::vector<int> cards(g.num_vars());
      for (int v = 0; v < g.num_vars(); ++v) cards[v] = g.card(v);
      do {
        CHECK(evaluate_objective(fs, x) ==
              Catch::Approx(evaluate_objective(g, x)).margin(1e-12));
      } while (next_state(x, cards));
      CHECK(brute_force_minimize(split_variable_graph(g, i, k)).value ==
            Catch::Approx(base).margin(1e-12));
    }
    auto marg = oracle_min_marginals(g, i);
    double m = kInf;
    for (double v : marg) m = std::min(m, v);
    CHECK(m == base);
  }
}
