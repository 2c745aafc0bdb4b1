#include <catch2/catch_amalgamated.hpp>

#include "graphs.hpp"
#include "splitms/beliefs.hpp"
#include "splitms/comptree.hpp"
#include "splitms/engine.hpp"

using namespace splitms;
using namespace testgraphs;

namespace {

// Belief at variable i after t zero-initialized synchronous sweeps,
// min-normalized.
std::vector<double> engine_belief(const FactorGraph& g, const SplitParams& c,
                                  int i, int t) {
  MessageState s = init_messages(g);
  for (int k = 0; k < t; ++k) s = sync_sweep(g, c, s);
  BeliefSet b = compute_beliefs(g, c, s);
  std::vector<double> v = b.b_var[i];
  min_normalize(v);
  return v;
}

void compare(const FactorGraph& g, const SplitParams& c, int i, int t,
             double tol) {
  CompTree tree = build_computation_tree(g, c, i, t);
  std::vector<double> tv = tree_root_belief(g, c, tree);
  std::vector<double> ev = engine_belief(g, c, i, t);
  REQUIRE(tv.size() == ev.size());
  for (std::size_t x = 0; x < tv.size(); ++x)
    CHECK(tv[x] == Catch::Approx(ev[x]).margin(tol));
}

}  // namespace

TEST_CASE("depth-zero tree is a single node") {
  FactorGraph g = g1();
  SplitParams c{{2.0, 1.0}, {1.0}, false};
  CompTree tree = build_computation_tree(g, c, 0, 0);
  CHECK(tree.size == 1);
  CHECK(tree.root.children.empty());
  // phi_0 / c_0 = (0, 0.5), already min-normalized.
  CHECK(tree_root_belief(g, c, tree) == std::vector<double>{0, 0.5});
}

TEST_CASE("unit parameters prune every self-return branch") {
  FactorGraph g = g1();
  SplitParams c = make_ones_params(g);
  CompTree tree = build_computation_tree(g, c, 0, 2);
  // Path: x0 - factor - x1; the (c-1)-weighted returns vanish.
  CHECK(tree.size == 3);
  REQUIRE(tree.root.children.size() == 1);
  const auto& fac = tree.root.children[0];
  CHECK(fac.is_factor);
  REQUIRE(fac.children.size() == 1);
  CHECK(fac.children[0].orig == 1);
  CHECK_FALSE(fac.children[0].self_return);
}

TEST_CASE("generic parameters materialize weighted return branches") {
  FactorGraph g = g2();
  SplitParams c;
  c.c_var = {1.1, 0.9, 1.3};
  c.c_fac = {0.7, 0.8, 0.6};
  CompTree tree = build_computation_tree(g, c, 0, 2);
  // Root x0 has factor children for both incident edges.
  REQUIRE(tree.root.children.size() == 2);
  for (const auto& fac : tree.root.children) {
    bool has_self = false, has_fresh = false;
    for (const auto& v : fac.children) {
      if (v.self_return) {
        CHECK(v.orig == 0);
        has_self = true;
      } else {
        has_fresh = true;
      }
    }
    CHECK(has_self);
    CHECK(has_fresh);
  }
}

TEST_CASE("tree root belief matches the engine on the hand-built graphs") {
  compare(g1(), make_ones_params(g1()), 0, 1, 1e-12);
  SplitParams u = make_uniform_params(g2());
  for (int t = 0; t <= 4; ++t)
    for (int i = 0; i < 3; ++i) compare(g2(), u, i, t, 1e-9);
}

TEST_CASE("tree root belief matches the engine on random graphs") {
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    FactorGraph g = random_loopy(rng, 4, 4, 3);
    SplitParams c = random_positive_params(rng, g);
    for (int t = 0; t <= 3; ++t)
      for (int i = 0; i < g.num_vars(); ++i) compare(g, c, i, t, 1e-9);
  }
}

TEST_CASE("mixed-sign parameters exercise the min/max rule") {
  FactorGraph g = g2();
  SplitParams c;
  c.c_var = {1.0, 1.0, 1.0};
  c.c_fac = {-0.5, 0.8, 0.6};
  for (int t = 0; t <= 3; ++t)
    for (int i = 0; i < 3; ++i) compare(g, c, i, t, 1e-9);

  SplitParams c2;
  c2.c_var = {-1.0, 2.0, 1.5};
  c2.c_fac = {0.5, -0.7, 0.9};
  for (int t = 0; t <= 3; ++t)
    for (int i = 0; i < 3; ++i) compare(g, c2, i, t, 1e-9);
}

TEST_CASE("depth and size limits") {
  FactorGraph g = g2();
  SplitParams c = make_uniform_params(g);
  CHECK_THROWS_AS(build_computation_tree(g, c, 0, 9), std::invalid_argument);
  CHECK_THROWS_AS(build_computation_tree(g, c, -1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_computation_tree(g, c, 0, 8, 10), std::runtime_error);
}

TEST_CASE("debug dump lists the root and its children") {
  FactorGraph g = g1();
  SplitParams c = make_ones_params(g);
  CompTree tree = build_computation_tree(g, c, 0, 2);
  std::string text = dump_tree(g, tree);
  CHECK(text.find("var 0") != std::string::npos);
  CHECK(text.find("factor 0") != std::string::npos);
}
