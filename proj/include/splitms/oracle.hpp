// Exhaustive-enumeration oracles for desk-scale verification.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "splitms/factor_graph.hpp"

namespace splitms {

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 24;

inline std::uint64_t joint_state_count(const FactorGraph& g) {
  std::uint64_t total = 1;
  for (int i = 0; i < g.num_vars(); ++i) {
    total *= static_cast<std::uint64_t>(g.card(i));
    if (total > (std::uint64_t{1} << 62)) return std::uint64_t{1} << 62;
  }
  return total;
}

struct BruteForceResult {
  double value = kInf;
  std::vector<Assignment> minimizers;
};

inline BruteForceResult brute_force_minimize(const FactorGraph& g,
                                             std::uint64_t cap = kDefaultStateCap) {
  if (joint_state_count(g) > cap)
    throw std::runtime_error("brute_force_minimize: state space exceeds cap");
  std::vector<int> cards(g.num_vars());
  for (int i = 0; i < g.num_vars(); ++i) cards[i] = g.card(i);
  BruteForceResult res;
  Assignment x(g.num_vars(), 0);
  do {
    double v = evaluate_objective(g, x);
    if (v < res.value) {
      res.value = v;
      res.minimizers.clear();
    }
    if (v == res.value && v < kInf) res.minimizers.push_back(x);
  } while (next_state(x, cards));
  if (res.value == kInf)
    throw std::runtime_error("brute_force_minimize: objective is +inf everywhere");
  return res;
}

// f_i(x_i) = min over all assignments with variable i clamped to x_i.
inline std::vector<double> oracle_min_marginals(const FactorGraph& g, int i,
                                                std::uint64_t cap = kDefaultStateCap) {
  if (i < 0 || i >= g.num_vars())
    throw std::invalid_argument("oracle_min_marginals: invalid variable id");
  if (joint_state_count(g) > cap)
    throw std::runtime_error("oracle_min_marginals: state space exceeds cap");
  std::vector<int> cards(g.num_vars());
  for (int k = 0; k < g.num_vars(); ++k) cards[k] = g.card(k);
  std::vector<double> marg(g.card(i), kInf);
  Assignment x(g.num_vars(), 0);
  do {
    double v = evaluate_objective(g, x);
    if (v < marg[x[i]]) marg[x[i]] = v;
  } while (next_state(x, cards));
  return marg;
}

// First assignment (lexicographic scan) with finite objective value.
inline Assignment first_finite_assignment(const FactorGraph& g,
                                          std::uint64_t cap = kDefaultStateCap) {
  if (joint_state_count(g) > cap)
    throw std::runtime_error("first_finite_assignment: state space exceeds cap");
  std::vector<int> cards(g.num_vars());
  for (int i = 0; i < g.num_vars(); ++i) cards[i] = g.card(i);
  Assignment x(g.num_vars(), 0);
  do {
    if (evaluate_objective(g, x) < kInf) return x;
  } while (next_state(x, cards));
  throw std::runtime_error("first_finite_assignment: objective is +inf everywhere");
}

}  // namespace splitms
