// Beliefs from messages, the reparameterization (admissibility) and
// min-consistency checks, estimate extraction, and the dual lower bound.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "splitms/factor_graph.hpp"
#include "splitms/messages.hpp"
#include "splitms/oracle.hpp"
#include "splitms/params.hpp"

namespace splitms {

struct BeliefSet {
  std::vector<std::vector<double>> b_var;  // per variable, over X_i
  std::vector<std::vector<double>> b_fac;  // per factor, table layout of psi_a
  double kappa = 0.0;  // additive constant of the admissibility identity
};

struct Estimate {
  std::vector<std::vector<int>> argmin_sets;  // per-variable tied minimizers
  bool unique = false;
  Assignment assignment;  // present iff unique
};

// The c-weighted reparameterization
//   S(x) = sum_i c_i b_i(x_i) + sum_a c_a [b_a(x_a) - sum_{k in a} c_k b_k(x_k)].
inline double reparam_sum(const FactorGraph& g, const SplitParams& c,
                          const BeliefSet& b, const Assignment& x) {
  double total = 0.0;
  for (int i = 0; i < g.num_vars(); ++i)
    total = sat_add(total, c.c_var[i] * b.b_var[i][x[i]]);
  std::vector<int> sub;
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& scope = g.factors[a].scope;
    std::size_t idx = 0;
    for (std::size_t p = 0; p < scope.size(); ++p)
      idx = idx * static_cast<std::size_t>(g.card(scope[p])) +
            static_cast<std::size_t>(x[scope[p]]);
    double inner = b.b_fac[a][idx];
    if (inner == kInf) return kInf;
    for (std::size_t p = 0; p < scope.size(); ++p)
      inner -= c.c_var[scope[p]] * b.b_var[scope[p]][x[scope[p]]];
    total = sat_add(total, c.c_fac[a] * inner);
  }
  return total;
}

// b_i = phi_i/c_i + sum_a c_a m_{a->i};
// b_a = psi_a/c_a + sum_{k in a} c_k [phi_k/c_k + (c_a-1) m_{a->k}
//                                     + sum_{b in dk \ a} c_b m_{b->k}].
// kappa is fitted from f at a reference assignment (all zeros, or the first
// finite assignment when f is +inf there).
inline BeliefSet compute_beliefs(const FactorGraph& g, const SplitParams& c,
                                 const MessageState& state,
                                 std::uint64_t cap = kDefaultStateCap) {
  if (!state.finite())
    throw std::runtime_error("compute_beliefs: message state is not finite");
  BeliefSet b;
  b.b_var.resize(g.num_vars());
  for (int i = 0; i < g.num_vars(); ++i) {
    std::vector<double> v(g.card(i));
    for (int x = 0; x < g.card(i); ++x) v[x] = g.phi[i][x] / c.c_var[i];
    for (int a : g.incidence[i]) {
      int p = scope_position(g, a, i);
      for (int x = 0; x < g.card(i); ++x)
        v[x] = sat_add(v[x], c.c_fac[a] * state.to_var[a][p][x]);
    }
    b.b_var[i] = std::move(v);
  }

  b.b_fac.resize(g.num_factors());
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& f = g.factors[a];
    const auto cards = g.scope_cards(f);
    // Bracketed expression per member variable: the m_{k->a} update formula
    // evaluated on the current messages.
    std::vector<std::vector<double>> bracket(f.scope.size());
    for (std::size_t p = 0; p < f.scope.size(); ++p) {
      int k = f.scope[p];
      std::vector<double> v(g.card(k));
      for (int x = 0; x < g.card(k); ++x)
        v[x] = sat_add(g.phi[k][x] / c.c_var[k],
                       (c.c_fac[a] - 1.0) * state.to_var[a][p][x]);
      for (int beta : g.incidence[k]) {
        if (beta == a) continue;
        int q = scope_position(g, beta, k);
        for (int x = 0; x < g.card(k); ++x)
          v[x] = sat_add(v[x], c.c_fac[beta] * state.to_var[beta][q][x]);
      }
      bracket[p] = std::move(v);
    }
    std::vector<double> table(f.values.size());
    std::vector<int> st(f.scope.size(), 0);
    std::size_t idx = 0;
    do {
      double v = f.values[idx] == kInf ? kInf : f.values[idx] / c.c_fac[a];
      for (std::size_t p = 0; p < f.scope.size(); ++p)
        v = sat_add(v, c.c_var[f.scope[p]] * bracket[p][st[p]]);
      table[idx] = v;
      ++idx;
    } while (next_state(st, cards));
    b.b_fac[a] = std::move(table);
  }

  Assignment x_ref(g.num_vars(), 0);
  if (evaluate_objective(g, x_ref) == kInf) x_ref = first_finite_assignment(g, cap);
  b.kappa = evaluate_objective(g, x_ref) - reparam_sum(g, c, b, x_ref);
  return b;
}

// Max over all assignments of |f(x) - (kappa + S(x))|; +inf on both sides
// counts as residual 0.
inline double check_admissible(const FactorGraph& g, const SplitParams& c,
                               const BeliefSet& b,
                               std::uint64_t cap = kDefaultStateCap) {
  if (joint_state_count(g) > cap)
    throw std::runtime_error("check_admissible: state space exceeds cap");
  std::vector<int> cards(g.num_vars());
  for (int i = 0; i < g.num_vars(); ++i) cards[i] = g.card(i);
  double residual = 0.0;
  Assignment x(g.num_vars(), 0);
  do {
    double lhs = evaluate_objective(g, x);
    double rhs = sat_add(b.kappa, reparam_sum(g, c, b, x));
    if (lhs == kInf && rhs == kInf) continue;
    if (lhs == kInf || rhs == kInf) return kInf;
    residual = std::max(residual, std::abs(lhs - rhs));
  } while (next_state(x, cards));
  return residual;
}

// For each (a, i in a): r(x_i) = min_{x_{a\i}} b_a - b_i(x_i) should be
// constant in x_i.  Returns the worst deviation from constancy.
inline double check_min_consistent(const FactorGraph& g, const BeliefSet& b) {
  double residual = 0.0;
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& f = g.factors[a];
    const auto cards = g.scope_cards(f);
    for (std::size_t p = 0; p < f.scope.size(); ++p) {
      int i = f.scope[p];
      std::vector<double> proj(g.card(i), kInf);
      std::vector<int> st(f.scope.size(), 0);
      std::size_t idx = 0;
      do {
        proj[st[p]] = std::min(proj[st[p]], b.b_fac[a][idx]);
        ++idx;
      } while (next_state(st, cards));
      double lo = kInf, hi = -kInf;
      for (int x = 0; x < g.card(i); ++x) {
        bool pf = proj[x] < kInf, bf = b.b_var[i][x] < kInf;
        if (!pf && !bf) continue;  // both infinite: consistent
        if (pf != bf) return kInf;
        double r = proj[x] - b.b_var[i][x];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      if (hi > lo) residual = std::max(residual, hi - lo);
    }
  }
  return residual;
}

inline Estimate extract_estimate(const BeliefSet& b, double tie_tol = 1e-9) {
  Estimate e;
  e.unique = true;
  for (const auto& v : b.b_var) {
    double m = kInf;
    for (double x : v) m = std::min(m, x);
    std::vector<int> ties;
    for (int x = 0; x < static_cast<int>(v.size()); ++x)
      if (v[x] <= m + tie_tol) ties.push_back(x);
    if (ties.size() != 1) e.unique = false;
    e.argmin_sets.push_back(std::move(ties));
  }
  if (e.unique)
    for (const auto& s : e.argmin_sets) e.assignment.push_back(s.front());
  return e;
}

// LB(m) = kappa + sum_i c_i (1 - sum_a c_a) min b_i + sum_a c_a min b_a.
// Valid only under the GlobalSign sign conditions.
inline double lower_bound(const FactorGraph& g, const SplitParams& c,
                          const BeliefSet& b) {
  OptimalityClass cls = classify_params(c, g);
  if (!cls.global_sign)
    throw std::invalid_argument("lower_bound: params do not satisfy GlobalSign");
  auto vec_min = [](const std::vector<double>& v) {
    double m = kInf;
    for (double x : v) m = std::min(m, x);
    return m;
  };
  double lb = b.kappa;
  for (int i = 0; i < g.num_vars(); ++i) {
    double s = 0.0;
    for (int a : g.incidence[i]) s += c.c_fac[a];
    double coeff = c.c_var[i] * (1.0 - s);
    if (coeff != 0.0) lb = sat_add(lb, coeff * vec_min(b.b_var[i]));
  }
  for (int a = 0; a < g.num_factors(); ++a)
    lb = sat_add(lb, c.c_fac[a] * vec_min(b.b_fac[a]));
  return lb;
}

}  // namespace splitms
