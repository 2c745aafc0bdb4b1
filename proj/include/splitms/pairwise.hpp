// Specialized pairwise binary path: a mirror of a FactorGraph whose factors
// all touch exactly two binary variables, the simplified single-formula
// message update, and extension of a partial (fixed-variable) solution to a
// global minimizer.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitms/beliefs.hpp"
#include "splitms/factor_graph.hpp"
#include "splitms/messages.hpp"
#include "splitms/oracle.hpp"
#include "splitms/params.hpp"

namespace splitms {

struct PairwiseEdge {
  int i = 0, j = 0;             // endpoints, scope order (i first)
  std::vector<double> psi;      // 2x2 table, index 2*x_i + x_j
  double c = 1.0;               // the edge's splitting parameter
};

// All variables binary with c_i = 1; one edge per factor.
struct PairwiseModel {
  std::vector<std::vector<double>> phi;  // length-2 field per variable
  std::vector<PairwiseEdge> edges;
  std::vector<std::vector<int>> incidence;  // variable -> edge indices

  int num_vars() const { return static_cast<int>(phi.size()); }

  void rebuild_incidence() {
    incidence.assign(phi.size(), {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
      incidence[edges[e].i].push_back(static_cast<int>(e));
      incidence[edges[e].j].push_back(static_cast<int>(e));
    }
  }
};

inline PairwiseModel pairwise_from_graph(const FactorGraph& g,
                                         const SplitParams& c) {
  validate_params(c, g);
  for (double v : c.c_var)
    if (v != 1.0)
      throw std::invalid_argument("pairwise_from_graph: requires c_i = 1");
  PairwiseModel m;
  m.phi = g.phi;
  for (int i = 0; i < g.num_vars(); ++i)
    if (g.card(i) != 2)
      throw std::invalid_argument("pairwise_from_graph: variables must be binary");
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& f = g.factors[a];
    if (f.scope.size() != 2)
      throw std::invalid_argument("pairwise_from_graph: factors must be pairwise");
    m.edges.push_back({f.scope[0], f.scope[1], f.values, c.c_fac[a]});
  }
  m.rebuild_incidence();
  return m;
}

inline FactorGraph graph_from_pairwise(const PairwiseModel& m,
                                       SplitParams* c_out = nullptr) {
  FactorGraph g;
  g.alphabets.assign(m.phi.size(), Alphabet{2});
  g.phi = m.phi;
  for (const auto& e : m.edges) g.factors.push_back({{e.i, e.j}, e.psi});
  g.rebuild_incidence();
  if (c_out) {
    c_out->c_var.assign(m.phi.size(), 1.0);
    c_out->c_fac.clear();
    for (const auto& e : m.edges) c_out->c_fac.push_back(e.c);
  }
  return g;
}

// Directed messages: msg[e][0] = m_{i->j}, msg[e][1] = m_{j->i}.
struct PairwiseState {
  std::vector<std::vector<std::vector<double>>> msg;
};

inline PairwiseState init_pairwise(const PairwiseModel& m) {
  PairwiseState s;
  s.msg.assign(m.edges.size(), {{0.0, 0.0}, {0.0, 0.0}});
  return s;
}

// m_{i->j}(x_j) = min_{x_i}[ phi_i(x_i) + psi_ij(x_i,x_j)/c_ij
//                            + (c_ij - 1) m_{j->i}(x_i)
//                            + sum_{k in di \ j} c_ki m_{k->i}(x_i) ],
// min-normalized.  Equals the general engine's variable-to-factor update
// composed with the factor-to-variable update on the corresponding factor.
inline std::vector<double> pairwise_update_on_edge(const PairwiseModel& m,
                                                   const PairwiseState& s, int e,
                                                   int src) {
  const auto& ed = m.edges[e];
  // Incoming-to-src message along this edge (the reverse direction).
  const std::vector<double>& back = ed.i == src ? s.msg[e][1] : s.msg[e][0];
  std::vector<double> unary(2);
  for (int xs = 0; xs < 2; ++xs) {
    double v = sat_add(m.phi[src][xs], (ed.c - 1.0) * back[xs]);
    for (int o : m.incidence[src]) {
      if (o == e) continue;
      const auto& oe = m.edges[o];
      const std::vector<double>& in = oe.i == src ? s.msg[o][1] : s.msg[o][0];
      v = sat_add(v, oe.c * in[xs]);
    }
    unary[xs] = v;
  }
  std::vector<double> out(2, kInf);
  for (int xd = 0; xd < 2; ++xd)
    for (int xs = 0; xs < 2; ++xs) {
      std::size_t idx = ed.i == src ? static_cast<std::size_t>(2 * xs + xd)
                                    : static_cast<std::size_t>(2 * xd + xs);
      double t = ed.psi[idx] == kInf ? kInf : ed.psi[idx] / ed.c;
      out[xd] = std::min(out[xd], sat_add(t, unary[xs]));
    }
  min_normalize(out);
  return out;
}

// Endpoint-addressed form.  Parallel edges between the same pair are
// ambiguous here; use pairwise_update_on_edge to pick one explicitly.
inline std::vector<double> pairwise_update(const PairwiseModel& m,
                                           const PairwiseState& s, int src,
                                           int dst) {
  int e = -1;
  for (int cand : m.incidence[src]) {
    const auto& ed = m.edges[cand];
    if ((ed.i == src && ed.j == dst) || (ed.j == src && ed.i == dst)) {
      if (e >= 0)
        throw std::invalid_argument(
            "pairwise_update: multiple edges between the variables; "
            "address the edge by index");
      e = cand;
    }
  }
  if (e < 0)
    throw std::invalid_argument("pairwise_update: no edge between the variables");
  return pairwise_update_on_edge(m, s, e, src);
}

// One full sweep over all directed edges in index order.
inline void pairwise_sweep(const PairwiseModel& m, PairwiseState& s) {
  PairwiseState prev = s;
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    int ei = static_cast<int>(e);
    s.msg[e][0] = pairwise_update_on_edge(m, prev, ei, m.edges[e].i);
    s.msg[e][1] = pairwise_update_on_edge(m, prev, ei, m.edges[e].j);
  }
}

struct ExtensionResult {
  bool ok = false;
  Assignment assignment;  // present iff ok
  int violating_var = -1;
  std::string message;
};

// Variables with a unique belief minimizer are fixed; the remainder are
// completed by brute force conditioned on the fixed states.  Applicable when
// every free neighbor of a fixed variable has a constant belief vector.
inline ExtensionResult extend_partial_solution(const FactorGraph& g,
                                               const BeliefSet& b,
                                               double tie_tol = 1e-9,
                                               double const_tol = 1e-9,
                                               std::uint64_t cap = kDefaultStateCap) {
  ValidationReport vr = validate_graph(g);
  if (!vr.pairwise || !vr.binary)
    throw std::invalid_argument(
        "extend_partial_solution: graph must be pairwise with binary alphabets");
  Estimate est = extract_estimate(b, tie_tol);
  const int n = g.num_vars();
  std::vector<bool> fixed(n);
  for (int i = 0; i < n; ++i) fixed[i] = est.argmin_sets[i].size() == 1;

  ExtensionResult res;
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& scope = g.factors[a].scope;
    bool touches_fixed = false;
    for (int i : scope) touches_fixed = touches_fixed || fixed[i];
    if (!touches_fixed) continue;
    for (int j : scope) {
      if (fixed[j]) continue;
      double spread = 0.0;
      for (double v : b.b_var[j])
        for (double w : b.b_var[j]) spread = std::max(spread, v - w);
      if (spread > const_tol) {
        res.violating_var = j;
        res.message = "variable " + std::to_string(j) +
                      " neighbors a fixed variable but its belief is neither "
                      "uniquely minimized nor constant";
        return res;
      }
    }
  }

  std::vector<int> free_vars;
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) free_vars.push_back(i);
  std::uint64_t states = 1;
  for (std::size_t q = 0; q < free_vars.size(); ++q) {
    states *= 2;
    if (states > cap)
      throw std::runtime_error("extend_partial_solution: free state space exceeds cap");
  }

  Assignment x(n, 0);
  for (int i = 0; i < n; ++i)
    if (fixed[i]) x[i] = est.argmin_sets[i][0];
  double best = kInf;
  Assignment best_x;
  std::vector<int> st(free_vars.size(), 0);
  std::vector<int> cards(free_vars.size(), 2);
  do {
    for (std::size_t q = 0; q < free_vars.size(); ++q) x[free_vars[q]] = st[q];
    double v = evaluate_objective(g, x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  } while (next_state(st, cards));
  if (best == kInf) {
    res.message = "no finite completion exists";
    return res;
  }
  res.ok = true;
  res.assignment = std::move(best_x);
  return res;
}

}  // namespace splitms
