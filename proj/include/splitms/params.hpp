// The splitting parameter vector c, conical-combination weights d, and
// classification of the optimality/convergence guarantees a given c carries.
#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "splitms/factor_graph.hpp"

namespace splitms {

struct SplitParams {
  std::vector<double> c_var;  // one nonzero real per variable
  std::vector<double> c_fac;  // one nonzero real per factor
  // Set when an explicit conical decomposition of f is known for these
  // parameters (the tree-based TRMP construction).
  bool conical_witness = false;
};

struct ConicalWeights {
  std::vector<double> d_var;                 // d_ii
  std::vector<double> d_fac;                 // d_aa
  std::vector<std::vector<double>> d_pair;   // d_ia, per factor per scope position
};

enum class OptLevel { None, LocalOnly, GlobalSign, GlobalConical };

inline const char* to_string(OptLevel lvl) {
  switch (lvl) {
    case OptLevel::GlobalConical: return "GlobalConical";
    case OptLevel::GlobalSign: return "GlobalSign";
    case OptLevel::LocalOnly: return "LocalOnly";
    default: return "None";
  }
}

struct OptimalityClass {
  OptLevel level = OptLevel::None;
  bool global_sign = false;       // c_a > 0 and (1 - sum_a c_a) c_i >= 0
  bool local_only = false;        // each single-variable slice has a conical form
  bool async_convergent = false;  // c_i = 1, c_a > 0, sum_{a in di} c_a <= 1
  bool standard_minsum = false;   // c identically 1
  // First variable violating the GlobalSign sign condition, with the value
  // of (1 - sum_a c_a) c_i there; -1 when none.
  int sign_violation_var = -1;
  double sign_violation_value = 0.0;
};

inline void validate_params(const SplitParams& c, const FactorGraph& g) {
  if (static_cast<int>(c.c_var.size()) != g.num_vars())
    throw std::invalid_argument("params: c_var size mismatch");
  if (static_cast<int>(c.c_fac.size()) != g.num_factors())
    throw std::invalid_argument("params: c_fac size mismatch");
  for (double v : c.c_var)
    if (v == 0.0 || !std::isfinite(v))
      throw std::invalid_argument("params: c_var entry zero or non-finite");
  for (double v : c.c_fac)
    if (v == 0.0 || !std::isfinite(v))
      throw std::invalid_argument("params: c_fac entry zero or non-finite");
}

inline SplitParams make_ones_params(const FactorGraph& g) {
  return {std::vector<double>(g.num_vars(), 1.0),
          std::vector<double>(g.num_factors(), 1.0), false};
}

// c_i = 1, c_a = 1/d with d the maximum variable degree; always satisfies
// the asynchronous convergence conditions.
inline SplitParams make_uniform_params(const FactorGraph& g) {
  if (g.num_factors() == 0)
    throw std::invalid_argument("make_uniform_params: graph has no factors");
  int d = 0;
  for (const auto& nb : g.incidence) d = std::max(d, static_cast<int>(nb.size()));
  SplitParams p;
  p.c_var.assign(g.num_vars(), 1.0);
  p.c_fac.assign(g.num_factors(), 1.0 / static_cast<double>(d));
  return p;
}

struct WeightedTree {
  std::vector<int> edges;  // factor indices forming a spanning tree
  double probability = 0.0;
};

// c_i = 1, c_a = Pr[a in T] over the given spanning-tree distribution.
inline SplitParams make_trmp_params(const FactorGraph& g,
                                    const std::vector<WeightedTree>& trees) {
  for (const auto& f : g.factors)
    if (f.scope.size() != 2)
      throw std::invalid_argument("make_trmp_params: graph is not pairwise");
  if (trees.empty()) throw std::invalid_argument("make_trmp_params: no trees");
  double total = 0.0;
  for (const auto& t : trees) {
    if (t.probability < 0.0)
      throw std::invalid_argument("make_trmp_params: negative probability");
    total += t.probability;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("make_trmp_params: probabilities do not sum to 1");
  // Each edge set must be a spanning tree of the variable graph.
  for (const auto& t : trees) {
    if (static_cast<int>(t.edges.size()) != g.num_vars() - 1)
      throw std::invalid_argument("make_trmp_params: edge set is not spanning");
    std::vector<int> parent(g.num_vars());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int e : t.edges) {
      if (e < 0 || e >= g.num_factors())
        throw std::invalid_argument("make_trmp_params: bad factor index in tree");
      int a = find(g.factors[e].scope[0]), b = find(g.factors[e].scope[1]);
      if (a == b) throw std::invalid_argument("make_trmp_params: tree has a cycle");
      parent[a] = b;
    }
  }
  SplitParams p;
  p.c_var.assign(g.num_vars(), 1.0);
  p.c_fac.assign(g.num_factors(), 0.0);
  for (const auto& t : trees)
    for (int e : t.edges) p.c_fac[e] += t.probability;
  for (int a = 0; a < g.num_factors(); ++a)
    if (p.c_fac[a] == 0.0)
      throw std::invalid_argument(
          "make_trmp_params: edge " + std::to_string(a) +
          " has zero appearance probability");
  p.conical_witness = true;
  return p;
}

inline OptimalityClass classify_params(const SplitParams& c, const FactorGraph& g) {
  validate_params(c, g);
  OptimalityClass out;

  out.standard_minsum = true;
  for (double v : c.c_var)
    if (v != 1.0) out.standard_minsum = false;
  for (double v : c.c_fac)
    if (v != 1.0) out.standard_minsum = false;

  bool all_fac_positive = true;
  for (double v : c.c_fac)
    if (v <= 0.0) all_fac_positive = false;

  out.global_sign = all_fac_positive;
  out.async_convergent = all_fac_positive;
  out.local_only = true;
  for (int i = 0; i < g.num_vars(); ++i) {
    double s = 0.0;
    bool local_fac_positive = true;
    for (int a : g.incidence[i]) {
      s += c.c_fac[a];
      if (c.c_fac[a] <= 0.0) local_fac_positive = false;
    }
    double sign_val = (1.0 - s) * c.c_var[i];
    if (sign_val < 0.0) {
      out.global_sign = false;
      if (out.sign_violation_var < 0) {
        out.sign_violation_var = i;
        out.sign_violation_value = sign_val;
      }
    }
    if (c.c_var[i] != 1.0 || s > 1.0) out.async_convergent = false;
    // The slice c_i b_i + sum_a c_a [b_a - c_i b_i] admits nonnegative
    // weights d iff every incident c_a is positive and
    // c_i (1 - s) + s >= 0 (take d_ia in [0, c_a] to absorb the deficit).
    if (!local_fac_positive || c.c_var[i] * (1.0 - s) + s < 0.0)
      out.local_only = false;
  }
  if (!all_fac_positive) out.async_convergent = false;

  if (c.conical_witness)
    out.level = OptLevel::GlobalConical;
  else if (out.global_sign)
    out.level = OptLevel::GlobalSign;
  else if (out.local_only)
    out.level = OptLevel::LocalOnly;
  else
    out.level = OptLevel::None;
  return out;
}

// c_a = d_aa + sum_{i in a} d_ia;  c_i = (d_ii - sum_a d_ia)/(1 - sum_a c_a),
// with c_i = 1 free choice when the denominator vanishes (which then forces
// d_ii = sum_a d_ia).
inline SplitParams params_from_conical(const ConicalWeights& d, const FactorGraph& g) {
  if (static_cast<int>(d.d_var.size()) != g.num_vars() ||
      static_cast<int>(d.d_fac.size()) != g.num_factors() ||
      static_cast<int>(d.d_pair.size()) != g.num_factors())
    throw std::invalid_argument("params_from_conical: size mismatch");
  SplitParams c;
  c.c_var.assign(g.num_vars(), 1.0);
  c.c_fac.assign(g.num_factors(), 0.0);
  for (int a = 0; a < g.num_factors(); ++a) {
    if (d.d_pair[a].size() != g.factors[a].scope.size())
      throw std::invalid_argument("params_from_conical: d_pair size mismatch");
    double ca = d.d_fac[a];
    for (double v : d.d_pair[a]) ca += v;
    if (ca == 0.0)
      throw std::invalid_argument("params_from_conical: c_a = 0 at factor " +
                                  std::to_string(a));
    c.c_fac[a] = ca;
  }
  for (int i = 0; i < g.num_vars(); ++i) {
    double s = 0.0, dsum = 0.0;
    for (int a : g.incidence[i]) {
      s += c.c_fac[a];
      const auto& scope = g.factors[a].scope;
      for (std::size_t p = 0; p < scope.size(); ++p)
        if (scope[p] == i) dsum += d.d_pair[a][p];
    }
    double denom = 1.0 - s;
    double num = d.d_var[i] - dsum;
    if (std::abs(denom) <= 1e-12) {
      if (std::abs(num) > 1e-12)
        throw std::invalid_argument(
            "params_from_conical: denominator zero with d_ii != sum d_ia at variable " +
            std::to_string(i));
      c.c_var[i] = 1.0;
    } else {
      c.c_var[i] = num / denom;
      if (c.c_var[i] == 0.0)
        throw std::invalid_argument("params_from_conical: c_i = 0 at variable " +
                                    std::to_string(i));
    }
  }
  c.conical_witness = true;
  return c;
}

// Canonical nonnegative d for GlobalSign parameters: d_aa = c_a, d_ia = 0,
// d_ii = (1 - sum_a c_a) c_i.  Empty when GlobalSign fails.
inline std::optional<ConicalWeights> conical_from_params(const SplitParams& c,
                                                         const FactorGraph& g) {
  OptimalityClass cls = classify_params(c, g);
  if (!cls.global_sign) return std::nullopt;
  ConicalWeights d;
  d.d_fac = c.c_fac;
  d.d_pair.resize(g.num_factors());
  for (int a = 0; a < g.num_factors(); ++a)
    d.d_pair[a].assign(g.factors[a].scope.size(), 0.0);
  d.d_var.assign(g.num_vars(), 0.0);
  for (int i = 0; i < g.num_vars(); ++i) {
    double s = 0.0;
    for (int a : g.incidence[i]) s += c.c_fac[a];
    d.d_var[i] = (1.0 - s) * c.c_var[i];
  }
  return d;
}

}  // namespace splitms
