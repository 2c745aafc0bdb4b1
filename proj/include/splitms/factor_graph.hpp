// Factor graph representation for min-sum objectives
//   f(x) = sum_i phi_i(x_i) + sum_a psi_a(x_a)
// with finite alphabets and extended-real potentials (+inf allowed).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitms {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Saturating extended-real addition: +inf absorbs everything.
inline double sat_add(double a, double b) {
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

struct Alphabet {
  int cardinality = 2;  // states are 0..cardinality-1
};

// Dense potential table over an ordered scope of variable ids.
// Layout is row-major with the LAST scope variable varying fastest.
struct PotentialTable {
  std::vector<int> scope;
  std::vector<double> values;

  std::size_t index(const std::vector<int>& state,
                    const std::vector<int>& cards) const {
    std::size_t idx = 0;
    for (std::size_t p = 0; p < scope.size(); ++p)
      idx = idx * static_cast<std::size_t>(cards[p]) +
            static_cast<std::size_t>(state[p]);
    return idx;
  }
};

using Assignment = std::vector<int>;

struct FactorGraph {
  std::vector<Alphabet> alphabets;          // one per variable
  std::vector<std::vector<double>> phi;     // self-potentials, length card(i)
  std::vector<PotentialTable> factors;      // ordered multiset, duplicates allowed
  std::vector<std::vector<int>> incidence;  // per variable, sorted factor indices

  int num_vars() const { return static_cast<int>(alphabets.size()); }
  int num_factors() const { return static_cast<int>(factors.size()); }
  int card(int i) const { return alphabets[i].cardinality; }

  std::vector<int> scope_cards(const PotentialTable& f) const {
    std::vector<int> c(f.scope.size());
    for (std::size_t p = 0; p < f.scope.size(); ++p) c[p] = card(f.scope[p]);
    return c;
  }

  std::size_t table_size(const PotentialTable& f) const {
    std::size_t s = 1;
    for (int v : f.scope) s *= static_cast<std::size_t>(card(v));
    return s;
  }

  void rebuild_incidence() {
    incidence.assign(alphabets.size(), {});
    for (int a = 0; a < num_factors(); ++a)
      for (int v : factors[a].scope)
        if (v >= 0 && v < num_vars()) incidence[v].push_back(a);
    for (auto& nb : incidence) std::sort(nb.begin(), nb.end());
  }
};

// Iterates joint states of the given scope, last variable fastest.
// Returns false once all states are exhausted.
inline bool next_state(std::vector<int>& state, const std::vector<int>& cards) {
  for (int p = static_cast<int>(state.size()) - 1; p >= 0; --p) {
    if (++state[p] < cards[p]) return true;
    state[p] = 0;
  }
  return false;
}

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> errors;
  bool pairwise = false;      // all factor scopes have size <= 2
  bool binary = false;        // all alphabets have cardinality 2
  bool tree = false;          // factor graph is acyclic
  int max_degree = 0;         // d = max_i |di|

  void fail(std::string msg) {
    ok = false;
    errors.push_back(std::move(msg));
  }
};

inline ValidationReport validate_graph(const FactorGraph& g) {
  ValidationReport r;
  if (g.num_vars() == 0) {
    r.fail("empty graph: no variables");
    return r;
  }
  if (g.phi.size() != g.alphabets.size()) {
    r.fail("phi count does not match variable count");
    return r;
  }
  for (int i = 0; i < g.num_vars(); ++i) {
    if (g.card(i) < 1) r.fail("variable " + std::to_string(i) + ": cardinality < 1");
    if (static_cast<int>(g.phi[i].size()) != g.card(i))
      r.fail("variable " + std::to_string(i) + ": phi length mismatch");
    for (double v : g.phi[i])
      if (std::isnan(v) || v == -kInf)
        r.fail("variable " + std::to_string(i) + ": phi entry is NaN or -inf");
  }
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& f = g.factors[a];
    std::vector<int> seen;
    bool scope_ok = true;
    for (int v : f.scope) {
      if (v < 0 || v >= g.num_vars()) {
        r.fail("factor " + std::to_string(a) + ": scope references unknown variable " +
               std::to_string(v));
        scope_ok = false;
        continue;
      }
      if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
        r.fail("factor " + std::to_string(a) + ": variable " + std::to_string(v) +
               " repeated in scope");
        scope_ok = false;
      }
      seen.push_back(v);
    }
    if (!scope_ok) continue;
    if (f.values.size() != g.table_size(f)) {
      r.fail("factor " + std::to_string(a) + ": table size mismatch");
      continue;
    }
    bool any_finite = false;
    for (double v : f.values) {
      if (std::isnan(v) || v == -kInf) {
        r.fail("factor " + std::to_string(a) + ": table entry is NaN or -inf");
        break;
      }
      if (v < kInf) any_finite = true;
    }
    if (!any_finite)
      r.fail("factor " + std::to_string(a) + ": no finite table entry");
  }
  if (g.incidence.size() != g.alphabets.size()) {
    r.fail("incidence size mismatch");
  } else {
    FactorGraph check = g;
    check.rebuild_incidence();
    if (check.incidence != g.incidence) r.fail("incidence inconsistent with scopes");
  }
  if (!r.ok) return r;

  r.pairwise = true;
  r.binary = true;
  for (const auto& f : g.factors)
    if (f.scope.size() > 2) r.pairwise = false;
  for (int i = 0; i < g.num_vars(); ++i) {
    if (g.card(i) != 2) r.binary = false;
    r.max_degree = std::max(r.max_degree, static_cast<int>(g.incidence[i].size()));
  }

  // Acyclicity of the bipartite (variable, factor) graph: a forest has
  // #edges = #nodes - #components.
  {
    int n = g.num_vars() + g.num_factors();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool acyclic = true;
    for (int a = 0; a < g.num_factors(); ++a)
      for (int v : g.factors[a].scope) {
        int ra = find(g.num_vars() + a), rv = find(v);
        if (ra == rv) {
          acyclic = false;
        } else {
          parent[ra] = rv;
        }
      }
    r.tree = acyclic;
  }
  return r;
}

inline void check_assignment(const FactorGraph& g, const Assignment& x) {
  if (static_cast<int>(x.size()) != g.num_vars())
    throw std::invalid_argument("assignment length mismatch");
  for (int i = 0; i < g.num_vars(); ++i)
    if (x[i] < 0 || x[i] >= g.card(i))
      throw std::invalid_argument("assignment state out of range at variable " +
                                  std::to_string(i));
}

inline double evaluate_objective(const FactorGraph& g, const Assignment& x) {
  check_assignment(g, x);
  double total = 0.0;
  for (int i = 0; i < g.num_vars(); ++i) total = sat_add(total, g.phi[i][x[i]]);
  std::vector<int> sub;
  for (const auto& f : g.factors) {
    sub.clear();
    for (int v : f.scope) sub.push_back(x[v]);
    std::size_t idx = 0;
    for (std::size_t p = 0; p < f.scope.size(); ++p)
      idx = idx * static_cast<std::size_t>(g.card(f.scope[p])) +
            static_cast<std::size_t>(sub[p]);
    total = sat_add(total, f.values[idx]);
  }
  return total;
}

// Replaces factor a by k duplicates with table psi_a / k.  The first copy
// stays in place, the remaining k-1 copies are appended, so factor indices
// of other factors are unchanged.  The objective is pointwise unchanged.
inline FactorGraph split_factor_graph(const FactorGraph& g, int a, int k) {
  if (a < 0 || a >= g.num_factors())
    throw std::invalid_argument("split_factor_graph: invalid factor index");
  if (k < 1) throw std::invalid_argument("split_factor_graph: k must be >= 1");
  FactorGraph out = g;
  PotentialTable piece = g.factors[a];
  for (double& v : piece.values)
    if (v != kInf) v /= static_cast<double>(k);
  out.factors[a] = piece;
  for (int j = 1; j < k; ++j) out.factors.push_back(piece);
  out.rebuild_incidence();
  return out;
}

// Splits variable i into k copies (the original slot plus k-1 appended
// variables), each with self-potential phi_i / k.  Every factor containing i
// has its scope enlarged by the new copies, with +inf wherever the copies
// disagree.  Minima of the two objectives coincide.
inline FactorGraph split_variable_graph(const FactorGraph& g, int i, int k) {
  if (i < 0 || i >= g.num_vars())
    throw std::invalid_argument("split_variable_graph: invalid variable id");
  if (k < 1) throw std::invalid_argument("split_variable_graph: k must be >= 1");
  if (k == 1) return g;
  FactorGraph out = g;
  const int n = g.num_vars();
  std::vector<double> piece = g.phi[i];
  for (double& v : piece)
    if (v != kInf) v /= static_cast<double>(k);
  out.phi[i] = piece;
  std::vector<int> copies = {i};
  for (int l = 1; l < k; ++l) {
    out.alphabets.push_back(g.alphabets[i]);
    out.phi.push_back(piece);
    copies.push_back(n + l - 1);
  }
  for (auto& f : out.factors) {
    auto pos = std::find(f.scope.begin(), f.scope.end(), i);
    if (pos == f.scope.end()) continue;
    PotentialTable enlarged;
    enlarged.scope = f.scope;
    for (int l = 1; l < k; ++l) enlarged.scope.push_back(copies[l]);
    std::vector<int> cards;
    for (int v : enlarged.scope) cards.push_back(out.alphabets[v].cardinality);
    std::size_t sz = 1;
    for (int c : cards) sz *= static_cast<std::size_t>(c);
    enlarged.values.assign(sz, kInf);
    std::vector<int> state(enlarged.scope.size(), 0);
    std::size_t idx = 0;
    const std::size_t pos_i = static_cast<std::size_t>(pos - f.scope.begin());
    do {
      bool agree = true;
      for (int l = 1; l < k; ++l)
        if (state[f.scope.size() + l - 1] != state[pos_i]) agree = false;
      if (agree) {
        std::size_t orig = 0;
        for (std::size_t p = 0; p < f.scope.size(); ++p)
          orig = orig * static_cast<std::size_t>(cards[p]) +
                 static_cast<std::size_t>(state[p]);
        enlarged.values[idx] = f.values[orig];
      }
      ++idx;
    } while (next_state(state, cards));
    f = std::move(enlarged);
  }
  out.rebuild_incidence();
  return out;
}

}  // namespace splitms
