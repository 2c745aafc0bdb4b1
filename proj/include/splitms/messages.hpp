// Message storage for the splitting algorithm.  Messages are indexed by
// (factor, scope position): to_fac[a][p] is m_{i->a} and to_var[a][p] is
// m_{a->i} for i = scope(a)[p], each a vector over the states of i.
#pragma once

#include <cmath>
#include <vector>

#include "splitms/factor_graph.hpp"

namespace splitms {

struct MessageState {
  std::vector<std::vector<std::vector<double>>> to_fac;
  std::vector<std::vector<std::vector<double>>> to_var;

  bool finite() const {
    auto all_finite = [](const auto& fam) {
      for (const auto& fac : fam)
        for (const auto& vec : fac)
          for (double v : vec)
            if (!std::isfinite(v)) return false;
      return true;
    };
    return all_finite(to_fac) && all_finite(to_var);
  }
};

inline MessageState init_messages(const FactorGraph& g) {
  MessageState s;
  s.to_fac.resize(g.num_factors());
  s.to_var.resize(g.num_factors());
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& scope = g.factors[a].scope;
    s.to_fac[a].resize(scope.size());
    s.to_var[a].resize(scope.size());
    for (std::size_t p = 0; p < scope.size(); ++p) {
      s.to_fac[a][p].assign(g.card(scope[p]), 0.0);
      s.to_var[a][p].assign(g.card(scope[p]), 0.0);
    }
  }
  return s;
}

// Subtracts the vector's minimum so the stored minimum is 0.
inline void min_normalize(std::vector<double>& v) {
  double m = kInf;
  for (double x : v) m = std::min(m, x);
  if (m == kInf || m == 0.0) return;
  for (double& x : v)
    if (x != kInf) x -= m;
}

// Scope position of variable i in factor a; -1 if absent.
inline int scope_position(const FactorGraph& g, int a, int i) {
  const auto& scope = g.factors[a].scope;
  for (std::size_t p = 0; p < scope.size(); ++p)
    if (scope[p] == i) return static_cast<int>(p);
  return -1;
}

}  // namespace splitms
