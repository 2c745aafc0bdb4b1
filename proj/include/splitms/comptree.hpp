// Weighted computation trees: the unrolled message-dependency tree whose
// root marginal reproduces the time-t belief of the synchronous schedule
// (zero-initialized messages).  Serves as an independent oracle for the
// engine.
#pragma once

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitms/factor_graph.hpp"
#include "splitms/messages.hpp"
#include "splitms/params.hpp"

namespace splitms {

struct CompTreeNode {
  bool is_factor = false;
  int orig = -1;          // variable or factor id in the original graph
  double weight = 1.0;    // product of edge weights from the root
  bool self_return = false;
  int remaining = 0;      // message rounds still represented below this node
  std::vector<CompTreeNode> children;
};

struct CompTree {
  CompTreeNode root;  // variable node
  int depth = 0;
  std::size_t size = 0;
};

namespace detail {

inline void grow_var(const FactorGraph& g, const SplitParams& c, CompTreeNode& u,
                     int entered_via, std::size_t& count, std::size_t cap);

// Factor node d (copy of a, reached from a copy of variable k).  Children at
// one round less: a fresh variable copy for every other scope member (edge
// weight c_j) and a self-return copy of k (edge weight c_k - 1).
inline void grow_fac(const FactorGraph& g, const SplitParams& c, CompTreeNode& d,
                     int parent_var, std::size_t& count, std::size_t cap) {
  if (d.remaining < 1) return;
  const auto& scope = g.factors[d.orig].scope;
  for (int j : scope) {
    double w = d.weight * (j == parent_var ? c.c_var[j] - 1.0 : c.c_var[j]);
    if (w == 0.0) continue;  // pruned: zero-weight branches carry nothing
    CompTreeNode child;
    child.is_factor = false;
    child.orig = j;
    child.weight = w;
    child.self_return = (j == parent_var);
    child.remaining = d.remaining - 1;
    if (++count > cap) throw std::runtime_error("build_computation_tree: size cap exceeded");
    grow_var(g, c, child, d.orig, count, cap);
    d.children.push_back(std::move(child));
  }
}

// Variable node u (copy of k, reached through factor entered_via).  Children:
// a factor copy for every other neighbor (edge weight c_b) and a self-return
// copy of the entering factor (edge weight c_a - 1).
inline void grow_var(const FactorGraph& g, const SplitParams& c, CompTreeNode& u,
                     int entered_via, std::size_t& count, std::size_t cap) {
  if (u.remaining < 1) return;
  for (int beta : g.incidence[u.orig]) {
    double w = u.weight *
               (beta == entered_via ? c.c_fac[beta] - 1.0 : c.c_fac[beta]);
    if (w == 0.0) continue;
    CompTreeNode child;
    child.is_factor = true;
    child.orig = beta;
    child.weight = w;
    child.self_return = (beta == entered_via);
    child.remaining = u.remaining - 1;
    if (++count > cap) throw std::runtime_error("build_computation_tree: size cap exceeded");
    grow_fac(g, c, child, u.orig, count, cap);
    u.children.push_back(std::move(child));
  }
}

}  // namespace detail

inline CompTree build_computation_tree(const FactorGraph& g, const SplitParams& c,
                                       int root, int t,
                                       std::size_t size_cap = 100000) {
  validate_params(c, g);
  if (root < 0 || root >= g.num_vars())
    throw std::invalid_argument("build_computation_tree: invalid root");
  if (t < 0 || t > 8)
    throw std::invalid_argument("build_computation_tree: depth must be in [0, 8]");
  CompTree tree;
  tree.depth = t;
  tree.root.is_factor = false;
  tree.root.orig = root;
  tree.root.weight = 1.0;
  tree.root.remaining = t;
  std::size_t count = 1;
  detail::grow_var(g, c, tree.root, -1, count, size_cap);
  tree.size = count;
  return tree;
}

namespace detail {

inline std::vector<double> eval_var(const FactorGraph& g, const SplitParams& c,
                                    const CompTreeNode& u);

// Marginalizes a factor copy onto its parent variable's states.  The joint
// elimination over the non-parent scope positions minimizes when the node's
// accumulated weight is nonnegative and maximizes otherwise; a self-return
// variable child shares the parent's state and is added outside the
// elimination.
inline std::vector<double> eval_fac(const FactorGraph& g, const SplitParams& c,
                                    const CompTreeNode& d, int parent_var) {
  const auto& f = g.factors[d.orig];
  const auto cards = g.scope_cards(f);
  int p_parent = scope_position(g, d.orig, parent_var);
  const bool minimize = d.weight >= 0.0;

  std::vector<const CompTreeNode*> fresh(f.scope.size(), nullptr);
  const CompTreeNode* self_child = nullptr;
  for (const auto& ch : d.children) {
    if (ch.self_return) {
      self_child = &ch;
    } else {
      fresh[scope_position(g, d.orig, ch.orig)] = &ch;
    }
  }
  std::vector<std::vector<double>> child_vec(f.scope.size());
  for (std::size_t q = 0; q < f.scope.size(); ++q)
    if (fresh[q]) child_vec[q] = eval_var(g, c, *fresh[q]);

  std::vector<double> out(g.card(parent_var), minimize ? kInf : -kInf);
  std::vector<int> st(f.scope.size(), 0);
  std::size_t idx = 0;
  do {
    double term = f.values[idx] == kInf ? d.weight * kInf
                                        : d.weight * f.values[idx] / c.c_fac[d.orig];
    for (std::size_t q = 0; q < f.scope.size(); ++q)
      if (fresh[q]) term = sat_add(term, child_vec[q][st[q]]);
    double& slot = out[st[p_parent]];
    slot = minimize ? std::min(slot, term) : std::max(slot, term);
    ++idx;
  } while (next_state(st, cards));

  if (self_child) {
    std::vector<double> sv = eval_var(g, c, *self_child);
    for (int x = 0; x < g.card(parent_var); ++x) out[x] = sat_add(out[x], sv[x]);
  }
  return out;
}

inline std::vector<double> eval_var(const FactorGraph& g, const SplitParams& c,
                                    const CompTreeNode& u) {
  std::vector<double> v(g.card(u.orig));
  for (int x = 0; x < g.card(u.orig); ++x)
    v[x] = u.weight * g.phi[u.orig][x] / c.c_var[u.orig];
  for (const auto& ch : u.children) {
    std::vector<double> m = eval_fac(g, c, ch, u.orig);
    for (int x = 0; x < g.card(u.orig); ++x) v[x] = sat_add(v[x], m[x]);
  }
  return v;
}

}  // namespace detail

// Exact dynamic-programming marginal at the root, min-normalized.
inline std::vector<double> tree_root_belief(const FactorGraph& g,
                                            const SplitParams& c,
                                            const CompTree& tree) {
  std::vector<double> b = detail::eval_var(g, c, tree.root);
  min_normalize(b);
  return b;
}

inline void dump_tree(const FactorGraph& g, const CompTreeNode& node,
                      std::ostringstream& os, int indent) {
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ')
     << (node.is_factor ? "factor " : "var ") << node.orig << " w=" << node.weight
     << (node.self_return ? " (self-return)" : "") << "\n";
  for (const auto& ch : node.children) dump_tree(g, ch, os, indent + 1);
}

inline std::string dump_tree(const FactorGraph& g, const CompTree& tree) {
  std::ostringstream os;
  dump_tree(g, tree.root, os, 0);
  return os.str();
}

}  // namespace splitms
