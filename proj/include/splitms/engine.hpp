// Message update schedules for the splitting algorithm: the synchronous
// full-sweep schedule and the asynchronous per-variable schedule with
// monotone lower-bound tracking.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "splitms/beliefs.hpp"
#include "splitms/factor_graph.hpp"
#include "splitms/messages.hpp"
#include "splitms/params.hpp"

namespace splitms {

// Raw (unnormalized) m_{i->a} for i = scope(a)[p]:
//   phi_i/c_i + (c_a - 1) m_{a->i} + sum_{b in di \ a} c_b m_{b->i}.
inline std::vector<double> raw_update_to_fac(const FactorGraph& g,
                                             const SplitParams& c,
                                             const MessageState& s, int a, int p) {
  int i = g.factors[a].scope[p];
  std::vector<double> v(g.card(i));
  for (int x = 0; x < g.card(i); ++x)
    v[x] = sat_add(g.phi[i][x] / c.c_var[i],
                   (c.c_fac[a] - 1.0) * s.to_var[a][p][x]);
  for (int beta : g.incidence[i]) {
    if (beta == a) continue;
    int q = scope_position(g, beta, i);
    for (int x = 0; x < g.card(i); ++x)
      v[x] = sat_add(v[x], c.c_fac[beta] * s.to_var[beta][q][x]);
  }
  return v;
}

// Raw m_{a->i} for i = scope(a)[p]:
//   min_{x_{a\i}} [ psi_a/c_a + (c_i - 1) m_{i->a} + sum_{k in a\i} c_k m_{k->a} ].
inline std::vector<double> raw_update_to_var(const FactorGraph& g,
                                             const SplitParams& c,
                                             const MessageState& s, int a, int p) {
  const auto& f = g.factors[a];
  int i = f.scope[p];
  const auto cards = g.scope_cards(f);
  std::vector<double> v(g.card(i), kInf);
  std::vector<int> st(f.scope.size(), 0);
  std::size_t idx = 0;
  do {
    double term = f.values[idx] == kInf ? kInf : f.values[idx] / c.c_fac[a];
    for (std::size_t q = 0; q < f.scope.size(); ++q) {
      if (static_cast<int>(q) == p) continue;
      term = sat_add(term, c.c_var[f.scope[q]] * s.to_fac[a][q][st[q]]);
    }
    v[st[p]] = std::min(v[st[p]], term);
    ++idx;
  } while (next_state(st, cards));
  for (int x = 0; x < g.card(i); ++x)
    v[x] = sat_add(v[x], (c.c_var[i] - 1.0) * s.to_fac[a][p][x]);
  return v;
}

// One synchronous sweep: every message recomputed from the previous state,
// then min-normalized.  damping blends new' = (1-gamma) new + gamma old.
inline MessageState sync_sweep(const FactorGraph& g, const SplitParams& c,
                               const MessageState& s, double damping = 0.0) {
  MessageState out = s;
  for (int a = 0; a < g.num_factors(); ++a)
    for (std::size_t p = 0; p < g.factors[a].scope.size(); ++p) {
      out.to_fac[a][p] = raw_update_to_fac(g, c, s, a, static_cast<int>(p));
      out.to_var[a][p] = raw_update_to_var(g, c, s, a, static_cast<int>(p));
      min_normalize(out.to_fac[a][p]);
      min_normalize(out.to_var[a][p]);
      if (damping > 0.0) {
        for (std::size_t x = 0; x < out.to_fac[a][p].size(); ++x) {
          out.to_fac[a][p][x] =
              (1.0 - damping) * out.to_fac[a][p][x] + damping * s.to_fac[a][p][x];
          out.to_var[a][p][x] =
              (1.0 - damping) * out.to_var[a][p][x] + damping * s.to_var[a][p][x];
        }
        min_normalize(out.to_fac[a][p]);
        min_normalize(out.to_var[a][p]);
      }
    }
  return out;
}

// Asynchronous per-variable update: for each factor b containing j (ascending
// index), first refresh m_{i->b} for all i in b \ j, then m_{b->j}.
inline void async_variable_update(const FactorGraph& g, const SplitParams& c,
                                  MessageState& s, int j) {
  if (j < 0 || j >= g.num_vars())
    throw std::invalid_argument("async_variable_update: invalid variable id");
  for (int beta : g.incidence[j]) {
    const auto& scope = g.factors[beta].scope;
    int pj = scope_position(g, beta, j);
    for (std::size_t p = 0; p < scope.size(); ++p) {
      if (static_cast<int>(p) == pj) continue;
      s.to_fac[beta][p] = raw_update_to_fac(g, c, s, beta, static_cast<int>(p));
      min_normalize(s.to_fac[beta][p]);
    }
    s.to_var[beta][pj] = raw_update_to_var(g, c, s, beta, pj);
    min_normalize(s.to_var[beta][pj]);
  }
}

enum class Schedule { Sync, Async };
enum class Order { Natural, Random };
enum class RunStatus { Converged, MaxIters, InfiniteMessage };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIters: return "max_iters";
    default: return "infinite_message";
  }
}

struct SolveOptions {
  Schedule schedule = Schedule::Async;
  double tol = 1e-8;
  int max_sweeps = 1000;
  double damping = 0.0;  // sync only
  Order order = Order::Natural;
  std::uint64_t seed = 0;
  double tie_tol = 1e-9;
};

struct RunReport {
  RunStatus status = RunStatus::MaxIters;
  int sweeps = 0;
  std::vector<double> lb_trace;        // per sweep; only when GlobalSign holds
  std::vector<double> delta_trace;     // per sweep, max belief change
  double final_delta = kInf;
  Estimate estimate;
  BeliefSet beliefs;
  MessageState messages;
};

namespace detail {

// Max entrywise difference of min-normalized belief vectors; matching +inf
// entries count as 0, mismatched infinities as +inf.
inline double belief_delta(const BeliefSet& a, const BeliefSet& b) {
  auto diff = [](std::vector<double> u, std::vector<double> v) {
    min_normalize(u);
    min_normalize(v);
    double d = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) {
      if (u[x] == kInf && v[x] == kInf) continue;
      if (u[x] == kInf || v[x] == kInf) return kInf;
      d = std::max(d, std::abs(u[x] - v[x]));
    }
    return d;
  };
  double d = 0.0;
  for (std::size_t i = 0; i < a.b_var.size(); ++i)
    d = std::max(d, diff(a.b_var[i], b.b_var[i]));
  for (std::size_t f = 0; f < a.b_fac.size(); ++f)
    d = std::max(d, diff(a.b_fac[f], b.b_fac[f]));
  return d;
}

// Max entrywise difference of min-normalized message vectors.  Zero means the
// state is an exact fixed point of the normalized synchronous sweep.
inline double message_delta(const MessageState& a, const MessageState& b) {
  auto diff = [](std::vector<double> u, std::vector<double> v) {
    min_normalize(u);
    min_normalize(v);
    double d = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) {
      if (u[x] == kInf && v[x] == kInf) continue;
      if (u[x] == kInf || v[x] == kInf) return kInf;
      d = std::max(d, std::abs(u[x] - v[x]));
    }
    return d;
  };
  double d = 0.0;
  for (std::size_t f = 0; f < a.to_fac.size(); ++f)
    for (std::size_t p = 0; p < a.to_fac[f].size(); ++p) {
      d = std::max(d, diff(a.to_fac[f][p], b.to_fac[f][p]));
      d = std::max(d, diff(a.to_var[f][p], b.to_var[f][p]));
    }
  return d;
}

}  // namespace detail

// Expert entry point accepting an arbitrary finite initial state.
inline RunReport run_from(const FactorGraph& g, const SplitParams& c,
                          MessageState state, const SolveOptions& opt) {
  validate_params(c, g);
  if (opt.tol <= 0.0) throw std::invalid_argument("run: tol must be > 0");
  if (opt.damping < 0.0 || opt.damping >= 1.0)
    throw std::invalid_argument("run: damping must be in [0, 1)");
  if (!state.finite())
    throw std::invalid_argument("run: initial messages must be finite");

  OptimalityClass cls = classify_params(c, g);
  const bool track_lb = cls.global_sign;

  RunReport rep;
  std::mt19937_64 rng(opt.seed);
  std::vector<int> order(g.num_vars());
  std::iota(order.begin(), order.end(), 0);

  BeliefSet prev = compute_beliefs(g, c, state);
  double prev_lb = -kInf;
  int calm = 0;  // consecutive sweeps meeting the stop condition
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    MessageState before = state;
    if (opt.schedule == Schedule::Sync) {
      state = sync_sweep(g, c, state, opt.damping);
    } else {
      if (opt.order == Order::Random) std::shuffle(order.begin(), order.end(), rng);
      for (int j : order) async_variable_update(g, c, state, j);
    }
    rep.sweeps = sweep;
    if (!state.finite()) {
      rep.status = RunStatus::InfiniteMessage;
      rep.messages = std::move(state);
      rep.beliefs = prev;
      rep.estimate = extract_estimate(prev, opt.tie_tol);
      return rep;
    }
    BeliefSet cur = compute_beliefs(g, c, state);
    double delta = detail::belief_delta(prev, cur);
    rep.final_delta = delta;
    rep.delta_trace.push_back(delta);
    // Belief deltas alone can plateau transiently while information is still
    // propagating, so the stop rule also checks that the message state has
    // stopped moving (sync: a true fixed-point test) and requires the
    // condition on two consecutive sweeps (async, where messages need not
    // settle even when the bound and beliefs do).
    bool calm_now;
    if (opt.schedule == Schedule::Sync) {
      calm_now = delta < opt.tol && detail::message_delta(before, state) < opt.tol;
    } else {
      calm_now = delta < opt.tol;
    }
    if (track_lb) {
      double lb = lower_bound(g, c, cur);
      rep.lb_trace.push_back(lb);
      if (opt.schedule == Schedule::Async)
        calm_now = calm_now && sweep > 1 && lb - prev_lb < opt.tol;
      prev_lb = lb;
    }
    calm = calm_now ? calm + 1 : 0;
    bool stop = opt.schedule == Schedule::Sync ? calm >= 1 : calm >= 2;
    prev = std::move(cur);
    if (stop) {
      rep.status = RunStatus::Converged;
      break;
    }
  }
  rep.messages = std::move(state);
  rep.beliefs = std::move(prev);
  rep.estimate = extract_estimate(rep.beliefs, opt.tie_tol);
  return rep;
}

inline RunReport run(const FactorGraph& g, const SplitParams& c,
                     const SolveOptions& opt = {}) {
  return run_from(g, c, init_messages(g), opt);
}

}  // namespace splitms
