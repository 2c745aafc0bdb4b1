// Graph covers: covering-map verification, lifting of assignments and
// beliefs, and the constructive two-cover certificate for pairwise binary
// models.
#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitms/beliefs.hpp"
#include "splitms/factor_graph.hpp"
#include "splitms/params.hpp"

namespace splitms {

// A covering map h from the nodes of `cover` onto the nodes of `target`.
// Variables map to variables, factors to factors; the p-th scope member of a
// cover factor must map onto the p-th scope member of its image.
struct CoverMap {
  FactorGraph target;
  FactorGraph cover;
  std::vector<int> var_map;  // cover variable -> target variable
  std::vector<int> fac_map;  // cover factor -> target factor
};

struct CoverReport {
  bool ok = false;
  int k = 0;  // copies per node when the cover is exact; 0 otherwise
  std::vector<std::string> violations;
};

inline CoverReport verify_cover(const CoverMap& cm) {
  CoverReport rep;
  const FactorGraph& G = cm.target;
  const FactorGraph& H = cm.cover;
  auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

  if (static_cast<int>(cm.var_map.size()) != H.num_vars())
    fail("var_map size differs from cover variable count");
  if (static_cast<int>(cm.fac_map.size()) != H.num_factors())
    fail("fac_map size differs from cover factor count");
  if (!rep.violations.empty()) return rep;

  for (int i = 0; i < H.num_vars(); ++i) {
    int gi = cm.var_map[i];
    if (gi < 0 || gi >= G.num_vars()) {
      fail("variable " + std::to_string(i) + " maps outside the target");
      continue;
    }
    if (H.alphabets[i].cardinality != G.alphabets[gi].cardinality)
      fail("variable " + std::to_string(i) + " alphabet differs from its image");
    else if (H.phi[i] != G.phi[gi])
      fail("variable " + std::to_string(i) + " potential differs from its image");
  }
  for (int a = 0; a < H.num_factors(); ++a) {
    int ga = cm.fac_map[a];
    if (ga < 0 || ga >= G.num_factors()) {
      fail("factor " + std::to_string(a) + " maps outside the target");
      continue;
    }
    const auto& sh = H.factors[a].scope;
    const auto& sg = G.factors[ga].scope;
    if (sh.size() != sg.size()) {
      fail("factor " + std::to_string(a) + " arity differs from its image");
      continue;
    }
    // Homomorphism, position-preserving: scope members map pointwise.
    for (std::size_t p = 0; p < sh.size(); ++p)
      if (cm.var_map[sh[p]] != sg[p])
        fail("factor " + std::to_string(a) + " scope position " +
             std::to_string(p) + " does not map onto its image's scope");
    if (H.factors[a].values != G.factors[ga].values)
      fail("factor " + std::to_string(a) + " potential differs from its image");
  }
  if (!rep.violations.empty()) return rep;

  // Local bijectivity: the neighborhood of each cover variable must map
  // bijectively (as a multiset of factor copies onto factor images is not
  // enough — images must be hit exactly as often as in the target).
  for (int i = 0; i < H.num_vars(); ++i) {
    std::map<int, int> img_count, tgt_count;
    for (int a : H.incidence[i]) ++img_count[cm.fac_map[a]];
    for (int a : G.incidence[cm.var_map[i]]) ++tgt_count[a];
    if (img_count != tgt_count)
      fail("neighborhood of variable " + std::to_string(i) +
           " is not in bijection with its image's neighborhood");
  }

  if (!rep.violations.empty()) return rep;
  rep.ok = true;

  // Exact k-cover check: every target node has the same number of preimages.
  std::vector<int> vc(G.num_vars(), 0), fc(G.num_factors(), 0);
  for (int gi : cm.var_map) ++vc[gi];
  for (int ga : cm.fac_map) ++fc[ga];
  int k = vc.empty() ? (fc.empty() ? 0 : fc[0]) : vc[0];
  bool exact = k > 0;
  for (int v : vc)
    if (v != k) exact = false;
  for (int v : fc)
    if (v != k) exact = false;
  rep.k = exact ? k : 0;
  return rep;
}

// Every copy takes the state of its image.
inline Assignment lift_assignment(const CoverMap& cm, const Assignment& x_g) {
  check_assignment(cm.target, x_g);
  Assignment x_h(cm.cover.num_vars());
  for (int i = 0; i < cm.cover.num_vars(); ++i) x_h[i] = x_g[cm.var_map[i]];
  return x_h;
}

// Copies beliefs along the covering map.  Admissibility and min-consistency
// residuals are preserved; the additive constant scales with the cover degree.
inline BeliefSet lift_beliefs(const CoverMap& cm, const BeliefSet& b, int k) {
  BeliefSet out;
  out.b_var.resize(cm.cover.num_vars());
  for (int i = 0; i < cm.cover.num_vars(); ++i) out.b_var[i] = b.b_var[cm.var_map[i]];
  out.b_fac.resize(cm.cover.num_factors());
  for (int a = 0; a < cm.cover.num_factors(); ++a) out.b_fac[a] = b.b_fac[cm.fac_map[a]];
  out.kappa = static_cast<double>(k) * b.kappa;
  return out;
}

// Likewise for the splitting parameters.
inline SplitParams lift_params(const CoverMap& cm, const SplitParams& c) {
  SplitParams out;
  out.c_var.resize(cm.cover.num_vars());
  for (int i = 0; i < cm.cover.num_vars(); ++i) out.c_var[i] = c.c_var[cm.var_map[i]];
  out.c_fac.resize(cm.cover.num_factors());
  for (int a = 0; a < cm.cover.num_factors(); ++a) out.c_fac[a] = c.c_fac[cm.fac_map[a]];
  return out;
}

// Two disjoint copies of g with the componentwise map.
inline CoverMap disjoint_double_cover(const FactorGraph& g) {
  CoverMap cm;
  cm.target = g;
  cm.cover = g;
  const int n = g.num_vars(), m = g.num_factors();
  cm.cover.alphabets.insert(cm.cover.alphabets.end(), g.alphabets.begin(),
                            g.alphabets.end());
  cm.cover.phi.insert(cm.cover.phi.end(), g.phi.begin(), g.phi.end());
  for (const auto& f : g.factors) {
    PotentialTable copy = f;
    for (int& v : copy.scope) v += n;
    cm.cover.factors.push_back(std::move(copy));
  }
  cm.cover.rebuild_incidence();
  cm.var_map.resize(2 * n);
  for (int i = 0; i < 2 * n; ++i) cm.var_map[i] = i % n;
  cm.fac_map.resize(2 * m);
  for (int a = 0; a < 2 * m; ++a) cm.fac_map[a] = a % m;
  return cm;
}

struct CoverCertificate {
  CoverMap cover;
  Assignment assignment;     // on the cover graph
  double claimed_value = 0;  // = evaluate_objective(cover, assignment)
  std::vector<bool> crossed;  // per target factor: crossed or parallel wiring
};

// Builds the two-cover and assignment whose objective the beliefs' lower
// bound cannot exceed.  Each variable i gets two copies (i, i+n).  When b_i
// has a unique minimizer both copies take it; when tied, copy one takes 0 and
// copy two takes 1.  Each factor gets two copies wired either in parallel
// (copy edges {i,j} and {i+n,j+n}) or crossed ({i,j+n} and {i+n,j}) so that
// both chosen endpoint pairs minimize b_a.
inline CoverCertificate build_two_cover_certificate(const FactorGraph& g,
                                                    const BeliefSet& b,
                                                    double tie_tol = 1e-9,
                                                    double consistency_tol = 1e-6) {
  ValidationReport vr = validate_graph(g);
  if (!vr.pairwise || !vr.binary)
    throw std::invalid_argument(
        "build_two_cover_certificate: graph must be pairwise with binary alphabets");
  if (check_min_consistent(g, b) >= consistency_tol)
    throw std::invalid_argument(
        "build_two_cover_certificate: beliefs are not min-consistent");

  const int n = g.num_vars();
  Estimate est = extract_estimate(b, tie_tol);

  CoverCertificate cert;
  cert.cover.target = g;
  FactorGraph& H = cert.cover.cover;
  H.alphabets.assign(2 * static_cast<std::size_t>(n), Alphabet{2});
  H.phi.resize(2 * static_cast<std::size_t>(n));
  cert.cover.var_map.resize(2 * n);
  cert.assignment.assign(2 * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    H.phi[i] = g.phi[i];
    H.phi[i + n] = g.phi[i];
    cert.cover.var_map[i] = i;
    cert.cover.var_map[i + n] = i;
    if (est.argmin_sets[i].size() == 1) {
      cert.assignment[i] = est.argmin_sets[i][0];
      cert.assignment[i + n] = est.argmin_sets[i][0];
    } else {
      cert.assignment[i] = 0;
      cert.assignment[i + n] = 1;
    }
  }

  cert.crossed.assign(g.num_factors(), false);
  for (int a = 0; a < g.num_factors(); ++a) {
    const auto& f = g.factors[a];
    int i = f.scope[0], j = f.scope.size() == 2 ? f.scope[1] : -1;
    if (j < 0) {
      // Unary factor: both copies attach to the respective variable copy.
      PotentialTable t1 = f, t2 = f;
      t2.scope[0] = i + n;
      H.factors.push_back(std::move(t1));
      H.factors.push_back(std::move(t2));
      cert.cover.fac_map.push_back(a);
      cert.cover.fac_map.push_back(a);
      continue;
    }
    const bool tied_i = est.argmin_sets[i].size() > 1;
    const bool tied_j = est.argmin_sets[j].size() > 1;
    auto fac_min = [&](int xi, int xj) {
      // Is (xi, xj) a minimizer of b_a?
      double m = kInf;
      for (double v : b.b_fac[a]) m = std::min(m, v);
      return b.b_fac[a][static_cast<std::size_t>(2 * xi + xj)] <= m + tie_tol;
    };
    bool crossed = false;
    if (tied_i && tied_j) {
      // Both endpoints tied: the factor minimizers contain the diagonal
      // pairs, the antidiagonal pairs, or both.  Prefer parallel.
      if (fac_min(0, 0) && fac_min(1, 1)) {
        crossed = false;
      } else if (fac_min(0, 1) && fac_min(1, 0)) {
        crossed = true;
      } else {
        throw std::runtime_error(
            "build_two_cover_certificate: no wiring minimizes factor " +
            std::to_string(a) + " (beliefs are inconsistent)");
      }
    }
    PotentialTable t1 = f, t2 = f;
    if (crossed) {
      t1.scope = {i, j + n};
      t2.scope = {i + n, j};
    } else {
      t1.scope = {i, j};
      t2.scope = {i + n, j + n};
    }
    cert.crossed[a] = crossed;
    H.factors.push_back(std::move(t1));
    H.factors.push_back(std::move(t2));
    cert.cover.fac_map.push_back(a);
    cert.cover.fac_map.push_back(a);
  }
  H.rebuild_incidence();
  cert.claimed_value = evaluate_objective(H, cert.assignment);
  return cert;
}

inline std::string dump_certificate(const CoverCertificate& cert) {
  std::ostringstream os;
  const int n = cert.cover.target.num_vars();
  os << "two-cover certificate: " << cert.cover.cover.num_vars()
     << " variables, " << cert.cover.cover.num_factors() << " factors\n";
  for (int a = 0; a < cert.cover.target.num_factors(); ++a)
    os << "factor " << a << ": "
       << (cert.crossed[a] ? "crossed" : "parallel") << "\n";
  os << "assignment:";
  for (int i = 0; i < n; ++i)
    os << " (" << cert.assignment[i] << "," << cert.assignment[i + n] << ")";
  os << "\nvalue: " << cert.claimed_value << "\n";
  return os.str();
}

}  // namespace splitms
