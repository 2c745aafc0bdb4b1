// Batch driver: solve / check / oracle / cover / verify over FGM model files.
// Exit codes: 0 success, 1 usage or file/parse error, 2 runtime failure
// (divergent messages, oracle cap exceeded).

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "splitms/splitms.hpp"

namespace {

using namespace splitms;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// Tree file for the tree-reweighted parameter source: lines
// `tree <probability> <factor indices...>`.
std::vector<WeightedTree> parse_trees_file(const std::string& text) {
  std::vector<WeightedTree> trees;
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] != "tree" || toks.size() < 2)
      throw ParseError(ln, "expected 'tree <probability> <factor indices>'");
    WeightedTree t;
    t.probability = detail::parse_value(toks[1], ln);
    for (std::size_t q = 2; q < toks.size(); ++q)
      t.edges.push_back(detail::parse_int(toks[q], ln));
    trees.push_back(std::move(t));
  }
  return trees;
}

SplitParams resolve_params(const std::string& spec_str, const FactorGraph& g) {
  if (spec_str == "ones") return make_ones_params(g);
  if (spec_str == "uniform") return make_uniform_params(g);
  if (spec_str.rfind("trmp:", 0) == 0)
    return make_trmp_params(g, parse_trees_file(slurp(spec_str.substr(5))));
  if (spec_str.rfind("file:", 0) == 0)
    return parse_params_file(slurp(spec_str.substr(5)), g);
  throw UsageError("unknown params source: " + spec_str +
                   " (expected ones, uniform, trmp:<path>, or file:<path>)");
}

SolveOptions resolve_options(const std::string& schedule, double tol,
                             int max_sweeps, double damping,
                             const std::string& order) {
  SolveOptions opt;
  if (schedule == "sync")
    opt.schedule = Schedule::Sync;
  else if (schedule == "async")
    opt.schedule = Schedule::Async;
  else
    throw UsageError("unknown schedule: " + schedule);
  opt.tol = tol;
  opt.max_sweeps = max_sweeps;
  opt.damping = damping;
  if (order == "natural") {
    opt.order = Order::Natural;
  } else if (order.rfind("random:", 0) == 0) {
    opt.order = Order::Random;
    opt.seed = std::stoull(order.substr(7));
  } else {
    throw UsageError("unknown order: " + order +
                     " (expected natural or random:<seed>)");
  }
  return opt;
}

void emit_report(std::ostream& os, const FactorGraph& g, const SplitParams& c,
                 const RunReport& rep) {
  os << "status: " << to_string(rep.status) << "\n";
  os << "sweeps: " << rep.sweeps << "\n";
  os << "final_delta: " << fmt(rep.final_delta) << "\n";
  if (!rep.lb_trace.empty()) os << "lb: " << fmt(rep.lb_trace.back()) << "\n";
  if (rep.estimate.unique) {
    os << "estimate:";
    for (int x : rep.estimate.assignment) os << " " << x;
    os << "\nobjective: " << fmt(evaluate_objective(g, rep.estimate.assignment))
       << "\n";
  } else {
    os << "estimate: none (ties)\n";
  }
  (void)c;
}

void emit_trace(const std::string& path, const RunReport& rep) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write trace file: " + path);
  out << "sweep,lb,max_belief_delta\n";
  for (std::size_t s = 0; s < rep.delta_trace.size(); ++s) {
    out << (s + 1) << ",";
    if (s < rep.lb_trace.size()) out << fmt(rep.lb_trace[s]);
    out << "," << fmt(rep.delta_trace[s]) << "\n";
  }
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write report file: " + path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitting min-sum solver for discrete factor graphs"};
  app.require_subcommand(1);

  std::string model_path, params_src = "ones", schedule = "async";
  std::string order = "natural", trace_path, report_path, state_path;
  double tol = 1e-8, damping = 0.0;
  int max_sweeps = 1000;

  auto add_common = [&](CLI::App* sub, bool solver) {
    sub->add_option("model", model_path, "FGM model file")->required();
    sub->add_option("--params", params_src,
                    "ones | uniform | trmp:<path> | file:<path>");
    if (solver) {
      sub->add_option("--schedule", schedule, "sync | async");
      sub->add_option("--tol", tol, "convergence tolerance");
      sub->add_option("--max-sweeps", max_sweeps, "sweep limit");
      sub->add_option("--damping", damping, "sync damping in [0,1)");
      sub->add_option("--order", order, "natural | random:<seed>");
      sub->add_option("--trace", trace_path, "CSV trace output path");
      sub->add_option("--report", report_path, "report output path (default stdout)");
    }
  };

  CLI::App* solve = app.add_subcommand("solve", "run the engine");
  add_common(solve, true);
  CLI::App* check = app.add_subcommand("check", "classify parameter guarantees");
  add_common(check, false);
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force minimization");
  oracle->add_option("model", model_path, "FGM model file")->required();
  CLI::App* cover = app.add_subcommand("cover", "solve, then build a 2-cover certificate");
  add_common(cover, true);
  CLI::App* verify = app.add_subcommand("verify", "residuals of a saved message state");
  add_common(verify, false);
  verify->add_option("--state", state_path, "saved message state file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    FactorGraph g = parse_model_file(slurp(model_path));
    ValidationReport vr = validate_graph(g);
    if (!vr.ok) {
      for (const auto& e : vr.errors) std::cerr << "model error: " << e << "\n";
      return 1;
    }

    if (app.got_subcommand(oracle)) {
      BruteForceResult r = brute_force_minimize(g);
      std::ostringstream os;
      os << "min " << fmt(r.value) << ", " << r.minimizers.size()
         << (r.minimizers.size() == 1 ? " minimizer" : " minimizers") << "\n";
      for (const auto& x : r.minimizers) {
        for (std::size_t i = 0; i < x.size(); ++i) os << (i ? " " : "") << x[i];
        os << "\n";
      }
      std::cout << os.str();
      return 0;
    }

    SplitParams c = resolve_params(params_src, g);

    if (app.got_subcommand(check)) {
      OptimalityClass cls = classify_params(c, g);
      std::ostringstream os;
      os << "level: " << to_string(cls.level) << "\n";
      os << "standard_minsum: " << (cls.standard_minsum ? "yes" : "no") << "\n";
      if (cls.global_sign) {
        os << "GlobalSign: holds\n";
      } else if (cls.sign_violation_var >= 0) {
        os << "GlobalSign: FAILED at variable " << cls.sign_violation_var
           << ": (1 - sum c_a)c_i = " << fmt(cls.sign_violation_value) << "\n";
      } else {
        os << "GlobalSign: FAILED (some c_a <= 0)\n";
      }
      os << "LocalOnly: " << (cls.local_only ? "holds" : "FAILED") << "\n";
      os << "async_convergent: " << (cls.async_convergent ? "yes" : "no") << "\n";
      std::cout << os.str();
      return 0;
    }

    if (app.got_subcommand(verify)) {
      MessageState s = parse_message_state(slurp(state_path), g);
      if (!s.finite()) {
        std::cerr << "error: saved message state is not finite\n";
        return 2;
      }
      BeliefSet b = compute_beliefs(g, c, s);
      std::ostringstream os;
      os << "kappa: " << fmt(b.kappa) << "\n";
      os << "admissibility_residual: " << fmt(check_admissible(g, c, b)) << "\n";
      os << "min_consistency_residual: " << fmt(check_min_consistent(g, b)) << "\n";
      std::cout << os.str();
      return 0;
    }

    // solve and cover both run the engine.
    SolveOptions opt = resolve_options(schedule, tol, max_sweeps, damping, order);
    RunReport rep = run(g, c, opt);
    std::ostringstream os;
    emit_report(os, g, c, rep);
    if (!trace_path.empty()) emit_trace(trace_path, rep);

    if (app.got_subcommand(cover)) {
      if (rep.status == RunStatus::InfiniteMessage) {
        write_or_print(report_path, os.str());
        std::cerr << "error: messages diverged to infinity\n";
        return 2;
      }
      CoverCertificate cert = build_two_cover_certificate(g, rep.beliefs);
      os << dump_certificate(cert);
      BruteForceResult r = brute_force_minimize(cert.cover.cover);
      os << "cover_minimum: " << fmt(r.value) << "\n";
      if (!rep.lb_trace.empty())
        os << "final_lb: " << fmt(rep.lb_trace.back()) << "\n";
    }
    write_or_print(report_path, os.str());
    if (rep.status == RunStatus::InfiniteMessage) {
      std::cerr << "error: messages diverged to infinity\n";
      return 2;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
