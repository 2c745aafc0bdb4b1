// Text formats: the FGM model format, the parameter override file, and a
// saved message-state format used by the verification command.
//
// FGM (whitespace separated, '#' starts a comment):
//   FGM 1
//   vars <n>
//   card <k_0> ... <k_{n-1}>
//   phi <i> <v_0> ... <v_{k_i-1}>        (optional; default all-zero)
//   factor <m> <i_1> ... <i_m> <table>   (row-major, last scope index fastest)
// The token `inf` denotes +infinity.  Indices are 0-based; factors are
// numbered by file order.
#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitms/factor_graph.hpp"
#include "splitms/messages.hpp"
#include "splitms/params.hpp"

namespace splitms {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

namespace detail {

// Splits a line into tokens, dropping everything from '#' on.
inline std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream is(body);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

inline double parse_value(const std::string& tok, int ln) {
  if (tok == "inf") return kInf;
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    if (std::isnan(v) || v == -kInf) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(ln, "bad numeric value '" + tok + "'");
  }
}

inline int parse_int(const std::string& tok, int ln) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(ln, "bad integer '" + tok + "'");
  }
}

inline std::string format_value(double v) {
  if (v == kInf) return "inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

inline FactorGraph parse_model_file(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  FactorGraph g;
  bool saw_header = false, saw_vars = false, saw_card = false;
  while (std::getline(is, line)) {
    ++ln;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (!saw_header) {
      if (toks.size() != 2 || toks[0] != "FGM" || toks[1] != "1")
        throw ParseError(ln, "expected header 'FGM 1'");
      saw_header = true;
      continue;
    }
    const std::string& kw = toks[0];
    if (kw == "vars") {
      if (saw_vars) throw ParseError(ln, "duplicate 'vars' line");
      if (toks.size() != 2) throw ParseError(ln, "expected 'vars <n>'");
      int n = detail::parse_int(toks[1], ln);
      if (n < 0) throw ParseError(ln, "negative variable count");
      g.alphabets.assign(static_cast<std::size_t>(n), Alphabet{0});
      saw_vars = true;
    } else if (kw == "card") {
      if (!saw_vars) throw ParseError(ln, "'card' before 'vars'");
      if (saw_card) throw ParseError(ln, "duplicate 'card' line");
      if (toks.size() != g.alphabets.size() + 1)
        throw ParseError(ln, "expected one cardinality per variable");
      for (std::size_t i = 0; i < g.alphabets.size(); ++i) {
        int k = detail::parse_int(toks[i + 1], ln);
        if (k < 1) throw ParseError(ln, "cardinality must be >= 1");
        g.alphabets[i].cardinality = k;
      }
      g.phi.resize(g.alphabets.size());
      for (std::size_t i = 0; i < g.alphabets.size(); ++i)
        g.phi[i].assign(static_cast<std::size_t>(g.alphabets[i].cardinality), 0.0);
      saw_card = true;
    } else if (kw == "phi") {
      if (!saw_card) throw ParseError(ln, "'phi' before 'card'");
      if (toks.size() < 2) throw ParseError(ln, "expected 'phi <i> <values>'");
      int i = detail::parse_int(toks[1], ln);
      if (i < 0 || i >= g.num_vars())
        throw ParseError(ln, "unknown variable id " + std::to_string(i));
      if (toks.size() != static_cast<std::size_t>(g.card(i)) + 2)
        throw ParseError(ln, "expected " + std::to_string(g.card(i)) +
                                 " potential values");
      for (int x = 0; x < g.card(i); ++x)
        g.phi[i][static_cast<std::size_t>(x)] =
            detail::parse_value(toks[static_cast<std::size_t>(x) + 2], ln);
    } else if (kw == "factor") {
      if (!saw_card) throw ParseError(ln, "'factor' before 'card'");
      if (toks.size() < 2) throw ParseError(ln, "expected 'factor <m> <scope> <table>'");
      int m = detail::parse_int(toks[1], ln);
      if (m < 1) throw ParseError(ln, "factor arity must be >= 1");
      if (toks.size() < static_cast<std::size_t>(m) + 2)
        throw ParseError(ln, "scope shorter than declared arity");
      PotentialTable f;
      std::size_t need = 1;
      for (int p = 0; p < m; ++p) {
        int i = detail::parse_int(toks[static_cast<std::size_t>(p) + 2], ln);
        if (i < 0 || i >= g.num_vars())
          throw ParseError(ln, "unknown variable id " + std::to_string(i));
        f.scope.push_back(i);
        need *= static_cast<std::size_t>(g.card(i));
      }
      if (toks.size() != static_cast<std::size_t>(m) + 2 + need)
        throw ParseError(ln, "expected " + std::to_string(need) +
                                 " table values, got " +
                                 std::to_string(toks.size() - m - 2));
      for (std::size_t q = 0; q < need; ++q)
        f.values.push_back(
            detail::parse_value(toks[static_cast<std::size_t>(m) + 2 + q], ln));
      g.factors.push_back(std::move(f));
    } else {
      throw ParseError(ln, "unknown keyword '" + kw + "'");
    }
  }
  if (!saw_header) throw ParseError(ln, "missing 'FGM 1' header");
  if (!saw_vars) throw ParseError(ln, "missing 'vars' line");
  if (!saw_card && !g.alphabets.empty()) throw ParseError(ln, "missing 'card' line");
  g.rebuild_incidence();
  return g;
}

inline std::string serialize_model(const FactorGraph& g) {
  std::ostringstream os;
  os << "FGM 1\n";
  os << "vars " << g.num_vars() << "\n";
  if (g.num_vars() > 0) {
    os << "card";
    for (const auto& a : g.alphabets) os << " " << a.cardinality;
    os << "\n";
  }
  for (int i = 0; i < g.num_vars(); ++i) {
    bool zero = true;
    for (double v : g.phi[i]) zero = zero && v == 0.0;
    if (zero) continue;
    os << "phi " << i;
    for (double v : g.phi[i]) os << " " << detail::format_value(v);
    os << "\n";
  }
  for (const auto& f : g.factors) {
    os << "factor " << f.scope.size();
    for (int i : f.scope) os << " " << i;
    for (double v : f.values) os << " " << detail::format_value(v);
    os << "\n";
  }
  return os.str();
}

// Lines `cvar <i> <value>` / `cfac <f> <value>`; unmentioned entries are 1.
inline SplitParams parse_params_file(const std::string& text, const FactorGraph& g) {
  SplitParams c = make_ones_params(g);
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 3 || (toks[0] != "cvar" && toks[0] != "cfac"))
      throw ParseError(ln, "expected 'cvar <i> <value>' or 'cfac <f> <value>'");
    int idx = detail::parse_int(toks[1], ln);
    double v = detail::parse_value(toks[2], ln);
    if (v == 0.0 || v == kInf) throw ParseError(ln, "parameter must be a nonzero real");
    if (toks[0] == "cvar") {
      if (idx < 0 || idx >= g.num_vars())
        throw ParseError(ln, "variable index out of range");
      c.c_var[idx] = v;
    } else {
      if (idx < 0 || idx >= g.num_factors())
        throw ParseError(ln, "factor index out of range");
      c.c_fac[idx] = v;
    }
  }
  validate_params(c, g);
  return c;
}

inline std::string serialize_params(const SplitParams& c) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.c_var.size(); ++i)
    os << "cvar " << i << " " << detail::format_value(c.c_var[i]) << "\n";
  for (std::size_t a = 0; a < c.c_fac.size(); ++a)
    os << "cfac " << a << " " << detail::format_value(c.c_fac[a]) << "\n";
  return os.str();
}

// Saved message state:
//   MSGSTATE 1
//   tofac <a> <p> <values...>
//   tovar <a> <p> <values...>
// Unlisted messages default to zero.
inline MessageState parse_message_state(const std::string& text,
                                        const FactorGraph& g) {
  MessageState s = init_messages(g);
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  bool saw_header = false;
  while (std::getline(is, line)) {
    ++ln;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    if (!saw_header) {
      if (toks.size() != 2 || toks[0] != "MSGSTATE" || toks[1] != "1")
        throw ParseError(ln, "expected header 'MSGSTATE 1'");
      saw_header = true;
      continue;
    }
    if (toks.size() < 3 || (toks[0] != "tofac" && toks[0] != "tovar"))
      throw ParseError(ln, "expected 'tofac' or 'tovar' line");
    int a = detail::parse_int(toks[1], ln);
    int p = detail::parse_int(toks[2], ln);
    if (a < 0 || a >= g.num_factors())
      throw ParseError(ln, "factor index out of range");
    if (p < 0 || p >= static_cast<int>(g.factors[a].scope.size()))
      throw ParseError(ln, "scope position out of range");
    std::size_t card = static_cast<std::size_t>(g.card(g.factors[a].scope[p]));
    if (toks.size() != card + 3)
      throw ParseError(ln, "expected " + std::to_string(card) + " message values");
    auto& dst = toks[0] == "tofac" ? s.to_fac[a][p] : s.to_var[a][p];
    for (std::size_t x = 0; x < card; ++x)
      dst[x] = detail::parse_value(toks[x + 3], ln);
  }
  if (!saw_header) throw ParseError(ln, "missing 'MSGSTATE 1' header");
  return s;
}

inline std::string serialize_message_state(const MessageState& s) {
  std::ostringstream os;
  os << "MSGSTATE 1\n";
  for (std::size_t a = 0; a < s.to_fac.size(); ++a)
    for (std::size_t p = 0; p < s.to_fac[a].size(); ++p) {
      os << "tofac " << a << " " << p;
      for (double v : s.to_fac[a][p]) os << " " << detail::format_value(v);
      os << "\ntovar " << a << " " << p;
      for (double v : s.to_var[a][p]) os << " " << detail::format_value(v);
      os << "\n";
    }
  return os.str();
}

}  // namespace splitms
