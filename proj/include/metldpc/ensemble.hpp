#pragma once

// Degree distribution pair (nu(r,x), mu(x)) for a multi-edge-type ensemble:
// parsing, validation, instantiation at finite length, and the derived
// quantities the analysis modules consume. Coefficients are exact rationals
// throughout; node and edge counts at a given n must come out as integers or
// instantiation fails with the smallest n that works.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metldpc/numeric.hpp"

namespace metldpc {

// Channel-type indicator pair: (1,0) punctured, (0,1) transmitted.
struct ChannelType {
  int b0 = 0;
  int b1 = 1;

  bool transmitted() const { return b1 == 1; }
  bool operator==(const ChannelType&) const = default;
  auto operator<=>(const ChannelType&) const = default;
};

// Per-edge-type socket counts of one node class.
struct NodeType {
  std::vector<std::uint32_t> d;

  bool operator==(const NodeType&) const = default;
  auto operator<=>(const NodeType&) const = default;
};

struct VarTerm {
  Rat coeff;  // nu_{b,d} > 0
  ChannelType channel;
  NodeType node;
};

struct ChkTerm {
  Rat coeff;  // mu_d > 0
  NodeType node;
};

class EnsembleSpec {
 public:
  // Validates every structural invariant; throws std::invalid_argument with
  // the violated precondition spelled out.
  static EnsembleSpec create(std::size_t n_edge_types, std::vector<VarTerm> vars,
                             std::vector<ChkTerm> chks) {
    EnsembleSpec s;
    s.k_ = n_edge_types;
    s.var_terms_ = std::move(vars);
    s.chk_terms_ = std::move(chks);
    s.validate();
    return s;
  }

  std::size_t n_edge_types() const { return k_; }
  const std::vector<VarTerm>& var_terms() const { return var_terms_; }
  const std::vector<ChkTerm>& chk_terms() const { return chk_terms_; }

  // nu_i(1,1) = sum_{b,d} d_i nu_{b,d}, per edge-type.
  std::vector<Rat> edge_fractions() const {
    std::vector<Rat> f(k_, Rat(0));
    for (const auto& t : var_terms_)
      for (std::size_t i = 0; i < k_; ++i) f[i] += Rat(t.node.d[i]) * t.coeff;
    return f;
  }

  // mu_i(1) = sum_d d_i mu_d, per edge-type.
  std::vector<Rat> check_fractions() const {
    std::vector<Rat> f(k_, Rat(0));
    for (const auto& t : chk_terms_)
      for (std::size_t i = 0; i < k_; ++i) f[i] += Rat(t.node.d[i]) * t.coeff;
    return f;
  }

  Rat var_mass() const {
    Rat m = 0;
    for (const auto& t : var_terms_) m += t.coeff;
    return m;
  }

  Rat chk_mass() const {
    Rat m = 0;
    for (const auto& t : chk_terms_) m += t.coeff;
    return m;
  }

  // (total variable mass - total check mass) per transmitted bit.
  Rat design_rate() const { return var_mass() - chk_mass(); }

  bool unpunctured() const {
    for (const auto& t : var_terms_)
      if (!t.channel.transmitted()) return false;
    return true;
  }

  // lcm of all coefficient denominators: the least n at which every node
  // count is an integer.
  Int smallest_valid_n() const {
    Int l = 1;
    auto fold = [&](const Rat& c) { l = boost::multiprecision::lcm(l, denominator(c)); };
    for (const auto& t : var_terms_) fold(t.coeff);
    for (const auto& t : chk_terms_) fold(t.coeff);
    return l;
  }

  // Canonical text form; reparses to an equal spec.
  std::string serialize() const {
    std::ostringstream os;
    os << "edge_types " << k_ << "\n";
    for (const auto& t : var_terms_) {
      os << "var " << rat_string(t.coeff) << " b " << t.channel.b0 << " " << t.channel.b1
         << " d";
      for (auto v : t.node.d) os << " " << v;
      os << "\n";
    }
    for (const auto& t : chk_terms_) {
      os << "chk " << rat_string(t.coeff) << " d";
      for (auto v : t.node.d) os << " " << v;
      os << "\n";
    }
    return os.str();
  }

  bool operator==(const EnsembleSpec& o) const {
    auto key_vars = [](const std::vector<VarTerm>& v) {
      std::vector<std::tuple<ChannelType, NodeType, Rat>> k;
      for (const auto& t : v) k.emplace_back(t.channel, t.node, t.coeff);
      std::sort(k.begin(), k.end());
      return k;
    };
    auto key_chks = [](const std::vector<ChkTerm>& v) {
      std::vector<std::pair<NodeType, Rat>> k;
      for (const auto& t : v) k.emplace_back(t.node, t.coeff);
      std::sort(k.begin(), k.end());
      return k;
    };
    return k_ == o.k_ && key_vars(var_terms_) == key_vars(o.var_terms_) &&
           key_chks(chk_terms_) == key_chks(o.chk_terms_);
  }

 private:
  EnsembleSpec() = default;

  void validate() const {
    if (k_ == 0) throw std::invalid_argument("ensemble must declare at least one edge-type");
    if (var_terms_.empty()) throw std::invalid_argument("ensemble has no variable terms");
    if (chk_terms_.empty()) throw std::invalid_argument("ensemble has no check terms");

    auto check_node = [&](const NodeType& nt, const char* what) {
      if (nt.d.size() != k_)
        throw std::invalid_argument(std::string(what) + " degree vector length != edge_types");
      bool any = false;
      for (auto v : nt.d) any = any || v > 0;
      if (!any) throw std::invalid_argument(std::string(what) + " node-type has no edges");
    };

    std::set<std::pair<ChannelType, NodeType>> var_keys;
    Rat transmitted_mass = 0;
    for (const auto& t : var_terms_) {
      if (t.coeff <= 0) throw std::invalid_argument("variable coefficient must be positive");
      if (!((t.channel.b0 == 1 && t.channel.b1 == 0) || (t.channel.b0 == 0 && t.channel.b1 == 1)))
        throw std::invalid_argument("channel-type must be (1,0) punctured or (0,1) transmitted");
      check_node(t.node, "variable");
      if (!var_keys.insert({t.channel, t.node}).second)
        throw std::invalid_argument("duplicate (channel, node-type) among variable terms");
      if (t.channel.transmitted()) transmitted_mass += t.coeff;
    }
    std::set<NodeType> chk_keys;
    for (const auto& t : chk_terms_) {
      if (t.coeff <= 0) throw std::invalid_argument("check coefficient must be positive");
      check_node(t.node, "check");
      if (!chk_keys.insert(t.node).second)
        throw std::invalid_argument("duplicate node-type among check terms");
    }

    if (transmitted_mass != 1)
      throw std::invalid_argument("transmitted variable mass must equal 1, got " +
                                  rat_string(transmitted_mass));

    const auto vf = edge_fractions();
    const auto cf = check_fractions();
    for (std::size_t i = 0; i < k_; ++i) {
      if (vf[i] != cf[i]) {
        std::ostringstream os;
        os << "edge balance violated for edge-type " << (i + 1) << ": nu_i(1,1)="
           << rat_string(vf[i]) << " != mu_i(1)=" << rat_string(cf[i]);
        throw std::invalid_argument(os.str());
      }
      if (vf[i] == 0)
        throw std::invalid_argument("edge-type " + std::to_string(i + 1) +
                                    " has no edges; drop it from the spec");
    }
  }

  std::size_t k_ = 0;
  std::vector<VarTerm> var_terms_;
  std::vector<ChkTerm> chk_terms_;
};

// ---------------------------------------------------------------------------
// Text format:
//   edge_types <k>
//   var <coeff> b <b0> <b1> d <d1> ... <dk>
//   chk <coeff> d <d1> ... <dk>
// '#' starts a comment; coefficients are "p/q" or exact decimal literals.
inline EnsembleSpec parse_spec(const std::string& text) {
  struct Line {
    int number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ls(raw);
      Line l{no, {}};
      std::string tok;
      while (ls >> tok) l.tokens.push_back(tok);
      if (!l.tokens.empty()) lines.push_back(std::move(l));
    }
  }
  auto fail = [](int line, const std::string& msg) -> std::invalid_argument {
    return std::invalid_argument("spec line " + std::to_string(line) + ": " + msg);
  };
  if (lines.empty()) throw std::invalid_argument("spec: empty document");

  const auto& head = lines.front();
  if (head.tokens.size() != 2 || head.tokens[0] != "edge_types")
    throw fail(head.number, "expected 'edge_types <k>'");
  std::size_t k = 0;
  try {
    long long v = std::stoll(head.tokens[1]);
    if (v <= 0) throw std::invalid_argument("");
    k = static_cast<std::size_t>(v);
  } catch (...) {
    throw fail(head.number, "edge_types must be a positive integer");
  }

  auto parse_degrees = [&](const Line& l, std::size_t from) {
    if (l.tokens.size() != from + k)
      throw fail(l.number, "expected " + std::to_string(k) + " degree entries after 'd'");
    NodeType nt;
    for (std::size_t i = 0; i < k; ++i) {
      try {
        long long v = std::stoll(l.tokens[from + i]);
        if (v < 0) throw std::invalid_argument("");
        nt.d.push_back(static_cast<std::uint32_t>(v));
      } catch (...) {
        throw fail(l.number, "degree entry " + std::to_string(i + 1) + " is not a non-negative integer");
      }
    }
    return nt;
  };

  std::vector<VarTerm> vars;
  std::vector<ChkTerm> chks;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& l = lines[li];
    try {
      if (l.tokens[0] == "var") {
        if (l.tokens.size() < 6 || l.tokens[2] != "b")
          throw fail(l.number, "expected 'var <coeff> b <b0> <b1> d ...'");
        VarTerm t;
        t.coeff = parse_rational(l.tokens[1]);
        t.channel.b0 = std::stoi(l.tokens[3]);
        t.channel.b1 = std::stoi(l.tokens[4]);
        if (l.tokens[5] != "d") throw fail(l.number, "expected 'd' after channel-type");
        t.node = parse_degrees(l, 6);
        vars.push_back(std::move(t));
      } else if (l.tokens[0] == "chk") {
        if (l.tokens.size() < 3 || l.tokens[2] != "d")
          throw fail(l.number, "expected 'chk <coeff> d ...'");
        ChkTerm t;
        t.coeff = parse_rational(l.tokens[1]);
        t.node = parse_degrees(l, 3);
        chks.push_back(std::move(t));
      } else {
        throw fail(l.number, "unknown directive '" + l.tokens[0] + "'");
      }
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      if (msg.rfind("spec line", 0) == 0) throw;
      throw fail(l.number, msg);
    }
  }
  return EnsembleSpec::create(k, std::move(vars), std::move(chks));
}

// Standard irregular ensemble, edge-perspective (lambda_i, rho_i) keyed by
// node degree i: nu(r1,x) = r1 * sum_i (lambda_i/i) x^i / L with
// L = sum_i lambda_i/i, and mu(x) = sum_i (rho_i/i) x^i / L.
inline EnsembleSpec from_standard(const std::vector<std::pair<std::uint32_t, Rat>>& lambda,
                                  const std::vector<std::pair<std::uint32_t, Rat>>& rho) {
  auto check_dist = [](const std::vector<std::pair<std::uint32_t, Rat>>& d, const char* name) {
    Rat mass = 0;
    for (const auto& [deg, c] : d) {
      if (deg == 0) throw std::invalid_argument(std::string(name) + ": degree must be >= 1");
      if (c < 0) throw std::invalid_argument(std::string(name) + ": negative coefficient");
      mass += c;
    }
    if (mass != 1)
      throw std::invalid_argument(std::string(name) + ": coefficients must sum to 1, got " +
                                  rat_string(mass));
  };
  check_dist(lambda, "lambda");
  check_dist(rho, "rho");

  Rat L = 0;
  for (const auto& [deg, c] : lambda) L += c / deg;
  std::vector<VarTerm> vars;
  for (const auto& [deg, c] : lambda) {
    if (c == 0) continue;
    vars.push_back({c / deg / L, ChannelType{0, 1}, NodeType{{deg}}});
  }
  std::vector<ChkTerm> chks;
  for (const auto& [deg, c] : rho) {
    if (c == 0) continue;
    chks.push_back({c / deg / L, NodeType{{deg}}});
  }
  return EnsembleSpec::create(1, std::move(vars), std::move(chks));
}

// ---------------------------------------------------------------------------
struct InstantiatedCounts {
  EnsembleSpec spec;
  std::int64_t n = 0;
  std::vector<std::int64_t> var_counts;   // n * nu_{b,d}, per var term
  std::vector<std::int64_t> chk_counts;   // n * mu_d, per chk term
  std::vector<std::int64_t> edge_counts;  // E_i
};

inline InstantiatedCounts instantiate(const EnsembleSpec& spec, std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("instantiate: n must be positive");
  InstantiatedCounts c{spec, n, {}, {}, {}};
  auto exact_count = [&](const Rat& coeff, const std::string& what) {
    Rat v = coeff * n;
    if (denominator(v) != 1) {
      std::ostringstream os;
      os << "instantiate: " << what << " count " << rat_string(coeff) << " * " << n
         << " is not an integer; smallest valid n = " << spec.smallest_valid_n().str();
      throw std::invalid_argument(os.str());
    }
    return numerator(v).convert_to<std::int64_t>();
  };
  for (std::size_t i = 0; i < spec.var_terms().size(); ++i)
    c.var_counts.push_back(exact_count(spec.var_terms()[i].coeff,
                                       "variable term " + std::to_string(i + 1)));
  for (std::size_t i = 0; i < spec.chk_terms().size(); ++i)
    c.chk_counts.push_back(exact_count(spec.chk_terms()[i].coeff,
                                       "check term " + std::to_string(i + 1)));
  c.edge_counts.assign(spec.n_edge_types(), 0);
  for (std::size_t t = 0; t < spec.var_terms().size(); ++t)
    for (std::size_t i = 0; i < spec.n_edge_types(); ++i)
      c.edge_counts[i] += c.var_counts[t] * spec.var_terms()[t].node.d[i];
  return c;
}

// Number of graphs in the ensemble: product of E_i!.
inline Int ensemble_size(const InstantiatedCounts& c) {
  Int g = 1;
  for (auto e : c.edge_counts) g *= factorial(static_cast<std::uint64_t>(e));
  return g;
}

}  // namespace metldpc
