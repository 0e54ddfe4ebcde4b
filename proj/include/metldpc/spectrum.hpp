#pragma once

// Exact finite-length average weight distribution. The (t,s) table counts
// weight-l active-edge constellations on the variable side, the u table
// counts check-satisfying constellations, and the average couples them per
// active-edge vector e with the permutation-count denominator.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "metldpc/ensemble.hpp"
#include "metldpc/numeric.hpp"
#include "metldpc/poly.hpp"

namespace metldpc {

inline constexpr std::uint64_t kDefaultTermBudget = 8'000'000;

struct WeightSpectrum {
  std::int64_t n = 0;
  std::int64_t ell_max = 0;
  std::vector<Rat> values;  // A(0..ell_max)
};

// Generating function of the satisfying constellations of one check node:
// coefficient at e is prod_i binom(d_i, e_i) when sum(e) is even, else 0.
// Equals ((1+u)^d + (1-u)^d)/2 expanded.
inline SparsePoly check_constellation_poly(const NodeType& d) {
  const std::size_t k = d.d.size();
  SparsePoly f(k);
  Exponents e(k, 0);
  std::vector<BinomialRow> rows;
  rows.reserve(k);
  for (auto di : d.d) rows.emplace_back(di);
  // odometer over 0 <= e_i <= d_i
  while (true) {
    std::uint64_t total = 0;
    for (auto v : e) total += v;
    if (total % 2 == 0) {
      Int c = 1;
      for (std::size_t i = 0; i < k; ++i) c *= rows[i][e[i]];
      f.add_term(e, Rat(c));
    }
    std::size_t i = 0;
    while (i < k && e[i] == d.d[i]) e[i++] = 0;
    if (i == k) break;
    ++e[i];
  }
  return f;
}

struct ConstellationTables {
  // qn: arity k+1, variable 0 is t, variables 1..k are s_i.
  // pn: arity k over u_i.
  SparsePoly qn{1};
  SparsePoly pn{1};

  Rat q(std::int64_t ell, const Exponents& e) const {
    Exponents key(e.size() + 1);
    key[0] = static_cast<std::uint32_t>(ell);
    std::copy(e.begin(), e.end(), key.begin() + 1);
    return qn.coef(key);
  }
  Rat p(const Exponents& e) const { return pn.coef(e); }
};

namespace detail {

inline void enforce_budget(const SparsePoly& p, std::uint64_t budget, const char* where) {
  if (p.term_count() > budget)
    throw std::runtime_error(std::string("term budget exceeded in ") + where + " (" +
                             std::to_string(p.term_count()) + " > " + std::to_string(budget) +
                             " terms); raise --term-budget or lower ell_max");
}

// (1 + t^{b1} s^d)^count under the cap, expanded by one binomial row.
inline SparsePoly var_factor_power(const VarTerm& term, std::int64_t count,
                                   const DegreeCap& cap, std::size_t k) {
  Exponents mono(k + 1, 0);
  mono[0] = term.channel.transmitted() ? 1u : 0u;
  for (std::size_t i = 0; i < k; ++i) mono[i + 1] = term.node.d[i];

  std::uint64_t jmax = static_cast<std::uint64_t>(count);
  if (!cap.per_var.empty()) {
    for (std::size_t i = 0; i <= k; ++i) {
      if (mono[i] == 0 || !cap.per_var[i]) continue;
      jmax = std::min<std::uint64_t>(jmax, *cap.per_var[i] / mono[i]);
    }
  }
  SparsePoly f(k + 1);
  BinomialRow row(static_cast<std::uint64_t>(count));
  Exponents e(k + 1, 0);
  for (std::uint64_t j = 0; j <= jmax; ++j) {
    for (std::size_t i = 0; i <= k; ++i) e[i] = static_cast<std::uint32_t>(mono[i] * j);
    if (cap.admits(e)) f.add_term(e, Rat(row[j]));
  }
  return f;
}

}  // namespace detail

// Q(t,s)^n and P(u)^n coefficient tables, truncated at t <= ell_max and
// s_i <= E_i. The u caps are tightened to the s-support actually reachable
// in the Q table; entries beyond it never pair in the average.
inline ConstellationTables build_tables(const InstantiatedCounts& counts, std::int64_t ell_max,
                                        std::uint64_t term_budget = kDefaultTermBudget) {
  const auto& spec = counts.spec;
  const std::size_t k = spec.n_edge_types();
  if (ell_max < 0 || ell_max > counts.n)
    throw std::invalid_argument("build_tables: ell_max must lie in [0, n]");

  std::vector<std::optional<std::uint32_t>> qcaps(k + 1);
  qcaps[0] = static_cast<std::uint32_t>(ell_max);
  for (std::size_t i = 0; i < k; ++i)
    qcaps[i + 1] = static_cast<std::uint32_t>(counts.edge_counts[i]);
  const DegreeCap qcap = DegreeCap::per_variable(qcaps);

  ConstellationTables t;
  t.qn = SparsePoly::constant(k + 1, 1);
  for (std::size_t v = 0; v < spec.var_terms().size(); ++v) {
    t.qn = poly_mul(t.qn, detail::var_factor_power(spec.var_terms()[v], counts.var_counts[v],
                                                   qcap, k),
                    qcap);
    detail::enforce_budget(t.qn, term_budget, "Q(t,s)^n");
  }

  std::vector<std::optional<std::uint32_t>> pcaps(k);
  for (std::size_t i = 0; i < k; ++i) pcaps[i] = 0u;
  for (const auto& [e, c] : t.qn.terms())
    for (std::size_t i = 0; i < k; ++i)
      pcaps[i] = std::max(*pcaps[i], e[i + 1]);
  const DegreeCap pcap = DegreeCap::per_variable(pcaps);

  t.pn = SparsePoly::constant(k, 1);
  for (std::size_t c = 0; c < spec.chk_terms().size(); ++c) {
    SparsePoly f = check_constellation_poly(spec.chk_terms()[c].node);
    t.pn = poly_mul(t.pn, poly_pow(f, static_cast<std::uint64_t>(counts.chk_counts[c]), pcap),
                    pcap);
    detail::enforce_budget(t.pn, term_budget, "P(u)^n");
  }
  return t;
}

// A(l) = sum_e coef(Q^n, t^l s^e) coef(P^n, u^e) / prod_i binom(E_i, e_i),
// exact rationals for l = 0..ell_max.
inline WeightSpectrum average_weight_distribution(const InstantiatedCounts& counts,
                                                  std::int64_t ell_max,
                                                  std::uint64_t term_budget = kDefaultTermBudget) {
  const std::size_t k = counts.spec.n_edge_types();
  ConstellationTables tables = build_tables(counts, ell_max, term_budget);

  std::vector<BinomialRow> rows;
  rows.reserve(k);
  for (auto e : counts.edge_counts) rows.emplace_back(static_cast<std::uint64_t>(e));

  WeightSpectrum ws;
  ws.n = counts.n;
  ws.ell_max = ell_max;
  ws.values.assign(static_cast<std::size_t>(ell_max) + 1, Rat(0));
  Exponents e(k);
  for (const auto& [key, qc] : tables.qn.terms()) {
    std::copy(key.begin() + 1, key.end(), e.begin());
    const Rat pc = tables.pn.coef(e);
    if (pc == 0) continue;
    Int denom = 1;
    for (std::size_t i = 0; i < k; ++i) denom *= rows[i][e[i]];
    ws.values[key[0]] += qc * pc / Rat(denom);
  }
  return ws;
}

// Finite-n sequence (1/n) ln A(round(omega n)) used to eyeball convergence
// toward the asymptotic growth rate.
inline std::vector<std::pair<std::int64_t, double>> normalized_log_spectrum(
    const EnsembleSpec& spec, const std::vector<std::int64_t>& n_list, const Rat& omega,
    std::uint64_t term_budget = kDefaultTermBudget) {
  std::vector<std::pair<std::int64_t, double>> out;
  for (auto n : n_list) {
    InstantiatedCounts c = instantiate(spec, n);
    Rat ln = omega * n + Rat(1, 2);
    std::int64_t ell = (numerator(ln) / denominator(ln)).convert_to<std::int64_t>();
    if (ell > n) ell = n;
    WeightSpectrum ws = average_weight_distribution(c, ell, term_budget);
    out.emplace_back(n, log_rat(ws.values[static_cast<std::size_t>(ell)]) / double(n));
  }
  return out;
}

}  // namespace metldpc
