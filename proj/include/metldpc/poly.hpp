#pragma once

// Exact sparse multivariate polynomials with rational coefficients.
// Terms are keyed by exponent vectors and kept in lexicographic order, so
// iteration and serialization are deterministic. Truncation caps are passed
// explicitly at every multiply/power site; a term that exceeds its cap can
// never re-enter a capped result, so dropping it is lossless for the
// coefficient ranges the callers extract.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "metldpc/numeric.hpp"

namespace metldpc {

using Exponents = std::vector<std::uint32_t>;

struct DegreeCap {
  // Empty per_var means no per-variable caps. When non-empty it must match
  // the arity of the polynomials it is applied to.
  std::vector<std::optional<std::uint32_t>> per_var;
  std::optional<std::uint64_t> total;

  static DegreeCap none() { return {}; }

  static DegreeCap per_variable(std::vector<std::optional<std::uint32_t>> caps) {
    DegreeCap c;
    c.per_var = std::move(caps);
    return c;
  }

  bool admits(const Exponents& e) const {
    if (!per_var.empty()) {
      if (per_var.size() != e.size())
        throw std::invalid_argument("DegreeCap arity does not match exponent vector");
      for (std::size_t i = 0; i < e.size(); ++i)
        if (per_var[i] && e[i] > *per_var[i]) return false;
    }
    if (total) {
      std::uint64_t sum = 0;
      for (auto v : e) sum += v;
      if (sum > *total) return false;
    }
    return true;
  }
};

class SparsePoly {
 public:
  using TermMap = std::map<Exponents, Rat>;

  explicit SparsePoly(std::size_t arity) : arity_(arity) {}

  static SparsePoly constant(std::size_t arity, const Rat& c) {
    SparsePoly p(arity);
    p.add_term(Exponents(arity, 0), c);
    return p;
  }

  static SparsePoly monomial(Exponents e, const Rat& c) {
    SparsePoly p(e.size());
    p.add_term(std::move(e), c);
    return p;
  }

  std::size_t arity() const { return arity_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Exponents e, const Rat& c) {
    if (e.size() != arity_)
      throw std::invalid_argument("exponent vector length does not match polynomial arity");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rat coef(const Exponents& e) const {
    if (e.size() != arity_)
      throw std::invalid_argument("coef: exponent vector length does not match arity");
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  // One term per line: "p/q  e1 e2 ... ek", lexicographic in the exponents.
  std::string debug_str() const {
    std::ostringstream os;
    for (const auto& [e, c] : terms_) {
      os << rat_string(c) << " ";
      for (auto v : e) os << " " << v;
      os << "\n";
    }
    return os.str();
  }

 private:
  std::size_t arity_;
  TermMap terms_;
};

inline SparsePoly poly_add(const SparsePoly& a, const SparsePoly& b) {
  if (a.arity() != b.arity())
    throw std::invalid_argument("poly_add: arity mismatch");
  SparsePoly r = a;
  for (const auto& [e, c] : b.terms()) r.add_term(e, c);
  return r;
}

inline SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b,
                           const DegreeCap& cap = DegreeCap::none()) {
  if (a.arity() != b.arity())
    throw std::invalid_argument("poly_mul: arity mismatch");
  SparsePoly r(a.arity());
  Exponents e(a.arity());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      if (!cap.admits(e)) continue;
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

// Truncated k-th power by binary exponentiation; the cap is applied at every
// multiply so intermediates never outgrow it.
inline SparsePoly poly_pow(const SparsePoly& a, std::uint64_t k,
                           const DegreeCap& cap = DegreeCap::none()) {
  SparsePoly result = SparsePoly::constant(a.arity(), 1);
  if (k == 0) return result;
  SparsePoly base = a;
  while (true) {
    if (k & 1) result = poly_mul(result, base, cap);
    k >>= 1;
    if (k == 0) break;
    base = poly_mul(base, base, cap);
  }
  return result;
}

}  // namespace metldpc
