#pragma once

// Exact rational scalars plus the small numeric helpers shared across the
// library. All exact arithmetic sits on boost::multiprecision; nothing in
// here ever rounds unless the function name says so.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace metldpc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Parses "p/q", an integer, or a decimal literal. Decimals are converted
// exactly (0.3 -> 3/10), never through binary floating point.
inline Rat parse_rational(const std::string& tok) {
  if (tok.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t pos = 0;
  bool neg = false;
  if (tok[pos] == '+' || tok[pos] == '-') {
    neg = (tok[pos] == '-');
    ++pos;
  }
  auto bad = [&]() -> std::invalid_argument {
    return std::invalid_argument("malformed rational literal '" + tok + "'");
  };
  std::string digits, frac, den;
  enum { INT_PART, FRAC_PART, DEN_PART } state = INT_PART;
  for (; pos < tok.size(); ++pos) {
    char c = tok[pos];
    if (c >= '0' && c <= '9') {
      (state == INT_PART ? digits : state == FRAC_PART ? frac : den) += c;
    } else if (c == '.' && state == INT_PART) {
      state = FRAC_PART;
    } else if (c == '/' && state == INT_PART) {
      state = DEN_PART;
    } else {
      throw bad();
    }
  }
  if (digits.empty() && frac.empty()) throw bad();
  Rat value;
  if (state == DEN_PART) {
    if (den.empty()) throw bad();
    Int q(den);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + tok + "'");
    value = Rat(Int(digits.empty() ? "0" : digits), q);
  } else if (state == FRAC_PART) {
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int num = Int(digits.empty() ? "0" : digits) * scale + Int(frac.empty() ? "0" : frac);
    value = Rat(num, scale);
  } else {
    value = Rat(Int(digits));
  }
  return neg ? -value : value;
}

// Always-explicit "p/q" form; deterministic.
inline std::string rat_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

// Natural log of a positive big integer, accurate to double precision.
inline double log_int(const Int& x) {
  if (x <= 0) throw std::domain_error("log_int: argument must be positive");
  const unsigned bits = boost::multiprecision::msb(x);  // floor(log2 x)
  if (bits <= 62) return std::log(x.convert_to<double>());
  Int top = x >> (bits - 62);
  return std::log(top.convert_to<double>()) + (bits - 62) * std::log(2.0);
}

// Natural log of a non-negative rational; -inf at zero.
inline double log_rat(const Rat& r) {
  if (r < 0) throw std::domain_error("log_rat: negative argument");
  if (r == 0) return -std::numeric_limits<double>::infinity();
  return log_int(numerator(r)) - log_int(denominator(r));
}

inline Int factorial(std::uint64_t n) {
  Int f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Int binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Int r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact at every step
  }
  return r;
}

// Memoized row binom(E, 0..E). The per-e denominators of the averaging
// formula hit the same row many times.
class BinomialRow {
 public:
  explicit BinomialRow(std::uint64_t e) : row_(e + 1) {
    row_[0] = 1;
    for (std::uint64_t k = 1; k <= e; ++k) row_[k] = row_[k - 1] * (e - k + 1) / k;
  }
  const Int& operator[](std::uint64_t k) const { return row_.at(k); }

 private:
  std::vector<Int> row_;
};

// Binary entropy in nats; h(0) = h(1) = 0.
inline double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace metldpc
