#pragma once

// Independent single-edge-type reference implementations used only by tests.
// The growth oracle evaluates the sup-inf characterization with scalar
// generating functions and derivative-free 1D searches; the density-evolution
// oracle is the textbook scalar recursion. Neither shares code with the
// library's solvers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "metldpc/ensemble.hpp"
#include "metldpc/numeric.hpp"

namespace scalar_oracle {

struct ScalarEnsemble {
  // (node degree, coefficient), single edge-type, all transmitted
  std::vector<std::pair<std::uint32_t, double>> vars;
  std::vector<std::pair<std::uint32_t, double>> chks;
  double mu1 = 0.0;
};

inline ScalarEnsemble reduce(const metldpc::EnsembleSpec& spec) {
  if (spec.n_edge_types() != 1)
    throw std::invalid_argument("scalar oracle: single edge-type specs only");
  ScalarEnsemble s;
  for (const auto& t : spec.var_terms()) {
    if (!t.channel.transmitted())
      throw std::invalid_argument("scalar oracle: un-punctured specs only");
    s.vars.emplace_back(t.node.d[0], metldpc::to_double(t.coeff));
  }
  for (const auto& t : spec.chk_terms()) {
    s.chks.emplace_back(t.node.d[0], metldpc::to_double(t.coeff));
    s.mu1 += t.node.d[0] * metldpc::to_double(t.coeff);
  }
  return s;
}

// log f_d(e^y) with f_d(u) = sum_{e even} binom(d,e) u^e, stable for any y.
inline double log_fd(std::uint32_t d, double y) {
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> ms;
  for (std::uint32_t e = 0; e <= d; e += 2) {
    const double m = metldpc::log_int(metldpc::binomial(d, e)) + e * y;
    ms.push_back(m);
    mx = std::max(mx, m);
  }
  double acc = 0.0;
  for (double m : ms) acc += std::exp(m - mx);
  return mx + std::log(acc);
}

// Golden-section minimum of a scalar function on [a, b].
template <typename F>
double golden_min(F f, double a, double b, double tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// inf over u > 0 of [sum_d mu_d log f_d(u) - beta log u].
inline double check_side(const ScalarEnsemble& s, double beta) {
  auto g = [&](double y) {
    double acc = -beta * y;
    for (const auto& [d, c] : s.chks) acc += c * log_fd(d, y);
    return acc;
  };
  const double y = golden_min(g, -80.0, 80.0, 1e-11);
  return g(y);
}

inline double entropy(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return metldpc::binary_entropy(x);
}

// Growth rate by the scalar sup-inf: the variable side is handled
// combinatorially (per-degree activity fractions), the check side by the 1D
// infimum above. Supports one or two distinct variable degrees.
inline double gamma(const ScalarEnsemble& s, double omega) {
  if (!(omega > 0.0 && omega < 1.0))
    throw std::invalid_argument("scalar oracle: omega outside (0,1)");
  if (s.vars.size() == 1) {
    const auto [d, c] = s.vars[0];
    const double beta = d * omega;
    return entropy(omega) + check_side(s, beta) - s.mu1 * entropy(beta / s.mu1);
  }
  if (s.vars.size() != 2)
    throw std::invalid_argument("scalar oracle: at most two distinct variable degrees");
  const auto [d1, c1] = s.vars[0];
  const auto [d2, c2] = s.vars[1];
  const double lo = std::max(0.0, omega - c1);
  const double hi = std::min(c2, omega);
  auto total = [&](double a2) {
    const double a1 = omega - a2;
    const double beta = d1 * a1 + d2 * a2;
    double q = c1 * entropy(a1 / c1) + c2 * entropy(a2 / c2);
    return q + check_side(s, beta) - s.mu1 * entropy(beta / s.mu1);
  };
  // dense scan, then golden refinement of the negated objective
  const int kGrid = 4000;
  double best_a = lo, best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double a = lo + (hi - lo) * i / kGrid;
    const double v = total(a);
    if (v > best_v) {
      best_v = v;
      best_a = a;
    }
  }
  const double cell = (hi - lo) / kGrid;
  const double a = golden_min([&](double x) { return -total(x); },
                              std::max(lo, best_a - 2 * cell), std::min(hi, best_a + 2 * cell),
                              1e-12);
  return total(a);
}

inline double gamma(const metldpc::EnsembleSpec& spec, double omega) {
  return gamma(reduce(spec), omega);
}

// ---------------------------------------------------------------------------
// Scalar density evolution, edge-perspective lambda(x) = sum lambda_i x^{i-1}.
struct ScalarDE {
  std::vector<std::pair<std::uint32_t, double>> lambda;  // (node degree, coeff)
  std::vector<std::pair<std::uint32_t, double>> rho;

  double lam(double x) const {
    double acc = 0.0;
    for (const auto& [d, c] : lambda) acc += c * std::pow(x, static_cast<int>(d) - 1);
    return acc;
  }
  double rh(double x) const {
    double acc = 0.0;
    for (const auto& [d, c] : rho) acc += c * std::pow(x, static_cast<int>(d) - 1);
    return acc;
  }
  double step(double eps, double p) const { return eps * lam(1.0 - rh(1.0 - p)); }

  bool converges(double eps, std::int64_t max_iters = 100000, double zero = 1e-12,
                 double stall = 1e-15) const {
    double p = eps;
    for (std::int64_t i = 0; i < max_iters; ++i) {
      const double next = step(eps, p);
      const double change = std::abs(next - p);
      p = next;
      if (p <= zero) return true;
      if (change <= stall) return false;
    }
    return false;
  }

  double threshold(double tol = 1e-4) const {
    double lo = 0.0, hi = 1.0;
    if (converges(1.0)) return 1.0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (converges(mid) ? lo : hi) = mid;
    }
    return lo;
  }
};

}  // namespace scalar_oracle
