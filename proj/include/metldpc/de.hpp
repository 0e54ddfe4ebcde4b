#pragma once

// Multi-edge-type density evolution over the binary erasure channel and the
// spectral-radius stability condition. The recursion evaluates the exact
// sparse forms of lambda_i(r,x) = nu_i(r,x)/nu_i(1,1) and
// rho_i(x) = mu_i(x)/mu_i(1) in double precision; polynomials are never
// re-expanded between steps.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "metldpc/ensemble.hpp"
#include "metldpc/numeric.hpp"
#include "metldpc/smallweight.hpp"

namespace metldpc {

struct DEState {
  std::vector<double> p;  // per edge-type erasure probability, var -> chk
  std::int64_t iteration = 0;
};

struct DEResult {
  bool converged_to_zero = false;
  DEState fixed_point;
  std::vector<double> trajectory_max;  // max_i p_i per iteration (iteration 0 first)
  std::int64_t iterations = 0;
};

struct DEOptions {
  std::int64_t max_iters = 100000;
  double zero_threshold = 1e-12;
  double change_threshold = 1e-15;
};

class DensityEvolution {
 public:
  explicit DensityEvolution(const EnsembleSpec& spec) : k_(spec.n_edge_types()) {
    const auto vf = spec.edge_fractions();
    const auto cf = spec.check_fractions();
    lambda_.resize(k_);
    rho_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      for (const auto& t : spec.var_terms()) {
        if (t.node.d[i] == 0) continue;
        Term term;
        term.coeff = to_double(Rat(t.node.d[i]) * t.coeff / vf[i]);
        term.transmitted = t.channel.transmitted();
        term.e.assign(t.node.d.begin(), t.node.d.end());
        term.e[i] -= 1;
        lambda_[i].push_back(std::move(term));
      }
      for (const auto& t : spec.chk_terms()) {
        if (t.node.d[i] == 0) continue;
        Term term;
        term.coeff = to_double(Rat(t.node.d[i]) * t.coeff / cf[i]);
        term.transmitted = true;  // unused on the check side
        term.e.assign(t.node.d.begin(), t.node.d.end());
        term.e[i] -= 1;
        rho_[i].push_back(std::move(term));
      }
    }
  }

  std::size_t n_edge_types() const { return k_; }

  // One recursion step: p'_i = lambda_i((1, eps), 1 - rho(1 - p)).
  std::vector<double> step(double eps, const std::vector<double>& p) const {
    if (p.size() != k_) throw std::invalid_argument("de step: state arity mismatch");
    std::vector<double> x(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      double acc = 0.0;
      for (const auto& t : rho_[i]) {
        double m = t.coeff;
        for (std::size_t j = 0; j < k_; ++j) m *= pow_u32(1.0 - p[j], t.e[j]);
        acc += m;
      }
      x[i] = 1.0 - acc;
    }
    std::vector<double> out(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      double acc = 0.0;
      for (const auto& t : lambda_[i]) {
        double m = t.coeff * (t.transmitted ? eps : 1.0);
        for (std::size_t j = 0; j < k_; ++j) m *= pow_u32(x[j], t.e[j]);
        acc += m;
      }
      out[i] = std::clamp(acc, 0.0, 1.0);
    }
    return out;
  }

  DEResult run(double eps, const DEOptions& opts = {}) const {
    if (!(eps >= 0.0 && eps <= 1.0))
      throw std::invalid_argument("de run: erasure probability must lie in [0,1]");
    DEResult res;
    std::vector<double> p(k_, eps);
    res.trajectory_max.push_back(max_of(p));
    for (std::int64_t it = 1; it <= opts.max_iters; ++it) {
      std::vector<double> next = step(eps, p);
      double change = 0.0;
      for (std::size_t i = 0; i < k_; ++i) change = std::max(change, std::abs(next[i] - p[i]));
      p = std::move(next);
      res.trajectory_max.push_back(max_of(p));
      res.iterations = it;
      if (max_of(p) <= opts.zero_threshold) {
        res.converged_to_zero = true;
        break;
      }
      if (change <= opts.change_threshold) break;
    }
    res.fixed_point = DEState{p, res.iterations};
    return res;
  }

 private:
  struct Term {
    double coeff = 0.0;
    bool transmitted = true;
    std::vector<std::uint32_t> e;
  };

  static double pow_u32(double base, std::uint32_t e) {
    double r = 1.0;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  static double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }

  std::size_t k_;
  std::vector<std::vector<Term>> lambda_;  // per edge-type i: terms of nu_i normalized
  std::vector<std::vector<Term>> rho_;
};

struct ThresholdResult {
  double epsilon_star = 0.0;
  bool degenerate_full = false;  // de_run succeeds even at eps = 1
  bool degenerate_zero = false;  // de_run fails already at eps = 0
};

// Largest eps (within tol) at which density evolution drives every message
// erasure probability to zero; plain bisection with verified brackets.
inline ThresholdResult de_threshold(const EnsembleSpec& spec, double tol = 1e-4,
                                    const DEOptions& opts = {}) {
  if (!(tol > 0)) throw std::invalid_argument("threshold: tol must be positive");
  DensityEvolution de(spec);
  ThresholdResult r;
  if (!de.run(0.0, opts).converged_to_zero) {
    r.degenerate_zero = true;
    return r;
  }
  if (de.run(1.0, opts).converged_to_zero) {
    r.epsilon_star = 1.0;
    r.degenerate_full = true;
    return r;
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (de.run(mid, opts).converged_to_zero ? lo : hi) = mid;
  }
  r.epsilon_star = lo;
  return r;
}

struct StabilityResult {
  double radius = 0.0;
  bool stable = false;
};

// Spectral radius of Lambda(1,eps) P; stable iff < 1. The transmitted and
// punctured contributions to Lambda are kept exact separately, so the only
// rounding is the final eigen step.
inline StabilityResult stability_check(const EnsembleSpec& spec, const Rat& eps) {
  if (eps < 0 || eps > 1)
    throw std::invalid_argument("stability: erasure probability must lie in [0,1]");
  SmallWeightMatrices m = build_matrices(spec, {Rat(1), eps});
  StabilityResult r;
  r.radius = spectral_radius(m.product().to_double());
  r.stable = r.radius < 1.0;
  return r;
}

struct StabilityVsThreshold {
  double epsilon_star = 0.0;
  bool epsilon_star_degenerate = false;
  double epsilon_stab = 0.0;
  bool unconditionally_stable = false;  // radius < 1 for every eps
  bool radius_linear_in_eps = false;    // un-punctured: Lambda(1,eps) = eps Lambda(1,1)
};

inline StabilityVsThreshold stability_vs_threshold(const EnsembleSpec& spec, double tol = 1e-4,
                                                   const DEOptions& opts = {}) {
  StabilityVsThreshold out;
  const ThresholdResult th = de_threshold(spec, tol, opts);
  out.epsilon_star = th.epsilon_star;
  out.epsilon_star_degenerate = th.degenerate_full || th.degenerate_zero;
  out.radius_linear_in_eps = spec.unpunctured();
  if (out.radius_linear_in_eps) {
    const double r1 = stability_check(spec, Rat(1)).radius;
    if (r1 < 1.0) {
      out.unconditionally_stable = true;
      out.epsilon_stab = std::numeric_limits<double>::infinity();
    } else {
      out.epsilon_stab = 1.0 / r1;
    }
    return out;
  }
  // punctured rows do not scale with eps: bisect on the monotone radius
  if (stability_check(spec, Rat(1)).radius < 1.0) {
    out.unconditionally_stable = true;
    out.epsilon_stab = std::numeric_limits<double>::infinity();
    return out;
  }
  if (stability_check(spec, Rat(0)).radius >= 1.0) {
    out.epsilon_stab = 0.0;
    return out;
  }
  Rat lo(0), hi(1);
  while (hi - lo > Rat(1, 1000000)) {
    const Rat mid = (lo + hi) / 2;
    (stability_check(spec, mid).radius < 1.0 ? lo : hi) = mid;
  }
  out.epsilon_stab = to_double(lo);
  return out;
}

}  // namespace metldpc
