#pragma once

// Asymptotic growth rate of the average weight distribution: solve the
// stationary system of the sup-inf characterization and evaluate the
// objective. Everything runs in log-coordinates (T = ln t, S_i = ln s_i,
// U_i = ln u_i); the outer variable beta is eliminated through its closed
// form beta_i = mu_i(1) * sigmoid(U_i + S_i), which satisfies the beta
// stationary condition identically. The remaining square system in
// (T, S, U) is solved by the alternation sweep first and a damped
// Levenberg-Marquardt root-find as the workhorse/fallback.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metldpc/ensemble.hpp"
#include "metldpc/numeric.hpp"
#include "metldpc/poly.hpp"
#include "metldpc/rng.hpp"
#include "metldpc/smallweight.hpp"

namespace metldpc {

struct StationaryPoint {
  double omega = 0.0;
  double t = 0.0;
  std::vector<double> s, u, beta;
  double gamma = 0.0;
  double residual = 0.0;               // max over the four equation groups
  std::array<double, 4> residuals{};   // omega-eq, s-eq, u-eq, beta-eq
  bool converged = false;
  int branch_id = -1;  // 0 continuation, 1 small-weight seed, 2 heuristic, 3 restart
};

struct GrowthCurve {
  std::vector<StationaryPoint> points;
};

struct GrowthOptions {
  double tol = 1e-10;          // acceptance threshold on the residual max-norm
  double solver_target = 5e-13;
  int lm_iterations = 500;
  int alternation_sweeps = 25;
  int restarts = 10;
  std::uint64_t seed = 0x5eedu;
};

namespace detail {

inline double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// h(sigmoid(b)) without cancellation at the tails.
inline double entropy_of_logit(double b) {
  const double x = sigmoid(b);
  return x * softplus(-b) + (1.0 - x) * softplus(b);
}

// Gaussian elimination with partial pivoting; A is row-major n x n.
inline bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n,
                        std::vector<double>& out) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r * n + c] * out[c];
    out[r] = acc / a[r * n + r];
  }
  return true;
}

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Small dense Levenberg-Marquardt root-finder with a numeric Jacobian and a
// log-coordinate step guard. Returns the best residual max-norm reached.
inline double sum_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double lm_rootfind(const ResidualFn& fn, std::vector<double>& x, double target,
                          int max_iter) {
  const std::size_t n = x.size();
  std::vector<double> r = fn(x);
  const std::size_t m = r.size();
  double cost = sum_sq(r);
  double lambda = 1e-4;
  std::vector<double> jac(m * n), jtj(n * n), jtr(n), delta, trial;
  for (int iter = 0; iter < max_iter && max_abs(r) > target; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
      std::vector<double> xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const auto rp = fn(xp);
      const auto rm = fn(xm);
      for (std::size_t i = 0; i < m; ++i) jac[i * n + j] = (rp[i] - rm[i]) / (2 * h);
    }
    double max_diag = 1e-12;
    for (std::size_t a = 0; a < n; ++a) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += jac[i * n + a] * jac[i * n + a];
      max_diag = std::max(max_diag, acc);
    }
    bool improved = false;
    for (int attempt = 0; attempt < 25 && !improved; ++attempt) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          double acc = 0.0;
          for (std::size_t i = 0; i < m; ++i) acc += jac[i * n + a] * jac[i * n + b];
          jtj[a * n + b] = acc;
        }
      }
      for (std::size_t a = 0; a < n; ++a)
        jtj[a * n + a] += lambda * std::max(jtj[a * n + a], 1e-9 * max_diag);
      for (std::size_t a = 0; a < n; ++a) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += jac[i * n + a] * r[i];
        jtr[a] = -acc;
      }
      if (!solve_dense(jtj, jtr, n, delta)) {
        lambda *= 10;
        continue;
      }
      double dmax = max_abs(delta);
      if (dmax > 6.0)
        for (auto& d : delta) d *= 6.0 / dmax;
      trial = x;
      for (std::size_t a = 0; a < n; ++a) trial[a] += delta[a];
      auto rt = fn(trial);
      const double ct = sum_sq(rt);
      if (ct < cost) {
        x = trial;
        r = std::move(rt);
        cost = ct;
        lambda = std::max(lambda / 3, 1e-13);
        improved = true;
      } else {
        lambda *= 8;
        if (lambda > 1e14) return max_abs(r);
      }
    }
    if (!improved) return max_abs(r);
  }
  return max_abs(r);
}

}  // namespace detail

class GrowthSolver {
 public:
  explicit GrowthSolver(const EnsembleSpec& spec, GrowthOptions opts = {})
      : spec_(spec), opts_(opts), k_(spec.n_edge_types()) {
    for (const auto& t : spec.var_terms()) {
      QFactor f;
      f.coeff = to_double(t.coeff);
      f.b1 = t.channel.transmitted() ? 1.0 : 0.0;
      f.d.assign(t.node.d.begin(), t.node.d.end());
      q_.push_back(std::move(f));
    }
    for (const auto& t : spec.chk_terms()) {
      PFactor f;
      f.coeff = to_double(t.coeff);
      // expand ((1+u)^d + (1-u)^d)/2 into (log coefficient, exponent) terms
      Exponents e(k_, 0);
      std::vector<BinomialRow> rows;
      for (auto di : t.node.d) rows.emplace_back(di);
      while (true) {
        std::uint64_t total = 0;
        for (auto v : e) total += v;
        if (total % 2 == 0) {
          Int c = 1;
          for (std::size_t i = 0; i < k_; ++i) c *= rows[i][e[i]];
          PTerm pt;
          pt.log_a = log_int(c);
          pt.e.assign(e.begin(), e.end());
          f.terms.push_back(std::move(pt));
        }
        std::size_t i = 0;
        while (i < k_ && e[i] == t.node.d[i]) e[i++] = 0;
        if (i == k_) break;
        ++e[i];
      }
      p_.push_back(std::move(f));
    }
    for (const auto& m : spec.check_fractions()) mu1_.push_back(to_double(m));
  }

  const EnsembleSpec& spec() const { return spec_; }
  const GrowthOptions& options() const { return opts_; }

  StationaryPoint solve(double omega, std::optional<std::vector<double>> warm_start = {}) const {
    if (!(omega > 0.0 && omega < 1.0))
      throw std::invalid_argument(
          "growth: omega must lie strictly between 0 and the transmitted mass 1");
    std::vector<std::pair<std::vector<double>, int>> seeds;
    if (warm_start && warm_start->size() == dim()) seeds.emplace_back(*warm_start, 0);
    if (auto s = smallweight_seed(omega)) seeds.emplace_back(*s, 1);
    seeds.emplace_back(heuristic_seed(omega), 2);

    StationaryPoint best;
    best.omega = omega;
    CounterRng rng(opts_.seed, 977);
    for (auto& [x0, branch] : seeds) {
      auto cand = run_from(omega, x0, branch);
      consider(best, cand);
    }
    const std::vector<double> anchor = heuristic_seed(omega);
    int restart = 0;
    while (!best.converged && restart < opts_.restarts) {
      std::vector<double> x0 = anchor;
      for (auto& v : x0) v += (rng.uniform01() - 0.5) * (1.0 + restart * 0.5);
      auto cand = run_from(omega, x0, 3);
      consider(best, cand);
      ++restart;
    }
    return best;
  }

  GrowthCurve curve(const std::vector<double>& omegas) const {
    GrowthCurve c;
    std::optional<std::vector<double>> follow;
    for (double w : omegas) {
      StationaryPoint p = solve(w, follow);
      if (p.converged) follow = pack(p);
      c.points.push_back(std::move(p));
    }
    return c;
  }

  // Central finite difference of gamma against -ln t at omega.
  struct DerivativeCheck {
    double fd = 0.0;
    double minus_log_t = 0.0;
    double abs_err = 0.0;
    bool all_converged = false;
  };
  DerivativeCheck derivative_check(double omega, double h) const {
    if (h <= 0 || omega - h <= 0 || omega + h >= 1)
      throw std::invalid_argument("derivative_check: step leaves the omega domain");
    StationaryPoint c = solve(omega);
    StationaryPoint lo = solve(omega - h, pack(c));
    StationaryPoint hi = solve(omega + h, pack(c));
    DerivativeCheck d;
    d.fd = (hi.gamma - lo.gamma) / (2 * h);
    d.minus_log_t = -std::log(c.t);
    d.abs_err = std::abs(d.fd - d.minus_log_t);
    d.all_converged = c.converged && lo.converged && hi.converged;
    return d;
  }

  std::size_t dim() const { return 1 + 2 * k_; }

  // Natural residuals of the four stationary equations at an arbitrary point.
  std::array<double, 4> natural_residuals(double omega, double t, const std::vector<double>& s,
                                          const std::vector<double>& u,
                                          const std::vector<double>& beta) const {
    std::vector<double> x(dim());
    x[0] = std::log(t);
    for (std::size_t i = 0; i < k_; ++i) {
      x[1 + i] = std::log(s[i]);
      x[1 + k_ + i] = std::log(u[i]);
    }
    Eval ev = evaluate(x);
    std::array<double, 4> r{};
    r[0] = std::abs(ev.qt - omega);
    for (std::size_t i = 0; i < k_; ++i) {
      r[1] = std::max(r[1], std::abs(ev.qs[i] - beta[i]));
      r[2] = std::max(r[2], std::abs(ev.pu[i] - beta[i]));
      r[3] = std::max(r[3], std::abs(beta[i] / (mu1_[i] - beta[i]) - u[i] * s[i]));
    }
    return r;
  }

  // The sup-inf objective evaluated at raw coordinates.
  double objective(double omega, double t, const std::vector<double>& s,
                   const std::vector<double>& u, const std::vector<double>& beta) const {
    if (!(t > 0)) throw std::invalid_argument("objective: t must be positive");
    if (s.size() != k_ || u.size() != k_ || beta.size() != k_)
      throw std::invalid_argument("objective: vector arity mismatch");
    for (std::size_t i = 0; i < k_; ++i) {
      if (!(s[i] > 0 && u[i] > 0))
        throw std::invalid_argument("objective: s and u must be positive");
      if (!(beta[i] > 0 && beta[i] < mu1_[i]))
        throw std::invalid_argument("objective: beta_i must lie in (0, mu_i(1))");
    }
    std::vector<double> x(dim());
    x[0] = std::log(t);
    for (std::size_t i = 0; i < k_; ++i) {
      x[1 + i] = std::log(s[i]);
      x[1 + k_ + i] = std::log(u[i]);
    }
    Eval ev = evaluate(x);
    double g = ev.logQ + ev.logP - omega * x[0];
    for (std::size_t i = 0; i < k_; ++i) {
      g -= beta[i] * (x[1 + i] + x[1 + k_ + i]);
      g -= mu1_[i] * binary_entropy(beta[i] / mu1_[i]);
    }
    return g;
  }

  const std::vector<double>& mu1() const { return mu1_; }

 private:
  struct QFactor {
    double coeff = 0.0;
    double b1 = 0.0;
    std::vector<double> d;
  };
  struct PTerm {
    double log_a = 0.0;
    std::vector<double> e;
  };
  struct PFactor {
    double coeff = 0.0;
    std::vector<PTerm> terms;
  };

  struct Eval {
    double logQ = 0.0, logP = 0.0, qt = 0.0;
    std::vector<double> qs, pu;
  };

  static constexpr double kLogitBarrier = 32.24;  // beta/mu within [1e-14, 1-1e-14]

  Eval evaluate(const std::vector<double>& x) const {
    Eval ev;
    ev.qs.assign(k_, 0.0);
    ev.pu.assign(k_, 0.0);
    const double T = x[0];
    for (const auto& f : q_) {
      double z = f.b1 * T;
      for (std::size_t i = 0; i < k_; ++i) z += f.d[i] * x[1 + i];
      const double sp = detail::softplus(z);
      const double sg = detail::sigmoid(z);
      ev.logQ += f.coeff * sp;
      ev.qt += f.coeff * f.b1 * sg;
      for (std::size_t i = 0; i < k_; ++i) ev.qs[i] += f.coeff * f.d[i] * sg;
    }
    for (const auto& f : p_) {
      double lse = -std::numeric_limits<double>::infinity();
      for (const auto& t : f.terms) {
        double m = t.log_a;
        for (std::size_t i = 0; i < k_; ++i) m += t.e[i] * x[1 + k_ + i];
        lse = lse > m ? lse + std::log1p(std::exp(m - lse))
                      : m + std::log1p(lse == -std::numeric_limits<double>::infinity()
                                           ? 0.0
                                           : std::exp(lse - m));
      }
      ev.logP += f.coeff * lse;
      for (const auto& t : f.terms) {
        double m = t.log_a;
        for (std::size_t i = 0; i < k_; ++i) m += t.e[i] * x[1 + k_ + i];
        const double w = std::exp(m - lse);
        for (std::size_t i = 0; i < k_; ++i) ev.pu[i] += f.coeff * w * t.e[i];
      }
    }
    return ev;
  }

  std::vector<double> betas_of(const std::vector<double>& x) const {
    std::vector<double> b(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      const double logit = std::clamp(x[1 + i] + x[1 + k_ + i], -kLogitBarrier, kLogitBarrier);
      b[i] = mu1_[i] * detail::sigmoid(logit);
    }
    return b;
  }

  std::vector<double> residual(double omega, const std::vector<double>& x) const {
    Eval ev = evaluate(x);
    const auto beta = betas_of(x);
    std::vector<double> r(dim());
    r[0] = ev.qt - omega;
    for (std::size_t i = 0; i < k_; ++i) {
      r[1 + i] = ev.qs[i] - beta[i];
      r[1 + k_ + i] = ev.pu[i] - beta[i];
    }
    return r;
  }

  // Alternation sweep: inner u-solve, inner (t,s)-solve, damped logit update.
  void alternate(double omega, std::vector<double>& x) const {
    std::vector<double> logit(k_);
    for (std::size_t i = 0; i < k_; ++i)
      logit[i] = std::clamp(x[1 + i] + x[1 + k_ + i], -kLogitBarrier, kLogitBarrier);
    for (int sweep = 0; sweep < opts_.alternation_sweeps; ++sweep) {
      std::vector<double> beta(k_);
      for (std::size_t i = 0; i < k_; ++i) beta[i] = mu1_[i] * detail::sigmoid(logit[i]);

      std::vector<double> uvec(x.begin() + 1 + k_, x.end());
      detail::lm_rootfind(
          [&](const std::vector<double>& u) {
            std::vector<double> full = x;
            std::copy(u.begin(), u.end(), full.begin() + 1 + k_);
            Eval ev = evaluate(full);
            std::vector<double> r(k_);
            for (std::size_t i = 0; i < k_; ++i) r[i] = ev.pu[i] - beta[i];
            return r;
          },
          uvec, 1e-12, 12);
      std::copy(uvec.begin(), uvec.end(), x.begin() + 1 + k_);

      std::vector<double> ts(x.begin(), x.begin() + 1 + k_);
      detail::lm_rootfind(
          [&](const std::vector<double>& tsv) {
            std::vector<double> full = x;
            std::copy(tsv.begin(), tsv.end(), full.begin());
            Eval ev = evaluate(full);
            std::vector<double> r(1 + k_);
            r[0] = ev.qt - omega;
            for (std::size_t i = 0; i < k_; ++i) r[1 + i] = ev.qs[i] - beta[i];
            return r;
          },
          ts, 1e-12, 12);
      std::copy(ts.begin(), ts.end(), x.begin());

      double shift = 0.0;
      for (std::size_t i = 0; i < k_; ++i) {
        const double target = std::clamp(x[1 + i] + x[1 + k_ + i], -kLogitBarrier, kLogitBarrier);
        shift = std::max(shift, std::abs(target - logit[i]));
        logit[i] += 0.7 * (target - logit[i]);
      }
      if (shift < 1e-13) break;
    }
  }

  StationaryPoint run_from(double omega, std::vector<double> x, int branch) const {
    const auto fn = [&](const std::vector<double>& v) { return residual(omega, v); };
    // Alternation sweep first, but only keep its iterate when it actually
    // improved the full residual; the fixed-point update can diverge.
    std::vector<double> alt = x;
    alternate(omega, alt);
    if (detail::max_abs(fn(alt)) < detail::max_abs(fn(x))) x.swap(alt);

    double got = detail::lm_rootfind(fn, x, opts_.solver_target, opts_.lm_iterations);
    if (got > opts_.tol && alt != x) {
      double got2 = detail::lm_rootfind(fn, alt, opts_.solver_target, opts_.lm_iterations);
      if (got2 < got) x.swap(alt);
    }
    return finish(omega, x, branch);
  }

  StationaryPoint finish(double omega, const std::vector<double>& x, int branch) const {
    StationaryPoint p;
    p.omega = omega;
    p.branch_id = branch;
    p.t = std::exp(x[0]);
    p.s.resize(k_);
    p.u.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      p.s[i] = std::exp(x[1 + i]);
      p.u[i] = std::exp(x[1 + k_ + i]);
    }
    p.beta = betas_of(x);

    Eval ev = evaluate(x);
    p.residuals[0] = std::abs(ev.qt - omega);
    for (std::size_t i = 0; i < k_; ++i) {
      p.residuals[1] = std::max(p.residuals[1], std::abs(ev.qs[i] - p.beta[i]));
      p.residuals[2] = std::max(p.residuals[2], std::abs(ev.pu[i] - p.beta[i]));
      const double lhs = p.beta[i] / (mu1_[i] - p.beta[i]);
      p.residuals[3] = std::max(p.residuals[3], std::abs(lhs - p.u[i] * p.s[i]));
    }
    p.residual = std::max({p.residuals[0], p.residuals[1], p.residuals[2], p.residuals[3]});
    p.converged = p.residual <= opts_.tol && std::isfinite(p.residual);

    double g = ev.logQ + ev.logP - omega * x[0];
    for (std::size_t i = 0; i < k_; ++i) {
      const double logit = std::clamp(x[1 + i] + x[1 + k_ + i], -kLogitBarrier, kLogitBarrier);
      g -= p.beta[i] * (x[1 + i] + x[1 + k_ + i]);
      g -= mu1_[i] * detail::entropy_of_logit(logit);
    }
    p.gamma = g;
    return p;
  }

  std::vector<double> pack(const StationaryPoint& p) const {
    std::vector<double> x(dim());
    x[0] = std::log(p.t);
    for (std::size_t i = 0; i < k_; ++i) {
      x[1 + i] = std::log(p.s[i]);
      x[1 + k_ + i] = std::log(p.u[i]);
    }
    return x;
  }

  void consider(StationaryPoint& best, const StationaryPoint& cand) const {
    if (cand.converged) {
      if (!best.converged || cand.gamma > best.gamma) best = cand;
    } else if (!best.converged) {
      if (best.branch_id < 0 || cand.residual < best.residual) best = cand;
    }
  }

  // T solved from the omega equation by bisection (monotone in T).
  double solve_T(double omega, const std::vector<double>& x_s) const {
    double lo = -300, hi = 300;
    std::vector<double> x(dim(), 0.0);
    std::copy(x_s.begin(), x_s.end(), x.begin() + 1);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      x[0] = mid;
      (evaluate(x).qt > omega ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

  std::vector<double> heuristic_seed(double omega) const {
    std::vector<double> x(dim(), 0.0);
    std::vector<double> s(k_);
    for (std::size_t i = 0; i < k_; ++i) {
      const double frac = std::clamp(omega, 1e-8, 1.0 - 1e-8);
      const double logit = std::log(frac / (1.0 - frac));
      x[1 + i] = 0.5 * logit;
      x[1 + k_ + i] = 0.5 * logit;
      s[i] = x[1 + i];
    }
    x[0] = solve_T(omega, s);
    return x;
  }

  std::optional<std::vector<double>> smallweight_seed(double omega) const {
    SmallWeightMatrices mats;
    try {
      mats = build_matrices(spec_);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    SpectralRadiusResult sr = spectral_radius_full(mats.product().to_double());
    if (!(sr.radius > 0)) return std::nullopt;
    std::vector<double> v = sr.block_vector;
    double vmax = 0.0;
    for (double a : v) vmax = std::max(vmax, a);
    if (vmax <= 0) return std::nullopt;
    for (auto& a : v) a = std::max(a, 1e-6 * vmax) / vmax;
    const auto pd = mats.p_mat.to_double();
    std::vector<double> pv(k_, 0.0);
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) pv[i] += pd[i][j] * v[j];
      pv[i] = std::max(pv[i], 1e-9);
    }
    const double T = -std::log(sr.radius);
    // pick the scale c so the omega equation holds at the seed
    double lo = std::log(1e-24), hi = std::log(1e4);
    std::vector<double> x(dim(), 0.0);
    x[0] = T;
    auto fill = [&](double logc) {
      for (std::size_t i = 0; i < k_; ++i) {
        x[1 + k_ + i] = logc + std::log(v[i]);
        x[1 + i] = logc + std::log(pv[i]);
      }
    };
    for (int it = 0; it < 120; ++it) {
      const double mid = 0.5 * (lo + hi);
      fill(mid);
      (evaluate(x).qt > omega ? hi : lo) = mid;
    }
    fill(0.5 * (lo + hi));
    return x;
  }

  EnsembleSpec spec_;
  GrowthOptions opts_;
  std::size_t k_;
  std::vector<QFactor> q_;
  std::vector<PFactor> p_;
  std::vector<double> mu1_;
};

inline StationaryPoint solve_stationary(const EnsembleSpec& spec, double omega,
                                        GrowthOptions opts = {}) {
  return GrowthSolver(spec, opts).solve(omega);
}

inline GrowthCurve growth_curve(const EnsembleSpec& spec, const std::vector<double>& omegas,
                                GrowthOptions opts = {}) {
  return GrowthSolver(spec, opts).curve(omegas);
}

// Small-weight cross-check: gamma(omega)/omega against ln(radius) as omega
// shrinks. Requires the same structural assumptions as the small-weight
// report; growth failures propagate.
struct SlopePoint {
  double omega = 0.0;
  double gamma_over_omega = 0.0;
  double log_radius = 0.0;  // -inf when the radius vanishes
};

inline std::vector<SlopePoint> slope_crosscheck(const EnsembleSpec& spec,
                                                const std::vector<double>& omegas,
                                                GrowthOptions opts = {}) {
  SmallWeightReport rep = small_weight_report(spec);
  GrowthSolver solver(spec, opts);
  std::vector<SlopePoint> out;
  for (double w : omegas) {
    StationaryPoint p = solver.solve(w);
    if (!p.converged)
      throw std::runtime_error("slope_crosscheck: stationary solve did not converge at omega=" +
                               format_double(w));
    out.push_back({w, p.gamma / w, rep.slope});
  }
  return out;
}

}  // namespace metldpc
