#pragma once

// Small-weight analysis: the normalized second-derivative matrices of nu at
// x=0 and mu at x=1, their product's spectral radius, and the first-order
// slope of the growth rate. Matrix entries stay exact rationals; the eigen
// step is the only floating-point computation.

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "metldpc/ensemble.hpp"
#include "metldpc/numeric.hpp"

namespace metldpc {

struct RatMatrix {
  std::size_t k = 0;
  std::vector<Rat> a;

  explicit RatMatrix(std::size_t k_ = 0) : k(k_), a(k_ * k_, Rat(0)) {}
  Rat& at(std::size_t i, std::size_t j) { return a[i * k + j]; }
  const Rat& at(std::size_t i, std::size_t j) const { return a[i * k + j]; }

  std::vector<std::vector<double>> to_double() const {
    std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m[i][j] = metldpc::to_double(at(i, j));
    return m;
  }
};

struct SmallWeightMatrices {
  RatMatrix lambda_mat;  // Lambda_{i,j}(r) = d2 nu/dx_i dx_j |_{x=0} / nu_i(1,1)
  RatMatrix p_mat;       // P_{i,j} = d2 mu/dx_i dx_j |_{x=1} / mu_i(1)
  std::pair<Rat, Rat> r{1, 1};

  RatMatrix product() const {
    RatMatrix m(lambda_mat.k);
    for (std::size_t i = 0; i < m.k; ++i)
      for (std::size_t j = 0; j < m.k; ++j)
        for (std::size_t l = 0; l < m.k; ++l)
          m.at(i, j) += lambda_mat.at(i, l) * p_mat.at(l, j);
    return m;
  }
};

// Exact symbolic second partials. At x=0 only total-degree-2 variable terms
// survive; at x=1 every check term contributes d_i d_j (or d_i(d_i-1)).
inline SmallWeightMatrices build_matrices(const EnsembleSpec& spec,
                                          std::pair<Rat, Rat> r = {1, 1}) {
  const std::size_t k = spec.n_edge_types();
  SmallWeightMatrices m;
  m.lambda_mat = RatMatrix(k);
  m.p_mat = RatMatrix(k);
  m.r = r;

  for (const auto& t : spec.var_terms()) {
    std::uint64_t total = 0;
    for (auto v : t.node.d) total += v;
    if (total != 2) continue;
    const Rat rb = t.channel.transmitted() ? r.second : r.first;
    // either d = 2 e_i or d = e_i + e_j
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i)
      for (std::uint32_t c = 0; c < t.node.d[i]; ++c) idx.push_back(i);
    if (idx[0] == idx[1]) {
      m.lambda_mat.at(idx[0], idx[0]) += 2 * t.coeff * rb;
    } else {
      m.lambda_mat.at(idx[0], idx[1]) += t.coeff * rb;
      m.lambda_mat.at(idx[1], idx[0]) += t.coeff * rb;
    }
  }
  for (const auto& t : spec.chk_terms())
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const Rat f = (i == j) ? Rat(t.node.d[i]) * (Rat(t.node.d[i]) - 1)
                               : Rat(t.node.d[i]) * Rat(t.node.d[j]);
        m.p_mat.at(i, j) += t.coeff * f;
      }

  const auto vf = spec.edge_fractions();
  const auto cf = spec.check_fractions();
  for (std::size_t i = 0; i < k; ++i) {
    if (vf[i] == 0 || cf[i] == 0)
      throw std::invalid_argument("build_matrices: edge-type " + std::to_string(i + 1) +
                                  " has zero edge fraction");
    for (std::size_t j = 0; j < k; ++j) {
      m.lambda_mat.at(i, j) /= vf[i];
      m.p_mat.at(i, j) /= cf[i];
    }
  }
  return m;
}

namespace detail {

// Tarjan strongly-connected components on the nonzero pattern.
inline std::vector<std::vector<std::size_t>> scc_blocks(
    const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> blocks;
  int counter = 0;

  auto strongconnect = [&](auto&& self, std::size_t v) -> void {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (m[v][w] == 0.0) continue;
      if (index[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> block;
      for (;;) {
        const std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        block.push_back(w);
        if (w == v) break;
      }
      blocks.push_back(std::move(block));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) strongconnect(strongconnect, v);
  return blocks;
}

struct PowerIterationResult {
  double radius = 0.0;
  std::vector<double> vec;
  double vec_residual = 0.0;  // ||Mv - radius v||_inf / ||v||_inf
};

// Shifted power iteration on an irreducible non-negative block. The shift
// makes the block primitive, so the iteration converges.
inline PowerIterationResult power_iteration(const std::vector<std::vector<double>>& m,
                                            double tol) {
  const std::size_t n = m.size();
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, v);
  const double shift = std::max(1.0, scale);
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n, 0.0);
  double lambda = 0.0;
  for (int it = 0; it < 200000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = shift * v[i];
      for (std::size_t j = 0; j < n; ++j) acc += m[i][j] * v[j];
      w[i] = acc;
    }
    double norm = 0.0;
    for (double x : w) norm = std::max(norm, std::abs(x));
    for (auto& x : w) x /= norm;
    const double delta = std::abs(norm - shift - lambda);
    lambda = norm - shift;
    v.swap(w);
    if (delta <= tol * std::max(1.0, std::abs(lambda))) {
      PowerIterationResult r;
      r.radius = lambda;
      r.vec = v;
      double resid = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += m[i][j] * v[j];
        resid = std::max(resid, std::abs(acc - lambda * v[i]));
      }
      r.vec_residual = resid;
      if (resid <= 1e-10) return r;
    }
  }
  // Gershgorin bounds for the failure report
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m[i][j];
    lo = std::min(lo, row);
    hi = std::max(hi, row);
  }
  std::ostringstream os;
  os << "power iteration did not converge; Gershgorin row-sum bounds [" << lo << ", " << hi
     << "]";
  throw std::runtime_error(os.str());
}

}  // namespace detail

struct SpectralRadiusResult {
  double radius = 0.0;
  // Perron vector of the block achieving the radius, embedded in full space.
  std::vector<double> block_vector;
  std::vector<std::size_t> block;
  double vec_residual = 0.0;
};

inline SpectralRadiusResult spectral_radius_full(const std::vector<std::vector<double>>& m,
                                                 double tol = 1e-12) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("spectral_radius: matrix must be square");
    for (double v : row)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("spectral_radius: entries must be finite and non-negative");
  }
  SpectralRadiusResult best;
  if (n == 0) return best;
  for (const auto& block : detail::scc_blocks(m)) {
    double radius = 0.0;
    detail::PowerIterationResult pr;
    if (block.size() == 1) {
      const std::size_t i = block[0];
      radius = m[i][i];
      pr.vec = {1.0};
      pr.radius = radius;
    } else {
      std::vector<std::vector<double>> sub(block.size(), std::vector<double>(block.size()));
      for (std::size_t a = 0; a < block.size(); ++a)
        for (std::size_t b = 0; b < block.size(); ++b) sub[a][b] = m[block[a]][block[b]];
      pr = detail::power_iteration(sub, tol);
      radius = pr.radius;
    }
    if (radius > best.radius || best.block.empty()) {
      best.radius = radius;
      best.block = block;
      best.block_vector.assign(n, 0.0);
      for (std::size_t a = 0; a < block.size(); ++a) best.block_vector[block[a]] = pr.vec[a];
      best.vec_residual = pr.vec_residual;
    }
  }
  return best;
}

inline double spectral_radius(const std::vector<std::vector<double>>& m, double tol = 1e-12) {
  return spectral_radius_full(m, tol).radius;
}

struct SmallWeightReport {
  SmallWeightMatrices matrices;
  double spectral_radius = 0.0;
  double slope = 0.0;  // ln(radius), -inf when radius == 0
  bool exponentially_few = false;
  bool assumption_unpunctured = false;
  bool assumption_check_degree2 = false;
};

inline bool check_degree2_assumption(const EnsembleSpec& spec) {
  for (std::size_t i = 0; i < spec.n_edge_types(); ++i) {
    bool found = false;
    for (const auto& t : spec.chk_terms()) found = found || t.node.d[i] >= 2;
    if (!found) return false;
  }
  return true;
}

// Theorem-3 style report at r = (1, eps); eps defaults to 1. Both structural
// assumptions are hard errors.
inline SmallWeightReport small_weight_report(const EnsembleSpec& spec, const Rat& eps = 1) {
  SmallWeightReport rep;
  rep.assumption_unpunctured = spec.unpunctured();
  rep.assumption_check_degree2 = check_degree2_assumption(spec);
  if (!rep.assumption_unpunctured)
    throw std::invalid_argument(
        "small_weight_report: ensemble has punctured variable nodes; the small-weight "
        "expansion requires every channel-type to be (0,1)");
  if (!rep.assumption_check_degree2)
    throw std::invalid_argument(
        "small_weight_report: some edge-type has no check node-type with at least 2 edges "
        "of that type");
  rep.matrices = build_matrices(spec, {Rat(1), eps});
  rep.spectral_radius = spectral_radius(rep.matrices.product().to_double());
  rep.slope = rep.spectral_radius > 0.0 ? std::log(rep.spectral_radius)
                                        : -std::numeric_limits<double>::infinity();
  rep.exponentially_few = rep.spectral_radius < 1.0;
  return rep;
}

}  // namespace metldpc
