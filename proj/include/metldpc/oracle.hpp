#pragma once

// Brute-force ground truth for the average weight distribution: enumerate or
// sample edge permutations, count GF(2) codewords per graph, average.
// Parity is taken on active-edge counts, so a double edge between a variable
// and a check cancels mod 2; per-check incidence masks are built by XOR over
// edge slots, which encodes exactly that.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "metldpc/ensemble.hpp"
#include "metldpc/numeric.hpp"
#include "metldpc/rng.hpp"

namespace metldpc {

inline constexpr std::uint64_t kDefaultGraphBudget = 10'000'000;

// One graph = one permutation per edge-type, mapping variable-side slot a to
// check-side slot perm[i][a].
struct TannerGraph {
  std::vector<std::vector<std::int32_t>> perm;
};

// Deterministic slot layout shared by every graph of an instantiation.
struct GraphLayout {
  std::int64_t num_vars = 0;
  std::int64_t num_chks = 0;
  std::vector<char> transmitted;                          // per variable
  std::vector<std::vector<std::int32_t>> var_slot_owner;  // per type: slot -> variable
  std::vector<std::vector<std::int32_t>> chk_slot_owner;  // per type: slot -> check
  std::vector<std::int64_t> edge_counts;
};

inline GraphLayout build_layout(const InstantiatedCounts& counts) {
  const auto& spec = counts.spec;
  const std::size_t k = spec.n_edge_types();
  GraphLayout g;
  g.edge_counts = counts.edge_counts;
  g.var_slot_owner.resize(k);
  g.chk_slot_owner.resize(k);
  for (std::size_t t = 0; t < spec.var_terms().size(); ++t) {
    const auto& term = spec.var_terms()[t];
    for (std::int64_t inst = 0; inst < counts.var_counts[t]; ++inst) {
      const auto v = static_cast<std::int32_t>(g.num_vars++);
      g.transmitted.push_back(term.channel.transmitted() ? 1 : 0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::uint32_t s = 0; s < term.node.d[i]; ++s) g.var_slot_owner[i].push_back(v);
    }
  }
  for (std::size_t t = 0; t < spec.chk_terms().size(); ++t) {
    const auto& term = spec.chk_terms()[t];
    for (std::int64_t inst = 0; inst < counts.chk_counts[t]; ++inst) {
      const auto c = static_cast<std::int32_t>(g.num_chks++);
      for (std::size_t i = 0; i < k; ++i)
        for (std::uint32_t s = 0; s < term.node.d[i]; ++s) g.chk_slot_owner[i].push_back(c);
    }
  }
  return g;
}

// Per-check parity masks over variables (multiplicity mod 2 via XOR).
inline std::vector<std::uint64_t> check_masks(const GraphLayout& g, const TannerGraph& t) {
  if (g.num_vars > 64) throw std::runtime_error("check_masks: more than 64 variables");
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(g.num_chks), 0);
  for (std::size_t i = 0; i < g.var_slot_owner.size(); ++i)
    for (std::size_t a = 0; a < g.var_slot_owner[i].size(); ++a) {
      const auto v = g.var_slot_owner[i][a];
      const auto c = g.chk_slot_owner[i][static_cast<std::size_t>(t.perm[i][a])];
      mask[static_cast<std::size_t>(c)] ^= (1ull << v);
    }
  return mask;
}

// Per-variable syndrome columns over checks (multiplicity mod 2).
inline std::vector<std::uint64_t> variable_columns(const GraphLayout& g, const TannerGraph& t) {
  if (g.num_chks > 64) throw std::runtime_error("variable_columns: more than 64 checks");
  std::vector<std::uint64_t> col(static_cast<std::size_t>(g.num_vars), 0);
  for (std::size_t i = 0; i < g.var_slot_owner.size(); ++i)
    for (std::size_t a = 0; a < g.var_slot_owner[i].size(); ++a) {
      const auto v = g.var_slot_owner[i][a];
      const auto c = g.chk_slot_owner[i][static_cast<std::size_t>(t.perm[i][a])];
      col[static_cast<std::size_t>(v)] ^= (1ull << c);
    }
  return col;
}

namespace detail {

// GF(2) basis keyed by leading bit; insertion keeps the reduction canonical.
struct XorBasis {
  std::uint64_t at[64] = {};
  int dim = 0;

  void insert(std::uint64_t x) {
    while (x) {
      const int b = 63 - std::countl_zero(x);
      if (!at[b]) {
        at[b] = x;
        ++dim;
        return;
      }
      x ^= at[b];
    }
  }

  bool in_span(std::uint64_t x) const {
    while (x) {
      const int b = 63 - std::countl_zero(x);
      if (!at[b]) return false;
      x ^= at[b];
    }
    return true;
  }
};

}  // namespace detail

// A_G(l) by enumerating all 2^V maps, Gray-code order with an incremental
// syndrome update.
inline std::vector<std::int64_t> codeword_count(const GraphLayout& g, const TannerGraph& t) {
  if (g.num_vars > 24)
    throw std::runtime_error("codeword_count: 2^V enumeration limited to V <= 24");
  const auto cols = variable_columns(g, t);
  std::uint64_t tmask = 0;
  for (std::int64_t v = 0; v < g.num_vars; ++v)
    if (g.transmitted[static_cast<std::size_t>(v)]) tmask |= (1ull << v);

  std::vector<std::int64_t> acc(static_cast<std::size_t>(std::popcount(tmask)) + 1, 0);
  std::uint64_t syndrome = 0;
  std::uint64_t gray = 0;
  const std::uint64_t end = 1ull << g.num_vars;
  ++acc[0];  // x = 0
  for (std::uint64_t idx = 1; idx < end; ++idx) {
    const unsigned bit = static_cast<unsigned>(std::countr_zero(idx));
    gray ^= (1ull << bit);
    syndrome ^= cols[bit];
    if (syndrome == 0) ++acc[static_cast<std::size_t>(std::popcount(gray & tmask))];
  }
  return acc;
}

// Independent path: GF(2) nullspace basis of the parity matrix, then
// enumeration of the 2^dim codewords by Gray code over basis elements.
inline std::vector<std::int64_t> codeword_count_nullspace(const GraphLayout& g,
                                                          const TannerGraph& t) {
  auto rows = check_masks(g, t);
  const std::int64_t nv = g.num_vars;
  std::vector<int> pivot_of_col(static_cast<std::size_t>(nv), -1);
  std::vector<std::uint64_t> reduced;
  for (auto r : rows) {
    for (std::int64_t v = 0; v < nv; ++v)
      if (((r >> v) & 1) && pivot_of_col[static_cast<std::size_t>(v)] >= 0)
        r ^= reduced[static_cast<std::size_t>(pivot_of_col[static_cast<std::size_t>(v)])];
    if (r == 0) continue;
    const unsigned lead = static_cast<unsigned>(std::countr_zero(r));
    pivot_of_col[lead] = static_cast<int>(reduced.size());
    reduced.push_back(r);
  }
  // back-substitute so each pivot column appears in exactly one row
  for (std::size_t a = 0; a < reduced.size(); ++a)
    for (std::size_t b = 0; b < reduced.size(); ++b) {
      if (a == b) continue;
      const unsigned lead = static_cast<unsigned>(std::countr_zero(reduced[a]));
      if ((reduced[b] >> lead) & 1) reduced[b] ^= reduced[a];
    }
  std::vector<std::uint64_t> basis;
  for (std::int64_t v = 0; v < nv; ++v) {
    if (pivot_of_col[static_cast<std::size_t>(v)] >= 0) continue;
    std::uint64_t vec = 1ull << v;
    for (auto r : reduced)
      if ((r >> v) & 1) vec |= (1ull << std::countr_zero(r));
    basis.push_back(vec);
  }
  if (basis.size() > 24)
    throw std::runtime_error("codeword_count_nullspace: nullspace dimension > 24");

  std::uint64_t tmask = 0;
  for (std::int64_t v = 0; v < nv; ++v)
    if (g.transmitted[static_cast<std::size_t>(v)]) tmask |= (1ull << v);
  std::vector<std::int64_t> acc(static_cast<std::size_t>(std::popcount(tmask)) + 1, 0);
  std::uint64_t word = 0;
  ++acc[0];
  const std::uint64_t end = 1ull << basis.size();
  for (std::uint64_t idx = 1; idx < end; ++idx) {
    word ^= basis[static_cast<std::size_t>(std::countr_zero(idx))];
    ++acc[static_cast<std::size_t>(std::popcount(word & tmask))];
  }
  return acc;
}

// Truncated count A_G(l), l <= ell_max: enumerate transmitted supports and
// count punctured completions through the column space of the punctured
// submatrix. Scales to lengths where full enumeration is hopeless.
inline std::vector<std::int64_t> codeword_count_upto(const GraphLayout& g, const TannerGraph& t,
                                                     std::int64_t ell_max) {
  const auto cols = variable_columns(g, t);
  std::vector<std::uint64_t> tcols, pcols;
  for (std::int64_t v = 0; v < g.num_vars; ++v)
    (g.transmitted[static_cast<std::size_t>(v)] ? tcols : pcols)
        .push_back(cols[static_cast<std::size_t>(v)]);

  detail::XorBasis basis;
  for (auto c : pcols) basis.insert(c);
  const std::int64_t free_punct = static_cast<std::int64_t>(pcols.size()) - basis.dim;
  if (free_punct > 62) throw std::runtime_error("codeword_count_upto: completion count overflow");
  const std::int64_t completions = 1ll << free_punct;

  const std::int64_t tn = static_cast<std::int64_t>(tcols.size());
  if (ell_max > tn) ell_max = tn;
  std::vector<std::int64_t> acc(static_cast<std::size_t>(ell_max) + 1, 0);
  if (basis.in_span(0)) acc[0] += completions;
  auto rec = [&](auto&& self, std::int64_t from, std::uint64_t syn, std::int64_t depth) -> void {
    if (depth == ell_max) return;
    for (std::int64_t v = from; v < tn; ++v) {
      const std::uint64_t s = syn ^ tcols[static_cast<std::size_t>(v)];
      if (basis.in_span(s)) acc[static_cast<std::size_t>(depth) + 1] += completions;
      self(self, v + 1, s, depth + 1);
    }
  };
  rec(rec, 0, 0, 0);
  return acc;
}

inline TannerGraph sample_graph(const GraphLayout& g, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  TannerGraph t;
  t.perm.resize(g.edge_counts.size());
  for (std::size_t i = 0; i < g.edge_counts.size(); ++i) {
    auto& p = t.perm[i];
    p.resize(static_cast<std::size_t>(g.edge_counts[i]));
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t a = p.size(); a > 1; --a)
      std::swap(p[a - 1], p[static_cast<std::size_t>(rng.bounded(a))]);
  }
  return t;
}

// Streams every graph exactly once: lexicographic permutations per type,
// odometer across types.
class GraphEnumerator {
 public:
  explicit GraphEnumerator(const GraphLayout& g, std::uint64_t budget = kDefaultGraphBudget) {
    Int total = 1;
    for (auto e : g.edge_counts) total *= factorial(static_cast<std::uint64_t>(e));
    if (total > budget)
      throw std::runtime_error("graph enumeration budget exceeded: " + total.str() + " > " +
                               std::to_string(budget) + " graphs");
    total_ = total.convert_to<std::uint64_t>();
    current_.perm.resize(g.edge_counts.size());
    for (std::size_t i = 0; i < g.edge_counts.size(); ++i) {
      current_.perm[i].resize(static_cast<std::size_t>(g.edge_counts[i]));
      std::iota(current_.perm[i].begin(), current_.perm[i].end(), 0);
    }
    fresh_ = true;
  }

  std::uint64_t total() const { return total_; }

  // Returns nullptr when the stream is exhausted.
  const TannerGraph* next() {
    if (fresh_) {
      fresh_ = false;
      return &current_;
    }
    for (std::size_t i = 0; i < current_.perm.size(); ++i) {
      if (std::next_permutation(current_.perm[i].begin(), current_.perm[i].end()))
        return &current_;
      // wrapped to identity; carry into the next type
    }
    return nullptr;
  }

 private:
  TannerGraph current_;
  std::uint64_t total_ = 0;
  bool fresh_ = true;
};

enum class OracleMode { kExhaustive, kSampled };

struct OracleSpectrum {
  OracleMode mode = OracleMode::kExhaustive;
  std::int64_t n = 0;
  std::int64_t ell_max = 0;
  std::vector<Rat> exact;         // exhaustive mode
  std::vector<double> mean;       // sampled mode
  std::vector<double> std_error;  // sampled mode
  std::int64_t samples = 0;
  Int graph_count = 0;
};

inline OracleSpectrum oracle_spectrum(const InstantiatedCounts& counts, OracleMode mode,
                                      std::int64_t samples = 0, std::uint64_t seed = 1,
                                      std::int64_t ell_max = -1,
                                      std::uint64_t graph_budget = kDefaultGraphBudget,
                                      unsigned threads = 0) {
  const GraphLayout layout = build_layout(counts);
  OracleSpectrum out;
  out.mode = mode;
  out.n = counts.n;
  if (ell_max < 0) ell_max = counts.n;
  out.ell_max = ell_max;
  const bool full_count = layout.num_vars <= 24 && ell_max >= counts.n;

  auto count_graph = [&](const TannerGraph& t) {
    std::vector<std::int64_t> a =
        full_count ? codeword_count(layout, t) : codeword_count_upto(layout, t, ell_max);
    a.resize(static_cast<std::size_t>(ell_max) + 1, 0);
    return a;
  };

  if (mode == OracleMode::kExhaustive) {
    GraphEnumerator en(layout, graph_budget);
    std::vector<Int> sums(static_cast<std::size_t>(ell_max) + 1, Int(0));
    std::uint64_t seen = 0;
    while (const TannerGraph* t = en.next()) {
      const auto a = count_graph(*t);
      for (std::size_t l = 0; l < sums.size(); ++l) sums[l] += a[l];
      ++seen;
    }
    if (seen != en.total())
      throw std::logic_error("graph enumeration produced " + std::to_string(seen) +
                             " graphs, expected " + std::to_string(en.total()));
    out.graph_count = en.total();
    out.exact.resize(sums.size());
    for (std::size_t l = 0; l < sums.size(); ++l) out.exact[l] = Rat(sums[l], Int(en.total()));
    return out;
  }

  if (samples <= 0) throw std::invalid_argument("oracle_spectrum: samples must be positive");
  out.samples = samples;
  out.graph_count = ensemble_size(counts);
  const std::size_t width = static_cast<std::size_t>(ell_max) + 1;
  unsigned nthreads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, 64);

  // Integer accumulators: sums are exact, so the result is identical for any
  // thread count or scheduling.
  using Wide = unsigned __int128;
  std::vector<std::vector<Wide>> sum(nthreads, std::vector<Wide>(width, 0));
  std::vector<std::vector<Wide>> sumsq(nthreads, std::vector<Wide>(width, 0));
  std::atomic<std::int64_t> cursor{0};
  auto worker = [&](unsigned w) {
    for (;;) {
      const std::int64_t idx = cursor.fetch_add(1);
      if (idx >= samples) break;
      const TannerGraph t = sample_graph(layout, seed, static_cast<std::uint64_t>(idx));
      const auto a = count_graph(t);
      for (std::size_t l = 0; l < width; ++l) {
        const auto v = static_cast<Wide>(a[l]);
        sum[w][l] += v;
        sumsq[w][l] += v * v;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < nthreads; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& th : pool) th.join();

  out.mean.assign(width, 0.0);
  out.std_error.assign(width, 0.0);
  const double n = static_cast<double>(samples);
  for (std::size_t l = 0; l < width; ++l) {
    Wide s = 0, ss = 0;
    for (unsigned w = 0; w < nthreads; ++w) {
      s += sum[w][l];
      ss += sumsq[w][l];
    }
    const double sd = static_cast<double>(s);
    out.mean[l] = sd / n;
    if (samples > 1) {
      const double var = std::max(0.0, (static_cast<double>(ss) - sd * sd / n) / (n - 1.0));
      out.std_error[l] = std::sqrt(var / n);
    }
  }
  return out;
}

}  // namespace metldpc
