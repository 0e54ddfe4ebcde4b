#pragma once

// Command-line front end. One binary, subcommand style; every run echoes the
// tolerances and budgets that influenced it, and output bytes are a pure
// function of the flags and seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metldpc/de.hpp"
#include "metldpc/ensemble.hpp"
#include "metldpc/growth.hpp"
#include "metldpc/numeric.hpp"
#include "metldpc/oracle.hpp"
#include "metldpc/smallweight.hpp"
#include "metldpc/spectrum.hpp"

namespace metldpc::cli {

struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;  // verdict/summary lines, csv only as comments
};

inline void emit(const Table& t, const std::string& format, std::ostream& out,
                 const std::string& tool) {
  if (format == "json") {
    nlohmann::json j;
    j["tool"] = tool;
    for (const auto& [k, v] : t.meta) j["meta"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    if (!t.footer.empty()) j["summary"] = t.footer;
    out << j.dump(2) << "\n";
    return;
  }
  out << "# " << tool << "\n";
  for (const auto& [k, v] : t.meta) out << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  for (const auto& line : t.footer) out << line << "\n";
}

namespace detail {

inline EnsembleSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    grid.push_back(std::stod(text));
    return grid;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("omega grid must be 'start:stop:step' or a single value");
  const double a = std::stod(text.substr(0, c1));
  const double b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(text.substr(c2 + 1));
  if (step <= 0 || b < a) throw std::invalid_argument("omega grid must satisfy start <= stop, step > 0");
  for (double w = a; w <= b + 1e-12; w += step) grid.push_back(w);
  return grid;
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace detail

// Runs the tool on the given arguments (no program name). Writes results to
// `out`, diagnostics to `err`. Exit codes: 0 success, 1 domain error or
// failed verification, 2 usage error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"multi-edge-type LDPC ensemble analysis"};
  app.require_subcommand(1);

  std::string spec_path, out_path, format = "csv";
  auto add_common = [&](CLI::App* sub, bool with_format = true) {
    sub->add_option("--spec", spec_path, "ensemble spec file")->required();
    sub->add_option("--out", out_path, "write output to this file instead of stdout");
    if (with_format)
      sub->add_option("--format", format, "output format: csv or json")
          ->check(CLI::IsMember({"csv", "json"}));
  };

  // spectrum
  std::int64_t n = 0, ell_max = -1;
  std::uint64_t term_budget = kDefaultTermBudget;
  auto* sc_spectrum = app.add_subcommand("spectrum", "exact average weight distribution");
  add_common(sc_spectrum);
  sc_spectrum->add_option("--n", n, "code length (transmitted bits)")->required();
  sc_spectrum->add_option("--ell-max", ell_max, "largest weight to compute (default n)");
  sc_spectrum->add_option("--term-budget", term_budget, "polynomial term budget");

  // growth
  std::string omega_text;
  double gtol = 1e-10;
  auto* sc_growth = app.add_subcommand("growth", "asymptotic growth rate over an omega grid");
  add_common(sc_growth);
  sc_growth->add_option("--omega", omega_text, "grid start:stop:step or a single omega")
      ->required();
  sc_growth->add_option("--tol", gtol, "stationary residual tolerance (default 1e-10)");

  // smallweight
  std::string eps_text = "1";
  bool json_flag = false;
  auto* sc_small = app.add_subcommand("smallweight", "small-weight matrices, radius, slope");
  sc_small->add_option("--spec", spec_path, "ensemble spec file")->required();
  sc_small->add_option("--out", out_path, "write output to this file instead of stdout");
  sc_small->add_option("--epsilon", eps_text, "channel weight r = (1, epsilon), default 1");
  sc_small->add_flag("--json", json_flag, "emit JSON instead of the text block");

  // stability
  std::string stab_eps;
  auto* sc_stab = app.add_subcommand("stability", "density-evolution stability at epsilon");
  add_common(sc_stab);
  sc_stab->add_option("--epsilon", stab_eps, "erasure probability")->required();

  // threshold
  double tol = 1e-4, zero_threshold = 1e-12, change_threshold = 1e-15;
  std::int64_t max_iters = 100000;
  auto* sc_thresh = app.add_subcommand("threshold", "erasure threshold by bisection");
  add_common(sc_thresh);
  sc_thresh->add_option("--tol", tol, "bisection tolerance (default 1e-4)");
  sc_thresh->add_option("--zero-threshold", zero_threshold, "DE zero threshold (default 1e-12)");
  sc_thresh->add_option("--change-threshold", change_threshold,
                        "DE stall threshold (default 1e-15)");
  sc_thresh->add_option("--max-iters", max_iters, "DE iteration cap (default 100000)");

  // verify
  std::string mode = "exhaustive";
  std::int64_t samples = 100000;
  std::uint64_t seed = 1, graph_budget = kDefaultGraphBudget;
  unsigned threads = 0;
  auto* sc_verify = app.add_subcommand("verify", "formula vs brute-force oracle");
  add_common(sc_verify);
  sc_verify->add_option("--n", n, "code length")->required();
  sc_verify->add_option("--mode", mode, "exhaustive or sampled")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  sc_verify->add_option("--samples", samples, "sample count (sampled mode, default 100000)");
  sc_verify->add_option("--seed", seed, "sampling seed (default 1)");
  sc_verify->add_option("--ell-max", ell_max, "largest weight to verify (default n)");
  sc_verify->add_option("--graph-budget", graph_budget, "exhaustive graph budget");
  sc_verify->add_option("--term-budget", term_budget, "polynomial term budget");
  sc_verify->add_option("--threads", threads, "worker threads (default: hardware)");

  // info
  bool with_n = false;
  auto* sc_info = app.add_subcommand("info", "describe an ensemble spec");
  sc_info->add_option("--spec", spec_path, "ensemble spec file")->required();
  sc_info->add_option("--out", out_path, "write output to this file instead of stdout");
  sc_info->add_option("--n", n, "also report counts at this length")->each([&](const std::string&) {
    with_n = true;
  });

  std::vector<std::string> argv_store = std::move(args);
  std::vector<const char*> argv;
  argv.push_back("metldpc");
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::ofstream file_out;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file_out.open(out_path);
    if (!file_out) {
      err << "cannot open output file '" << out_path << "'\n";
      return 1;
    }
    sink = &file_out;
  }

  try {
    if (sc_spectrum->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      InstantiatedCounts counts = instantiate(spec, n);
      if (ell_max < 0) ell_max = n;
      WeightSpectrum ws = average_weight_distribution(counts, ell_max, term_budget);
      Table t;
      t.meta = {{"spec", spec_path},
                {"n", std::to_string(n)},
                {"ell_max", std::to_string(ell_max)},
                {"term_budget", std::to_string(term_budget)}};
      t.columns = {"ell", "A_exact_num", "A_exact_den", "A_float", "log_A_over_n"};
      for (std::size_t l = 0; l < ws.values.size(); ++l) {
        const Rat& v = ws.values[l];
        t.rows.push_back({std::to_string(l), numerator(v).str(), denominator(v).str(),
                          format_double(to_double(v)),
                          format_double(log_rat(v) / static_cast<double>(n))});
      }
      emit(t, format, *sink, "metldpc spectrum");
      return 0;
    }

    if (sc_growth->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      GrowthOptions opts;
      opts.tol = gtol;
      GrowthCurve curve = growth_curve(spec, detail::parse_grid(omega_text), opts);
      const std::size_t k = spec.n_edge_types();
      Table t;
      t.meta = {{"spec", spec_path}, {"omega", omega_text}, {"tol", format_double(gtol)}};
      t.columns = {"omega", "gamma", "t", "minus_log_t", "residual", "branch_id", "converged"};
      for (std::size_t i = 1; i <= k; ++i) t.columns.push_back("s_" + std::to_string(i));
      for (std::size_t i = 1; i <= k; ++i) t.columns.push_back("u_" + std::to_string(i));
      for (std::size_t i = 1; i <= k; ++i) t.columns.push_back("beta_" + std::to_string(i));
      bool all_ok = true;
      for (const auto& p : curve.points) {
        std::vector<std::string> row = {
            format_double(p.omega),    format_double(p.gamma),
            format_double(p.t),        format_double(-std::log(p.t)),
            format_double(p.residual), std::to_string(p.branch_id),
            detail::bool_str(p.converged)};
        for (double v : p.s) row.push_back(format_double(v));
        for (double v : p.u) row.push_back(format_double(v));
        for (double v : p.beta) row.push_back(format_double(v));
        t.rows.push_back(std::move(row));
        all_ok = all_ok && p.converged;
      }
      if (!all_ok) t.footer.push_back("# warning: some grid points did not converge");
      emit(t, format, *sink, "metldpc growth");
      return all_ok ? 0 : 1;
    }

    if (sc_small->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      const Rat eps = parse_rational(eps_text);
      SmallWeightReport rep = small_weight_report(spec, eps);
      const std::size_t k = spec.n_edge_types();
      auto matrix_rows = [&](const RatMatrix& m) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < k; ++i) {
          std::vector<std::string> r;
          for (std::size_t j = 0; j < k; ++j) r.push_back(rat_string(m.at(i, j)));
          rows.push_back(std::move(r));
        }
        return rows;
      };
      if (json_flag) {
        nlohmann::json j;
        j["tool"] = "metldpc smallweight";
        j["meta"]["spec"] = spec_path;
        j["meta"]["epsilon"] = rat_string(eps);
        j["lambda"] = matrix_rows(rep.matrices.lambda_mat);
        j["p"] = matrix_rows(rep.matrices.p_mat);
        j["spectral_radius"] = format_double(rep.spectral_radius);
        j["slope"] = format_double(rep.slope);
        j["exponentially_few_small_weight_codewords"] = rep.exponentially_few;
        j["assumptions"] = {{"unpunctured", rep.assumption_unpunctured},
                            {"check_degree2_per_type", rep.assumption_check_degree2}};
        *sink << j.dump(2) << "\n";
      } else {
        *sink << "# metldpc smallweight\n# spec=" << spec_path << "\n# epsilon=" << rat_string(eps)
              << "\n";
        *sink << "Lambda(1," << rat_string(eps) << "):\n";
        for (const auto& r : matrix_rows(rep.matrices.lambda_mat)) {
          *sink << " ";
          for (const auto& v : r) *sink << " " << v;
          *sink << "\n";
        }
        *sink << "P:\n";
        for (const auto& r : matrix_rows(rep.matrices.p_mat)) {
          *sink << " ";
          for (const auto& v : r) *sink << " " << v;
          *sink << "\n";
        }
        *sink << "spectral_radius: " << format_double(rep.spectral_radius) << "\n";
        *sink << "slope: " << format_double(rep.slope) << "\n";
        *sink << "verdict: "
              << (rep.exponentially_few ? "exponentially few small-weight codewords"
                                        : "small-weight codewords not exponentially suppressed")
              << "\n";
        *sink << "assumptions: unpunctured=yes check_degree2_per_type=yes\n";
      }
      return 0;
    }

    if (sc_stab->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      const Rat eps = parse_rational(stab_eps);
      StabilityResult r = stability_check(spec, eps);
      Table t;
      t.meta = {{"spec", spec_path}};
      t.columns = {"epsilon", "radius", "stable"};
      t.rows.push_back({rat_string(eps), format_double(r.radius), detail::bool_str(r.stable)});
      emit(t, format, *sink, "metldpc stability");
      return 0;
    }

    if (sc_thresh->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      DEOptions opts{max_iters, zero_threshold, change_threshold};
      DensityEvolution de(spec);
      Table t;
      t.meta = {{"spec", spec_path},
                {"tol", format_double(tol)},
                {"zero_threshold", format_double(zero_threshold)},
                {"change_threshold", format_double(change_threshold)},
                {"max_iters", std::to_string(max_iters)}};
      t.columns = {"epsilon", "converged", "iters", "final_max_p"};
      auto probe = [&](double eps) {
        DEResult r = de.run(eps, opts);
        double final_max = 0.0;
        for (double p : r.fixed_point.p) final_max = std::max(final_max, p);
        t.rows.push_back({format_double(eps), detail::bool_str(r.converged_to_zero),
                          std::to_string(r.iterations), format_double(final_max)});
        return r.converged_to_zero;
      };
      double eps_star;
      bool degenerate = false;
      if (!probe(0.0)) {
        eps_star = 0.0;
        degenerate = true;
      } else if (probe(1.0)) {
        eps_star = 1.0;
        degenerate = true;
      } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          (probe(mid) ? lo : hi) = mid;
        }
        eps_star = lo;
      }
      StabilityVsThreshold sv = stability_vs_threshold(spec, tol, opts);
      t.footer.push_back("epsilon_star=" + format_double(eps_star) +
                         (degenerate ? " (degenerate bracket)" : ""));
      t.footer.push_back("epsilon_stab=" + (sv.unconditionally_stable
                                                ? std::string("inf (unconditionally stable)")
                                                : format_double(sv.epsilon_stab)));
      emit(t, format, *sink, "metldpc threshold");
      return 0;
    }

    if (sc_verify->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      InstantiatedCounts counts = instantiate(spec, n);
      if (ell_max < 0) ell_max = n;
      WeightSpectrum ws = average_weight_distribution(counts, ell_max, term_budget);
      Table t;
      t.meta = {{"spec", spec_path},
                {"n", std::to_string(n)},
                {"mode", mode},
                {"ell_max", std::to_string(ell_max)},
                {"samples", mode == "sampled" ? std::to_string(samples) : "0"},
                {"seed", std::to_string(seed)},
                {"graph_budget", std::to_string(graph_budget)}};
      t.columns = {"ell", "oracle_value", "oracle_stderr", "formula_value", "abs_diff"};
      bool pass = true;
      std::string detail_line;
      if (mode == "exhaustive") {
        OracleSpectrum os =
            oracle_spectrum(counts, OracleMode::kExhaustive, 0, seed, ell_max, graph_budget);
        for (std::size_t l = 0; l < ws.values.size(); ++l) {
          const Rat diff = ws.values[l] - os.exact[l];
          t.rows.push_back({std::to_string(l), format_double(to_double(os.exact[l])), "0",
                            format_double(to_double(ws.values[l])),
                            format_double(std::abs(to_double(diff)))});
          if (diff != 0 && pass) {
            pass = false;
            detail_line = "MISMATCH at ell=" + std::to_string(l) + ": formula " +
                          rat_string(ws.values[l]) + " vs oracle " + rat_string(os.exact[l]);
          }
        }
        t.footer.push_back(pass ? "EXACT MATCH" : detail_line);
      } else {
        OracleSpectrum os = oracle_spectrum(counts, OracleMode::kSampled, samples, seed, ell_max,
                                            graph_budget, threads);
        double worst_z = 0.0;
        for (std::size_t l = 0; l < ws.values.size(); ++l) {
          const double formula = to_double(ws.values[l]);
          const double diff = std::abs(os.mean[l] - formula);
          t.rows.push_back({std::to_string(l), format_double(os.mean[l]),
                            format_double(os.std_error[l]), format_double(formula),
                            format_double(diff)});
          const double allowed = 3.0 * os.std_error[l];
          if (diff > allowed && diff > 1e-12) {
            pass = false;
            detail_line = "DEVIATION at ell=" + std::to_string(l) + ": |diff|=" +
                          format_double(diff) + " > 3*stderr=" + format_double(allowed);
          }
          if (os.std_error[l] > 0) worst_z = std::max(worst_z, diff / os.std_error[l]);
        }
        t.footer.push_back(pass ? "WITHIN 3 STANDARD ERRORS (max |z| = " +
                                      format_double(worst_z) + ")"
                                : detail_line);
      }
      emit(t, format, *sink, "metldpc verify");
      return pass ? 0 : 1;
    }

    if (sc_info->parsed()) {
      EnsembleSpec spec = detail::load_spec(spec_path);
      *sink << "# metldpc info\n# spec=" << spec_path << "\n";
      *sink << "edge_types: " << spec.n_edge_types() << "\n";
      *sink << "variable node-types:\n";
      for (const auto& vt : spec.var_terms()) {
        *sink << "  coeff=" << rat_string(vt.coeff) << " channel="
              << (vt.channel.transmitted() ? "transmitted" : "punctured") << " d=(";
        for (std::size_t i = 0; i < vt.node.d.size(); ++i)
          *sink << (i ? "," : "") << vt.node.d[i];
        *sink << ")\n";
      }
      *sink << "check node-types:\n";
      for (const auto& ct : spec.chk_terms()) {
        *sink << "  coeff=" << rat_string(ct.coeff) << " d=(";
        for (std::size_t i = 0; i < ct.node.d.size(); ++i)
          *sink << (i ? "," : "") << ct.node.d[i];
        *sink << ")\n";
      }
      *sink << "edge fractions nu_i(1,1):";
      for (const auto& f : spec.edge_fractions()) *sink << " " << rat_string(f);
      *sink << "\n";
      *sink << "design rate: " << rat_string(spec.design_rate()) << "\n";
      *sink << "smallest valid n: " << spec.smallest_valid_n().str() << "\n";
      if (with_n) {
        InstantiatedCounts counts = instantiate(spec, n);
        *sink << "at n=" << n << ":\n";
        *sink << "  variable counts:";
        for (auto c : counts.var_counts) *sink << " " << c;
        *sink << "\n  check counts:";
        for (auto c : counts.chk_counts) *sink << " " << c;
        *sink << "\n  E:";
        for (auto c : counts.edge_counts) *sink << " " << c;
        *sink << "\n  graphs in ensemble: " << ensemble_size(counts).str() << "\n";
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace metldpc::cli
