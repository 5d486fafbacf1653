#pragma once

#include "rlg/rlg.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rlg::cli {

constexpr int exit_ok = 0;
constexpr int exit_domain = 1;
constexpr int exit_usage = 2;

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline unsigned threads_from_env() {
  const char* v = std::getenv("RLG_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const unsigned long t = std::strtoul(v, &end, 10);
  if (*end != '\0') return 1;
  return resolve_threads(static_cast<unsigned>(t));
}

inline std::vector<Method> methods_flag(const std::string& value) {
  std::vector<Method> out;
  for (const auto& m : split_list(value.empty() ? "dfs,exact-trace" : value)) {
    try {
      out.push_back(parse_method(m));
    } catch (const Error&) {
      throw CLI::ValidationError("--methods", "unknown method '" + m + "'");
    }
  }
  return out;
}

inline std::string expect_report(int d, int n, std::int64_t k) {
  const BigRational e = exact_expected_simple(d, n, k);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", to_double(e));
  return to_fraction(e) + "\n" + buf + "\n";
}

struct Flags {
  int d = 3;
  int n = 0;
  std::string n_list;
  std::size_t k = 0;
  std::string k_grid;
  std::uint64_t seed = 0;
  std::string model = "configuration";
  std::string methods;
  std::size_t replicates = 1;
  std::string out;
  std::string json_out;
  std::string graph;
  std::string path = "auto";
  bool loops = false;
  std::uint64_t walks = 2000;
  double conc_epsilon = 0.25;
  double gap_epsilon = 0.1;
  std::uint64_t budget_dfs = 200'000'000ULL;
  std::uint64_t budget_trace = 5'000'000ULL;
  std::uint64_t budget_oracle = default_oracle_budget;
  std::size_t budget_direct = default_direct_budget;
  int budget_rejection = 100000;
  std::string csv;
  std::string x_column = "k";
  std::string y_column = "ratio_R";
  std::string series = "n";
  std::string method_filter;
  bool log_x = false;
};

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
}

inline std::vector<std::size_t> k_values(const Flags& f) {
  std::vector<std::size_t> ks;
  if (!f.k_grid.empty()) {
    for (const auto& s : split_list(f.k_grid)) {
      try {
        ks.push_back(static_cast<std::size_t>(std::stoull(s)));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--k-grid", "not an integer: " + s);
      }
    }
  } else if (f.k > 0) {
    ks.push_back(f.k);
  }
  if (ks.empty()) throw CLI::RequiredError("--k or --k-grid");
  return ks;
}

inline int run_sample(const Flags& f, std::ostream& out) {
  RngStream rng(f.seed, 0);
  const Multigraph g = sample_graph(parse_graph_model(f.model), f.d, f.n, rng, f.budget_rejection);
  emit(graph_to_json(g).dump() + "\n", f.out, out);
  return exit_ok;
}

inline int run_census(const Flags& f, std::ostream& out) {
  const Multigraph g = load_graph(f.graph);
  bool use_dfs = false, use_exact = false, use_spectral = false;
  for (Method m : methods_flag(f.methods)) {
    switch (m) {
      case Method::dfs: use_dfs = true; break;
      case Method::exact_trace: use_exact = true; break;
      case Method::spectral: use_spectral = true; break;
      case Method::walk_sample: throw CLI::ValidationError("--methods", "walk-sample is a sweep method");
    }
  }
  const std::vector<std::size_t> ks = k_values(f);
  CensusLimits limits;
  limits.dfs_visits = f.budget_dfs;
  limits.trace_products = f.budget_trace;
  std::optional<SpectralTraceModel> spectral;
  if (use_spectral) spectral.emplace(g, SpectralPath::automatic, f.budget_direct);
  std::optional<std::vector<BigInt>> traces;
  if (use_exact) traces = closed_nb_walk_traces(g, *std::max_element(ks.begin(), ks.end()), limits);

  Json reports = Json::array();
  for (std::size_t k : ks) {
    if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
    Json j;
    j["k"] = k;
    std::optional<BigInt> simp;
    if (use_dfs) {
      simp = k > static_cast<std::size_t>(g.vertex_count()) ? BigInt(0) : count_simple_loops(g, k, limits);
      j["n_simp"] = to_decimal(*simp);
    }
    if (traces) {
      const BigInt prim = primitive_from_traces(*traces, k);
      if (simp && *simp > prim) fail(ErrorCode::DomainError, "N_simp exceeds N_prim; census inconsistent");
      j["n_prim"] = to_decimal(prim);
      j["n_tr"] = to_decimal((*traces)[k]);
      j["n_all"] = to_decimal(all_from_traces(*traces, k));
    }
    if (spectral) {
      const SpectralTrace s = spectral->trace(k);
      j["n_tr_spectral"] = s.value;
      j["spectral_relative_error"] = s.relative_error;
      if (traces) {
        const double exact = to_double((*traces)[k]);
        const double tol = std::max(1e-6, 10.0 * s.relative_error) * std::max(std::abs(exact), 1.0);
        if (std::abs(s.value - exact) > tol) fail(ErrorCode::DomainError, "spectral and exact traces disagree");
      }
    }
    if (f.loops) j["loops"] = loops_to_json(enumerate_loops_oracle(g, k, f.budget_oracle));
    reports.push_back(j);
  }
  const Json& doc = ks.size() == 1 && f.k_grid.empty() ? reports[0] : reports;
  emit(doc.dump(2) + "\n", f.out, out);
  return exit_ok;
}

inline int run_spectrum(const Flags& f, std::ostream& out) {
  const Multigraph g = load_graph(f.graph);
  SpectralPath path;
  if (f.path == "auto") {
    path = SpectralPath::automatic;
  } else if (f.path == "mapped") {
    path = SpectralPath::mapped;
  } else if (f.path == "direct") {
    path = SpectralPath::direct;
  } else {
    throw CLI::ValidationError("--path", "expected auto, mapped or direct");
  }
  emit(spectrum_to_json(spectral_report(g, path, f.budget_direct)).dump(2) + "\n", f.out, out);
  return exit_ok;
}

inline int run_expect(const Flags& f, std::ostream& out) {
  if (f.k < 1) throw CLI::RequiredError("--k");
  emit(expect_report(f.d, f.n, static_cast<std::int64_t>(f.k)), f.out, out);
  return exit_ok;
}

inline SweepConfig sweep_config_from_flags(const Flags& f) {
  SweepConfig c;
  c.d = f.d;
  const std::string ns = f.n_list.empty() ? std::to_string(f.n) : f.n_list;
  for (const auto& s : split_list(ns)) {
    try {
      c.n_values.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--n", "not an integer: " + s);
    }
  }
  c.k_values = k_values(f);
  c.replicates = f.replicates;
  c.seed = f.seed;
  c.model = parse_graph_model(f.model);
  c.methods = methods_flag(f.methods);
  c.budgets.dfs_visits = f.budget_dfs;
  c.budgets.trace_products = f.budget_trace;
  c.budgets.rejection_attempts = f.budget_rejection;
  c.concentration_epsilon = f.conc_epsilon;
  c.gap_epsilon = f.gap_epsilon;
  c.walks_per_graph = f.walks;
  return c;
}

inline int run_sweep_command(const Flags& f, std::ostream& out) {
  const SweepResult result = run_sweep(sweep_config_from_flags(f), threads_from_env());
  emit(sweep_to_csv(result), f.out, out);
  if (!f.json_out.empty()) write_file(f.json_out, sweep_to_json(result).dump(2) + "\n");
  return exit_ok;
}

inline int run_plot(const Flags& f, std::ostream& out) {
  PlotOptions opt;
  opt.x_column = f.x_column;
  opt.y_column = f.y_column;
  opt.series_column = f.series;
  if (!f.method_filter.empty()) opt.method = f.method_filter;
  opt.log_x = f.log_x;
  emit(plot_csv_text(read_file(f.csv), opt), f.out, out);
  return exit_ok;
}

/// Runs one command. Output goes to `out` unless --out names a file; errors go
/// to `err`. Returns 0, 1 (domain error) or 2 (usage error).
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loop census and spectra of random regular graphs"};
  app.require_subcommand(1);
  Flags f;

  auto common_budgets = [&f](CLI::App* sub) {
    sub->add_option("--budget-dfs", f.budget_dfs, "DFS visit budget for N_simp");
    sub->add_option("--budget-trace", f.budget_trace, "budget on n*d*k products for exact traces");
    sub->add_option("--budget-oracle", f.budget_oracle, "walk budget for the loop oracle");
    sub->add_option("--budget-direct", f.budget_direct, "largest n*d for direct NB diagonalization");
    sub->add_option("--budget-rejection", f.budget_rejection, "rejection attempts for uniform-simple");
  };
  auto model_check = CLI::IsMember({"configuration", "uniform-simple"});

  CLI::App* sample = app.add_subcommand("sample", "draw a graph and write its JSON");
  sample->add_option("--d", f.d, "degree")->required();
  sample->add_option("--n", f.n, "vertex count")->required();
  sample->add_option("--seed", f.seed, "RNG seed");
  sample->add_option("--model", f.model, "configuration | uniform-simple")->check(model_check);
  sample->add_option("--out", f.out, "output path (default stdout)");
  common_budgets(sample);

  CLI::App* census_cmd = app.add_subcommand("census", "loop counts of a graph file");
  census_cmd->add_option("--graph", f.graph, "graph JSON")->required();
  census_cmd->add_option("--k", f.k, "loop length");
  census_cmd->add_option("--k-grid", f.k_grid, "comma list of lengths");
  census_cmd->add_option("--methods", f.methods, "comma list of dfs, exact-trace, spectral");
  census_cmd->add_flag("--loops", f.loops, "also list every loop (oracle enumeration)");
  census_cmd->add_option("--out", f.out, "output path (default stdout)");
  common_budgets(census_cmd);

  CLI::App* spectrum = app.add_subcommand("spectrum", "adjacency and non-backtracking spectra");
  spectrum->add_option("--graph", f.graph, "graph JSON")->required();
  spectrum->add_option("--path", f.path, "auto | mapped | direct");
  spectrum->add_option("--out", f.out, "output path (default stdout)");
  common_budgets(spectrum);

  CLI::App* expect = app.add_subcommand("expect", "exact E[N_simp(k)] over the configuration model");
  expect->add_option("--d", f.d, "degree")->required();
  expect->add_option("--n", f.n, "vertex count")->required();
  expect->add_option("--k", f.k, "loop length")->required();
  expect->add_option("--out", f.out, "output path (default stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over an (n, k) grid");
  sweep->add_option("--d", f.d, "degree")->required();
  sweep->add_option("--n", f.n_list, "vertex count or comma list")->required();
  sweep->add_option("--k", f.k, "loop length");
  sweep->add_option("--k-grid", f.k_grid, "comma list of lengths");
  sweep->add_option("--seed", f.seed, "RNG seed");
  sweep->add_option("--model", f.model, "configuration | uniform-simple")->check(model_check);
  sweep->add_option("--methods", f.methods, "comma list of dfs, walk-sample, exact-trace, spectral");
  sweep->add_option("--replicates", f.replicates, "graphs per n");
  sweep->add_option("--walks", f.walks, "walks per graph for walk-sample");
  sweep->add_option("--epsilon", f.conc_epsilon, "concentration tolerance");
  sweep->add_option("--gap-epsilon", f.gap_epsilon, "spectral gap epsilon");
  sweep->add_option("--out", f.out, "CSV output path (default stdout)");
  sweep->add_option("--json", f.json_out, "JSON mirror output path");
  common_budgets(sweep);

  CLI::App* plot = app.add_subcommand("plot", "SVG line chart from a sweep CSV");
  plot->add_option("--csv", f.csv, "input CSV")->required();
  plot->add_option("--x", f.x_column, "x column");
  plot->add_option("--y", f.y_column, "y column");
  plot->add_option("--series", f.series, "column that splits series");
  plot->add_option("--method", f.method_filter, "keep rows of this method only");
  plot->add_flag("--log-x", f.log_x, "log-scaled x axis");
  plot->add_option("--out", f.out, "output path (default stdout)")->required();

  try {
    app.parse(argc, argv);
    if (*sample) return run_sample(f, out);
    if (*census_cmd) return run_census(f, out);
    if (*spectrum) return run_spectrum(f, out);
    if (*expect) return run_expect(f, out);
    if (*sweep) return run_sweep_command(f, out);
    if (*plot) return run_plot(f, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) {
      err << "usage error: " << e.what() << "\n";
      return exit_usage;
    }
    err << "error: " << e.what() << "\n";
    return exit_domain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_domain;
  }
  return exit_usage;
}

}  // namespace rlg::cli
