#pragma once

#include "rlg/bigint.hpp"
#include "rlg/census.hpp"
#include "rlg/error.hpp"
#include "rlg/experiments.hpp"
#include "rlg/multigraph.hpp"
#include "rlg/spectra.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rlg {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Graphs

inline Json graph_to_json(const Multigraph& g) {
  Json j;
  j["d"] = g.degree();
  j["n"] = g.vertex_count();
  j["pairing"] = Json::array();
  for (HalfEdge h : g.pairing()) j["pairing"].push_back(h);
  return j;
}

inline Multigraph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("pairing")) {
    fail(ErrorCode::ParseError, "graph JSON needs \"d\", \"n\" and \"pairing\"");
  }
  const Json& d = j["d"];
  const Json& n = j["n"];
  const Json& p = j["pairing"];
  if (!d.is_number_integer() || !n.is_number_integer() || !p.is_array()) {
    fail(ErrorCode::ParseError, "graph JSON fields have the wrong type");
  }
  std::vector<HalfEdge> pairing;
  pairing.reserve(p.size());
  for (const Json& v : p) {
    if (!v.is_number_unsigned()) fail(ErrorCode::ParseError, "pairing entries must be non-negative integers");
    const auto x = v.get<std::uint64_t>();
    if (x > 0xFFFFFFFFULL) fail(ErrorCode::IndexOutOfRange, "pairing entry out of range");
    pairing.push_back(static_cast<HalfEdge>(x));
  }
  return Multigraph::from_pairing(d.get<int>(), n.get<int>(), std::move(pairing));
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::InvalidArgument, "write to '" + path + "' failed");
}

inline Multigraph load_graph(const std::string& path) { return graph_from_json(parse_json_text(read_file(path))); }

inline void save_graph(const std::string& path, const Multigraph& g) { write_file(path, graph_to_json(g).dump() + "\n"); }

// ---------------------------------------------------------------------------
// Census and spectrum reports

inline Json census_to_json(const LoopCensus& c) {
  Json j;
  j["k"] = c.k;
  j["n_simp"] = to_decimal(c.n_simp);
  j["n_prim"] = to_decimal(c.n_prim);
  j["n_tr"] = to_decimal(c.n_tr);
  j["n_all"] = to_decimal(c.n_all);
  return j;
}

inline LoopCensus census_from_json(const Json& j) {
  for (const char* key : {"k", "n_simp", "n_prim", "n_tr", "n_all"}) {
    if (!j.contains(key)) fail(ErrorCode::ParseError, std::string("census JSON lacks \"") + key + "\"");
  }
  LoopCensus c;
  try {
    c.k = j["k"].get<std::size_t>();
    c.n_simp = parse_bigint(j["n_simp"].get<std::string>());
    c.n_prim = parse_bigint(j["n_prim"].get<std::string>());
    c.n_tr = parse_bigint(j["n_tr"].get<std::string>());
    c.n_all = parse_bigint(j["n_all"].get<std::string>());
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
  return c;
}

inline Json loops_to_json(const std::vector<NbLoop>& loops) {
  Json out = Json::array();
  for (const NbLoop& loop : loops) {
    Json tails = Json::array();
    for (DirectedEdge e : loop.edges) tails.push_back(e.tail);
    out.push_back(tails);
  }
  return out;
}

inline Json spectrum_to_json(const SpectralReport& r) {
  Json j;
  j["adjacency"] = r.adjacency_eigenvalues;
  j["lambda"] = r.lambda_gap;
  j["mu"] = r.mu_second;
  j["nb"] = Json::array();
  for (const Complex& z : r.nb_eigenvalues) j["nb"].push_back(Json::array({z.real(), z.imag()}));
  j["residual"] = r.residual_bound;
  return j;
}

// ---------------------------------------------------------------------------
// Sweep output

inline const std::vector<std::string>& sweep_csv_columns() {
  static const std::vector<std::string> columns = {
      "d",         "n",          "k",           "model",         "method",        "replicates",   "mean_nsimp",
      "se_nsimp",  "mean_ntr",   "se_ntr",      "mean_nprim",    "second_moment_nsimp", "ratio_R", "ratio_CI_low",
      "ratio_CI_high", "conc_fraction", "share_lambda", "share_mu", "skipped"};
  return columns;
}

/// 17 significant digits: parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_double_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string sweep_to_csv(const SweepResult& result) {
  std::string out;
  const auto& cols = sweep_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const SummaryRow& r : summarize(result)) {
    out += std::to_string(r.d) + ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + to_string(r.model) + ',' +
           to_string(r.method) + ',' + std::to_string(r.replicates) + ',' + opt(r.mean_nsimp) + ',' + opt(r.se_nsimp) +
           ',' + opt(r.mean_ntr) + ',' + opt(r.se_ntr) + ',' + opt(r.mean_nprim) + ',' + opt(r.second_moment_nsimp) +
           ',' + opt(r.ratio_R) + ',' + opt(r.ratio_ci_low) + ',' + opt(r.ratio_ci_high) + ',' + opt(r.conc_fraction) +
           ',' + opt(r.share_lambda) + ',' + opt(r.share_mu) + ',' + (r.skipped ? "1" : "0") + '\n';
  }
  return out;
}

inline Json sweep_config_to_json(const SweepConfig& c) {
  Json j;
  j["d"] = c.d;
  j["n_values"] = c.n_values;
  j["k_values"] = c.k_values;
  j["replicates"] = c.replicates;
  j["seed"] = std::to_string(c.seed);
  j["model"] = to_string(c.model);
  j["methods"] = Json::array();
  for (Method m : c.methods) j["methods"].push_back(to_string(m));
  j["budgets"] = {{"dfs_visits", std::to_string(c.budgets.dfs_visits)},
                  {"trace_products", std::to_string(c.budgets.trace_products)},
                  {"rejection_attempts", c.budgets.rejection_attempts}};
  j["concentration_epsilon"] = c.concentration_epsilon;
  j["gap_epsilon"] = c.gap_epsilon;
  j["walks_per_graph"] = std::to_string(c.walks_per_graph);
  return j;
}

/// Full replicate-level mirror of a sweep; exact counts are decimal strings.
inline Json sweep_to_json(const SweepResult& result) {
  Json j;
  j["config"] = sweep_config_to_json(result.config);
  j["cells"] = Json::array();
  auto bigs = [](const std::vector<BigInt>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(to_decimal(x));
    return a;
  };
  for (const CellResult& c : result.cells) {
    Json cell;
    cell["n"] = c.n;
    cell["k"] = c.k;
    cell["replicates"] = c.stream_indices.size();
    Json streams = Json::array();
    for (auto s : c.stream_indices) streams.push_back(std::to_string(s));
    cell["streams"] = streams;
    Json values;
    if (!c.nsimp_dfs.empty()) values["dfs"] = {{"n_simp", bigs(c.nsimp_dfs)}};
    if (!c.nsimp_walk.empty()) values["walk-sample"] = {{"n_simp", c.nsimp_walk}};
    if (!c.ntr_exact.empty()) values["exact-trace"] = {{"n_tr", bigs(c.ntr_exact)}, {"n_prim", bigs(c.nprim_exact)}};
    if (!c.ntr_spectral.empty()) {
      values["spectral"] = {{"n_tr", c.ntr_spectral},
                            {"n_prim", c.nprim_spectral},
                            {"relative_error", c.spectral_error},
                            {"lambda", c.lambda_gap},
                            {"mu", c.mu_second}};
    }
    cell["values"] = values.is_null() ? Json::object() : values;
    Json skipped = Json::object();
    for (const auto& [m, reason] : c.skipped) skipped[to_string(m)] = reason;
    cell["skipped"] = skipped;
    j["cells"].push_back(cell);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Minimal CSV reading (no quoting; the sweep CSV never needs it)

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    fail(ErrorCode::MissingColumn, "no column named '" + name + "'");
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

}  // namespace rlg
