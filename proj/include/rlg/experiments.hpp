#pragma once

#include "rlg/bigint.hpp"
#include "rlg/census.hpp"
#include "rlg/error.hpp"
#include "rlg/multigraph.hpp"
#include "rlg/nbcore.hpp"
#include "rlg/parallel.hpp"
#include "rlg/rng.hpp"
#include "rlg/sampler.hpp"
#include "rlg/spectra.hpp"
#include "rlg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rlg {

// ---------------------------------------------------------------------------
// Estimators

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double standard_error = 0.0;
};

inline Moments estimate_moments(std::span<const double> samples) {
  if (samples.size() < 2) fail(ErrorCode::TooFewSamples, "need at least two samples");
  const double count = static_cast<double>(samples.size());
  double sum = 0.0, sum_sq = 0.0;
  for (double s : samples) {
    sum += s;
    sum_sq += s * s;
  }
  Moments m;
  m.mean = sum / count;
  m.second_moment = sum_sq / count;
  double ss = 0.0;
  for (double s : samples) ss += (s - m.mean) * (s - m.mean);
  m.standard_error = std::sqrt(ss / (count - 1.0) / count);
  return m;
}

/// Share of samples s with |s / center - 1| < epsilon.
inline double concentration_check(std::span<const double> samples, double center, double epsilon) {
  if (samples.empty()) fail(ErrorCode::TooFewSamples, "need at least one sample");
  if (!(center > 0.0)) fail(ErrorCode::InvalidArgument, "center must be positive");
  std::size_t hits = 0;
  for (double s : samples) hits += std::abs(s / center - 1.0) < epsilon ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

struct BinomialEstimate {
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Wilson score interval at z = 1.96.
inline BinomialEstimate binomial_estimate(std::uint64_t events, std::uint64_t trials) {
  if (trials == 0) fail(ErrorCode::TooFewSamples, "no trials");
  constexpr double z = 1.96;
  BinomialEstimate out{events, trials, 0.0, 0.0, 0.0};
  const double nt = static_cast<double>(trials);
  const double ph = static_cast<double>(events) / nt;
  const double denom = 1.0 + z * z / nt;
  const double centre = (ph + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nt + z * z / (4.0 * nt * nt)) / denom;
  out.p = ph;
  out.ci_low = std::max(0.0, centre - half);
  out.ci_high = std::min(1.0, centre + half);
  return out;
}

struct RatioEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// scale * mean(x) / mean(y) for paired samples, with a delta-method 95% CI.
inline std::optional<RatioEstimate> ratio_of_means(std::span<const double> x, std::span<const double> y, double scale) {
  if (x.size() != y.size() || x.empty()) fail(ErrorCode::MissingCounts, "ratio needs paired samples");
  const double count = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  if (my == 0.0) return std::nullopt;
  const double r = mx / my;
  double var = 0.0;
  if (x.size() > 1) {
    double vx = 0.0, vy = 0.0, cxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      vx += (x[i] - mx) * (x[i] - mx);
      vy += (y[i] - my) * (y[i] - my);
      cxy += (x[i] - mx) * (y[i] - my);
    }
    vx /= count - 1.0;
    vy /= count - 1.0;
    cxy /= count - 1.0;
    var = std::max(0.0, (vx - 2.0 * r * cxy + r * r * vy) / (my * my) / count);
  }
  const double half = 1.96 * std::sqrt(var) * scale;
  return RatioEstimate{scale * r, scale * r - half, scale * r + half};
}

// ---------------------------------------------------------------------------
// Walk-based estimator of N_simp

/// Unbiased estimate of N_simp(g, k) by sequential importance sampling: a walk
/// starts on a uniform half-edge and extends uniformly among successors that
/// keep the heads distinct and away from the start; the product of the
/// candidate counts (times n*d, times the number of closing edges at the last
/// step) has expectation k * N_simp.
inline double estimate_simple_loops_by_walks(const Multigraph& g, std::size_t k, std::uint64_t walks, RngStream& rng) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  if (walks == 0) fail(ErrorCode::TooFewSamples, "need at least one walk");
  if (k > static_cast<std::size_t>(g.vertex_count())) return 0.0;
  const auto m = static_cast<double>(g.half_edge_count());
  const auto d = static_cast<HalfEdge>(g.degree());
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<Vertex> marked;
  std::vector<HalfEdge> candidates;
  candidates.reserve(d);
  double total = 0.0;
  for (std::uint64_t w = 0; w < walks; ++w) {
    const auto first = static_cast<HalfEdge>(rng.uniform_below(g.half_edge_count()));
    const Vertex start = g.vertex(first);
    double weight = m;
    if (k == 1) {
      total += g.vertex(g.partner(first)) == start ? weight : 0.0;
      continue;
    }
    seen[start] = 1;
    marked.assign(1, start);
    HalfEdge current = first;
    for (std::size_t step = 2; step <= k && weight > 0.0; ++step) {
      const HalfEdge arrival = g.partner(current);
      const Vertex here = g.vertex(arrival);
      if (seen[here]) {
        weight = 0.0;
        break;
      }
      seen[here] = 1;
      marked.push_back(here);
      candidates.clear();
      const HalfEdge base = g.first_half_edge(here);
      for (HalfEdge s = base; s < base + d; ++s) {
        if (s == arrival) continue;
        const Vertex head = g.vertex(g.partner(s));
        const bool ok = step == k ? head == start && g.partner(s) != first : !seen[head];
        if (ok) candidates.push_back(s);
      }
      weight *= static_cast<double>(candidates.size());
      if (candidates.empty() || step == k) break;
      current = candidates[candidates.size() == 1 ? 0 : rng.uniform_below(candidates.size())];
    }
    for (Vertex v : marked) seen[v] = 0;
    total += weight;
  }
  return total / static_cast<double>(walks) / static_cast<double>(k);
}

// ---------------------------------------------------------------------------
// Excess tail

namespace detail {

/// Walks a uniform non-backtracking walk of length k while revealing a
/// configuration-model pairing only where the walk needs it. Equivalent in
/// law to sampling G(d, n) first and a uniform walk on it second.
inline int lazy_walk_excess(int d, int n, std::size_t k, RngStream& rng,
                            std::vector<std::pair<HalfEdge, HalfEdge>>& revealed,
                            std::vector<EdgeRecord>& records) {
  const auto total = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(n);
  const auto dd = static_cast<HalfEdge>(d);
  revealed.clear();
  records.clear();
  auto lookup = [&](HalfEdge h) -> std::optional<HalfEdge> {
    for (const auto& [a, b] : revealed) {
      if (a == h) return b;
      if (b == h) return a;
    }
    return std::nullopt;
  };
  HalfEdge tail = static_cast<HalfEdge>(rng.uniform_below(total));
  for (std::size_t step = 0; step < k; ++step) {
    HalfEdge mate;
    if (auto known = lookup(tail)) {
      mate = *known;
    } else {
      // Uniform over unpaired half-edges other than `tail`.
      for (;;) {
        mate = static_cast<HalfEdge>(rng.uniform_below(total));
        if (mate != tail && !lookup(mate)) break;
      }
      revealed.emplace_back(tail, mate);
    }
    records.push_back({std::min(tail, mate), tail / dd, mate / dd});
    if (step + 1 == k) break;
    const HalfEdge base = (mate / dd) * dd;
    auto pick = static_cast<HalfEdge>(rng.uniform_below(dd - 1));
    if (base + pick >= mate) ++pick;
    tail = base + pick;
  }
  return cycle_rank(records);
}

}  // namespace detail

/// Probability that a uniform non-backtracking walk of length k on G(d, n)
/// induces a subgraph of cycle rank >= 2, with a Wilson 95% interval. Each
/// walk sees a fresh graph; chunk c of 4096 walks uses rng.child(c).
inline BinomialEstimate excess_tail_probability(int d, int n, std::size_t k, std::uint64_t walks, const RngStream& rng,
                                                unsigned threads = 1) {
  detail::require_even(d, n);
  if (d < 2) fail(ErrorCode::InvalidArgument, "d must be >= 2");
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  if (walks == 0) fail(ErrorCode::TooFewSamples, "need at least one walk");
  constexpr std::uint64_t chunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((walks + chunk - 1) / chunk);
  std::vector<std::uint64_t> events(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    RngStream local = rng.child(c);
    std::vector<std::pair<HalfEdge, HalfEdge>> revealed;
    std::vector<detail::EdgeRecord> records;
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min<std::uint64_t>(walks, begin + chunk);
    std::uint64_t hits = 0;
    for (std::uint64_t w = begin; w < end; ++w) {
      if (detail::lazy_walk_excess(d, n, k, local, revealed, records) >= 2) ++hits;
    }
    events[c] = hits;
  });
  std::uint64_t hits = 0;
  for (auto e : events) hits += e;
  return binomial_estimate(hits, walks);
}

// ---------------------------------------------------------------------------
// Spectral gap survey

struct GapSurvey {
  double share_lambda = 0.0;
  double share_mu = 0.0;
  /// Graphs with lambda <= d - epsilon but mu above the transferred bound.
  std::size_t implication_violations = 0;
  GapBound bound;
  std::vector<double> lambdas;
  std::vector<double> mus;
};

inline constexpr double gap_slack = 1e-9;

/// Replicate r uses rng.child(r) to draw a uniform simple graph.
inline GapSurvey spectral_gap_survey(int d, int n, std::size_t replicates, double epsilon, const RngStream& rng,
                                     unsigned threads = 1, int max_attempts = 100000) {
  if (replicates == 0) fail(ErrorCode::TooFewSamples, "need at least one replicate");
  GapSurvey out;
  out.bound = gap_bound(epsilon, d);
  out.lambdas.assign(replicates, 0.0);
  out.mus.assign(replicates, 0.0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    RngStream local = rng.child(r);
    const Multigraph g = sample_uniform_simple(d, n, local, max_attempts);
    const SpectralReport report = spectral_report(g);
    out.lambdas[r] = report.lambda_gap;
    out.mus[r] = report.mu_second;
  });
  std::size_t lam = 0, mu = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    const bool gap = out.lambdas[r] <= d - epsilon;
    const bool transferred = out.mus[r] <= out.bound.bound + gap_slack;
    lam += gap;
    mu += transferred;
    if (gap && !transferred) ++out.implication_violations;
  }
  out.share_lambda = static_cast<double>(lam) / static_cast<double>(replicates);
  out.share_mu = static_cast<double>(mu) / static_cast<double>(replicates);
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class Method { dfs, walk_sample, exact_trace, spectral };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::dfs: return "dfs";
    case Method::walk_sample: return "walk-sample";
    case Method::exact_trace: return "exact-trace";
    case Method::spectral: return "spectral";
  }
  return "unknown";
}

inline Method parse_method(const std::string& s) {
  if (s == "dfs") return Method::dfs;
  if (s == "walk-sample") return Method::walk_sample;
  if (s == "exact-trace") return Method::exact_trace;
  if (s == "spectral") return Method::spectral;
  fail(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

struct SweepBudgets {
  std::uint64_t dfs_visits = 200'000'000ULL;
  std::uint64_t trace_products = 5'000'000ULL;
  int rejection_attempts = 100000;
};

struct SweepConfig {
  int d = 3;
  std::vector<int> n_values;
  std::vector<std::size_t> k_values;
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  GraphModel model = GraphModel::configuration;
  std::vector<Method> methods;
  SweepBudgets budgets;
  double concentration_epsilon = 0.25;
  double gap_epsilon = 0.1;
  std::uint64_t walks_per_graph = 2000;

  bool has(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

  void validate() const {
    if (d < 2) fail(ErrorCode::InvalidConfig, "d must be >= 2");
    if (n_values.empty() || k_values.empty()) fail(ErrorCode::InvalidConfig, "empty n or k grid");
    if (replicates < 1) fail(ErrorCode::InvalidConfig, "replicates must be >= 1");
    if (methods.empty()) fail(ErrorCode::InvalidConfig, "no methods requested");
    for (int n : n_values) {
      if (n < 1 || (static_cast<long long>(n) * d) % 2 != 0) {
        fail(ErrorCode::InvalidConfig, "n*d must be even and n >= 1 (n = " + std::to_string(n) + ")");
      }
    }
    for (std::size_t k : k_values) {
      if (k < 1) fail(ErrorCode::InvalidConfig, "k must be >= 1");
    }
    if (has(Method::walk_sample) && walks_per_graph == 0) fail(ErrorCode::InvalidConfig, "walks_per_graph must be >= 1");
    if (!(concentration_epsilon > 0.0)) fail(ErrorCode::InvalidConfig, "concentration epsilon must be positive");
    if (has(Method::spectral)) {
      if (!(gap_epsilon > 0.0) || d - gap_epsilon < 2.0 * std::sqrt(d - 1.0)) {
        fail(ErrorCode::InvalidConfig, "gap epsilon must satisfy 0 < eps <= d - 2 sqrt(d-1)");
      }
    }
  }
};

/// Replicate-level values of one (n, k) cell. A method's vectors are either
/// empty (not requested or skipped) or hold one value per replicate.
struct CellResult {
  int n = 0;
  std::size_t k = 0;
  std::size_t n_index = 0;
  std::vector<std::uint64_t> stream_indices;
  std::vector<BigInt> nsimp_dfs;
  std::vector<double> nsimp_walk;
  std::vector<BigInt> ntr_exact;
  std::vector<BigInt> nprim_exact;
  std::vector<double> ntr_spectral;
  std::vector<double> nprim_spectral;
  std::vector<double> spectral_error;
  std::vector<double> lambda_gap;
  std::vector<double> mu_second;
  std::vector<std::pair<Method, std::string>> skipped;

  std::optional<std::string> skip_reason(Method m) const {
    for (const auto& [method, reason] : skipped) {
      if (method == m) return reason;
    }
    return std::nullopt;
  }
};

struct SweepResult {
  SweepConfig config;
  std::vector<CellResult> cells;

  const CellResult* find(int n, std::size_t k) const {
    for (const auto& c : cells) {
      if (c.n == n && c.k == k) return &c;
    }
    return nullptr;
  }
};

/// Stream index of replicate r for the i-th entry of n_values.
constexpr std::uint64_t replicate_stream(std::size_t n_index, std::size_t replicate) {
  return (static_cast<std::uint64_t>(n_index) << 32) | static_cast<std::uint64_t>(replicate);
}

namespace detail {

struct GraphOutcome {
  std::vector<std::optional<BigInt>> nsimp_dfs;
  std::vector<double> nsimp_walk;
  std::vector<std::optional<BigInt>> ntr_exact, nprim_exact;
  std::vector<double> ntr_spectral, nprim_spectral, spectral_error;
  double lambda_gap = 0.0;
  double mu_second = 0.0;
};

inline double primitive_from_spectral(const std::vector<double>& traces, std::size_t k) {
  double sum = 0.0;
  for (std::int64_t r : divisors(static_cast<std::int64_t>(k))) {
    const int mu = mobius(static_cast<std::int64_t>(k) / r);
    if (mu != 0) sum += mu * traces[static_cast<std::size_t>(r)];
  }
  return sum / static_cast<double>(k);
}

inline GraphOutcome evaluate_graph(const SweepConfig& config, const Multigraph& g, RngStream& rng) {
  const auto& ks = config.k_values;
  const std::size_t kcount = ks.size();
  const std::size_t kmax = *std::max_element(ks.begin(), ks.end());
  const std::size_t m = g.half_edge_count();
  GraphOutcome out;

  if (config.has(Method::dfs)) {
    out.nsimp_dfs.resize(kcount);
    CensusLimits limits;
    limits.dfs_visits = config.budgets.dfs_visits;
    for (std::size_t i = 0; i < kcount; ++i) {
      if (ks[i] > static_cast<std::size_t>(g.vertex_count())) {
        out.nsimp_dfs[i] = BigInt(0);
        continue;
      }
      try {
        out.nsimp_dfs[i] = count_simple_loops(g, ks[i], limits);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
      }
    }
  }

  if (config.has(Method::walk_sample)) {
    out.nsimp_walk.resize(kcount);
    for (std::size_t i = 0; i < kcount; ++i) {
      RngStream walk_rng = rng.child(i);
      out.nsimp_walk[i] = estimate_simple_loops_by_walks(g, ks[i], config.walks_per_graph, walk_rng);
    }
  }

  if (config.has(Method::exact_trace)) {
    out.ntr_exact.resize(kcount);
    out.nprim_exact.resize(kcount);
    std::size_t reach = 0;
    for (std::size_t k : ks) {
      if (m * k <= config.budgets.trace_products) reach = std::max(reach, k);
    }
    if (reach > 0) {
      CensusLimits limits;
      limits.trace_products = config.budgets.trace_products;
      const std::vector<BigInt> traces = closed_nb_walk_traces(g, reach, limits);
      for (std::size_t i = 0; i < kcount; ++i) {
        if (ks[i] > reach) continue;
        out.ntr_exact[i] = traces[ks[i]];
        out.nprim_exact[i] = primitive_from_traces(traces, ks[i]);
      }
    }
  }

  if (config.has(Method::spectral)) {
    const AdjacencySpectrum adj = adjacency_spectrum(g);
    out.lambda_gap = g.vertex_count() >= 2 ? lambda_gap(adj.eigenvalues) : 0.0;
    out.mu_second = mu_second(gk_map(adj.eigenvalues, g.degree(), g.vertex_count()), g.degree());
    const SpectralTraceModel model(adj.eigenvalues, adj.residual, g.degree(), g.vertex_count());
    std::vector<double> traces(kmax + 1, 0.0);
    std::vector<double> errors(kmax + 1, 0.0);
    for (std::size_t t = 1; t <= kmax; ++t) {
      const SpectralTrace s = model.trace(t);
      traces[t] = s.value;
      errors[t] = s.relative_error;
    }
    out.ntr_spectral.resize(kcount);
    out.nprim_spectral.resize(kcount);
    out.spectral_error.resize(kcount);
    for (std::size_t i = 0; i < kcount; ++i) {
      out.ntr_spectral[i] = traces[ks[i]];
      out.nprim_spectral[i] = primitive_from_spectral(traces, ks[i]);
      out.spectral_error[i] = errors[ks[i]];
    }
  }
  return out;
}

}  // namespace detail

/// Runs every (n, k) cell. Replicate r at the i-th n draws one graph from
/// RngStream(seed, replicate_stream(i, r)) and evaluates all k on it, so the
/// cells of one n are paired. Aggregation is in replicate order; the result
/// does not depend on `threads`.
inline SweepResult run_sweep(const SweepConfig& config, unsigned threads = 1) {
  config.validate();
  SweepResult result;
  result.config = config;
  const std::size_t kcount = config.k_values.size();

  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const int n = config.n_values[ni];
    std::vector<detail::GraphOutcome> outcomes(config.replicates);
    parallel_for(config.replicates, threads, [&](std::size_t r) {
      RngStream rng(config.seed, replicate_stream(ni, r));
      const Multigraph g = sample_graph(config.model, config.d, n, rng, config.budgets.rejection_attempts);
      outcomes[r] = detail::evaluate_graph(config, g, rng);
    });

    const auto nd = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(config.d);
    for (std::size_t ki = 0; ki < kcount; ++ki) {
      CellResult cell;
      cell.n = n;
      cell.k = config.k_values[ki];
      cell.n_index = ni;
      for (std::size_t r = 0; r < config.replicates; ++r) cell.stream_indices.push_back(replicate_stream(ni, r));

      if (config.has(Method::dfs)) {
        bool complete = true;
        for (const auto& o : outcomes) complete = complete && o.nsimp_dfs[ki].has_value();
        if (complete) {
          for (const auto& o : outcomes) cell.nsimp_dfs.push_back(*o.nsimp_dfs[ki]);
        } else {
          cell.skipped.emplace_back(Method::dfs, "dfs visit budget " + std::to_string(config.budgets.dfs_visits));
        }
      }
      if (config.has(Method::walk_sample)) {
        for (const auto& o : outcomes) cell.nsimp_walk.push_back(o.nsimp_walk[ki]);
      }
      if (config.has(Method::exact_trace)) {
        if (nd * cell.k <= config.budgets.trace_products) {
          for (const auto& o : outcomes) {
            cell.ntr_exact.push_back(*o.ntr_exact[ki]);
            cell.nprim_exact.push_back(*o.nprim_exact[ki]);
          }
        } else {
          cell.skipped.emplace_back(Method::exact_trace,
                                    "trace product budget " + std::to_string(config.budgets.trace_products));
        }
      }
      if (config.has(Method::spectral)) {
        for (const auto& o : outcomes) {
          cell.ntr_spectral.push_back(o.ntr_spectral[ki]);
          cell.nprim_spectral.push_back(o.nprim_spectral[ki]);
          cell.spectral_error.push_back(o.spectral_error[ki]);
          cell.lambda_gap.push_back(o.lambda_gap);
          cell.mu_second.push_back(o.mu_second);
        }
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Summaries

inline std::vector<double> as_doubles(const std::vector<BigInt>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

/// N_simp samples of a cell: exact DFS counts when present, else walk estimates.
inline std::optional<std::pair<Method, std::vector<double>>> simple_samples(const CellResult& cell) {
  if (!cell.nsimp_dfs.empty()) return std::pair{Method::dfs, as_doubles(cell.nsimp_dfs)};
  if (!cell.nsimp_walk.empty()) return std::pair{Method::walk_sample, cell.nsimp_walk};
  return std::nullopt;
}

/// N_tr samples of a cell: exact traces when present, else spectral traces.
inline std::optional<std::pair<Method, std::vector<double>>> trace_samples(const CellResult& cell) {
  if (!cell.ntr_exact.empty()) return std::pair{Method::exact_trace, as_doubles(cell.ntr_exact)};
  if (!cell.ntr_spectral.empty()) return std::pair{Method::spectral, cell.ntr_spectral};
  return std::nullopt;
}

struct SummaryRow {
  int d = 0;
  int n = 0;
  std::size_t k = 0;
  GraphModel model = GraphModel::configuration;
  Method method = Method::dfs;
  std::size_t replicates = 0;
  std::optional<double> mean_nsimp, se_nsimp, mean_ntr, se_ntr, mean_nprim, second_moment_nsimp;
  std::optional<double> ratio_R, ratio_ci_low, ratio_ci_high;
  std::optional<double> conc_fraction, share_lambda, share_mu;
  bool skipped = false;
};

namespace detail {

inline Moments moments_or_single(const std::vector<double>& xs) {
  if (xs.size() >= 2) return estimate_moments(xs);
  return Moments{xs[0], xs[0] * xs[0], 0.0};
}

}  // namespace detail

/// One row per (cell, requested method). N_simp methods (dfs, walk-sample)
/// fill the N_simp columns and the concentration share; trace methods
/// (exact-trace, spectral) fill N_tr, N_prim and the ratio R, whose numerator
/// is the cell's N_simp source. Spectral rows also carry the gap shares.
inline std::vector<SummaryRow> summarize(const SweepResult& result) {
  const SweepConfig& cfg = result.config;
  std::vector<SummaryRow> rows;
  for (const CellResult& cell : result.cells) {
    const double scale_center = to_double(asymptotic_count(cfg.d, static_cast<std::int64_t>(cell.k)));
    for (Method method : cfg.methods) {
      SummaryRow row;
      row.d = cfg.d;
      row.n = cell.n;
      row.k = cell.k;
      row.model = cfg.model;
      row.method = method;
      row.replicates = cfg.replicates;
      if (cell.skip_reason(method)) {
        row.skipped = true;
        rows.push_back(row);
        continue;
      }
      if (method == Method::dfs || method == Method::walk_sample) {
        const std::vector<double> xs = method == Method::dfs ? as_doubles(cell.nsimp_dfs) : cell.nsimp_walk;
        const Moments mo = detail::moments_or_single(xs);
        row.mean_nsimp = mo.mean;
        row.se_nsimp = mo.standard_error;
        row.second_moment_nsimp = mo.second_moment;
        row.conc_fraction = concentration_check(xs, scale_center, cfg.concentration_epsilon);
      } else {
        const std::vector<double> ys = method == Method::exact_trace ? as_doubles(cell.ntr_exact) : cell.ntr_spectral;
        const std::vector<double> ps = method == Method::exact_trace ? as_doubles(cell.nprim_exact) : cell.nprim_spectral;
        const Moments mo = detail::moments_or_single(ys);
        row.mean_ntr = mo.mean;
        row.se_ntr = mo.standard_error;
        row.mean_nprim = detail::moments_or_single(ps).mean;
        if (auto xs = simple_samples(cell)) {
          if (auto r = ratio_of_means(xs->second, ys, static_cast<double>(cell.k))) {
            row.ratio_R = r->value;
            row.ratio_ci_low = r->ci_low;
            row.ratio_ci_high = r->ci_high;
          }
        }
        if (method == Method::spectral) {
          const GapBound bound = gap_bound(cfg.gap_epsilon, cfg.d);
          std::size_t lam = 0, mu = 0;
          for (std::size_t r = 0; r < cell.lambda_gap.size(); ++r) {
            lam += cell.lambda_gap[r] <= cfg.d - cfg.gap_epsilon;
            mu += cell.mu_second[r] <= bound.bound + gap_slack;
          }
          row.share_lambda = static_cast<double>(lam) / static_cast<double>(cell.lambda_gap.size());
          row.share_mu = static_cast<double>(mu) / static_cast<double>(cell.mu_second.size());
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

struct TransitionPoint {
  std::size_t k = 0;
  bool defined = false;  // false when mean N_tr is zero
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Method simple_method = Method::dfs;
  Method trace_method = Method::exact_trace;
};

/// R(k) = k mean(N_simp) / mean(N_tr) for every k at vertex count n.
inline std::vector<TransitionPoint> transition_curve(const SweepResult& result, int n) {
  std::vector<TransitionPoint> out;
  for (const CellResult& cell : result.cells) {
    if (cell.n != n) continue;
    auto xs = simple_samples(cell);
    auto ys = trace_samples(cell);
    if (!xs || !ys) fail(ErrorCode::MissingCounts, "cell k = " + std::to_string(cell.k) + " lacks N_simp or N_tr");
    TransitionPoint p;
    p.k = cell.k;
    p.simple_method = xs->first;
    p.trace_method = ys->first;
    if (auto r = ratio_of_means(xs->second, ys->second, static_cast<double>(cell.k))) {
      p.defined = true;
      p.ratio = r->value;
      p.ci_low = r->ci_low;
      p.ci_high = r->ci_high;
    }
    out.push_back(p);
  }
  if (out.empty()) fail(ErrorCode::MissingCounts, "no cells with n = " + std::to_string(n));
  return out;
}

/// Per-graph k N_simp / N_tr; nullopt where N_tr = 0 (no loops at all).
inline std::vector<std::optional<double>> per_graph_ratios(const CellResult& cell) {
  auto xs = simple_samples(cell);
  auto ys = trace_samples(cell);
  if (!xs || !ys) fail(ErrorCode::MissingCounts, "cell lacks N_simp or N_tr");
  std::vector<std::optional<double>> out;
  for (std::size_t r = 0; r < xs->second.size(); ++r) {
    const double y = ys->second[r];
    if (y == 0.0) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(static_cast<double>(cell.k) * xs->second[r] / y);
    }
  }
  return out;
}

}  // namespace rlg
