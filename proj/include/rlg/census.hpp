#pragma once

#include "rlg/bigint.hpp"
#include "rlg/error.hpp"
#include "rlg/multigraph.hpp"
#include "rlg/nbcore.hpp"
#include "rlg/spectra.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace rlg {

// ---------------------------------------------------------------------------
// Number theory

inline int mobius(std::int64_t m) {
  if (m < 1) fail(ErrorCode::InvalidArgument, "mobius needs m >= 1");
  int sign = 1;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) return 0;
    sign = -sign;
  }
  if (m > 1) sign = -sign;
  return sign;
}

inline std::vector<std::int64_t> divisors(std::int64_t m) {
  if (m < 1) fail(ErrorCode::InvalidArgument, "divisors needs m >= 1");
  std::vector<std::int64_t> low, high;
  for (std::int64_t r = 1; r * r <= m; ++r) {
    if (m % r != 0) continue;
    low.push_back(r);
    if (r != m / r) high.push_back(m / r);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

// ---------------------------------------------------------------------------
// Census record

struct LoopCensus {
  std::size_t k = 0;
  BigInt n_simp;
  BigInt n_prim;
  BigInt n_tr;
  BigInt n_all;
};

struct CensusLimits {
  /// DFS node visits allowed per count_simple_loops call.
  std::uint64_t dfs_visits = 2'000'000'000ULL;
  /// Sparse products (n*d basis directions times k steps) for the exact trace.
  std::uint64_t trace_products = 50'000'000ULL;
};

// ---------------------------------------------------------------------------
// Simple loops by pruned DFS

namespace detail {

class SimpleLoopCounter {
 public:
  SimpleLoopCounter(const Multigraph& g, std::size_t k, std::uint64_t visit_budget)
      : g_(g),
        k_(k),
        budget_(visit_budget),
        on_path_(static_cast<std::size_t>(g.vertex_count()), 0),
        dist_(static_cast<std::size_t>(g.vertex_count()), -1) {}

  std::uint64_t run() {
    const auto n = static_cast<Vertex>(g_.vertex_count());
    const auto d = static_cast<HalfEdge>(g_.degree());
    for (root_ = 0; root_ < n; ++root_) {
      bfs_from_root();
      const HalfEdge base = g_.first_half_edge(root_);
      for (HalfEdge h = base; h < base + d; ++h) {
        first_ = h;
        extend(DirectedEdge{h}, 1);
      }
      for (Vertex v : touched_) dist_[v] = -1;
      touched_.clear();
    }
    return count_;
  }

  std::uint64_t visits() const noexcept { return visits_; }

 private:
  // Distances from the root inside the subgraph of vertices >= root, explored
  // to depth cap_ = k/2. An unreached vertex is farther than cap_.
  void bfs_from_root() {
    cap_ = static_cast<int>(k_ / 2);
    const auto d = static_cast<HalfEdge>(g_.degree());
    dist_[root_] = 0;
    touched_.push_back(root_);
    std::size_t head = 0;
    while (head < touched_.size()) {
      const Vertex u = touched_[head++];
      if (dist_[u] >= cap_) continue;
      const HalfEdge base = g_.first_half_edge(u);
      for (HalfEdge h = base; h < base + d; ++h) {
        const Vertex w = g_.vertex(g_.partner(h));
        if (w < root_ || dist_[w] >= 0) continue;
        dist_[w] = dist_[u] + 1;
        touched_.push_back(w);
      }
    }
  }

  bool cannot_return(Vertex w, std::size_t remaining) const {
    const int dw = dist_[w];
    if (dw >= 0) return static_cast<std::size_t>(dw) > remaining;
    return remaining <= static_cast<std::size_t>(cap_);
  }

  void extend(DirectedEdge e, std::size_t depth) {
    if (++visits_ > budget_) {
      fail(ErrorCode::BudgetExceeded, "simple-loop DFS exceeded " + std::to_string(budget_) + " visits");
    }
    const HalfEdge arrival = g_.partner(e.tail);
    const Vertex w = g_.vertex(arrival);
    if (depth == k_) {
      if (w == root_ && arrival != first_) ++count_;
      return;
    }
    if (w <= root_ || on_path_[w]) return;
    if (cannot_return(w, k_ - depth)) return;
    on_path_[w] = 1;
    const auto d = static_cast<HalfEdge>(g_.degree());
    const HalfEdge base = g_.first_half_edge(w);
    for (HalfEdge h = base; h < base + d; ++h) {
      if (h != arrival) extend(DirectedEdge{h}, depth + 1);
    }
    on_path_[w] = 0;
  }

  const Multigraph& g_;
  std::size_t k_;
  std::uint64_t budget_;
  std::vector<char> on_path_;
  std::vector<int> dist_;
  std::vector<Vertex> touched_;
  Vertex root_ = 0;
  HalfEdge first_ = 0;
  int cap_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t visits_ = 0;
};

}  // namespace detail

/// Oriented simple cyclically non-backtracking loops of length k, each counted
/// once: the DFS roots a loop at its minimum vertex and leaves through the
/// loop's own exit edge, never entering vertices below the root.
inline BigInt count_simple_loops(const Multigraph& g, std::size_t k, const CensusLimits& limits = {}) {
  if (k < 1 || k > static_cast<std::size_t>(g.vertex_count())) {
    fail(ErrorCode::LengthOutOfRange, "k = " + std::to_string(k) + " outside [1, n]");
  }
  detail::SimpleLoopCounter counter(g, k, limits.dfs_visits);
  return BigInt(counter.run());
}

// ---------------------------------------------------------------------------
// Exact traces of B^t

namespace detail {

inline BigInt to_bigint(unsigned __int128 v) {
  BigInt hi = static_cast<std::uint64_t>(v >> 64);
  return (hi << 64) + static_cast<std::uint64_t>(v);
}
inline BigInt to_bigint(std::uint64_t v) { return BigInt(v); }
inline BigInt to_bigint(const BigInt& v) { return v; }

/// traces[t] = Trace(B^t) for t = 0..kmax, propagating each basis direction.
template <class T>
std::vector<BigInt> nb_traces_by_propagation(const Multigraph& g, std::size_t kmax) {
  const std::size_t m = g.half_edge_count();
  const auto d = static_cast<HalfEdge>(g.degree());
  std::vector<T> sums(kmax + 1, T(0));
  std::vector<T> cur(m, T(0));
  std::vector<T> next(m, T(0));
  std::vector<HalfEdge> active;
  std::vector<HalfEdge> next_active;
  std::vector<char> marked(m, 0);
  for (HalfEdge j = 0; j < m; ++j) {
    std::fill(cur.begin(), cur.end(), T(0));
    cur[j] = T(1);
    active.assign(1, j);
    sums[0] += T(1);
    for (std::size_t t = 1; t <= kmax; ++t) {
      next_active.clear();
      // Walks from j: the value at e counts walks of t-1 steps ending on e.
      for (HalfEdge e : active) {
        const T& value = cur[e];
        const HalfEdge arrival = g.partner(e);
        const HalfEdge base = g.first_half_edge(g.vertex(arrival));
        for (HalfEdge s = base; s < base + d; ++s) {
          if (s == arrival) continue;
          if (!marked[s]) {
            marked[s] = 1;
            next_active.push_back(s);
          }
          next[s] += value;
        }
      }
      for (HalfEdge e : active) cur[e] = T(0);
      for (HalfEdge s : next_active) {
        cur[s] = next[s];
        next[s] = T(0);
        marked[s] = 0;
      }
      active.swap(next_active);
      sums[t] += cur[j];
    }
  }
  std::vector<BigInt> out;
  out.reserve(kmax + 1);
  for (const T& s : sums) out.push_back(to_bigint(s));
  return out;
}

}  // namespace detail

/// Trace(B^t) for t = 0..kmax in exact integer arithmetic. Every entry of a
/// propagated vector is at most (d-1)^t and the trace at most n*d*(d-1)^t, so
/// the narrowest integer type that holds that bound is used.
inline std::vector<BigInt> closed_nb_walk_traces(const Multigraph& g, std::size_t kmax, const CensusLimits& limits = {}) {
  const std::size_t m = g.half_edge_count();
  if (kmax > 0 && m > limits.trace_products / kmax) {
    fail(ErrorCode::ResourceBudgetExceeded,
         "exact trace needs " + std::to_string(m) + "*" + std::to_string(kmax) + " products, limit " +
             std::to_string(limits.trace_products));
  }
  const double bits = std::log2(static_cast<double>(m)) +
                      static_cast<double>(kmax) * std::log2(std::max(1.0, g.degree() - 1.0)) + 1.0;
  if (bits < 63.0) return detail::nb_traces_by_propagation<std::uint64_t>(g, kmax);
  if (bits < 127.0) return detail::nb_traces_by_propagation<unsigned __int128>(g, kmax);
  return detail::nb_traces_by_propagation<BigInt>(g, kmax);
}

inline BigInt count_closed_nb_walks_exact(const Multigraph& g, std::size_t k, const CensusLimits& limits = {}) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  return closed_nb_walk_traces(g, k, limits)[k];
}

constexpr std::size_t dense_witness_limit = 64;

/// Trace(B^k) by dense exact matrix powering; second witness for n*d <= 64.
inline BigInt closed_nb_walks_dense(const Multigraph& g, std::size_t k) {
  const std::size_t m = g.half_edge_count();
  if (m > dense_witness_limit) fail(ErrorCode::BudgetExceeded, "dense witness limited to n*d <= 64");
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  using Matrix = std::vector<std::vector<BigInt>>;
  Matrix b(m, std::vector<BigInt>(m, 0));
  for (HalfEdge e = 0; e < m; ++e) {
    for (auto s : nb_successors(g, DirectedEdge{e})) b[e][s.tail] = 1;
  }
  auto multiply = [m](const Matrix& x, const Matrix& y) {
    Matrix z(m, std::vector<BigInt>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t l = 0; l < m; ++l) {
        if (x[i][l] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) z[i][j] += x[i][l] * y[l][j];
      }
    }
    return z;
  };
  Matrix result = b;
  Matrix base = b;
  std::size_t rest = k - 1;
  while (rest > 0) {
    if (rest & 1U) result = multiply(result, base);
    rest >>= 1U;
    if (rest > 0) base = multiply(base, base);
  }
  BigInt trace = 0;
  for (std::size_t i = 0; i < m; ++i) trace += result[i][i];
  return trace;
}

// ---------------------------------------------------------------------------
// Primitive and all loops

/// k * N_prim(k) = sum over r | k of mobius(k/r) * N_tr(r); traces[r] = N_tr(r).
inline BigInt primitive_from_traces(std::span<const BigInt> traces, std::size_t k) {
  if (k < 1 || k >= traces.size()) fail(ErrorCode::MissingCounts, "traces do not cover k = " + std::to_string(k));
  BigInt sum = 0;
  for (std::int64_t r : divisors(static_cast<std::int64_t>(k))) {
    const int mu = mobius(static_cast<std::int64_t>(k) / r);
    if (mu != 0) sum += mu * traces[static_cast<std::size_t>(r)];
  }
  if (sum % k != 0) {
    fail(ErrorCode::DivisibilityViolation, "Mobius sum " + sum.str() + " not divisible by k = " + std::to_string(k));
  }
  return sum / k;
}

inline BigInt all_from_traces(std::span<const BigInt> traces, std::size_t k) {
  BigInt sum = 0;
  for (std::int64_t r : divisors(static_cast<std::int64_t>(k))) sum += primitive_from_traces(traces, static_cast<std::size_t>(r));
  return sum;
}

inline BigInt count_primitive_loops(const Multigraph& g, std::size_t k, const CensusLimits& limits = {}) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  return primitive_from_traces(closed_nb_walk_traces(g, k, limits), k);
}

inline BigInt count_all_loops(const Multigraph& g, std::size_t k, const CensusLimits& limits = {}) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  return all_from_traces(closed_nb_walk_traces(g, k, limits), k);
}

/// All four counts at one length. N_simp is zero for k > n without running the DFS.
inline LoopCensus census(const Multigraph& g, std::size_t k, const CensusLimits& limits = {}) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  const std::vector<BigInt> traces = closed_nb_walk_traces(g, k, limits);
  LoopCensus c;
  c.k = k;
  c.n_simp = k <= static_cast<std::size_t>(g.vertex_count()) ? count_simple_loops(g, k, limits) : BigInt(0);
  c.n_tr = traces[k];
  c.n_prim = primitive_from_traces(traces, k);
  c.n_all = all_from_traces(traces, k);
  return c;
}

// ---------------------------------------------------------------------------
// Spectral trace

struct SpectralTrace {
  double value = 0.0;
  double relative_error = 0.0;
  SpectralPath path = SpectralPath::mapped;
};

/// Floating-point Trace(B^k) from a spectrum, for many k on one graph.
///
/// Mapped path: each adjacency eigenvalue contributes P_k(lambda) = mu+^k + mu-^k
/// with P_0 = 2, P_1 = lambda, P_k = lambda P_{k-1} - (d-1) P_{k-2}; the +-1
/// eigenvalues add (m-n)(1 + (-1)^k). The error estimate propagates the
/// eigensolver residual through dP_k/dlambda, plus a rounding term.
/// Direct path: sum of mu_i^k over the explicit non-backtracking spectrum.
class SpectralTraceModel {
 public:
  explicit SpectralTraceModel(const Multigraph& g, SpectralPath path = SpectralPath::automatic,
                              std::size_t direct_budget = default_direct_budget)
      : d_(g.degree()), n_(g.vertex_count()) {
    if (d_ < 2) fail(ErrorCode::SpectralUnavailable, "spectral trace needs d >= 2");
    if (path == SpectralPath::direct) {
      NbSpectrum s = nb_spectrum_direct(g, direct_budget);
      nb_ = std::move(s.eigenvalues);
      residual_ = s.residual;
      path_ = SpectralPath::direct;
    } else {
      AdjacencySpectrum s = adjacency_spectrum(g);
      adjacency_ = std::move(s.eigenvalues);
      residual_ = s.residual;
      path_ = SpectralPath::mapped;
    }
  }

  /// From an already computed adjacency spectrum (mapped path).
  SpectralTraceModel(std::vector<double> adjacency_eigenvalues, double residual, int d, int n)
      : d_(d), n_(n), path_(SpectralPath::mapped), adjacency_(std::move(adjacency_eigenvalues)), residual_(residual) {}

  SpectralPath path() const noexcept { return path_; }

  SpectralTrace trace(std::size_t k) const {
    if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double kk = static_cast<double>(k);
    double value = 0.0;
    double error = 0.0;
    double magnitude = 0.0;
    if (path_ == SpectralPath::mapped) {
      const double q = d_ - 1.0;
      for (double lambda : adjacency_) {
        double p_prev = 2.0, p_cur = lambda;  // P_0, P_1
        double dp_prev = 0.0, dp_cur = 1.0;   // P'_0, P'_1
        for (std::size_t t = 2; t <= k; ++t) {
          const double p_next = lambda * p_cur - q * p_prev;
          const double dp_next = p_cur + lambda * dp_cur - q * dp_prev;
          p_prev = p_cur;
          p_cur = p_next;
          dp_prev = dp_cur;
          dp_cur = dp_next;
        }
        value += p_cur;
        error += std::abs(dp_cur) * residual_;
        const double disc = lambda * lambda - 4.0 * q;
        const double rho = disc >= 0.0 ? (std::abs(lambda) + std::sqrt(disc)) / 2.0 : std::sqrt(q);
        magnitude += 2.0 * std::pow(rho, kk);
      }
      const double extra = static_cast<double>(static_cast<long long>(n_) * d_ / 2 - n_);
      value += extra * (k % 2 == 0 ? 2.0 : 0.0);
      magnitude += 2.0 * extra;
    } else {
      Complex sum(0.0, 0.0);
      for (const Complex& mu : nb_) {
        sum += std::pow(mu, static_cast<int>(k));
        const double r = std::abs(mu);
        error += kk * std::pow(r, kk - 1.0) * residual_;
        magnitude += std::pow(r, kk);
      }
      value = sum.real();
    }
    error += 4.0 * kk * eps * magnitude;
    SpectralTrace out;
    out.value = value;
    out.relative_error = error / std::max(std::abs(value), 1.0);
    out.path = path_;
    return out;
  }

 private:
  int d_;
  int n_;
  SpectralPath path_ = SpectralPath::mapped;
  std::vector<double> adjacency_;
  std::vector<Complex> nb_;
  double residual_ = 0.0;
};

inline SpectralTrace count_closed_nb_walks_spectral(const Multigraph& g, std::size_t k,
                                                    SpectralPath path = SpectralPath::automatic) {
  return SpectralTraceModel(g, path).trace(k);
}

// ---------------------------------------------------------------------------
// Brute-force oracle

constexpr std::uint64_t default_oracle_budget = 50'000'000ULL;

/// Every distinct cyclically non-backtracking loop of length k, found by
/// enumerating all n*d*(d-1)^(k-1) rooted non-backtracking walks.
inline std::vector<NbLoop> enumerate_loops_oracle(const Multigraph& g, std::size_t k,
                                                  std::uint64_t budget = default_oracle_budget) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  const double walks = static_cast<double>(g.half_edge_count()) * std::pow(g.degree() - 1.0, static_cast<double>(k - 1));
  if (walks > static_cast<double>(budget)) {
    fail(ErrorCode::BudgetExceeded, "oracle would enumerate " + std::to_string(walks) + " walks");
  }
  std::set<std::vector<DirectedEdge>> seen;
  std::vector<NbLoop> loops;
  std::vector<DirectedEdge> path;
  path.reserve(k);
  auto dfs = [&](auto&& self) -> void {
    if (path.size() == k) {
      if (g.head_vertex(path.back()) != g.tail_vertex(path.front())) return;
      if (g.partner(path.back().tail) == path.front().tail) return;
      NbLoop loop = canonical_loop(g, path);
      if (seen.insert(loop.edges).second) loops.push_back(std::move(loop));
      return;
    }
    for_each_nb_successor(g, path.back(), [&](DirectedEdge s) {
      path.push_back(s);
      self(self);
      path.pop_back();
    });
  };
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    path.assign(1, DirectedEdge{h});
    dfs(dfs);
  }
  std::sort(loops.begin(), loops.end());
  return loops;
}

}  // namespace rlg
