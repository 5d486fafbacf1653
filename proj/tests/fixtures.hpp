#pragma once

// Small graphs and brute-force reference computations shared by the tests.
// The reference code works straight from the pairing array and deliberately
// avoids the library's traversal helpers.

#include "rlg/rlg.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace fixtures {

using rlg::BigInt;
using rlg::HalfEdge;
using rlg::Multigraph;

/// Half-edges of each vertex are handed out in the order the edges are listed.
inline Multigraph from_edges(int d, int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> used(n, 0);
  std::vector<HalfEdge> pairing(static_cast<std::size_t>(d) * n, 0);
  for (auto [u, v] : edges) {
    const HalfEdge a = static_cast<HalfEdge>(u * d + used[u]++);
    const HalfEdge b = static_cast<HalfEdge>(v * d + used[v]++);
    pairing[a] = b;
    pairing[b] = a;
  }
  return Multigraph::from_pairing(d, n, pairing);
}

inline Multigraph k4() { return from_edges(3, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }

/// Two vertices joined by three parallel edges: a = 0-3, b = 1-4, c = 2-5.
inline Multigraph b2() { return Multigraph::from_pairing(3, 2, {3, 4, 5, 0, 1, 2}); }

inline Multigraph self_loop() { return Multigraph::from_pairing(2, 1, {1, 0}); }

/// Triangular prism: triangles 0-1-2 and 3-4-5 joined by rungs 0-3, 1-4, 2-5.
inline Multigraph prism() {
  return from_edges(3, 6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
}

/// Complete bipartite K_{3,3}.
inline Multigraph k33() {
  return from_edges(3, 6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}});
}

inline int vertex_of(const Multigraph& g, HalfEdge h) { return static_cast<int>(h) / g.degree(); }

/// Walks given as lists of tail half-edges.
using TailSeq = std::vector<HalfEdge>;

/// Every closed cyclically non-backtracking rooted walk of length k, straight
/// from the definition: consecutive edges chain head-to-tail, the next tail is
/// never the partner of the previous tail, including across the wrap.
inline void for_each_rooted_closed_nb(const Multigraph& g, std::size_t k, const std::function<void(const TailSeq&)>& f) {
  const auto p = g.pairing();
  const std::size_t m = p.size();
  TailSeq seq;
  std::function<void()> rec = [&] {
    if (seq.size() == k) {
      const HalfEdge last_head = p[seq.back()];
      if (vertex_of(g, last_head) != vertex_of(g, seq.front())) return;
      if (last_head == seq.front()) return;
      f(seq);
      return;
    }
    const HalfEdge arrive = p[seq.back()];
    for (HalfEdge t = 0; t < m; ++t) {
      if (vertex_of(g, t) != vertex_of(g, arrive) || t == arrive) continue;
      seq.push_back(t);
      rec();
      seq.pop_back();
    }
  };
  for (HalfEdge h = 0; h < m; ++h) {
    seq.assign(1, h);
    rec();
  }
}

inline bool heads_distinct(const Multigraph& g, const TailSeq& s) {
  std::set<int> heads;
  for (HalfEdge t : s) heads.insert(vertex_of(g, g.pairing()[t]));
  return heads.size() == s.size();
}

inline std::size_t smallest_period(const TailSeq& s) {
  const std::size_t k = s.size();
  for (std::size_t p = 1; p <= k; ++p) {
    if (k % p) continue;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = s[i] == s[(i + p) % k];
    if (ok) return p;
  }
  return k;
}

struct RefCounts {
  std::uint64_t rooted = 0;     // Trace(B^k)
  std::uint64_t simple = 0;     // loops up to rotation
  std::uint64_t primitive = 0;
  std::uint64_t all = 0;
};

/// Counts loops up to rotation by rooted counting: a loop of period q has q
/// distinct rotations among the rooted walks.
inline RefCounts reference_counts(const Multigraph& g, std::size_t k) {
  RefCounts c;
  std::set<TailSeq> classes;
  for_each_rooted_closed_nb(g, k, [&](const TailSeq& s) {
    ++c.rooted;
    TailSeq best = s;
    for (std::size_t r = 1; r < s.size(); ++r) {
      TailSeq rot(s.begin() + static_cast<long>(r), s.end());
      rot.insert(rot.end(), s.begin(), s.begin() + static_cast<long>(r));
      best = std::min(best, rot);
    }
    if (!classes.insert(best).second) return;
    ++c.all;
    if (smallest_period(best) == k) ++c.primitive;
    if (heads_distinct(g, best)) ++c.simple;
  });
  return c;
}

/// Dense 0/1 non-backtracking matrix from the definition, as nested vectors.
inline std::vector<std::vector<BigInt>> nb_matrix(const Multigraph& g) {
  const auto p = g.pairing();
  const std::size_t m = p.size();
  std::vector<std::vector<BigInt>> b(m, std::vector<BigInt>(m, 0));
  for (HalfEdge e = 0; e < m; ++e) {
    for (HalfEdge f = 0; f < m; ++f) {
      if (vertex_of(g, f) == vertex_of(g, p[e]) && f != p[e]) b[e][f] = 1;
    }
  }
  return b;
}

inline BigInt dense_trace_power(const Multigraph& g, std::size_t k) {
  const auto b = nb_matrix(g);
  const std::size_t m = b.size();
  auto power = b;
  for (std::size_t step = 1; step < k; ++step) {
    std::vector<std::vector<BigInt>> next(m, std::vector<BigInt>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t l = 0; l < m; ++l) {
        if (power[i][l] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) {
          if (b[l][j] != 0) next[i][j] += power[i][l];
        }
      }
    }
    power = std::move(next);
  }
  BigInt tr = 0;
  for (std::size_t i = 0; i < m; ++i) tr += power[i][i];
  return tr;
}

/// E - V + C from an edge multiset given as half-edge pairs.
inline int reference_cycle_rank(const Multigraph& g, const TailSeq& tails) {
  std::set<std::pair<HalfEdge, HalfEdge>> edges;
  std::set<int> verts;
  for (HalfEdge t : tails) {
    const HalfEdge h = g.pairing()[t];
    edges.insert({std::min(t, h), std::max(t, h)});
    verts.insert(vertex_of(g, t));
    verts.insert(vertex_of(g, h));
  }
  std::map<int, int> parent;
  for (int v : verts) parent[v] = v;
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  int components = static_cast<int>(verts.size());
  for (auto [a, b] : edges) {
    const int ra = find(vertex_of(g, a)), rb = find(vertex_of(g, b));
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return static_cast<int>(edges.size()) - static_cast<int>(verts.size()) + components;
}

inline std::vector<rlg::DirectedEdge> as_edges(const TailSeq& s) {
  std::vector<rlg::DirectedEdge> out;
  for (HalfEdge t : s) out.push_back({t});
  return out;
}

/// Random configuration-model graphs for property tests.
inline std::vector<Multigraph> random_graphs(std::uint64_t seed, std::size_t count, const std::vector<int>& degrees,
                                             int n_min, int n_max) {
  std::vector<Multigraph> out;
  rlg::RngStream rng(seed, 0);
  while (out.size() < count) {
    const int d = degrees[rng.uniform_below(degrees.size())];
    int n = n_min + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_max - n_min + 1)));
    if ((n * d) % 2) ++n;
    if (n > n_max) n -= 2;
    out.push_back(rlg::sample_configuration(d, n, rng));
  }
  return out;
}

}  // namespace fixtures
