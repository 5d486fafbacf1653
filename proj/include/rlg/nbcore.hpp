#pragma once

#include "rlg/error.hpp"
#include "rlg/multigraph.hpp"
#include "rlg/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

namespace rlg {

struct Walk {
  std::vector<DirectedEdge> edges;

  std::size_t length() const noexcept { return edges.size(); }
};

/// Oriented non-backtracking loop, stored as the lexicographically minimal
/// rotation of its tail half-edges. Loops are quotiented by cyclic shift only;
/// a loop and its reversal are distinct.
struct NbLoop {
  std::vector<DirectedEdge> edges;
  std::size_t period = 0;
  bool simple = false;

  std::size_t length() const noexcept { return edges.size(); }
  bool primitive() const noexcept { return period == edges.size(); }

  friend bool operator==(const NbLoop&, const NbLoop&) = default;
  friend auto operator<=>(const NbLoop& a, const NbLoop& b) { return a.edges <=> b.edges; }
};

/// Calls f(e') for the d-1 non-backtracking successors of e, in increasing
/// tail order. Allocation-free; used by all the counting kernels.
template <class F>
inline void for_each_nb_successor(const Multigraph& g, DirectedEdge e, F&& f) {
  const HalfEdge arrival = g.partner(e.tail);
  const HalfEdge first = g.first_half_edge(g.vertex(arrival));
  const HalfEdge last = first + static_cast<HalfEdge>(g.degree());
  for (HalfEdge h = first; h < last; ++h) {
    if (h != arrival) f(DirectedEdge{h});
  }
}

inline std::vector<DirectedEdge> nb_successors(const Multigraph& g, DirectedEdge e) {
  if (e.tail >= g.half_edge_count()) fail(ErrorCode::IndexOutOfRange, "directed edge " + std::to_string(e.tail));
  std::vector<DirectedEdge> out;
  out.reserve(static_cast<std::size_t>(g.degree() - 1));
  for_each_nb_successor(g, e, [&](DirectedEdge s) { out.push_back(s); });
  return out;
}

inline bool is_chained(const Multigraph& g, std::span<const DirectedEdge> edges) {
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (g.head_vertex(edges[i]) != g.tail_vertex(edges[i + 1])) return false;
  }
  return true;
}

inline bool is_closed_walk(const Multigraph& g, std::span<const DirectedEdge> edges) {
  return !edges.empty() && is_chained(g, edges) && g.head_vertex(edges.back()) == g.tail_vertex(edges.front());
}

/// Non-backtracking at every position, wrap-around included.
inline bool is_cyclically_nb(const Multigraph& g, std::span<const DirectedEdge> edges) {
  for (auto e : edges) {
    if (e.tail >= g.half_edge_count()) fail(ErrorCode::IndexOutOfRange, "directed edge " + std::to_string(e.tail));
  }
  if (!is_closed_walk(g, edges)) fail(ErrorCode::NotClosed, "edge sequence is not a closed walk");
  const std::size_t k = edges.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (g.partner(edges[i].tail) == edges[(i + 1) % k].tail) return false;
  }
  return true;
}

/// Non-backtracking along the walk only (no wrap condition).
inline bool is_nb_walk(const Multigraph& g, std::span<const DirectedEdge> edges) {
  if (!is_chained(g, edges)) return false;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (g.partner(edges[i].tail) == edges[i + 1].tail) return false;
  }
  return true;
}

/// True iff the head vertices of the walk are pairwise distinct.
inline bool has_distinct_heads(const Multigraph& g, std::span<const DirectedEdge> edges) {
  std::vector<Vertex> heads;
  heads.reserve(edges.size());
  for (auto e : edges) heads.push_back(g.head_vertex(e));
  std::sort(heads.begin(), heads.end());
  return std::adjacent_find(heads.begin(), heads.end()) == heads.end();
}

/// Starting offset of the lexicographically least rotation.
inline std::size_t least_rotation(std::span<const DirectedEdge> s) {
  const std::size_t n = s.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const DirectedEdge x = s[(r + i) % n];
      const DirectedEdge y = s[(best + i) % n];
      if (x == y) continue;
      if (x < y) best = r;
      break;
    }
  }
  return best;
}

/// Smallest p dividing k such that rotating by p leaves the sequence fixed.
inline std::size_t rotation_period(std::span<const DirectedEdge> s) {
  const std::size_t k = s.size();
  for (std::size_t p = 1; p < k; ++p) {
    if (k % p != 0) continue;
    bool invariant = true;
    for (std::size_t i = 0; i < k && invariant; ++i) invariant = s[i] == s[(i + p) % k];
    if (invariant) return p;
  }
  return k;
}

inline NbLoop canonical_loop(const Multigraph& g, std::span<const DirectedEdge> edges) {
  if (!is_cyclically_nb(g, edges)) fail(ErrorCode::Backtracking, "loop backtracks");
  const std::size_t k = edges.size();
  const std::size_t start = least_rotation(edges);
  NbLoop loop;
  loop.edges.reserve(k);
  for (std::size_t i = 0; i < k; ++i) loop.edges.push_back(edges[(start + i) % k]);
  loop.period = rotation_period(loop.edges);
  loop.simple = has_distinct_heads(g, loop.edges);
  return loop;
}

/// Reversal of a walk: the edges in reverse order, each reversed.
inline std::vector<DirectedEdge> reverse_walk(const Multigraph& g, std::span<const DirectedEdge> edges) {
  std::vector<DirectedEdge> out;
  out.reserve(edges.size());
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) out.push_back(g.reversed(*it));
  return out;
}

namespace detail {

struct EdgeRecord {
  std::uint64_t id;
  Vertex u;
  Vertex v;
};

/// Cycle rank E - V + C of the subgraph spanned by a set of undirected edges,
/// each given by a unique edge id and its two endpoint vertices.
inline int cycle_rank(std::vector<EdgeRecord> edges) {
  std::sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) { return a.id < b.id; });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const EdgeRecord& a, const EdgeRecord& b) { return a.id == b.id; }),
              edges.end());
  std::unordered_map<Vertex, std::size_t> index;
  std::vector<std::size_t> parent;
  auto node = [&](Vertex v) {
    auto [it, inserted] = index.try_emplace(v, parent.size());
    if (inserted) parent.push_back(parent.size());
    return it->second;
  };
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) {
    node(e.u);
    node(e.v);
  }
  int components = static_cast<int>(parent.size());
  for (const auto& e : edges) {
    const std::size_t ra = find(index[e.u]);
    const std::size_t rb = find(index[e.v]);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return static_cast<int>(edges.size()) - static_cast<int>(parent.size()) + components;
}

}  // namespace detail

/// Cycle rank of the subgraph induced by the walk's distinct undirected edges.
/// Parallel edges are distinct edges; a self-loop is one edge.
inline int walk_excess(const Multigraph& g, std::span<const DirectedEdge> edges) {
  std::vector<detail::EdgeRecord> records;
  records.reserve(edges.size());
  for (auto e : edges) {
    const HalfEdge other = g.partner(e.tail);
    records.push_back({std::min(e.tail, other), g.vertex(e.tail), g.vertex(other)});
  }
  return detail::cycle_rank(std::move(records));
}

/// Uniform over the n*d*(d-1)^(k-1) non-backtracking walks of length k.
inline Walk sample_nb_walk(const Multigraph& g, std::size_t k, RngStream& rng) {
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "walk length must be >= 1");
  if (g.degree() < 2) fail(ErrorCode::InvalidArgument, "non-backtracking walks need d >= 2");
  Walk w;
  w.edges.reserve(k);
  // A uniform half-edge is a uniform vertex followed by a uniform exit.
  w.edges.push_back(DirectedEdge{static_cast<HalfEdge>(rng.uniform_below(g.half_edge_count()))});
  const auto d = static_cast<HalfEdge>(g.degree());
  for (std::size_t i = 1; i < k; ++i) {
    const HalfEdge arrival = g.partner(w.edges.back().tail);
    const HalfEdge base = g.first_half_edge(g.vertex(arrival));
    auto pick = static_cast<HalfEdge>(rng.uniform_below(d - 1));
    if (base + pick >= arrival) ++pick;
    w.edges.push_back(DirectedEdge{base + pick});
  }
  return w;
}

}  // namespace rlg
