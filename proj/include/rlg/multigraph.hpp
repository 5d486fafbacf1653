#pragma once

#include "rlg/error.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rlg {

using HalfEdge = std::uint32_t;
using Vertex = std::uint32_t;

/// A directed edge is identified with its tail half-edge. Its head is the
/// vertex of the partner half-edge and its reversal is the partner itself.
struct DirectedEdge {
  HalfEdge tail = 0;

  friend constexpr auto operator<=>(DirectedEdge, DirectedEdge) = default;
};

struct StructureFlags {
  bool has_self_loop = false;
  bool has_multi_edge = false;

  bool simple() const noexcept { return !has_self_loop && !has_multi_edge; }
  friend bool operator==(StructureFlags, StructureFlags) = default;
};

using IntMatrix = std::vector<std::vector<int>>;

/// d-regular multigraph stored as a fixed-point-free involution on the n*d
/// half-edges. Half-edge h belongs to vertex h / d. Immutable once built.
class Multigraph {
 public:
  static Multigraph from_pairing(int d, int n, std::vector<HalfEdge> pairing) {
    if (d < 1 || n < 1) fail(ErrorCode::InvalidArgument, "degree and vertex count must be >= 1");
    const auto total = static_cast<std::size_t>(d) * static_cast<std::size_t>(n);
    if (total % 2 != 0) fail(ErrorCode::OddHalfEdges, "n*d = " + std::to_string(total) + " is odd");
    if (pairing.size() != total) {
      fail(ErrorCode::SizeMismatch,
           "pairing has " + std::to_string(pairing.size()) + " entries, expected " + std::to_string(total));
    }
    for (std::size_t h = 0; h < total; ++h) {
      if (pairing[h] >= total) fail(ErrorCode::IndexOutOfRange, "pairing[" + std::to_string(h) + "] out of range");
    }
    for (std::size_t h = 0; h < total; ++h) {
      if (pairing[h] == h) fail(ErrorCode::FixedPoint, "pairing[" + std::to_string(h) + "] = " + std::to_string(h));
      if (pairing[pairing[h]] != h) fail(ErrorCode::NotInvolution, "pairing is not an involution at " + std::to_string(h));
    }
    return Multigraph(d, n, std::move(pairing));
  }

  int degree() const noexcept { return d_; }
  int vertex_count() const noexcept { return n_; }
  std::size_t half_edge_count() const noexcept { return pairing_.size(); }
  std::size_t edge_count() const noexcept { return pairing_.size() / 2; }
  std::span<const HalfEdge> pairing() const noexcept { return pairing_; }

  /// Unchecked accessors for hot loops.
  HalfEdge partner(HalfEdge h) const noexcept { return pairing_[h]; }
  Vertex vertex(HalfEdge h) const noexcept { return h / static_cast<HalfEdge>(d_); }
  HalfEdge first_half_edge(Vertex v) const noexcept { return v * static_cast<HalfEdge>(d_); }

  Vertex vertex_of(HalfEdge h) const {
    if (h >= pairing_.size()) fail(ErrorCode::IndexOutOfRange, "half-edge " + std::to_string(h));
    return vertex(h);
  }

  Vertex tail_vertex(DirectedEdge e) const noexcept { return vertex(e.tail); }
  Vertex head_vertex(DirectedEdge e) const noexcept { return vertex(pairing_[e.tail]); }
  DirectedEdge reversed(DirectedEdge e) const noexcept { return DirectedEdge{pairing_[e.tail]}; }

  StructureFlags structure_flags() const {
    StructureFlags flags;
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(edge_count());
    for (HalfEdge h = 0; h < pairing_.size(); ++h) {
      const HalfEdge g = pairing_[h];
      if (h > g) continue;
      const Vertex u = vertex(h);
      const Vertex v = vertex(g);
      if (u == v) flags.has_self_loop = true;
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges.begin(), edges.end());
    flags.has_multi_edge = std::adjacent_find(edges.begin(), edges.end()) != edges.end();
    return flags;
  }

  /// A[u][v] counts edges between u and v; a self-loop adds 2 to A[u][u].
  IntMatrix adjacency_matrix() const {
    IntMatrix a(n_, std::vector<int>(n_, 0));
    for (HalfEdge h = 0; h < pairing_.size(); ++h) ++a[vertex(h)][vertex(pairing_[h])];
    return a;
  }

  friend bool operator==(const Multigraph& a, const Multigraph& b) {
    return a.d_ == b.d_ && a.n_ == b.n_ && a.pairing_ == b.pairing_;
  }

 private:
  Multigraph(int d, int n, std::vector<HalfEdge> pairing) : d_(d), n_(n), pairing_(std::move(pairing)) {}

  int d_;
  int n_;
  std::vector<HalfEdge> pairing_;
};

}  // namespace rlg
