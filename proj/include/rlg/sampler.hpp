#pragma once

#include "rlg/error.hpp"
#include "rlg/multigraph.hpp"
#include "rlg/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rlg {

namespace detail {

inline void require_even(int d, int n) {
  if (d < 1 || n < 1) fail(ErrorCode::InvalidArgument, "degree and vertex count must be >= 1");
  if ((static_cast<std::int64_t>(d) * n) % 2 != 0) {
    fail(ErrorCode::OddHalfEdges, "n*d = " + std::to_string(static_cast<std::int64_t>(d) * n) + " is odd");
  }
}

}  // namespace detail

/// Configuration model G(d, n): the lowest-index unpaired half-edge is paired
/// with a uniformly chosen other unpaired half-edge until none remain.
inline Multigraph sample_configuration(int d, int n, RngStream& rng) {
  detail::require_even(d, n);
  const auto total = static_cast<HalfEdge>(d) * static_cast<HalfEdge>(n);
  constexpr HalfEdge unpaired = ~HalfEdge{0};
  std::vector<HalfEdge> pairing(total, unpaired);

  // Swap-remove pool of unpaired half-edges with a position index.
  std::vector<HalfEdge> pool(total);
  std::vector<HalfEdge> pos(total);
  for (HalfEdge h = 0; h < total; ++h) pool[h] = pos[h] = h;
  std::size_t live = total;
  auto remove = [&](HalfEdge h) {
    const HalfEdge slot = pos[h];
    const HalfEdge last = pool[live - 1];
    pool[slot] = last;
    pos[last] = slot;
    --live;
  };

  for (HalfEdge h = 0; h < total; ++h) {
    if (pairing[h] != unpaired) continue;
    remove(h);
    const HalfEdge mate = pool[rng.uniform_below(live)];
    remove(mate);
    pairing[h] = mate;
    pairing[mate] = h;
  }
  return Multigraph::from_pairing(d, n, std::move(pairing));
}

/// Uniform simple d-regular graph by rejection from the configuration model.
inline Multigraph sample_uniform_simple(int d, int n, RngStream& rng, int max_attempts) {
  detail::require_even(d, n);
  if (max_attempts < 1) fail(ErrorCode::InvalidArgument, "max_attempts must be >= 1");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Multigraph g = sample_configuration(d, n, rng);
    if (g.structure_flags().simple()) return g;
  }
  fail(ErrorCode::RejectionBudgetExhausted,
       "no simple graph after " + std::to_string(max_attempts) + " attempts (d=" + std::to_string(d) +
           ", n=" + std::to_string(n) + ")");
}

enum class GraphModel { configuration, uniform_simple };

inline std::string to_string(GraphModel m) {
  return m == GraphModel::configuration ? "configuration" : "uniform-simple";
}

inline GraphModel parse_graph_model(const std::string& s) {
  if (s == "configuration") return GraphModel::configuration;
  if (s == "uniform-simple") return GraphModel::uniform_simple;
  fail(ErrorCode::InvalidArgument, "unknown model '" + s + "'");
}

inline Multigraph sample_graph(GraphModel model, int d, int n, RngStream& rng, int max_attempts = 100000) {
  return model == GraphModel::configuration ? sample_configuration(d, n, rng)
                                            : sample_uniform_simple(d, n, rng, max_attempts);
}

/// (m - 1)!! for even m, saturating at UINT64_MAX.
inline std::uint64_t perfect_matching_count(std::uint64_t m) {
  std::uint64_t result = 1;
  for (std::uint64_t f = m > 0 ? m - 1 : 0; f > 1; f -= 2) {
    if (result > UINT64_MAX / f) return UINT64_MAX;
    result *= f;
  }
  return result;
}

constexpr std::uint64_t default_enumeration_budget = 10'000'000;

/// Calls visit(g) once for every perfect matching of the n*d half-edges.
/// Order: the lowest unpaired half-edge is matched with each larger unpaired
/// half-edge in increasing order, recursively.
template <class Visitor>
std::uint64_t enumerate_all_pairings(int d, int n, Visitor&& visit,
                                     std::uint64_t budget = default_enumeration_budget) {
  detail::require_even(d, n);
  const auto total = static_cast<HalfEdge>(d) * static_cast<HalfEdge>(n);
  const std::uint64_t count = perfect_matching_count(total);
  if (count > budget) {
    fail(ErrorCode::BudgetExceeded, std::to_string(total - 1) + "!! pairings exceed budget " + std::to_string(budget));
  }
  constexpr HalfEdge unpaired = ~HalfEdge{0};
  std::vector<HalfEdge> pairing(total, unpaired);
  std::uint64_t emitted = 0;

  auto recurse = [&](auto&& self, HalfEdge from) -> void {
    while (from < total && pairing[from] != unpaired) ++from;
    if (from == total) {
      visit(Multigraph::from_pairing(d, n, pairing));
      ++emitted;
      return;
    }
    for (HalfEdge mate = from + 1; mate < total; ++mate) {
      if (pairing[mate] != unpaired) continue;
      pairing[from] = mate;
      pairing[mate] = from;
      self(self, from + 1);
      pairing[from] = pairing[mate] = unpaired;
    }
  };
  recurse(recurse, 0);
  return emitted;
}

}  // namespace rlg
