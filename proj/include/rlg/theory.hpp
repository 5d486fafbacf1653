#pragma once

#include "rlg/bigint.hpp"
#include "rlg/error.hpp"

#include <cstdint>
#include <string>

namespace rlg {

struct ExactProbability {
  int d = 0;
  int n = 0;
  std::int64_t k = 0;
  BigRational value;
  /// Set when k > n: no simple loop is that long and the value is 0.
  bool out_of_range = false;
};

/// Probability that a uniformly random non-backtracking walk of length k on a
/// configuration-model graph is a closed simple loop. The graph is revealed
/// while walking; step j (1 <= j < k) pairs a fresh half-edge among the
/// dn - (2j-1) unpaired ones and must avoid the (d-1) + (j-1)(d-2) unpaired
/// half-edges at visited vertices; the last step must land on one of the d-1
/// free half-edges at the start.
inline ExactProbability exact_simple_closed_prob(int d, int n, std::int64_t k) {
  if (d < 1 || n < 1) fail(ErrorCode::InvalidArgument, "d and n must be >= 1");
  if ((static_cast<std::int64_t>(d) * n) % 2 != 0) fail(ErrorCode::OddHalfEdges, "n*d is odd");
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  ExactProbability out{d, n, k, BigRational(0), false};
  if (k > n) {
    out.out_of_range = true;
    return out;
  }
  const std::int64_t dn = static_cast<std::int64_t>(d) * n;
  BigRational p(1);
  for (std::int64_t j = 1; j < k; ++j) {
    const std::int64_t blocked = (d - 1) + (j - 1) * (d - 2);
    const std::int64_t pool = dn - (2 * j - 1);
    p *= BigRational(pool - blocked, pool);
  }
  p *= BigRational(d - 1, dn - (2 * k - 1));
  out.value = p;
  return out;
}

/// E[N_simp(k)] = n d (d-1)^(k-1) p / k, exact over G(d, n).
inline BigRational exact_expected_simple(int d, int n, std::int64_t k) {
  const ExactProbability p = exact_simple_closed_prob(d, n, k);
  if (p.value == 0) return BigRational(0);
  const BigInt walks = BigInt(static_cast<std::int64_t>(n) * d) * big_pow(d - 1, static_cast<unsigned>(k - 1));
  return BigRational(walks) * p.value / BigRational(k);
}

/// (d-1)^k / k.
inline BigRational asymptotic_count(int d, std::int64_t k) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "d must be >= 2");
  if (k < 1) fail(ErrorCode::LengthOutOfRange, "k must be >= 1");
  return BigRational(big_pow(d - 1, static_cast<unsigned>(k)), BigInt(k));
}

/// Heuristic stand-in for E[N_simp]/E[N_prim]: k E[N_simp(k)] / (d-1)^k.
/// Used to pick sweep grids and thresholds, never in correctness checks. At
/// k = 1 the value dn/(dn-1) exceeds 1 because (d-1)^1 undercounts N_prim(1).
inline double predicted_ratio(int d, int n, std::int64_t k) {
  const BigRational ratio = BigRational(k) * exact_expected_simple(d, n, k) / BigRational(big_pow(d - 1, static_cast<unsigned>(k)));
  return to_double(ratio);
}

/// n d^r, an upper bound on N_prim(r) for every d-regular graph on n vertices.
inline BigInt primitive_upper_bound(int d, int n, std::int64_t r) {
  if (r < 1) fail(ErrorCode::LengthOutOfRange, "r must be >= 1");
  return BigInt(n) * big_pow(d, static_cast<unsigned>(r));
}

}  // namespace rlg
