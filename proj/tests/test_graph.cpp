#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace rlg;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an rlg::Error";
  return ErrorCode::InvalidArgument;
}

void expect_valid(const Multigraph& g) {
  const auto p = g.pairing();
  ASSERT_EQ(p.size(), static_cast<std::size_t>(g.degree()) * g.vertex_count());
  for (HalfEdge h = 0; h < p.size(); ++h) {
    EXPECT_NE(p[h], h);
    EXPECT_EQ(p[p[h]], h);
  }
  const IntMatrix a = g.adjacency_matrix();
  for (int u = 0; u < g.vertex_count(); ++u) {
    int row = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      row += a[u][v];
      EXPECT_EQ(a[u][v], a[v][u]);
    }
    EXPECT_EQ(row, g.degree());
  }
}

}  // namespace

TEST(Multigraph, ValidationErrors) {
  EXPECT_EQ(code_of([] { Multigraph::from_pairing(3, 3, std::vector<HalfEdge>(9, 0)); }), ErrorCode::OddHalfEdges);
  EXPECT_EQ(code_of([] { Multigraph::from_pairing(3, 2, {1, 0, 3, 2}); }), ErrorCode::SizeMismatch);
  EXPECT_EQ(code_of([] { Multigraph::from_pairing(2, 1, {0, 1}); }), ErrorCode::FixedPoint);
  EXPECT_EQ(code_of([] { Multigraph::from_pairing(2, 2, {1, 2, 3, 0}); }), ErrorCode::NotInvolution);
  EXPECT_EQ(code_of([] { Multigraph::from_pairing(2, 1, {1, 7}); }), ErrorCode::IndexOutOfRange);
}

TEST(Multigraph, VertexOfHalfEdge) {
  const Multigraph g = fixtures::k4();
  EXPECT_EQ(g.vertex_of(0), 0u);
  EXPECT_EQ(g.vertex_of(5), 1u);
  EXPECT_EQ(g.vertex_of(11), 3u);
  EXPECT_EQ(code_of([&] { g.vertex_of(12); }), ErrorCode::IndexOutOfRange);
}

TEST(Multigraph, StructureFlagsOnFixtures) {
  const auto k4 = fixtures::k4().structure_flags();
  EXPECT_FALSE(k4.has_self_loop);
  EXPECT_FALSE(k4.has_multi_edge);
  const auto b2 = fixtures::b2().structure_flags();
  EXPECT_FALSE(b2.has_self_loop);
  EXPECT_TRUE(b2.has_multi_edge);
  const auto loop = fixtures::self_loop().structure_flags();
  EXPECT_TRUE(loop.has_self_loop);
  EXPECT_FALSE(loop.has_multi_edge);
  // Two self-loops at one vertex form a multi-edge of that vertex pair.
  const auto two_loops = Multigraph::from_pairing(4, 1, {1, 0, 3, 2}).structure_flags();
  EXPECT_TRUE(two_loops.has_self_loop);
  EXPECT_TRUE(two_loops.has_multi_edge);
}

TEST(Multigraph, AdjacencyOnFixtures) {
  const IntMatrix k4 = fixtures::k4().adjacency_matrix();
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) EXPECT_EQ(k4[u][v], u == v ? 0 : 1);
  }
  EXPECT_EQ(fixtures::b2().adjacency_matrix(), (IntMatrix{{0, 3}, {3, 0}}));
  EXPECT_EQ(fixtures::self_loop().adjacency_matrix(), (IntMatrix{{2}}));
}

TEST(Multigraph, InvariantsOnSampledGraphs) {
  for (const auto& g : fixtures::random_graphs(11, 60, {2, 3, 4, 5}, 1, 30)) {
    expect_valid(g);
    if (g.structure_flags().simple()) {
      const IntMatrix a = g.adjacency_matrix();
      for (int u = 0; u < g.vertex_count(); ++u) {
        EXPECT_EQ(a[u][u], 0);
        for (int v = 0; v < g.vertex_count(); ++v) EXPECT_LE(a[u][v], 1);
      }
    }
  }
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs = differs || x != c.next_u64();
  }
  EXPECT_TRUE(differs);
  RngStream r(1, 2);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.uniform_below(7), 7u);
    const double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, DerivationIsPinned) {
  // First SplitMix64 output from state 0, as published with the algorithm.
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFULL);
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 standard;
  standard.discard(9999);
  EXPECT_EQ(standard(), 9981545732273789042ULL);
  const std::uint64_t seed = mix64(123 ^ mix64(4 ^ 0xD1B54A32D192ED03ULL));
  EXPECT_EQ(derive_stream_seed(123, 4), seed);
  std::mt19937_64 ref(seed);
  RngStream s(123, 4);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(s.next_u64(), ref());
}

TEST(Sampler, OddHalfEdges) {
  RngStream rng(1, 0);
  EXPECT_EQ(code_of([&] { sample_configuration(3, 3, rng); }), ErrorCode::OddHalfEdges);
  EXPECT_EQ(code_of([&] { sample_uniform_simple(3, 3, rng, 10); }), ErrorCode::OddHalfEdges);
}

TEST(Sampler, UniqueMatching) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed, 0);
    const Multigraph g = sample_configuration(1, 2, rng);
    EXPECT_EQ(std::vector<HalfEdge>(g.pairing().begin(), g.pairing().end()), (std::vector<HalfEdge>{1, 0}));
    RngStream rng2(seed, 1);
    const Multigraph s = sample_uniform_simple(1, 2, rng2, 5);
    EXPECT_EQ(s.partner(0), 1u);
  }
}

TEST(Sampler, Deterministic) {
  RngStream a(99, 3), b(99, 3);
  EXPECT_EQ(sample_configuration(3, 2, a), sample_configuration(3, 2, b));
  RngStream c(99, 4), d(99, 4);
  EXPECT_EQ(sample_configuration(4, 50, c), sample_configuration(4, 50, d));
}

TEST(Sampler, UniformSimpleOnFourVerticesIsK4) {
  RngStream rng(5, 0);
  for (int i = 0; i < 20; ++i) {
    const Multigraph g = sample_uniform_simple(3, 4, rng, 1000);
    const IntMatrix a = g.adjacency_matrix();
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) EXPECT_EQ(a[u][v], u == v ? 0 : 1);
    }
  }
  // Exhaustive check: every simple pairing of 12 half-edges realizes K4.
  std::uint64_t simple = 0;
  enumerate_all_pairings(3, 4, [&](const Multigraph& g) {
    if (!g.structure_flags().simple()) return;
    ++simple;
    const IntMatrix a = g.adjacency_matrix();
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) EXPECT_EQ(a[u][v], u == v ? 0 : 1);
    }
  });
  // Each vertex assigns its 3 half-edges to its 3 neighbours: (3!)^4 pairings.
  EXPECT_EQ(simple, 1296u);
}

TEST(Sampler, NoSimpleGraphOnTwoVertices) {
  std::uint64_t simple = 0;
  enumerate_all_pairings(3, 2, [&](const Multigraph& g) { simple += g.structure_flags().simple(); });
  EXPECT_EQ(simple, 0u);
  RngStream rng(1, 0);
  EXPECT_EQ(code_of([&] { sample_uniform_simple(3, 2, rng, 100); }), ErrorCode::RejectionBudgetExhausted);
}

TEST(Sampler, EnumerationCountsAndDistinctness) {
  EXPECT_EQ(enumerate_all_pairings(1, 2, [](const Multigraph&) {}), 1u);
  std::set<std::vector<HalfEdge>> seen;
  std::vector<std::vector<HalfEdge>> order;
  EXPECT_EQ(enumerate_all_pairings(3, 2,
                                   [&](const Multigraph& g) {
                                     std::vector<HalfEdge> p(g.pairing().begin(), g.pairing().end());
                                     seen.insert(p);
                                     order.push_back(p);
                                   }),
            15u);
  EXPECT_EQ(seen.size(), 15u);
  EXPECT_EQ(order.front(), (std::vector<HalfEdge>{1, 0, 3, 2, 5, 4}));
  EXPECT_EQ(order.back(), (std::vector<HalfEdge>{5, 4, 3, 2, 1, 0}));
  std::set<std::vector<HalfEdge>> big;
  EXPECT_EQ(enumerate_all_pairings(3, 4,
                                   [&](const Multigraph& g) { big.emplace(g.pairing().begin(), g.pairing().end()); }),
            10395u);
  EXPECT_EQ(big.size(), 10395u);
  EXPECT_EQ(code_of([] { enumerate_all_pairings(3, 8, [](const Multigraph&) {}); }), ErrorCode::BudgetExceeded);
}

TEST(Sampler, SelfLoopFrequencyMatchesEnumeration) {
  // Exact share of pairings of 6 half-edges (d=3, n=2) with a self-loop.
  std::uint64_t with_loop = 0, total = 0;
  enumerate_all_pairings(3, 2, [&](const Multigraph& g) {
    ++total;
    with_loop += g.structure_flags().has_self_loop;
  });
  const double exact = static_cast<double>(with_loop) / static_cast<double>(total);
  // Independent count: no self-loop means every half-edge at vertex 0 pairs
  // with one at vertex 1, i.e. 3! of the 15 pairings.
  EXPECT_DOUBLE_EQ(exact, 1.0 - 6.0 / 15.0);
  RngStream rng(2024, 0);
  const int trials = 100000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += sample_configuration(3, 2, rng).structure_flags().has_self_loop;
  const double freq = static_cast<double>(hits) / trials;
  const double se = std::sqrt(exact * (1 - exact) / trials);
  EXPECT_NEAR(freq, exact, 3 * se);
}

TEST(Sampler, ConfigurationIsUniformOverPairings) {
  // Each of the 15 pairings of (d=3, n=2) is equally likely.
  std::map<std::vector<HalfEdge>, int> freq;
  RngStream rng(77, 0);
  const int trials = 150000;
  for (int i = 0; i < trials; ++i) {
    const Multigraph g = sample_configuration(3, 2, rng);
    ++freq[std::vector<HalfEdge>(g.pairing().begin(), g.pairing().end())];
  }
  ASSERT_EQ(freq.size(), 15u);
  double chi2 = 0;
  for (const auto& [p, c] : freq) chi2 += (c - trials / 15.0) * (c - trials / 15.0) / (trials / 15.0);
  EXPECT_LT(chi2, 36.13);  // chi-square(14) upper 0.001 quantile
}

TEST(Sampler, ModelNames) {
  EXPECT_EQ(parse_graph_model("configuration"), GraphModel::configuration);
  EXPECT_EQ(parse_graph_model("uniform-simple"), GraphModel::uniform_simple);
  EXPECT_EQ(to_string(GraphModel::uniform_simple), "uniform-simple");
  EXPECT_EQ(code_of([] { parse_graph_model("erdos"); }), ErrorCode::InvalidArgument);
}
