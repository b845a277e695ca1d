#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracle.hpp"
#include "ssqec/errors.hpp"
#include "ssqec/matching.hpp"
#include "ssqec/product_code.hpp"

using namespace ssqec;

namespace {

using Weights = std::vector<std::vector<MatchingWeight>>;

// Minimum total weight over all perfect matchings; -1 if none.
MatchingWeight brute_force_mwpm(const Weights& w) {
  const std::size_t n = w.size();
  std::vector<bool> used(n, false);
  MatchingWeight best = -1;
  std::function<void(MatchingWeight)> rec = [&](MatchingWeight acc) {
    std::size_t i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) {
      if (best < 0 || acc < best) best = acc;
      return;
    }
    used[i] = true;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j] || w[i][j] == kNoEdge) continue;
      used[j] = true;
      rec(acc + w[i][j]);
      used[j] = false;
    }
    used[i] = false;
  };
  rec(0);
  return best;
}

// Same optimum by dynamic programming over subsets; lowest unmatched node pairs first.
MatchingWeight subset_dp_mwpm(const Weights& w) {
  const std::size_t n = w.size();
  std::vector<MatchingWeight> dp(std::size_t{1} << n, -1);
  dp[0] = 0;
  for (std::size_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] < 0) continue;
    std::size_t i = 0;
    while (i < n && ((mask >> i) & 1U)) ++i;
    if (i == n) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (((mask >> j) & 1U) || w[i][j] == kNoEdge) continue;
      const std::size_t next = mask | (std::size_t{1} << i) | (std::size_t{1} << j);
      const MatchingWeight v = dp[mask] + w[i][j];
      if (dp[next] < 0 || v < dp[next]) dp[next] = v;
    }
  }
  return dp.back();
}

MatchingWeight total(const Weights& w, const std::vector<std::size_t>& mate) {
  MatchingWeight t = 0;
  for (std::size_t i = 0; i < mate.size(); ++i) {
    EXPECT_EQ(mate[mate[i]], i);
    EXPECT_NE(mate[i], i);
    EXPECT_NE(w[i][mate[i]], kNoEdge);
    if (i < mate[i]) t += w[i][mate[i]];
  }
  return t;
}

Weights random_weights(std::size_t n, double missing, std::mt19937_64& rng) {
  Weights w(n, std::vector<MatchingWeight>(n, kNoEdge));
  std::uniform_int_distribution<int> wd(0, 9);
  std::bernoulli_distribution drop(missing);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!drop(rng)) w[i][j] = w[j][i] = wd(rng);
  return w;
}

}  // namespace

TEST(MetaGraph, ToricHasNoBoundary) {
  const auto c = build_code(toric_seeds(3));
  const auto g = build_meta_graph(c.meta);
  EXPECT_FALSE(g.has_boundary);
  EXPECT_TRUE(g.unprotected.empty());
  for (auto w : g.column_weight) EXPECT_EQ(w, 2);
  EXPECT_EQ(g.num_nodes, c.meta.rows());
  EXPECT_EQ(g.num_bits, c.meta.cols());
}

TEST(MetaGraph, SurfaceHasBoundary) {
  const auto g = build_meta_graph(build_code(surface_seeds(3)).meta);
  EXPECT_TRUE(g.has_boundary);
  for (std::size_t c = 0; c < g.num_bits; ++c) {
    if (g.column_weight[c] == 1) EXPECT_EQ(g.edges[c].v, g.boundary());
  }
}

TEST(MetaGraph, HeavyColumnsAreRejected) {
  const auto m = build_code(table_seeds(1)).meta;
  if (m.max_col_weight() > 2) {
    EXPECT_THROW(build_meta_graph(m), MatchingInapplicable);
  } else {
    EXPECT_NO_THROW(build_meta_graph(m));
  }
  EXPECT_THROW(build_meta_graph(SparseBitMatrix(3, 1, {{0}, {0}, {0}})), MatchingInapplicable);
}

TEST(SolveMwpm, SmallFixedInstances) {
  EXPECT_EQ(solve_mwpm({{kNoEdge, 3}, {3, kNoEdge}}), (std::vector<std::size_t>{1, 0}));
  // A B C D
  const Weights w = {{kNoEdge, 1, 5, 5}, {1, kNoEdge, 5, 5}, {5, 5, kNoEdge, 1}, {5, 5, 1, kNoEdge}};
  const auto mate = solve_mwpm(w);
  EXPECT_EQ(mate, (std::vector<std::size_t>{1, 0, 3, 2}));
  EXPECT_EQ(total(w, mate), 2);
  EXPECT_TRUE(solve_mwpm({}).empty());
  EXPECT_THROW(solve_mwpm({{kNoEdge}}), Unmatchable);
}

TEST(SolveMwpm, AgreesWithBruteForceOnRandomInstances) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 2 * (1 + rng() % 5);
    const auto w = random_weights(n, t % 2 ? 0.3 : 0.0, rng);
    const auto best = brute_force_mwpm(w);
    if (best < 0) {
      EXPECT_THROW(solve_mwpm(w), Unmatchable);
      continue;
    }
    EXPECT_EQ(total(w, solve_mwpm(w)), best);
  }
}

TEST(SolveMwpm, ExactAboveSixteenNodes) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 10; ++t) {
    const auto w = random_weights(t % 2 ? 18 : 20, 0.2, rng);
    const auto best = subset_dp_mwpm(w);
    if (best < 0) continue;
    EXPECT_EQ(total(w, solve_mwpm(w)), best);
  }
}

TEST(GreedyMatching, IsPerfectAndNeverBetterThanOptimal) {
  std::mt19937_64 rng(57);
  for (int t = 0; t < 300; ++t) {
    const auto w = random_weights(2 * (1 + rng() % 5), 0.0, rng);
    EXPECT_GE(total(w, solve_greedy_matching(w)), brute_force_mwpm(w));
  }
}

TEST(MaxWeightMatching, AgreesWithBruteForce) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<std::tuple<std::size_t, std::size_t, MatchingWeight>> edges;
    Weights w(n, std::vector<MatchingWeight>(n, kNoEdge));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng() % 3) {
          const MatchingWeight x = static_cast<MatchingWeight>(rng() % 10);
          edges.emplace_back(i, j, x);
          w[i][j] = w[j][i] = x;
        }
    // Brute force over all matchings (not necessarily perfect).
    MatchingWeight best = 0;
    std::vector<bool> used(n, false);
    std::function<void(std::size_t, MatchingWeight)> rec = [&](std::size_t i, MatchingWeight acc) {
      while (i < n && used[i]) ++i;
      best = std::max(best, acc);
      if (i == n) return;
      rec(i + 1, acc);
      used[i] = true;
      for (std::size_t j = i + 1; j < n; ++j)
        if (!used[j] && w[i][j] != kNoEdge) {
          used[j] = true;
          rec(i + 1, acc + w[i][j]);
          used[j] = false;
        }
      used[i] = false;
    };
    rec(0, 0);
    const auto mate = max_weight_matching(n, edges, false);
    MatchingWeight got = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mate[i] >= 0 && static_cast<std::size_t>(mate[i]) > i) got += w[i][static_cast<std::size_t>(mate[i])];
    EXPECT_EQ(got, best);
  }
}

TEST(Repair, ZeroMetasyndrome) {
  const auto g = build_meta_graph(build_code(toric_seeds(3)).meta);
  EXPECT_TRUE(repair_syndrome_mwpm(g, BitVector(g.num_nodes)).is_zero());
}

TEST(Repair, AdjacentDefectsUseTheSharedBit) {
  const auto c = build_code(toric_seeds(3));
  const auto g = build_meta_graph(c.meta);
  for (std::size_t bit = 0; bit < c.meta.cols(); ++bit) {
    const BitVector s(c.meta.cols(), {static_cast<Index>(bit)});
    const auto m = mat_vec(c.meta, s);
    ASSERT_EQ(m.weight(), 2u);
    EXPECT_EQ(repair_syndrome_mwpm(g, m), s);
  }
}

TEST(Repair, OddDefectsWithoutBoundary) {
  const auto g = build_meta_graph(build_code(toric_seeds(3)).meta);
  EXPECT_THROW(repair_syndrome_mwpm(g, BitVector(g.num_nodes, {0})), Unmatchable);
}

TEST(Repair, SurfaceBoundaryMatching) {
  const auto c = build_code(surface_seeds(4));
  const auto g = build_meta_graph(c.meta);
  for (std::size_t bit = 0; bit < c.meta.cols(); ++bit) {
    const BitVector s(c.meta.cols(), {static_cast<Index>(bit)});
    const auto m = mat_vec(c.meta, s);
    const auto r = repair_syndrome_mwpm(g, m);
    EXPECT_EQ(mat_vec(c.meta, r), m);
    EXPECT_LE(r.weight(), 1u);
  }
}

TEST(Repair, RandomSyndromeErrorsOnToricLFive) {
  const auto c = build_code(toric_seeds(5));
  const auto g = build_meta_graph(c.meta);
  MwpmRepairer rep(g);
  std::mt19937_64 rng(61);
  std::size_t ok = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t w = 1 + rng() % 4;
    std::vector<Index> sup;
    while (sup.size() < w) {
      const auto b = static_cast<Index>(rng() % c.meta.cols());
      if (std::find(sup.begin(), sup.end(), b) == sup.end()) sup.push_back(b);
    }
    const BitVector s(c.meta.cols(), sup);
    const auto m = mat_vec(c.meta, s);
    const auto r = BitVector::from_dense(rep.repair(m.to_dense()));
    ASSERT_EQ(mat_vec(c.meta, r), m);
    if (r.weight() <= w) ++ok;
  }
  EXPECT_GE(ok, static_cast<std::size_t>(0.99 * trials));
}

TEST(Repair, BfsDistances) {
  const auto g = build_meta_graph(build_code(toric_seeds(4)).meta);
  MwpmRepairer rep(g);
  const auto& d = rep.bfs(0);
  EXPECT_EQ(d[0], 0);
  int maxd = 0;
  for (std::size_t i = 0; i < g.num_nodes; ++i) maxd = std::max(maxd, d[i]);
  EXPECT_EQ(maxd, 6);  // metachecks form a 4x4x4 torus
  EXPECT_EQ(d[g.num_nodes], -1);
}
