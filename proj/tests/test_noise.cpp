#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "ssqec/noise.hpp"

using namespace ssqec;

TEST(Sampling, ExtremeProbabilities) {
  RngStream s(1, {2, 3});
  for (int t = 0; t < 20; ++t) {
    EXPECT_TRUE(sample_qubit_error(100, 0.0, s).is_zero());
    EXPECT_EQ(sample_qubit_error(100, 1.0, s).weight(), 100u);
    EXPECT_EQ(sample_syndrome_error(40, 1.0, s).weight(), 40u);
  }
  EXPECT_THROW(sample_qubit_error(5, 1.5, s), std::invalid_argument);
  EXPECT_THROW(sample_syndrome_error(5, -0.1, s), std::invalid_argument);
}

TEST(Sampling, MeanWeightWithinThreeSigma) {
  RngStream s(2024, {7});
  const std::size_t n = 100000;
  const double p = 0.1;
  const auto w = static_cast<double>(sample_qubit_error(n, p, s).weight());
  EXPECT_LT(std::abs(w - n * p), 3 * std::sqrt(n * p * (1 - p)));
}

TEST(RngStream, SameIdSameSequenceAcrossThreads) {
  std::vector<std::uint64_t> a(64), b(64);
  std::thread t1([&] {
    RngStream s(5, {1, 2, 3});
    for (auto& x : a) x = s();
  });
  std::thread t2([&] {
    RngStream s(5, {1, 2, 3});
    for (auto& x : b) x = s();
  });
  t1.join();
  t2.join();
  EXPECT_EQ(a, b);
  RngStream other(5, {1, 2, 4});
  EXPECT_NE(other(), a[0]);
}

TEST(RngStream, SubstreamIgnoresParentPosition) {
  RngStream s(9, {1});
  const auto before = s.substream({4})();
  for (int i = 0; i < 10; ++i) s();
  EXPECT_EQ(s.substream({4})(), before);
  EXPECT_EQ(RngStream(9, {1, 4})(), before);
}

TEST(RngStream, NeighbouringStreamsAreUncorrelated) {
  const int n = 20000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    RngStream a(1, {static_cast<std::uint64_t>(i)}), b(1, {static_cast<std::uint64_t>(i + 1)});
    const double x = a.uniform(), y = b.uniform();
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double r = cov / std::sqrt((sxx / n - sx * sx / n / n) * (syy / n - sy * sy / n / n));
  EXPECT_LT(std::abs(r), 4.0 / std::sqrt(n));
}

TEST(RngStream, BelowIsUniform) {
  RngStream s(3);
  const int k = 7, n = 70000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[s.below(k)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / k) * (c - n / k) / double(n / k);
  EXPECT_LT(chi2, 22.5);  // 99.9% quantile for 6 degrees of freedom
  EXPECT_THROW(s.below(0), std::invalid_argument);
}

TEST(RngStream, UniformRange) {
  RngStream s(0);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(XorBernoulli, MatchesSparseSampler) {
  RngStream a(11, {1}), b(11, {1});
  std::vector<std::uint8_t> d(500, 0);
  xor_bernoulli(d, 0.3, a);
  EXPECT_EQ(BitVector::from_dense(d), sample_qubit_error(500, 0.3, b));
}
