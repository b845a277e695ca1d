#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "ssqec/bp_osd.hpp"
#include "ssqec/errors.hpp"
#include "ssqec/product_code.hpp"

using namespace ssqec;

namespace {

SparseBitMatrix repetition(std::size_t L) {
  std::vector<std::vector<Index>> rows(L - 1);
  for (std::size_t i = 0; i + 1 < L; ++i) rows[i] = {static_cast<Index>(i), static_cast<Index>(i + 1)};
  return SparseBitMatrix(L - 1, L, rows);
}

// Minimum weight over all solutions of h x = s, by brute force.
std::size_t min_weight_solution(const SparseBitMatrix& h, const BitVector& s) {
  const auto hd = oracle::dense(h);
  const auto target = oracle::bits(s);
  const std::size_t n = h.cols();
  std::size_t best = SIZE_MAX;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (x >> i) & 1;
    if (oracle::mul(hd, v) == target) best = std::min<std::size_t>(best, __builtin_popcount(x));
  }
  return best;
}

}  // namespace

TEST(Bp, ZeroSyndrome) {
  const auto h = repetition(5);
  const auto r = bp_decode(h, BitVector(4), {});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 1u);
  EXPECT_TRUE(std::all_of(r.hard.begin(), r.hard.end(), [](auto b) { return b == 0; }));
}

TEST(Bp, TreeRecoversWeightOneError) {
  // Acyclic Tanner graph with distinct columns.
  const SparseBitMatrix h(3, 5, {{0, 1, 2}, {1, 3}, {2, 4}});
  for (std::size_t variant = 0; variant < 2; ++variant) {
    BpConfig cfg;
    cfg.variant = variant ? BpVariant::sum_product : BpVariant::min_sum;
    for (Index q = 0; q < 5; ++q) {
      const BitVector e(5, {q});
      const auto s = mat_vec(h, e);
      const auto r = bp_decode(h, s, cfg);
      EXPECT_TRUE(r.converged);
      const auto hard = BitVector::from_dense(r.hard);
      EXPECT_EQ(mat_vec(h, hard), s);
      EXPECT_EQ(hard, e);
      EXPECT_EQ(hard.weight(), min_weight_solution(h, s));
    }
  }
}

TEST(BpOsd, RepetitionCodeWeightOne) {
  const auto h = repetition(5);
  for (Index q = 0; q < 5; ++q) {
    const BitVector e(5, {q});
    const auto r = bp_osd_decode(h, mat_vec(h, e), {}, {});
    EXPECT_EQ(r, e);
  }
}

TEST(Osd, ZeroSyndromeAndUnsatisfiable) {
  const auto h = repetition(4);
  const std::vector<double> soft(4, 1.0);
  EXPECT_TRUE(osd_post(h, BitVector(3), soft, {}).is_zero());
  const SparseBitMatrix dup(2, 2, {{0, 1}, {0, 1}});
  EXPECT_THROW(osd_post(dup, BitVector(2, {0}), std::vector<double>(2, 1.0), {}), UnsatisfiableSyndrome);
  EXPECT_THROW(bp_osd_decode(dup, BitVector(2, {1}), {}, {}), UnsatisfiableSyndrome);
}

TEST(BpOsd, ToricLTwoSingleQubitErrorsAreCorrectedModuloStabilisers) {
  const auto code = build_code(toric_seeds(2));
  const auto hz = oracle::dense(code.hz);
  for (Index q = 0; q < code.hx.cols(); ++q) {
    const BitVector e(code.hx.cols(), {q});
    const auto s = mat_vec(code.hx, e);
    for (auto method : {OsdMethod::osd0, OsdMethod::exhaustive}) {
      OsdConfig osd;
      osd.method = method;
      osd.order = method == OsdMethod::exhaustive ? 4 : 0;
      const auto r = bp_osd_decode(code.hx, s, {}, osd);
      ASSERT_EQ(mat_vec(code.hx, r), s);
      const auto residual = oracle::bits(r ^ e);
      EXPECT_TRUE(oracle::in_row_span(hz, residual)) << "qubit " << q;
      BpConfig short_bp;
      short_bp.max_iters = 1;
      const auto soft = bp_decode(code.hx, s, short_bp).soft;
      const auto o = osd_post(code.hx, s, soft, osd);
      EXPECT_TRUE(oracle::in_row_span(hz, oracle::bits(o ^ e)));
    }
  }
}

TEST(Osd, ExhaustiveNeverWorseThanOsdZero) {
  std::mt19937_64 rng(31);
  const auto code = build_code(toric_seeds(3));
  OsdConfig o0, o4;
  o4.method = OsdMethod::exhaustive;
  o4.order = 4;
  std::normal_distribution<double> noise(2.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    const auto e = oracle::random_vector(code.hx.cols(), 0.06, rng);
    const auto s = mat_vec(code.hx, e);
    std::vector<double> soft(code.hx.cols());
    for (auto& x : soft) x = noise(rng);
    const auto r0 = osd_post(code.hx, s, soft, o0);
    const auto r4 = osd_post(code.hx, s, soft, o4);
    ASSERT_EQ(mat_vec(code.hx, r0), s);
    ASSERT_EQ(mat_vec(code.hx, r4), s);
    EXPECT_LE(r4.weight(), r0.weight());
  }
}

TEST(Osd, ExhaustiveFindsMinimumOnSmallInstances) {
  std::mt19937_64 rng(37);
  OsdConfig full;
  full.method = OsdMethod::exhaustive;
  for (int t = 0; t < 200; ++t) {
    const auto h = oracle::random_matrix(6, 10, 0.35, rng);
    const auto s = mat_vec(h, oracle::random_vector(10, 0.3, rng));
    const std::size_t free_cols = 10 - oracle::rank(oracle::dense(h));
    full.order = free_cols;
    full.max_order = std::max<std::size_t>(6, free_cols);
    const auto r = osd_post(h, s, std::vector<double>(10, 1.0), full);
    EXPECT_EQ(mat_vec(h, r), s);
    EXPECT_EQ(r.weight(), min_weight_solution(h, s));
  }
}

TEST(BpOsd, FuzzedSyndromesAlwaysSatisfied) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    const auto h = oracle::random_matrix(3 + rng() % 20, 3 + rng() % 30, 0.2, rng);
    const auto s = mat_vec(h, oracle::random_vector(h.cols(), 0.2, rng));
    BpConfig bp;
    bp.schedule = t % 2 ? BpSchedule::serial : BpSchedule::parallel;
    bp.variant = t % 3 ? BpVariant::min_sum : BpVariant::sum_product;
    const auto r = bp_osd_decode(h, s, bp, {});
    EXPECT_EQ(mat_vec(h, r), s);
  }
}

TEST(BpOsd, DecoderObjectIsDeterministicAndReusable) {
  const auto code = build_code(toric_seeds(3));
  BpOsdDecoder a(code.hx, {}, {}), b(code.hx, {}, {});
  std::mt19937_64 rng(43);
  for (int t = 0; t < 50; ++t) {
    const auto s = mat_vec(code.hx, oracle::random_vector(code.hx.cols(), 0.08, rng)).to_dense();
    const auto ra = a.decode(s);
    EXPECT_EQ(ra, b.decode(s));
    EXPECT_EQ(BitVector::from_dense(ra), bp_osd_decode(code.hx, BitVector::from_dense(s), {}, {}));
  }
}

TEST(Config, ValidationAndJson) {
  BpConfig bp;
  bp.max_iters = 0;
  EXPECT_THROW(bp.validate(), std::invalid_argument);
  bp = {};
  bp.prior = 0.0;
  EXPECT_THROW(bp.validate(), std::invalid_argument);
  OsdConfig osd;
  osd.method = OsdMethod::exhaustive;
  osd.order = 7;
  EXPECT_THROW(osd.validate(), std::invalid_argument);

  const auto j = to_json(BpConfig{});
  EXPECT_EQ(bp_config_from_json(j).ms_scale, 0.625);
  EXPECT_EQ(bp_config_from_json({{"variant", "sum_product"}}).variant, BpVariant::sum_product);
  EXPECT_THROW(bp_config_from_json({{"variant", "max_product"}}), FormatError);
  EXPECT_THROW(bp_config_from_json({{"iters", 3}}), FormatError);
  EXPECT_EQ(osd_config_from_json({{"method", "exhaustive"}, {"order", 3}}).order, 3u);
  EXPECT_THROW(osd_config_from_json({{"method", "exhaustive"}, {"order", 9}}), FormatError);
  EXPECT_THROW(osd_config_from_json({{"method", "osd1"}}), FormatError);
}
