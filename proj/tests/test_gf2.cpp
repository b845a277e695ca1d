#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracle.hpp"
#include "ssqec/errors.hpp"
#include "ssqec/gf2.hpp"
#include "ssqec/matrix_io.hpp"
#include "ssqec/product_code.hpp"

using namespace ssqec;

namespace {

SparseBitMatrix circulant(std::size_t L) {
  std::vector<std::vector<Index>> rows(L);
  for (std::size_t i = 0; i < L; ++i) {
    rows[i] = {static_cast<Index>(i), static_cast<Index>((i + 1) % L)};
    std::sort(rows[i].begin(), rows[i].end());
  }
  return SparseBitMatrix(L, L, rows);
}

}  // namespace

TEST(BitVector, SupportIsSortedAndValidated) {
  BitVector v(6, {4, 1, 3});
  EXPECT_EQ(v.support(), (std::vector<Index>{1, 3, 4}));
  EXPECT_EQ(v.weight(), 3u);
  EXPECT_THROW(BitVector(3, {3}), DimensionError);
  EXPECT_THROW(BitVector(5, {1, 1}), std::invalid_argument);
}

TEST(BitVector, XorAndDenseRoundTrip) {
  BitVector a(5, {0, 2}), b(5, {2, 4});
  EXPECT_EQ(a ^ b, BitVector(5, {0, 4}));
  const std::vector<std::uint8_t> d{1, 0, 0, 1, 1};
  EXPECT_EQ(BitVector::from_dense(d).to_dense(), d);
  EXPECT_THROW(a ^ BitVector(4), DimensionError);
}

TEST(MatVec, IdentityAndCirculant) {
  EXPECT_EQ(mat_vec(SparseBitMatrix::identity(3), BitVector(3, {0, 2})), BitVector(3, {0, 2}));
  EXPECT_TRUE(mat_vec(circulant(3), BitVector::ones(3)).is_zero());
  EXPECT_THROW(mat_vec(circulant(3), BitVector(4)), DimensionError);
}

TEST(MatVec, SingleQubitSyndromeWeightIsColumnWeight) {
  const auto code = build_code(toric_seeds(2));
  for (std::size_t q = 0; q < code.hx.cols(); ++q) {
    BitVector e(code.hx.cols(), {static_cast<Index>(q)});
    EXPECT_EQ(mat_vec(code.hx, e).weight(), code.hx.col(q).size());
  }
}

TEST(MatVec, LinearityOnRandomInputs) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto m = oracle::random_matrix(1 + rng() % 20, 1 + rng() % 20, 0.3, rng);
    const auto v1 = oracle::random_vector(m.cols(), 0.4, rng), v2 = oracle::random_vector(m.cols(), 0.4, rng);
    EXPECT_EQ(mat_vec(m, v1 ^ v2), mat_vec(m, v1) ^ mat_vec(m, v2));
    EXPECT_EQ(oracle::bits(mat_vec(m, v1)), oracle::mul(oracle::dense(m), oracle::bits(v1)));
    std::vector<std::uint8_t> out(m.rows());
    const auto dv = v1.to_dense();
    mat_vec_dense(m, dv, out);
    EXPECT_EQ(BitVector::from_dense(out), mat_vec(m, v1));
  }
}

TEST(Rank, HandComputedCases) {
  EXPECT_EQ(rank(SparseBitMatrix::zeros(3, 3)), 0u);
  EXPECT_EQ(rank(circulant(3)), 2u);
  EXPECT_EQ(rank(table_seeds(1).a.matrix), 12u);
  EXPECT_EQ(table_seeds(1).a.matrix.cols(), 16u);
}

TEST(Rank, AgreesWithDenseOracleAndTranspose) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    const auto m = oracle::random_matrix(1 + rng() % 70, 1 + rng() % 70, 0.1 + 0.3 * (t % 3), rng);
    const auto r = rank(m);
    EXPECT_EQ(r, oracle::rank(oracle::dense(m)));
    EXPECT_EQ(r, rank(transpose(m)));
  }
}

TEST(Kernel, BasisIsValidAndComplete) {
  EXPECT_TRUE(kernel_basis(SparseBitMatrix::identity(5)).empty());
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto m = oracle::random_matrix(1 + rng() % 30, 1 + rng() % 40, 0.2, rng);
    const auto basis = kernel_basis(m);
    EXPECT_EQ(basis.size(), m.cols() - oracle::rank(oracle::dense(m)));
    oracle::Dense rows;
    for (const auto& b : basis) {
      EXPECT_TRUE(mat_vec(m, b).is_zero());
      rows.push_back(oracle::bits(b));
    }
    if (!rows.empty()) EXPECT_EQ(oracle::rank(rows), basis.size());
  }
}

TEST(Solve, FindsSolutionsExactlyWhenInImage) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto m = oracle::random_matrix(1 + rng() % 25, 1 + rng() % 25, 0.25, rng);
    const auto x = oracle::random_vector(m.cols(), 0.5, rng);
    const auto b = mat_vec(m, x);
    const auto sol = solve(m, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(mat_vec(m, *sol), b);
    EXPECT_TRUE(in_image(m, b));

    const auto y = oracle::random_vector(m.rows(), 0.5, rng);
    auto cols = oracle::transpose(oracle::dense(m));
    const bool expected = cols.empty() ? y.is_zero() : oracle::in_row_span(cols, oracle::bits(y));
    EXPECT_EQ(in_image(m, y), expected);
    EXPECT_EQ(solve(m, y).has_value(), expected);
  }
}

TEST(Solve, FreeVariablesAreZero) {
  // x0 + x1 = 1: pivot on x0, free x1 = 0.
  const auto m = SparseBitMatrix::from_strings({"11"});
  EXPECT_EQ(*solve(m, BitVector(1, {0})), BitVector(2, {0}));
}

TEST(Kron, RankMultipliesAndOrderingIsLeftSlowest) {
  const auto d = circulant(3);
  EXPECT_EQ(rank(kron(SparseBitMatrix::identity(2), d)), 2 * rank(d));
  const auto a = SparseBitMatrix::from_strings({"10", "11"});
  const auto b = SparseBitMatrix::from_strings({"011"});
  const auto k = kron(a, b);
  ASSERT_EQ(k.rows(), 2u);
  ASSERT_EQ(k.cols(), 6u);
  EXPECT_EQ(oracle::dense(k), (oracle::Dense{{0, 1, 1, 0, 0, 0}, {0, 1, 1, 0, 1, 1}}));
}

TEST(Kron, MixedProductOnBasisVectors) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_matrix(1 + rng() % 5, 1 + rng() % 5, 0.5, rng);
    const auto b = oracle::random_matrix(1 + rng() % 5, 1 + rng() % 5, 0.5, rng);
    const auto c = oracle::random_matrix(1 + rng() % 3, 1 + rng() % 3, 0.5, rng);
    EXPECT_EQ(kron(kron(a, b), c), kron(a, kron(b, c)));
    EXPECT_EQ(kron(a, b, c), kron(a, kron(b, c)));
    const auto k = kron(a, b);
    for (std::size_t u = 0; u < a.cols(); ++u)
      for (std::size_t v = 0; v < b.cols(); ++v) {
        BitVector ev(a.cols() * b.cols(), {static_cast<Index>(u * b.cols() + v)});
        const auto au = a.col_vector(u), bv = b.col_vector(v);
        std::vector<Index> sup;
        for (auto i : au.support())
          for (auto j : bv.support()) sup.push_back(static_cast<Index>(i * b.rows() + j));
        EXPECT_EQ(mat_vec(k, ev), BitVector(a.rows() * b.rows(), sup));
      }
  }
}

TEST(Blocks, StackAndBlockShapes) {
  const auto a = SparseBitMatrix::from_strings({"10", "01"});
  const auto b = SparseBitMatrix::from_strings({"11"});
  EXPECT_EQ(oracle::dense(stack_rows({a, b})), (oracle::Dense{{1, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(oracle::dense(stack_cols({a, transpose(b)})), (oracle::Dense{{1, 0, 1}, {0, 1, 1}}));
  const auto g = block({{a, SparseBitMatrix::zeros(2, 1)}, {b, SparseBitMatrix::identity(1)}});
  EXPECT_EQ(oracle::dense(g), (oracle::Dense{{1, 0, 0}, {0, 1, 0}, {1, 1, 1}}));
  EXPECT_THROW(stack_rows({a, SparseBitMatrix::zeros(1, 3)}), DimensionError);
  EXPECT_THROW(multiply(a, SparseBitMatrix::zeros(3, 3)), DimensionError);
}

TEST(Multiply, AgreesWithDenseOracle) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 15, k = 1 + rng() % 15, m = 1 + rng() % 15;
    const auto a = oracle::random_matrix(n, k, 0.3, rng), b = oracle::random_matrix(k, m, 0.3, rng);
    EXPECT_EQ(oracle::dense(multiply(a, b)), oracle::mul(oracle::dense(a), oracle::dense(b)));
  }
}

TEST(MatrixIo, AlistAndJsonRoundTrip) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const auto m = oracle::random_matrix(1 + rng() % 20, 1 + rng() % 20, 0.2, rng);
    std::stringstream ss;
    write_alist(ss, m);
    EXPECT_EQ(read_alist(ss), m);
    EXPECT_EQ(matrix_from_json(matrix_to_json(m)), m);
  }
}

TEST(MatrixIo, AlistWithoutPaddingAndMalformedInput) {
  std::stringstream ok("3 2\n2 2\n2 1 1\n2 2\n1 2\n2\n1\n1 3\n1 2\n");
  const auto m = read_alist(ok);
  EXPECT_EQ(oracle::dense(m), (oracle::Dense{{1, 0, 1}, {1, 1, 0}}));
  std::stringstream bad("3 2\n2 2\n2 1 1\n2 2\n1 9\n2\n1\n1 3\n1 2\n");
  EXPECT_THROW(read_alist(bad), FormatError);
  EXPECT_THROW(matrix_from_json(nlohmann::json{{"rows", 1}}), FormatError);
}
