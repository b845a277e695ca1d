#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssqec {

using Index = std::uint32_t;

/// Vector over GF(2) stored as the sorted list of its nonzero coordinates.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length) : length_(length) {}
  /// Support may be given in any order; duplicates or out-of-range indices throw.
  BitVector(std::size_t length, std::vector<Index> support);

  static BitVector from_dense(std::span<const std::uint8_t> bits);
  static BitVector ones(std::size_t length);

  std::size_t length() const { return length_; }
  std::size_t weight() const { return support_.size(); }
  bool is_zero() const { return support_.empty(); }
  const std::vector<Index>& support() const { return support_; }
  bool test(std::size_t i) const;

  std::vector<std::uint8_t> to_dense() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;
  /// Lexicographic on the sorted support, then on length.
  friend bool operator<(const BitVector& a, const BitVector& b);

  std::string to_string() const;

 private:
  std::size_t length_ = 0;
  std::vector<Index> support_;
};

/// Immutable sparse matrix over GF(2). Rows and columns are both indexable.
class SparseBitMatrix {
 public:
  SparseBitMatrix() = default;
  /// Row supports may be unsorted; duplicate entries in a row or column
  /// indices >= cols throw.
  SparseBitMatrix(std::size_t rows, std::size_t cols, std::vector<std::vector<Index>> row_supports);

  static SparseBitMatrix identity(std::size_t n);
  static SparseBitMatrix zeros(std::size_t rows, std::size_t cols);
  /// Rows written as strings of '0'/'1'.
  static SparseBitMatrix from_strings(const std::vector<std::string>& rows);
  static SparseBitMatrix from_dense(const std::vector<std::vector<std::uint8_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return nnz_; }
  bool is_zero() const { return nnz_ == 0; }
  bool get(std::size_t r, std::size_t c) const;

  std::span<const Index> row(std::size_t r) const { return row_supports_[r]; }
  std::span<const Index> col(std::size_t c) const { return col_supports_[c]; }
  const std::vector<std::vector<Index>>& row_supports() const { return row_supports_; }

  std::size_t max_row_weight() const;
  std::size_t max_col_weight() const;

  BitVector row_vector(std::size_t r) const;
  BitVector col_vector(std::size_t c) const;

  friend bool operator==(const SparseBitMatrix& a, const SparseBitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_supports_ == b.row_supports_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t nnz_ = 0;
  std::vector<std::vector<Index>> row_supports_;
  std::vector<std::vector<Index>> col_supports_;
};

/// Row-major bit-packed dense matrix used as elimination scratch space.
class DenseBitMatrix {
 public:
  DenseBitMatrix() = default;
  DenseBitMatrix(std::size_t rows, std::size_t cols);
  explicit DenseBitMatrix(const SparseBitMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return words_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64); }
  void flip(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  std::uint64_t* row_data(std::size_t r) { return data_.data() + r * words_; }
  const std::uint64_t* row_data(std::size_t r) const { return data_.data() + r * words_; }

  void swap_rows(std::size_t a, std::size_t b);
  /// row[dst] ^= row[src], starting at word `from_word`.
  void xor_row(std::size_t dst, std::size_t src, std::size_t from_word = 0);

  /// Reduced row echelon form over the first `pivot_limit` columns; row
  /// operations act on whole rows so trailing (augmented) columns follow along.
  /// Pivots are taken greedily in column order. Returns the pivot columns.
  /// Stops early once `max_pivots` pivots have been found.
  std::vector<std::size_t> row_reduce(std::size_t pivot_limit, std::size_t max_pivots = SIZE_MAX);
  std::vector<std::size_t> row_reduce() { return row_reduce(cols_); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Incrementally grown linearly independent set of GF(2) vectors of fixed
/// length (XOR basis with distinct leading bits).
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t length);

  std::size_t length() const { return length_; }
  std::size_t rank() const { return pivots_.size(); }
  /// Adds v if it is independent of the current span; returns true if added.
  bool insert(const BitVector& v);
  bool contains(const BitVector& v) const;

 private:
  std::vector<std::uint64_t> reduce(const BitVector& v) const;

  std::size_t length_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

// -- Linear algebra. All shape mismatches throw DimensionError.

BitVector mat_vec(const SparseBitMatrix& m, const BitVector& v);
/// Dense byte variant used in hot loops: out[i] = parity(row i . v).
void mat_vec_dense(const SparseBitMatrix& m, std::span<const std::uint8_t> v, std::span<std::uint8_t> out);
SparseBitMatrix multiply(const SparseBitMatrix& a, const SparseBitMatrix& b);
SparseBitMatrix transpose(const SparseBitMatrix& m);

std::size_t rank(const SparseBitMatrix& m);
/// Basis of ker(m); one vector per free column of the RREF, in column order.
std::vector<BitVector> kernel_basis(const SparseBitMatrix& m);
/// A solution of m x = b with free variables set to zero, or nullopt.
std::optional<BitVector> solve(const SparseBitMatrix& m, const BitVector& b);
bool in_image(const SparseBitMatrix& m, const BitVector& b);

/// Kronecker product; row (i, k) of the result is i * b.rows() + k, the left
/// factor varies slowest.
SparseBitMatrix kron(const SparseBitMatrix& a, const SparseBitMatrix& b);
SparseBitMatrix kron(const SparseBitMatrix& a, const SparseBitMatrix& b, const SparseBitMatrix& c);
/// Vertical concatenation [a; b; ...].
SparseBitMatrix stack_rows(const std::vector<SparseBitMatrix>& parts);
/// Horizontal concatenation [a b ...].
SparseBitMatrix stack_cols(const std::vector<SparseBitMatrix>& parts);
/// Block matrix from a grid of blocks; every block in a grid row shares the
/// row count and every block in a grid column shares the column count.
SparseBitMatrix block(const std::vector<std::vector<SparseBitMatrix>>& grid);

/// Matrix whose rows are the given vectors (all of equal length `cols`).
SparseBitMatrix from_row_vectors(const std::vector<BitVector>& rows, std::size_t cols);
/// Matrix whose columns are the given vectors (all of equal length `rows`).
SparseBitMatrix from_col_vectors(const std::vector<BitVector>& cols, std::size_t rows);

}  // namespace ssqec
