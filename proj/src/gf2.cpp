#include "ssqec/gf2.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "ssqec/errors.hpp"

namespace ssqec {

namespace {

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

// ---------------------------------------------------------------- BitVector

BitVector::BitVector(std::size_t length, std::vector<Index> support)
    : length_(length), support_(std::move(support)) {
  std::sort(support_.begin(), support_.end());
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] >= length_) {
      throw DimensionError("BitVector: index " + std::to_string(support_[i]) +
                           " out of range for length " + std::to_string(length_));
    }
    if (i > 0 && support_[i] == support_[i - 1]) {
      throw std::invalid_argument("BitVector: duplicate index " + std::to_string(support_[i]));
    }
  }
}

BitVector BitVector::from_dense(std::span<const std::uint8_t> bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1U) v.support_.push_back(static_cast<Index>(i));
  }
  return v;
}

BitVector BitVector::ones(std::size_t length) {
  BitVector v(length);
  v.support_.resize(length);
  for (std::size_t i = 0; i < length; ++i) v.support_[i] = static_cast<Index>(i);
  return v;
}

bool BitVector::test(std::size_t i) const {
  return std::binary_search(support_.begin(), support_.end(), static_cast<Index>(i));
}

std::vector<std::uint8_t> BitVector::to_dense() const {
  std::vector<std::uint8_t> out(length_, 0);
  for (Index i : support_) out[i] = 1;
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.length_ != length_) {
    throw DimensionError("BitVector xor: lengths " + std::to_string(length_) + " and " +
                         std::to_string(other.length_));
  }
  std::vector<Index> out;
  out.reserve(support_.size() + other.support_.size());
  std::set_symmetric_difference(support_.begin(), support_.end(), other.support_.begin(),
                                other.support_.end(), std::back_inserter(out));
  support_ = std::move(out);
  return *this;
}

bool operator<(const BitVector& a, const BitVector& b) {
  if (a.support_ != b.support_) return a.support_ < b.support_;
  return a.length_ < b.length_;
}

std::string BitVector::to_string() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < support_.size(); ++i) os << (i ? "," : "") << support_[i];
  os << "}/" << length_;
  return os.str();
}

// ---------------------------------------------------------- SparseBitMatrix

SparseBitMatrix::SparseBitMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<std::vector<Index>> row_supports)
    : rows_(rows), cols_(cols), row_supports_(std::move(row_supports)), col_supports_(cols) {
  if (row_supports_.size() != rows_) {
    throw DimensionError("SparseBitMatrix: expected " + std::to_string(rows_) + " rows, got " +
                         std::to_string(row_supports_.size()));
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    auto& row = row_supports_[r];
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= cols_) {
        throw DimensionError("SparseBitMatrix: column " + std::to_string(row[i]) + " >= " +
                             std::to_string(cols_) + " in row " + std::to_string(r));
      }
      if (i > 0 && row[i] == row[i - 1]) {
        throw std::invalid_argument("SparseBitMatrix: duplicate entry (" + std::to_string(r) + ", " +
                                    std::to_string(row[i]) + ")");
      }
      col_supports_[row[i]].push_back(static_cast<Index>(r));
    }
    nnz_ += row.size();
  }
}

SparseBitMatrix SparseBitMatrix::identity(std::size_t n) {
  std::vector<std::vector<Index>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = {static_cast<Index>(i)};
  return SparseBitMatrix(n, n, std::move(rows));
}

SparseBitMatrix SparseBitMatrix::zeros(std::size_t rows, std::size_t cols) {
  return SparseBitMatrix(rows, cols, std::vector<std::vector<Index>>(rows));
}

SparseBitMatrix SparseBitMatrix::from_strings(const std::vector<std::string>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<std::vector<Index>> supports(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("from_strings: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c] == '1') {
        supports[r].push_back(static_cast<Index>(c));
      } else if (rows[r][c] != '0') {
        throw std::invalid_argument("from_strings: expected '0' or '1'");
      }
    }
  }
  return SparseBitMatrix(rows.size(), cols, std::move(supports));
}

SparseBitMatrix SparseBitMatrix::from_dense(const std::vector<std::vector<std::uint8_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<std::vector<Index>> supports(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("from_dense: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (rows[r][c] & 1U) supports[r].push_back(static_cast<Index>(c));
    }
  }
  return SparseBitMatrix(rows.size(), cols, std::move(supports));
}

bool SparseBitMatrix::get(std::size_t r, std::size_t c) const {
  const auto& row = row_supports_.at(r);
  return std::binary_search(row.begin(), row.end(), static_cast<Index>(c));
}

std::size_t SparseBitMatrix::max_row_weight() const {
  std::size_t w = 0;
  for (const auto& r : row_supports_) w = std::max(w, r.size());
  return w;
}

std::size_t SparseBitMatrix::max_col_weight() const {
  std::size_t w = 0;
  for (const auto& c : col_supports_) w = std::max(w, c.size());
  return w;
}

BitVector SparseBitMatrix::row_vector(std::size_t r) const {
  return BitVector(cols_, row_supports_.at(r));
}

BitVector SparseBitMatrix::col_vector(std::size_t c) const {
  return BitVector(rows_, col_supports_.at(c));
}

// ---------------------------------------------------------- DenseBitMatrix

DenseBitMatrix::DenseBitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * ((cols + 63) / 64), 0) {}

DenseBitMatrix::DenseBitMatrix(const SparseBitMatrix& m) : DenseBitMatrix(m.rows(), m.cols()) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (Index c : m.row(r)) set(r, c);
  }
}

void DenseBitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(row_data(a), row_data(a) + words_, row_data(b));
}

void DenseBitMatrix::xor_row(std::size_t dst, std::size_t src, std::size_t from_word) {
  std::uint64_t* d = row_data(dst);
  const std::uint64_t* s = row_data(src);
  for (std::size_t w = from_word; w < words_; ++w) d[w] ^= s[w];
}

std::vector<std::size_t> DenseBitMatrix::row_reduce(std::size_t pivot_limit, std::size_t max_pivots) {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  const std::size_t limit = std::min(pivot_limit, cols_);
  for (std::size_t c = 0; c < limit && rank < rows_ && rank < max_pivots; ++c) {
    const std::size_t word = c / 64;
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    std::size_t pivot = rows_;
    for (std::size_t r = rank; r < rows_; ++r) {
      if (data_[r * words_ + word] & mask) {
        pivot = r;
        break;
      }
    }
    if (pivot == rows_) continue;
    swap_rows(pivot, rank);
    // The pivot row is zero left of column c, so xor can start at its word.
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != rank && (data_[r * words_ + word] & mask)) xor_row(r, rank, word);
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

// ---------------------------------------------------------------- Gf2Basis

Gf2Basis::Gf2Basis(std::size_t length) : length_(length), words_((length + 63) / 64) {}

std::vector<std::uint64_t> Gf2Basis::reduce(const BitVector& v) const {
  if (v.length() != length_) throw DimensionError("Gf2Basis: vector length mismatch");
  std::vector<std::uint64_t> w(words_, 0);
  for (Index i : v.support()) w[i / 64] ^= std::uint64_t{1} << (i % 64);
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t p = pivots_[k];
    if ((w[p / 64] >> (p % 64)) & 1U) {
      for (std::size_t j = p / 64; j < words_; ++j) w[j] ^= rows_[k][j];
    }
  }
  return w;
}

bool Gf2Basis::insert(const BitVector& v) {
  auto w = reduce(v);
  std::size_t lead = length_;
  for (std::size_t j = 0; j < words_; ++j) {
    if (w[j]) {
      lead = j * 64 + static_cast<std::size_t>(std::countr_zero(w[j]));
      break;
    }
  }
  if (lead == length_) return false;
  // Keep rows sorted by pivot and fully reduced so one pass of reduce() suffices.
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    if ((rows_[k][lead / 64] >> (lead % 64)) & 1U) {
      for (std::size_t j = lead / 64; j < words_; ++j) rows_[k][j] ^= w[j];
    }
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, lead);
  rows_.insert(rows_.begin() + pos, std::move(w));
  return true;
}

bool Gf2Basis::contains(const BitVector& v) const {
  auto w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

// ------------------------------------------------------------ linear algebra

BitVector mat_vec(const SparseBitMatrix& m, const BitVector& v) {
  if (v.length() != m.cols()) {
    throw DimensionError("mat_vec: matrix " + shape(m.rows(), m.cols()) + " with vector of length " +
                         std::to_string(v.length()));
  }
  std::vector<std::uint8_t> acc(m.rows(), 0);
  for (Index c : v.support()) {
    for (Index r : m.col(c)) acc[r] ^= 1U;
  }
  return BitVector::from_dense(acc);
}

void mat_vec_dense(const SparseBitMatrix& m, std::span<const std::uint8_t> v, std::span<std::uint8_t> out) {
  if (v.size() != m.cols() || out.size() != m.rows()) throw DimensionError("mat_vec_dense: shape mismatch");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint8_t acc = 0;
    for (Index c : m.row(r)) acc ^= v[c];
    out[r] = acc & 1U;
  }
}

SparseBitMatrix multiply(const SparseBitMatrix& a, const SparseBitMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: " + shape(a.rows(), a.cols()) + " times " + shape(b.rows(), b.cols()));
  }
  std::vector<std::vector<Index>> rows(a.rows());
  std::vector<std::uint8_t> acc(b.cols(), 0);
  std::vector<Index> touched;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    touched.clear();
    for (Index k : a.row(r)) {
      for (Index c : b.row(k)) {
        // bit 1: seen, bit 0: parity
        if (!(acc[c] & 2U)) touched.push_back(c);
        acc[c] = static_cast<std::uint8_t>((acc[c] ^ 1U) | 2U);
      }
    }
    for (Index c : touched) {
      if (acc[c] & 1U) rows[r].push_back(c);
      acc[c] = 0;
    }
  }
  return SparseBitMatrix(a.rows(), b.cols(), std::move(rows));
}

SparseBitMatrix transpose(const SparseBitMatrix& m) {
  std::vector<std::vector<Index>> rows(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    auto col = m.col(c);
    rows[c].assign(col.begin(), col.end());
  }
  return SparseBitMatrix(m.cols(), m.rows(), std::move(rows));
}

std::size_t rank(const SparseBitMatrix& m) {
  DenseBitMatrix d(m);
  return d.row_reduce().size();
}

std::vector<BitVector> kernel_basis(const SparseBitMatrix& m) {
  DenseBitMatrix d(m);
  const auto pivots = d.row_reduce();
  std::vector<std::uint8_t> is_pivot(m.cols(), 0);
  for (auto p : pivots) is_pivot[p] = 1;
  std::vector<BitVector> basis;
  basis.reserve(m.cols() - pivots.size());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Index> support{static_cast<Index>(f)};
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      if (d.get(r, f)) support.push_back(static_cast<Index>(pivots[r]));
    }
    basis.emplace_back(m.cols(), std::move(support));
  }
  return basis;
}

std::optional<BitVector> solve(const SparseBitMatrix& m, const BitVector& b) {
  if (b.length() != m.rows()) {
    throw DimensionError("solve: matrix " + shape(m.rows(), m.cols()) + " with right-hand side of length " +
                         std::to_string(b.length()));
  }
  DenseBitMatrix d(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (Index c : m.row(r)) d.set(r, c);
  }
  for (Index r : b.support()) d.set(r, m.cols());
  const auto pivots = d.row_reduce(m.cols());
  for (std::size_t r = pivots.size(); r < m.rows(); ++r) {
    if (d.get(r, m.cols())) return std::nullopt;
  }
  std::vector<Index> support;
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (d.get(r, m.cols())) support.push_back(static_cast<Index>(pivots[r]));
  }
  return BitVector(m.cols(), std::move(support));
}

bool in_image(const SparseBitMatrix& m, const BitVector& b) { return solve(m, b).has_value(); }

SparseBitMatrix kron(const SparseBitMatrix& a, const SparseBitMatrix& b) {
  std::vector<std::vector<Index>> rows(a.rows() * b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < b.rows(); ++k) {
      auto& row = rows[i * b.rows() + k];
      row.reserve(a.row(i).size() * b.row(k).size());
      for (Index j : a.row(i)) {
        for (Index l : b.row(k)) row.push_back(static_cast<Index>(j * b.cols() + l));
      }
    }
  }
  return SparseBitMatrix(a.rows() * b.rows(), a.cols() * b.cols(), std::move(rows));
}

SparseBitMatrix kron(const SparseBitMatrix& a, const SparseBitMatrix& b, const SparseBitMatrix& c) {
  return kron(kron(a, b), c);
}

SparseBitMatrix stack_rows(const std::vector<SparseBitMatrix>& parts) {
  if (parts.empty()) return {};
  const std::size_t cols = parts.front().cols();
  std::vector<std::vector<Index>> rows;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw DimensionError("stack_rows: column counts differ");
    rows.insert(rows.end(), p.row_supports().begin(), p.row_supports().end());
  }
  const std::size_t n = rows.size();
  return SparseBitMatrix(n, cols, std::move(rows));
}

SparseBitMatrix stack_cols(const std::vector<SparseBitMatrix>& parts) {
  if (parts.empty()) return {};
  const std::size_t nrows = parts.front().rows();
  std::vector<std::vector<Index>> rows(nrows);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    if (p.rows() != nrows) throw DimensionError("stack_cols: row counts differ");
    for (std::size_t r = 0; r < nrows; ++r) {
      for (Index c : p.row(r)) rows[r].push_back(static_cast<Index>(c + offset));
    }
    offset += p.cols();
  }
  return SparseBitMatrix(nrows, offset, std::move(rows));
}

SparseBitMatrix block(const std::vector<std::vector<SparseBitMatrix>>& grid) {
  std::vector<SparseBitMatrix> bands;
  bands.reserve(grid.size());
  for (const auto& band : grid) bands.push_back(stack_cols(band));
  for (std::size_t j = 0; !grid.empty() && j < grid.front().size(); ++j) {
    for (const auto& band : grid) {
      if (band.size() != grid.front().size() || band[j].cols() != grid.front()[j].cols()) {
        throw DimensionError("block: inconsistent block column widths");
      }
    }
  }
  return stack_rows(bands);
}

SparseBitMatrix from_row_vectors(const std::vector<BitVector>& rows, std::size_t cols) {
  std::vector<std::vector<Index>> supports;
  supports.reserve(rows.size());
  for (const auto& v : rows) {
    if (v.length() != cols) throw DimensionError("from_row_vectors: length mismatch");
    supports.push_back(v.support());
  }
  return SparseBitMatrix(rows.size(), cols, std::move(supports));
}

SparseBitMatrix from_col_vectors(const std::vector<BitVector>& cols, std::size_t rows) {
  std::vector<std::vector<Index>> supports(rows);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].length() != rows) throw DimensionError("from_col_vectors: length mismatch");
    for (Index r : cols[c].support()) supports[r].push_back(static_cast<Index>(c));
  }
  return SparseBitMatrix(rows, cols.size(), std::move(supports));
}

}  // namespace ssqec
