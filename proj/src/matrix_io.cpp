#include "ssqec/matrix_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "ssqec/errors.hpp"

namespace ssqec {

namespace {

long long next_int(std::istream& is, const char* what) {
  long long v = 0;
  if (!(is >> v)) throw FormatError(std::string("alist: expected integer for ") + what);
  return v;
}

std::size_t next_count(std::istream& is, const char* what) {
  const long long v = next_int(is, what);
  if (v < 0) throw FormatError(std::string("alist: negative ") + what);
  return static_cast<std::size_t>(v);
}

void write_padded(std::ostream& os, std::span<const Index> entries, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) {
    if (i) os << ' ';
    os << (i < entries.size() ? entries[i] + 1 : 0);
  }
  os << '\n';
}

}  // namespace

void write_alist(std::ostream& os, const SparseBitMatrix& m) {
  const std::size_t wc = m.max_col_weight();
  const std::size_t wr = m.max_row_weight();
  os << m.cols() << ' ' << m.rows() << '\n' << wc << ' ' << wr << '\n';
  for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.col(c).size();
  os << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) os << (r ? " " : "") << m.row(r).size();
  os << '\n';
  for (std::size_t c = 0; c < m.cols(); ++c) write_padded(os, m.col(c), wc);
  for (std::size_t r = 0; r < m.rows(); ++r) write_padded(os, m.row(r), wr);
}

SparseBitMatrix read_alist(std::istream& is) {
  const std::size_t cols = next_count(is, "column count");
  const std::size_t rows = next_count(is, "row count");
  next_count(is, "max column weight");
  next_count(is, "max row weight");
  std::vector<std::size_t> col_w(cols), row_w(rows);
  for (auto& w : col_w) w = next_count(is, "column weight");
  for (auto& w : row_w) w = next_count(is, "row weight");

  // Zeros are padding; each list is read as its declared number of nonzero entries.
  auto read_list = [&is](std::size_t weight, std::size_t bound, const char* what) {
    std::vector<Index> out;
    out.reserve(weight);
    while (out.size() < weight) {
      const long long v = next_int(is, what);
      if (v == 0) continue;
      if (v < 0 || static_cast<std::size_t>(v) > bound) {
        throw FormatError(std::string("alist: ") + what + " entry " + std::to_string(v) + " out of range");
      }
      out.push_back(static_cast<Index>(v - 1));
    }
    return out;
  };

  std::vector<std::vector<Index>> col_lists(cols);
  for (std::size_t c = 0; c < cols; ++c) col_lists[c] = read_list(col_w[c], rows, "column list");
  std::vector<std::vector<Index>> row_lists(rows);
  for (std::size_t r = 0; r < rows; ++r) row_lists[r] = read_list(row_w[r], cols, "row list");

  SparseBitMatrix m(rows, cols, std::move(row_lists));
  for (std::size_t c = 0; c < cols; ++c) {
    std::sort(col_lists[c].begin(), col_lists[c].end());
    auto col = m.col(c);
    if (!std::equal(col.begin(), col.end(), col_lists[c].begin(), col_lists[c].end())) {
      throw FormatError("alist: column list " + std::to_string(c + 1) + " disagrees with row lists");
    }
  }
  return m;
}

void save_alist(const std::string& path, const SparseBitMatrix& m) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path + " for writing");
  write_alist(os, m);
}

SparseBitMatrix load_alist(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path);
  return read_alist(is);
}

nlohmann::json matrix_to_json(const SparseBitMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"row_supports", m.row_supports()}};
}

SparseBitMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    auto supports = j.at("row_supports").get<std::vector<std::vector<Index>>>();
    return SparseBitMatrix(rows, cols, std::move(supports));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("matrix json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("matrix json: ") + e.what());
  }
}

}  // namespace ssqec
