#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssqec/gf2.hpp"

namespace ssqec {

/// Code distance that may be infinite (dimension-0 code) or not computed.
class Distance {
 public:
  enum class Kind { finite, infinite, unknown };

  static Distance of(std::size_t v) { return Distance(Kind::finite, v); }
  static Distance infinite() { return Distance(Kind::infinite, 0); }
  static Distance unknown() { return Distance(Kind::unknown, 0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_infinite() const { return kind_ == Kind::infinite; }
  bool is_unknown() const { return kind_ == Kind::unknown; }
  std::size_t value() const { return value_; }

  std::string to_string() const;
  nlohmann::json to_json() const;
  static Distance from_json(const nlohmann::json& j);

  friend bool operator==(const Distance&, const Distance&) = default;

 private:
  Distance(Kind k, std::size_t v) : kind_(k), value_(v) {}
  Kind kind_;
  std::size_t value_;
};

/// Product of two distances; anything times infinity is infinity.
Distance operator*(const Distance& a, const Distance& b);
/// Minimum; infinite entries are ignored, an unknown entry makes the result unknown.
Distance min_distance(const std::vector<Distance>& ds);

struct ClassicalSeed {
  SparseBitMatrix matrix;
  std::size_t n = 0, k = 0;
  std::size_t nt = 0, kt = 0;
  Distance d = Distance::unknown();
  Distance dt = Distance::unknown();
};

/// Codeword distance of ker(h) by enumerating all 2^k codewords; unknown if
/// dim ker(h) exceeds `max_enum_dim`, infinite if the kernel is trivial.
Distance classical_distance(const SparseBitMatrix& h, std::size_t max_enum_dim = 24);
ClassicalSeed make_seed(SparseBitMatrix m, std::size_t max_enum_dim = 24);

struct SeedTriple {
  ClassicalSeed a, b, c;
};

SeedTriple toric_seeds(std::size_t L);
SeedTriple surface_seeds(std::size_t L);
/// Non-topological family: row in {1, 2, 3}.
SeedTriple table_seeds(std::size_t row);
SeedTriple seeds_from_matrices(SparseBitMatrix a, SparseBitMatrix b, SparseBitMatrix c);

/// Length-3 chain complex C0 -> C1 -> C2 -> C3.
/// C1 blocks: A1B0C0, A0B1C0, A0B0C1. C2 blocks: A1B1C0, A1B0C1, A0B1C1.
struct ChainComplex3 {
  SparseBitMatrix delta0, delta1, delta2;
  std::array<std::size_t, 4> dims{};
  /// Sizes of the three blocks of C1 and of C2, in the order above.
  std::array<std::size_t, 3> c1_blocks{}, c2_blocks{};
};

ChainComplex3 build_complex(const SeedTriple& seeds);

struct CodeParams {
  std::size_t n = 0, k = 0;
  Distance dx = Distance::unknown(), dz = Distance::unknown(), dss = Distance::unknown();
  std::size_t km = 0;
};

struct ProductCode {
  SeedTriple seeds;
  ChainComplex3 complex;
  SparseBitMatrix hx, hz, meta;
  /// Rows generate the cohomology paired with the metacode homology.
  SparseBitMatrix lm;
  /// Columns are homology representatives: in ker(meta), not in im(hx).
  SparseBitMatrix fm;
  /// Rows are X-logical representatives: ker(hz) modulo im(hx^T).
  SparseBitMatrix lx;
  CodeParams params;
};

struct HomologyGenerators {
  SparseBitMatrix lm, fm;
};

HomologyGenerators homology_generators(const ChainComplex3& cc);
/// Basis of ker(a) modulo im(b^T), chosen greedily over kernel_basis(a).
std::vector<BitVector> quotient_basis(const SparseBitMatrix& a, const SparseBitMatrix& b_rows_span);

ProductCode derive_code(const ChainComplex3& cc, const SeedTriple& seeds);
ProductCode build_code(const SeedTriple& seeds);

struct DegreeReport {
  std::array<std::size_t, 3> col_weight{}, row_weight{};
  std::array<std::size_t, 3> col_bound{}, row_bound{};
};

/// Measures row/column weights of delta0..2 and checks them against the
/// bounds implied by the seed weights; throws ConsistencyError on violation.
DegreeReport ldpc_degree_bounds(const ChainComplex3& cc, const SeedTriple& seeds);

/// `builtin:toric:L`, `builtin:surface:L`, `builtin:table1:i`, or a JSON file
/// with keys a, b, c holding either matrix objects or {"alist": path}.
SeedTriple resolve_seeds(const std::string& spec);

nlohmann::json code_to_json(const ProductCode& code);
ProductCode code_from_json(const nlohmann::json& j);
ProductCode load_code(const std::string& path);

}  // namespace ssqec
