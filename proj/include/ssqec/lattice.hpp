#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssqec/product_code.hpp"

namespace ssqec {

/// Lattice point stored as doubled (z, y, x): an integer coordinate c is 2c,
/// a half-integer c + 0.5 is 2c + 1. Seed indices are 1-based on the lattice,
/// so 0-based index i sits at integer coordinate i + 1.
struct LatticePoint {
  int z = 0, y = 0, x = 0;
  std::array<double, 3> xyz() const { return {z / 2.0, y / 2.0, x / 2.0}; }
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

enum class QubitType { transverse, vertical, horizontal };
enum class XStabType { transverse_vertical, transverse_horizontal, vertical_horizontal };
enum class LatticeObject { qubit, xstab, zstab, metacheck };
enum class LocalityKind { torus, euclidean };

std::string to_string(QubitType t);
std::string to_string(XStabType t);
std::string to_string(LocalityKind k);

struct LatticeCoords {
  /// Seed shapes: n = columns (dim C^0), m = rows (dim C^1) for a, b, c.
  std::array<std::size_t, 3> n{}, m{};
  std::vector<LatticePoint> qubits, xstabs, zstabs, metachecks;
  std::vector<QubitType> qubit_types;
  std::vector<XStabType> xstab_types;

  /// Inverse of embed: the object and index at `p`, if any.
  std::optional<std::pair<LatticeObject, Index>> locate(const LatticePoint& p) const;
};

LatticeCoords embed(const ProductCode& code);

/// Smallest rho for which every row and column support of `h`, together
/// with its own index, fits in rho consecutive integers of [0, max(m, n)),
/// cyclically for the torus.
std::size_t seed_locality(const SparseBitMatrix& h, LocalityKind kind);

/// Per seed: Euclidean if it is at least as local as on the torus.
std::array<LocalityKind, 3> detect_locality(const SeedTriple& seeds);

/// X-stabilisers in a rho x rho box with weight <= 2 rho and Z-stabilisers in
/// a rho x rho x rho box with weight <= 3 rho. Box semantics per axis follow
/// `kinds`, auto-detected from the seeds when not given.
bool check_locality(const ProductCode& code, const LatticeCoords& coords, std::size_t rho,
                    std::optional<std::array<LocalityKind, 3>> kinds = std::nullopt);

nlohmann::json lattice_to_json(const LatticeCoords& coords);

}  // namespace ssqec
