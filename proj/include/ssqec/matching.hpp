#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "ssqec/gf2.hpp"

namespace ssqec {

/// Graph whose nodes are metachecks (rows of M) and whose edges are syndrome
/// bits (columns of M). A weight-1 column joins its metacheck to the boundary.
struct MetaGraph {
  struct Edge {
    Index u = 0;
    Index v = 0;  // == boundary() for boundary edges
  };

  std::size_t num_nodes = 0;
  std::size_t num_bits = 0;
  /// Indexed by column of M; only valid for columns of weight 1 or 2.
  std::vector<Edge> edges;
  std::vector<std::uint8_t> column_weight;
  /// Columns of weight 0.
  std::vector<Index> unprotected;
  bool has_boundary = false;
  /// Neighbour lists as (node, column), sorted by node then column.
  std::vector<std::vector<std::pair<Index, Index>>> adjacency;

  Index boundary() const { return static_cast<Index>(num_nodes); }
};

/// Throws MatchingInapplicable if some column of M has weight above 2.
MetaGraph build_meta_graph(const SparseBitMatrix& m);

using MatchingWeight = std::int64_t;
inline constexpr MatchingWeight kNoEdge = -1;

struct MatchingConfig {
  /// Switches to a greedy pairing above `exact_defect_limit` defects.
  bool allow_approx_matching = false;
  std::size_t exact_defect_limit = 16;
};

/// Minimum-weight perfect matching on a complete graph given as a symmetric
/// weight matrix; kNoEdge marks a missing edge. Returns mate[i] for every
/// node. Throws Unmatchable if no perfect matching exists.
std::vector<std::size_t> solve_mwpm(const std::vector<std::vector<MatchingWeight>>& w);
/// Greedy pairing in order of (weight, i, j). Not optimal in general.
std::vector<std::size_t> solve_greedy_matching(const std::vector<std::vector<MatchingWeight>>& w);

/// Maximum-weight matching (Edmonds blossom, O(n^3)). Edges are (i, j, w)
/// with w >= 0. With max_cardinality the weight is maximised among
/// maximum-cardinality matchings. Returns mate[i] or -1.
std::vector<long> max_weight_matching(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, MatchingWeight>>& edges,
                                      bool max_cardinality);

/// Per-thread matcher reusing BFS scratch space.
class MwpmRepairer {
 public:
  explicit MwpmRepairer(const MetaGraph& g, MatchingConfig cfg = {});

  /// Returns r with M r = m, built from shortest defect-defect or
  /// defect-boundary paths chosen by minimum-weight perfect matching.
  std::vector<std::uint8_t> repair(std::span<const std::uint8_t> metasyndrome);

  /// Hop distances from `src` to every node and to the boundary (last entry);
  /// unreachable nodes get -1.
  const std::vector<int>& bfs(Index src);

 private:
  void trace_path(Index target, std::vector<std::uint8_t>& out) const;

  const MetaGraph* g_;
  MatchingConfig cfg_;
  std::vector<int> dist_;
  std::vector<Index> queue_;
};

BitVector repair_syndrome_mwpm(const MetaGraph& g, const BitVector& m, MatchingConfig cfg = {});

}  // namespace ssqec
