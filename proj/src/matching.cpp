#include "ssqec/matching.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "ssqec/errors.hpp"

namespace ssqec {

MetaGraph build_meta_graph(const SparseBitMatrix& m) {
  MetaGraph g;
  g.num_nodes = m.rows();
  g.num_bits = m.cols();
  g.edges.resize(m.cols());
  g.column_weight.resize(m.cols());
  g.adjacency.assign(m.rows() + 1, {});
  const Index boundary = g.boundary();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto col = m.col(c);
    g.column_weight[c] = static_cast<std::uint8_t>(std::min<std::size_t>(col.size(), 255));
    const auto ci = static_cast<Index>(c);
    if (col.size() > 2) {
      throw MatchingInapplicable("metacheck matrix column " + std::to_string(c) + " has weight " +
                                 std::to_string(col.size()) + " > 2");
    }
    if (col.empty()) {
      g.unprotected.push_back(ci);
    } else if (col.size() == 1) {
      g.has_boundary = true;
      g.edges[c] = {col[0], boundary};
      g.adjacency[col[0]].emplace_back(boundary, ci);
      g.adjacency[boundary].emplace_back(col[0], ci);
    } else {
      g.edges[c] = {col[0], col[1]};
      g.adjacency[col[0]].emplace_back(col[1], ci);
      g.adjacency[col[1]].emplace_back(col[0], ci);
    }
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

// ------------------------------------------------------------------ matching

std::vector<std::size_t> solve_mwpm(const std::vector<std::vector<MatchingWeight>>& w) {
  const std::size_t n = w.size();
  if (n % 2 == 1) throw Unmatchable("perfect matching needs an even number of nodes, got " + std::to_string(n));
  if (n == 0) return {};
  MatchingWeight maxw = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i].size() != n) throw DimensionError("solve_mwpm: weight matrix is not square");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w[i][j] != w[j][i]) throw std::invalid_argument("solve_mwpm: weight matrix is not symmetric");
      if (w[i][j] < kNoEdge) throw std::invalid_argument("solve_mwpm: negative weight");
      maxw = std::max(maxw, w[i][j]);
    }
  }
  // Maximise sum(C - w) over maximum-cardinality matchings; perfect
  // matchings then minimise sum(w).
  const MatchingWeight C = maxw + 1;
  std::vector<std::tuple<std::size_t, std::size_t, MatchingWeight>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w[i][j] != kNoEdge) edges.emplace_back(i, j, C - w[i][j]);
    }
  }
  const auto mate = max_weight_matching(n, edges, true);
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mate[i] < 0) throw Unmatchable("no perfect matching exists");
    out[i] = static_cast<std::size_t>(mate[i]);
  }
  return out;
}

std::vector<std::size_t> solve_greedy_matching(const std::vector<std::vector<MatchingWeight>>& w) {
  const std::size_t n = w.size();
  if (n % 2 == 1) throw Unmatchable("perfect matching needs an even number of nodes, got " + std::to_string(n));
  std::vector<std::tuple<MatchingWeight, std::size_t, std::size_t>> cand;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w[i][j] != kNoEdge) cand.emplace_back(w[i][j], i, j);
    }
  }
  std::sort(cand.begin(), cand.end());
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> mate(n, none);
  for (const auto& [wt, i, j] : cand) {
    if (mate[i] == none && mate[j] == none) {
      mate[i] = j;
      mate[j] = i;
    }
  }
  if (std::count(mate.begin(), mate.end(), none) != 0) throw Unmatchable("greedy pairing left nodes unmatched");
  return mate;
}

// ------------------------------------------------------------------ repairer

MwpmRepairer::MwpmRepairer(const MetaGraph& g, MatchingConfig cfg)
    : g_(&g), cfg_(cfg), dist_(g.num_nodes + 1, -1) {
  queue_.reserve(g.num_nodes + 1);
}

const std::vector<int>& MwpmRepairer::bfs(Index src) {
  std::fill(dist_.begin(), dist_.end(), -1);
  queue_.clear();
  dist_[src] = 0;
  queue_.push_back(src);
  const Index boundary = g_->boundary();
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const Index u = queue_[head];
    if (u == boundary) continue;  // paths never pass through the boundary
    for (const auto& [v, col] : g_->adjacency[u]) {
      if (dist_[v] < 0) {
        dist_[v] = dist_[u] + 1;
        queue_.push_back(v);
      }
    }
  }
  return dist_;
}

void MwpmRepairer::trace_path(Index target, std::vector<std::uint8_t>& out) const {
  // Walk back from target; at each step take the smallest-index neighbour one
  // hop closer, and the smallest column among parallel edges.
  Index cur = target;
  while (dist_[cur] > 0) {
    const int want = dist_[cur] - 1;
    const Index boundary = g_->boundary();
    bool moved = false;
    for (const auto& [v, col] : g_->adjacency[cur]) {
      if (v != boundary && dist_[v] == want) {
        out[col] ^= 1U;
        cur = v;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("trace_path: broken BFS tree");
  }
}

std::vector<std::uint8_t> MwpmRepairer::repair(std::span<const std::uint8_t> metasyndrome) {
  const MetaGraph& g = *g_;
  if (metasyndrome.size() != g.num_nodes) throw DimensionError("repair: metasyndrome length mismatch");
  std::vector<Index> defects;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    if (metasyndrome[i] & 1U) defects.push_back(static_cast<Index>(i));
  }
  std::vector<std::uint8_t> r(g.num_bits, 0);
  const std::size_t d = defects.size();
  if (d == 0) return r;
  if (!g.has_boundary && d % 2 == 1) {
    throw Unmatchable("odd number of defects (" + std::to_string(d) + ") and no boundary");
  }

  const std::size_t nodes = g.has_boundary ? 2 * d : d;
  std::vector<std::vector<MatchingWeight>> w(nodes, std::vector<MatchingWeight>(nodes, kNoEdge));
  for (std::size_t i = 0; i < d; ++i) {
    const auto& dist = bfs(defects[i]);
    for (std::size_t j = 0; j < d; ++j) {
      if (j != i && dist[defects[j]] >= 0) w[i][j] = dist[defects[j]];
    }
    if (g.has_boundary) {
      const int bd = dist[g.boundary()];
      if (bd >= 0) w[i][d + i] = w[d + i][i] = bd;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) w[d + i][d + j] = 0;
      }
    }
  }

  const bool greedy = cfg_.allow_approx_matching && d > cfg_.exact_defect_limit;
  const auto mate = greedy ? solve_greedy_matching(w) : solve_mwpm(w);

  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t j = mate[i];
    if (j < i) continue;
    bfs(defects[i]);
    trace_path(j < d ? defects[j] : g.boundary(), r);
  }
  return r;
}

BitVector repair_syndrome_mwpm(const MetaGraph& g, const BitVector& m, MatchingConfig cfg) {
  MwpmRepairer rep(g, cfg);
  const auto dense = m.to_dense();
  return BitVector::from_dense(rep.repair(dense));
}

}  // namespace ssqec
