#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssqec/gf2.hpp"
#include "ssqec/product_code.hpp"

namespace ssqec {

// ------------------------------------------------------------ error models

enum class ErrorModel { z_only, pauli };

/// One non-identity single-qubit term; `op` is 0 for Z-only, 0/1/2 = X/Y/Z for Pauli.
struct ErrorTerm {
  Index qubit = 0;
  std::uint8_t op = 0;
  friend bool operator==(const ErrorTerm&, const ErrorTerm&) = default;
};
using ErrorPattern = std::vector<ErrorTerm>;

std::string to_string(const ErrorPattern& e, ErrorModel model);

/// Syndrome of each single-qubit term. Z-only: columns of hx. Pauli: X terms
/// hit hz (first block), Z terms hit hx (second block), Y both.
struct SyndromeMap {
  ErrorModel model = ErrorModel::z_only;
  std::size_t num_qubits = 0, num_checks = 0;
  std::vector<std::vector<BitVector>> term_syndromes;  // [qubit][op]

  static SyndromeMap z_errors(const SparseBitMatrix& hx);
  static SyndromeMap pauli_errors(const SparseBitMatrix& hx, const SparseBitMatrix& hz);
  static SyndromeMap for_code(const ProductCode& code, bool restrict_to_z);

  BitVector syndrome(const ErrorPattern& e) const;
  std::size_t options() const { return term_syndromes.empty() ? 0 : term_syndromes[0].size(); }
};

ErrorPattern z_pattern(const BitVector& e);
BitVector z_support(const ErrorPattern& e, std::size_t n);

/// Number of error patterns of weight <= w; saturates at SIZE_MAX.
std::size_t pattern_count(const SyndromeMap& map, std::size_t w);

/// Calls `visit` on every pattern of weight 0, 1, ..., max_weight in
/// lexicographic order; stops early when `visit` returns false. Throws
/// EnumerationInfeasible if more than `limit` patterns would be visited.
void enumerate_patterns(const SyndromeMap& map, std::size_t max_weight, std::size_t limit,
                        const std::function<bool(const ErrorPattern&, const BitVector&)>& visit);

inline constexpr std::size_t kDefaultEnumerationLimit = 20'000'000;

/// Minimum-weight representative per syndrome over all patterns of weight <= max_weight.
struct SyndromeTable {
  struct Entry {
    BitVector syndrome;
    ErrorPattern error;
  };
  std::size_t max_weight = 0;
  std::size_t patterns_visited = 0;
  /// In discovery order: increasing weight, then lexicographic.
  std::vector<Entry> entries;
  std::map<BitVector, std::size_t> index;

  const Entry* find(const BitVector& s) const;
};

SyndromeTable build_syndrome_table(const SyndromeMap& map, std::size_t max_weight,
                                   std::size_t limit = kDefaultEnumerationLimit);

// ---------------------------------------------------------- reduced weight

/// min |e'| over e' with H e' = H e, by enumeration in increasing weight.
/// Throws EnumerationInfeasible when the minimum exceeds `cap`.
std::size_t reduced_weight(const SparseBitMatrix& h, const BitVector& e, std::size_t cap = 4);
std::size_t reduced_weight(const SyndromeMap& map, const ErrorPattern& e, std::size_t cap = 4);

// ------------------------------------------------------------- confinement

/// Candidate confinement functions, compared in exact integer arithmetic.
struct ConfinementFunction {
  enum class Kind { cubic, quadratic, linear, zero };
  Kind kind = Kind::cubic;
  double kappa = 1.0;  // slope for linear

  static ConfinementFunction cubic() { return {Kind::cubic, 1.0}; }
  static ConfinementFunction quadratic() { return {Kind::quadratic, 1.0}; }
  static ConfinementFunction linear(double k) { return {Kind::linear, k}; }
  static ConfinementFunction zero() { return {Kind::zero, 0.0}; }
  static ConfinementFunction parse(const std::string& s);

  /// True iff f(x) >= r; cubic is x^3/2, quadratic x^2/4.
  bool bounds(std::size_t x, std::size_t r) const;
  double value(std::size_t x) const;
  std::string to_string() const;
};

struct ConfinementCase {
  ErrorPattern error;
  std::size_t syndrome_weight = 0;
  std::size_t reduced_weight = 0;
};

struct ConfinementReport {
  std::size_t t = 0;
  ConfinementFunction f;
  ErrorModel model = ErrorModel::z_only;
  bool verified = false;
  /// Largest raw error weight enumerated; every e with |e| <= this is covered.
  std::size_t max_error_weight = 0;
  std::size_t patterns_checked = 0;
  std::size_t syndromes_checked = 0;
  /// First counterexample, or else the nontrivial case with least slack.
  std::optional<ConfinementCase> worst_case;
};

/// Checks f(|s(e)|) >= |e|^red for every error of weight <= t.
ConfinementReport check_confinement(const SyndromeMap& map, std::size_t t, const ConfinementFunction& f,
                                    std::size_t limit = kDefaultEnumerationLimit);
ConfinementReport check_confinement(const ProductCode& code, std::size_t t, const ConfinementFunction& f,
                                    bool restrict_to_z, std::size_t limit = kDefaultEnumerationLimit);

nlohmann::json to_json(const ConfinementReport& r);

struct SoundnessReport {
  std::size_t t = 0;
  std::size_t w_max = 0;
  ConfinementFunction f;
  std::size_t patterns_checked = 0;
  /// Never "sound": only that nothing failed among errors of weight <= w_max.
  bool counterexample_found = false;
  std::optional<ConfinementCase> counterexample;
};

/// For errors of weight <= w_max with |s(e)| <= t, checks f(|s(e)|) >= |e|^red.
SoundnessReport check_soundness_partial(const SyndromeMap& map, std::size_t t, const ConfinementFunction& f,
                                        std::size_t w_max, std::size_t limit = kDefaultEnumerationLimit);

// ---------------------------------------------------------- Shadow decoder

struct ShadowSet {
  std::size_t t = 0;
  SyndromeTable table;
  bool contains(const BitVector& s) const { return table.find(s) != nullptr; }
  std::size_t size() const { return table.entries.size(); }
};

ShadowSet build_shadow(const SyndromeMap& map, std::size_t t, std::size_t limit = kDefaultEnumerationLimit);

struct ShadowDecodeResult {
  BitVector syndrome_repair;  // s_r
  ErrorPattern correction;    // e_r
};

/// s_r: least weight with s + s_r in the Shadow (ties: smallest support in
/// lexicographic order); e_r: least-weight error with that syndrome.
ShadowDecodeResult shadow_decode(const ShadowSet& shadow, const BitVector& observed);

struct ResidualBoundReport {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::size_t worst_reduced_weight = 0;
  std::optional<std::pair<ErrorPattern, BitVector>> first_violation;
};

/// For every error |e| <= max_error_weight and syndrome error |s_e| <= max_syndrome_error,
/// decodes s(e) + s_e with the Shadow decoder of radius `shadow_t` and checks
/// |r|^red <= f(2 |s_e|) for the residual r = e + e_r.
ResidualBoundReport check_residual_bound(const SyndromeMap& map, std::size_t shadow_t, const ConfinementFunction& f,
                                         std::size_t max_error_weight, std::size_t max_syndrome_error);

// ------------------------------------------------------- graphs, closeness

struct Graph {
  std::vector<std::vector<Index>> adj;  // sorted, no self loops
  std::size_t size() const { return adj.size(); }
  bool adjacent(Index a, Index b) const;
};

Graph graph_from_edges(std::size_t n, const std::vector<std::pair<Index, Index>>& edges);
/// q1 ~ q2 iff some row of h contains both.
Graph qubit_graph(const SparseBitMatrix& h);
/// s1 ~ s2 iff rows s1 and s2 of h share a column.
Graph syndrome_graph(const SparseBitMatrix& h);
bool is_connected(const Graph& g);
/// Connected components of the subgraph induced by `nodes`.
std::vector<std::vector<Index>> induced_components(const Graph& g, std::span<const Index> nodes);

/// Visits every connected node set of size `k` exactly once (ESU growth,
/// each set rooted at its smallest node). Stops when `visit` returns false.
/// Throws EnumerationInfeasible after `limit` sets.
void for_each_patch(const Graph& g, std::size_t k, std::size_t limit,
                    const std::function<bool(std::span<const Index>)>& visit);

inline constexpr std::size_t kDefaultPatchLimit = 50'000'000;

/// max |K n E| over connected K with |K| = beta. Requires a connected graph
/// and 1 <= beta <= |G|.
std::size_t closeness(const Graph& g, std::span<const Index> e, std::size_t beta,
                      std::size_t limit = kDefaultPatchLimit);

/// Same value via minimum Steiner trees over subsets of E (|E| <= 20, |G| <= 64).
std::size_t closeness_steiner(const Graph& g, std::span<const Index> e, std::size_t beta);

// ------------------------------------------------ Stochastic Shadow decoder

struct StochasticShadowConfig {
  double alpha = 0.5;
  std::size_t beta = 2;
  std::size_t gamma = 10;
  /// Caps on the pruned search over error sets and on patch enumeration.
  std::size_t max_error_sets = 5'000'000;
  std::size_t max_patches = 5'000'000;
};

struct StochasticDecodeResult {
  BitVector syndrome_repair;  // S_r
  BitVector correction;       // E_r
};

/// Z-error decoder on H with up to 64 qubits and 64 checks.
class StochasticShadowDecoder {
 public:
  StochasticShadowDecoder(const SparseBitMatrix& h, StochasticShadowConfig cfg);

  StochasticDecodeResult decode(const BitVector& observed) const;

  /// |E|_beta on the qubit graph and |S|_gamma on the syndrome graph.
  std::size_t qubit_closeness(std::uint64_t e) const;
  std::size_t syndrome_closeness(std::uint64_t s) const;
  /// min |F|_beta over F with the same syndrome as `e`.
  std::size_t reduced_qubit_closeness(std::uint64_t e) const;

  std::uint64_t syndrome_of(std::uint64_t e) const;
  std::size_t shadow_size() const { return shadow_.size(); }
  const Graph& qubits() const { return gq_; }
  const Graph& checks() const { return gs_; }
  const StochasticShadowConfig& config() const { return cfg_; }

 private:
  void search(std::uint64_t e, Index next, std::size_t bound,
              const std::function<bool(std::uint64_t)>& visit, std::size_t& visited) const;

  SparseBitMatrix h_;
  StochasticShadowConfig cfg_;
  Graph gq_, gs_;
  std::vector<std::uint64_t> col_syn_;
  std::vector<std::uint64_t> qubit_patches_;
  /// Shadow syndrome -> (closeness, least-closeness error, first found).
  std::map<std::uint64_t, std::pair<std::size_t, std::uint64_t>> shadow_;
};

std::uint64_t to_mask(const BitVector& v);
BitVector from_mask(std::uint64_t m, std::size_t length);

}  // namespace ssqec
