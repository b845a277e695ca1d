#include "ssqec/confinement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "ssqec/errors.hpp"

namespace ssqec {

namespace {

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

std::size_t sat_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = n - k + i;
    if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    r = r * num / i;
  }
  return r;
}

struct Enumerator {
  const SyndromeMap& map;
  const std::function<bool(const ErrorPattern&, const BitVector&)>& visit;
  ErrorPattern cur;

  bool rec(std::size_t remaining, Index start, const BitVector& syn) {
    if (remaining == 0) return visit(cur, syn);
    const std::size_t opts = map.options();
    for (Index q = start; q + remaining <= map.num_qubits; ++q) {
      for (std::uint8_t op = 0; op < opts; ++op) {
        cur.push_back({q, op});
        const bool go = rec(remaining - 1, q + 1, syn ^ map.term_syndromes[q][op]);
        cur.pop_back();
        if (!go) return false;
      }
    }
    return true;
  }
};

// Pauli terms as (x, z) bits: X = 0, Y = 1, Z = 2.
std::uint8_t op_bits(std::uint8_t op) { return op == 0 ? 0b10 : op == 1 ? 0b11 : 0b01; }
std::uint8_t bits_op(std::uint8_t b) { return b == 0b10 ? 0 : b == 0b11 ? 1 : 2; }

ErrorPattern multiply(const ErrorPattern& a, const ErrorPattern& b, ErrorModel model) {
  std::map<Index, std::uint8_t> acc;
  for (const auto* p : {&a, &b}) {
    for (const auto& t : *p) acc[t.qubit] ^= model == ErrorModel::z_only ? 1 : op_bits(t.op);
  }
  ErrorPattern out;
  for (const auto& [q, bits] : acc) {
    if (bits == 0) continue;
    out.push_back({q, model == ErrorModel::z_only ? std::uint8_t{0} : bits_op(bits)});
  }
  return out;
}

void check_patterns(const SyndromeMap& map, std::size_t w, std::size_t limit) {
  const std::size_t count = pattern_count(map, w);
  if (count > limit) {
    throw EnumerationInfeasible("enumerating all errors of weight <= " + std::to_string(w) + " needs " +
                                (count == std::numeric_limits<std::size_t>::max() ? std::string("too many")
                                                                                  : std::to_string(count)) +
                                " patterns (limit " + std::to_string(limit) + ")");
  }
}

}  // namespace

// ------------------------------------------------------------ error models

std::string to_string(const ErrorPattern& e, ErrorModel model) {
  std::ostringstream os;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) os << ' ';
    os << (model == ErrorModel::z_only ? 'Z' : "XYZ"[e[i].op]) << e[i].qubit;
  }
  return os.str();
}

SyndromeMap SyndromeMap::z_errors(const SparseBitMatrix& hx) {
  SyndromeMap m;
  m.model = ErrorModel::z_only;
  m.num_qubits = hx.cols();
  m.num_checks = hx.rows();
  m.term_syndromes.resize(hx.cols());
  for (std::size_t q = 0; q < hx.cols(); ++q) m.term_syndromes[q].push_back(hx.col_vector(q));
  return m;
}

SyndromeMap SyndromeMap::pauli_errors(const SparseBitMatrix& hx, const SparseBitMatrix& hz) {
  if (hx.cols() != hz.cols()) throw DimensionError("pauli_errors: hx and hz have different lengths");
  SyndromeMap m;
  m.model = ErrorModel::pauli;
  m.num_qubits = hx.cols();
  m.num_checks = hz.rows() + hx.rows();
  m.term_syndromes.resize(hx.cols());
  for (std::size_t q = 0; q < hx.cols(); ++q) {
    std::vector<Index> xs(hz.col(q).begin(), hz.col(q).end());
    std::vector<Index> zs;
    for (Index r : hx.col(q)) zs.push_back(static_cast<Index>(hz.rows() + r));
    BitVector x(m.num_checks, xs), z(m.num_checks, zs);
    m.term_syndromes[q] = {x, x ^ z, z};
  }
  return m;
}

SyndromeMap SyndromeMap::for_code(const ProductCode& code, bool restrict_to_z) {
  return restrict_to_z ? z_errors(code.hx) : pauli_errors(code.hx, code.hz);
}

BitVector SyndromeMap::syndrome(const ErrorPattern& e) const {
  BitVector s(num_checks);
  for (const auto& t : e) {
    if (t.qubit >= num_qubits || t.op >= options()) throw DimensionError("syndrome: error term out of range");
    s ^= term_syndromes[t.qubit][t.op];
  }
  return s;
}

ErrorPattern z_pattern(const BitVector& e) {
  ErrorPattern p;
  for (Index q : e.support()) p.push_back({q, 0});
  return p;
}

BitVector z_support(const ErrorPattern& e, std::size_t n) {
  std::vector<Index> s;
  for (const auto& t : e) s.push_back(t.qubit);
  std::sort(s.begin(), s.end());
  return BitVector(n, s);
}

std::size_t pattern_count(const SyndromeMap& map, std::size_t w) {
  std::size_t total = 0, power = 1;
  for (std::size_t k = 0; k <= w && k <= map.num_qubits; ++k) {
    total = sat_add(total, sat_mul(binom(map.num_qubits, k), power));
    power = sat_mul(power, map.options());
  }
  return total;
}

void enumerate_patterns(const SyndromeMap& map, std::size_t max_weight, std::size_t limit,
                        const std::function<bool(const ErrorPattern&, const BitVector&)>& visit) {
  check_patterns(map, max_weight, limit);
  Enumerator en{map, visit, {}};
  const BitVector zero(map.num_checks);
  for (std::size_t w = 0; w <= max_weight && w <= map.num_qubits; ++w) {
    if (!en.rec(w, 0, zero)) return;
  }
}

const SyndromeTable::Entry* SyndromeTable::find(const BitVector& s) const {
  auto it = index.find(s);
  return it == index.end() ? nullptr : &entries[it->second];
}

SyndromeTable build_syndrome_table(const SyndromeMap& map, std::size_t max_weight, std::size_t limit) {
  SyndromeTable t;
  t.max_weight = max_weight;
  enumerate_patterns(map, max_weight, limit, [&](const ErrorPattern& e, const BitVector& s) {
    ++t.patterns_visited;
    if (t.index.emplace(s, t.entries.size()).second) t.entries.push_back({s, e});
    return true;
  });
  return t;
}

// ---------------------------------------------------------- reduced weight

std::size_t reduced_weight(const SyndromeMap& map, const ErrorPattern& e, std::size_t cap) {
  const BitVector target = map.syndrome(e);
  const std::size_t w = std::min(e.size(), cap);
  std::optional<std::size_t> found;
  enumerate_patterns(map, w, kDefaultEnumerationLimit, [&](const ErrorPattern& c, const BitVector& s) {
    if (s == target) {
      found = c.size();
      return false;
    }
    return true;
  });
  if (!found) {
    throw EnumerationInfeasible("reduced weight exceeds the enumeration cap " + std::to_string(cap));
  }
  return *found;
}

std::size_t reduced_weight(const SparseBitMatrix& h, const BitVector& e, std::size_t cap) {
  if (e.length() != h.cols()) throw DimensionError("reduced_weight: error length does not match H");
  return reduced_weight(SyndromeMap::z_errors(h), z_pattern(e), cap);
}

// ------------------------------------------------------------- confinement

ConfinementFunction ConfinementFunction::parse(const std::string& s) {
  if (s == "cubic") return cubic();
  if (s == "quadratic") return quadratic();
  if (s == "zero") return zero();
  if (s.rfind("linear:", 0) == 0) {
    try {
      return linear(std::stod(s.substr(7)));
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("unknown confinement function '" + s + "' (expected cubic, quadratic, linear:K or zero)");
}

bool ConfinementFunction::bounds(std::size_t x, std::size_t r) const {
  using u128 = unsigned __int128;
  switch (kind) {
    case Kind::cubic: return u128{x} * x * x >= u128{2} * r;
    case Kind::quadratic: return u128{x} * x >= u128{4} * r;
    case Kind::linear: return kappa * static_cast<double>(x) >= static_cast<double>(r);
    case Kind::zero: return r == 0;
  }
  return false;
}

double ConfinementFunction::value(std::size_t x) const {
  const double d = static_cast<double>(x);
  switch (kind) {
    case Kind::cubic: return d * d * d / 2.0;
    case Kind::quadratic: return d * d / 4.0;
    case Kind::linear: return kappa * d;
    case Kind::zero: return 0.0;
  }
  return 0.0;
}

std::string ConfinementFunction::to_string() const {
  switch (kind) {
    case Kind::cubic: return "x^3/2";
    case Kind::quadratic: return "x^2/4";
    case Kind::linear: {
      std::ostringstream os;
      os << kappa << "*x";
      return os.str();
    }
    case Kind::zero: return "0";
  }
  return "?";
}

ConfinementReport check_confinement(const SyndromeMap& map, std::size_t t, const ConfinementFunction& f,
                                    std::size_t limit) {
  ConfinementReport rep;
  rep.t = t;
  rep.f = f;
  rep.model = map.model;
  rep.max_error_weight = std::min(t, map.num_qubits);
  const auto table = build_syndrome_table(map, t, limit);
  rep.patterns_checked = table.patterns_visited;
  rep.syndromes_checked = table.entries.size();
  rep.verified = true;
  double best_slack = std::numeric_limits<double>::infinity();
  for (const auto& e : table.entries) {
    const std::size_t x = e.syndrome.weight(), r = e.error.size();
    if (!f.bounds(x, r)) {
      rep.verified = false;
      rep.worst_case = ConfinementCase{e.error, x, r};
      break;
    }
    if (r == 0) continue;
    const double slack = f.value(x) - static_cast<double>(r);
    if (slack < best_slack) {
      best_slack = slack;
      rep.worst_case = ConfinementCase{e.error, x, r};
    }
  }
  return rep;
}

ConfinementReport check_confinement(const ProductCode& code, std::size_t t, const ConfinementFunction& f,
                                    bool restrict_to_z, std::size_t limit) {
  return check_confinement(SyndromeMap::for_code(code, restrict_to_z), t, f, limit);
}

nlohmann::json to_json(const ConfinementReport& r) {
  nlohmann::json j = {{"schema_version", 1},
                      {"t", r.t},
                      {"f", r.f.to_string()},
                      {"errors", r.model == ErrorModel::z_only ? "Z" : "pauli"},
                      {"verified", r.verified},
                      {"max_error_weight", r.max_error_weight},
                      {"patterns_checked", r.patterns_checked},
                      {"syndromes_checked", r.syndromes_checked}};
  if (r.worst_case) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : r.worst_case->error) terms.push_back(to_string({t}, r.model));
    j["worst_case"] = {{"error", terms},
                       {"syndrome_weight", r.worst_case->syndrome_weight},
                       {"reduced_weight", r.worst_case->reduced_weight}};
  } else {
    j["worst_case"] = nullptr;
  }
  return j;
}

SoundnessReport check_soundness_partial(const SyndromeMap& map, std::size_t t, const ConfinementFunction& f,
                                        std::size_t w_max, std::size_t limit) {
  SoundnessReport rep;
  rep.t = t;
  rep.w_max = w_max;
  rep.f = f;
  const auto table = build_syndrome_table(map, w_max, limit);
  rep.patterns_checked = table.patterns_visited;
  for (const auto& e : table.entries) {
    const std::size_t x = e.syndrome.weight();
    if (x > t) continue;
    if (!f.bounds(x, e.error.size())) {
      rep.counterexample_found = true;
      rep.counterexample = ConfinementCase{e.error, x, e.error.size()};
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------- Shadow decoder

ShadowSet build_shadow(const SyndromeMap& map, std::size_t t, std::size_t limit) {
  return ShadowSet{t, build_syndrome_table(map, t, limit)};
}

ShadowDecodeResult shadow_decode(const ShadowSet& shadow, const BitVector& observed) {
  const SyndromeTable::Entry* best = nullptr;
  BitVector best_r;
  for (const auto& e : shadow.table.entries) {
    if (e.syndrome.length() != observed.length()) throw DimensionError("shadow_decode: syndrome length mismatch");
    BitVector r = observed ^ e.syndrome;
    if (!best || r.weight() < best_r.weight() || (r.weight() == best_r.weight() && r < best_r)) {
      best = &e;
      best_r = std::move(r);
    }
  }
  if (!best) throw std::logic_error("shadow_decode: empty Shadow");
  return {best_r, best->error};
}

ResidualBoundReport check_residual_bound(const SyndromeMap& map, std::size_t shadow_t, const ConfinementFunction& f,
                                         std::size_t max_error_weight, std::size_t max_syndrome_error) {
  ResidualBoundReport rep;
  const auto shadow = build_shadow(map, shadow_t);
  // Residuals have weight <= |e| + |e_r|, so this table gives exact reduced weights.
  const auto table = build_syndrome_table(map, max_error_weight + shadow_t);
  const SyndromeMap check_bits = [&] {
    SyndromeMap m;
    m.num_qubits = map.num_checks;
    m.num_checks = map.num_checks;
    m.term_syndromes.resize(map.num_checks);
    for (std::size_t i = 0; i < map.num_checks; ++i) m.term_syndromes[i] = {BitVector(map.num_checks, {static_cast<Index>(i)})};
    return m;
  }();
  enumerate_patterns(map, max_error_weight, kDefaultEnumerationLimit, [&](const ErrorPattern& e, const BitVector& syn_e) {
    enumerate_patterns(check_bits, max_syndrome_error, kDefaultEnumerationLimit,
                       [&](const ErrorPattern&, const BitVector& s_e) {
                         ++rep.cases;
                         const auto dec = shadow_decode(shadow, syn_e ^ s_e);
                         const auto residual = multiply(e, dec.correction, map.model);
                         const auto* entry = table.find(map.syndrome(residual));
                         if (!entry) throw std::logic_error("check_residual_bound: residual outside the table");
                         const std::size_t red = entry->error.size();
                         rep.worst_reduced_weight = std::max(rep.worst_reduced_weight, red);
                         if (!f.bounds(2 * s_e.weight(), red)) {
                           if (rep.violations++ == 0) rep.first_violation = std::pair{e, s_e};
                         }
                         return true;
                       });
    return true;
  });
  return rep;
}

// ------------------------------------------------------- graphs, closeness

bool Graph::adjacent(Index a, Index b) const { return std::binary_search(adj[a].begin(), adj[a].end(), b); }

Graph graph_from_edges(std::size_t n, const std::vector<std::pair<Index, Index>>& edges) {
  Graph g;
  g.adj.resize(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw DimensionError("graph_from_edges: node out of range");
    if (a == b) continue;
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& l : g.adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return g;
}

Graph qubit_graph(const SparseBitMatrix& h) {
  std::vector<std::pair<Index, Index>> edges;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    const auto row = h.row(r);
    for (std::size_t i = 0; i < row.size(); ++i)
      for (std::size_t j = i + 1; j < row.size(); ++j) edges.emplace_back(row[i], row[j]);
  }
  return graph_from_edges(h.cols(), edges);
}

Graph syndrome_graph(const SparseBitMatrix& h) {
  std::vector<std::pair<Index, Index>> edges;
  for (std::size_t c = 0; c < h.cols(); ++c) {
    const auto col = h.col(c);
    for (std::size_t i = 0; i < col.size(); ++i)
      for (std::size_t j = i + 1; j < col.size(); ++j) edges.emplace_back(col[i], col[j]);
  }
  return graph_from_edges(h.rows(), edges);
}

bool is_connected(const Graph& g) {
  if (g.size() == 0) return true;
  std::vector<Index> all(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) all[i] = static_cast<Index>(i);
  return induced_components(g, all).size() == 1;
}

std::vector<std::vector<Index>> induced_components(const Graph& g, std::span<const Index> nodes) {
  std::vector<char> in(g.size(), 0), seen(g.size(), 0);
  for (Index v : nodes) in[v] = 1;
  std::vector<std::vector<Index>> comps;
  std::vector<Index> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  for (Index s : sorted) {
    if (seen[s]) continue;
    std::vector<Index> comp{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (Index u : g.adj[comp[i]]) {
        if (in[u] && !seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

namespace {

struct Esu {
  const Graph& g;
  std::size_t k, limit, count = 0;
  const std::function<bool(std::span<const Index>)>& visit;
  std::vector<Index> sub;
  std::vector<int> blocked;

  void add(Index w) {
    sub.push_back(w);
    ++blocked[w];
    for (Index u : g.adj[w]) ++blocked[u];
  }
  void remove(Index w) {
    sub.pop_back();
    --blocked[w];
    for (Index u : g.adj[w]) --blocked[u];
  }

  bool extend(std::vector<Index> ext, Index root) {
    if (sub.size() == k) {
      if (++count > limit) throw EnumerationInfeasible("patch enumeration exceeded " + std::to_string(limit) + " sets");
      return visit(sub);
    }
    while (!ext.empty()) {
      const Index w = ext.back();
      ext.pop_back();
      std::vector<Index> next = ext;
      for (Index u : g.adj[w]) {
        if (u > root && blocked[u] == 0) next.push_back(u);
      }
      add(w);
      const bool go = extend(std::move(next), root);
      remove(w);
      if (!go) return false;
    }
    return true;
  }
};

void require_closeness_domain(const Graph& g, std::span<const Index> e, std::size_t beta) {
  if (beta < 1 || beta > g.size()) throw std::invalid_argument("closeness: beta must lie in [1, |G|]");
  if (!is_connected(g)) throw std::invalid_argument("closeness: graph is not connected");
  for (Index v : e) {
    if (v >= g.size()) throw DimensionError("closeness: node out of range");
  }
}

}  // namespace

void for_each_patch(const Graph& g, std::size_t k, std::size_t limit,
                    const std::function<bool(std::span<const Index>)>& visit) {
  if (k == 0 || k > g.size()) return;
  Esu esu{g, k, limit, 0, visit, {}, std::vector<int>(g.size(), 0)};
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Index root = static_cast<Index>(v);
    std::vector<Index> ext;
    for (Index u : g.adj[v]) {
      if (u > root) ext.push_back(u);
    }
    esu.add(root);
    const bool go = esu.extend(std::move(ext), root);
    esu.remove(root);
    if (!go) return;
  }
}

std::size_t closeness(const Graph& g, std::span<const Index> e, std::size_t beta, std::size_t limit) {
  require_closeness_domain(g, e, beta);
  std::vector<char> in(g.size(), 0);
  std::size_t size = 0;
  for (Index v : e) {
    if (!in[v]) ++size;
    in[v] = 1;
  }
  if (size == 0) return 0;
  const std::size_t ceiling = std::min(size, beta);
  std::size_t best = 0;
  for_each_patch(g, beta, limit, [&](std::span<const Index> k) {
    std::size_t c = 0;
    for (Index v : k) c += in[v];
    best = std::max(best, c);
    return best < ceiling;
  });
  return best;
}

std::size_t closeness_steiner(const Graph& g, std::span<const Index> e, std::size_t beta) {
  require_closeness_domain(g, e, beta);
  std::vector<Index> term(e.begin(), e.end());
  std::sort(term.begin(), term.end());
  term.erase(std::unique(term.begin(), term.end()), term.end());
  const std::size_t k = term.size(), n = g.size();
  if (k == 0) return 0;
  if (k > 20 || n > 64) throw EnumerationInfeasible("closeness_steiner: instance too large");

  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<Index> q;
    dist[s][s] = 0;
    q.push(static_cast<Index>(s));
    while (!q.empty()) {
      const Index u = q.front();
      q.pop();
      for (Index w : g.adj[u]) {
        if (dist[s][w] < 0) {
          dist[s][w] = dist[s][u] + 1;
          q.push(w);
        }
      }
    }
  }
  // dp[S][v]: fewest edges in a tree spanning terminals S and node v.
  const std::size_t full = std::size_t{1} << k;
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<int> dp(full * n, inf);
  std::size_t best = 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t v = 0; v < n; ++v) dp[(std::size_t{1} << i) * n + v] = dist[term[i]][v];
  for (std::size_t s = 1; s < full; ++s) {
    int* row = &dp[s * n];
    if (std::has_single_bit(s)) continue;
    const std::size_t low = s & (~s + 1);
    for (std::size_t sub = (s - 1) & s; sub > 0; sub = (sub - 1) & s) {
      if (!(sub & low)) continue;
      const int* a = &dp[sub * n];
      const int* b = &dp[(s ^ sub) * n];
      for (std::size_t v = 0; v < n; ++v) row[v] = std::min(row[v], a[v] + b[v]);
    }
    std::vector<int> relaxed(row, row + n);
    for (std::size_t u = 0; u < n; ++u) {
      if (row[u] >= inf) continue;
      for (std::size_t v = 0; v < n; ++v) relaxed[v] = std::min(relaxed[v], row[u] + dist[u][v]);
    }
    std::copy(relaxed.begin(), relaxed.end(), row);
    const std::size_t nodes = static_cast<std::size_t>(row[term[std::countr_zero(s)]]) + 1;
    if (nodes <= beta) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(s)));
  }
  return std::min(best, beta);
}

// ------------------------------------------------ Stochastic Shadow decoder

std::uint64_t to_mask(const BitVector& v) {
  if (v.length() > 64) throw DimensionError("to_mask: vector longer than 64");
  std::uint64_t m = 0;
  for (Index i : v.support()) m |= std::uint64_t{1} << i;
  return m;
}

BitVector from_mask(std::uint64_t m, std::size_t length) {
  std::vector<Index> s;
  while (m) {
    s.push_back(static_cast<Index>(std::countr_zero(m)));
    m &= m - 1;
  }
  return BitVector(length, s);
}

namespace {

std::vector<Index> mask_nodes(std::uint64_t m) {
  std::vector<Index> s;
  while (m) {
    s.push_back(static_cast<Index>(std::countr_zero(m)));
    m &= m - 1;
  }
  return s;
}

// Lexicographic order of sorted index sequences.
bool mask_less(std::uint64_t a, std::uint64_t b) { return mask_nodes(a) < mask_nodes(b); }

}  // namespace

StochasticShadowDecoder::StochasticShadowDecoder(const SparseBitMatrix& h, StochasticShadowConfig cfg)
    : h_(h), cfg_(cfg), gq_(qubit_graph(h)), gs_(syndrome_graph(h)) {
  if (h.cols() > 64 || h.rows() > 64) {
    throw EnumerationInfeasible("stochastic Shadow decoder supports at most 64 qubits and 64 checks");
  }
  if (!(cfg_.alpha > 0.0 && cfg_.alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (cfg_.beta < 1 || cfg_.beta > gq_.size()) throw std::invalid_argument("beta must lie in [1, n]");
  if (cfg_.gamma < 1) throw std::invalid_argument("gamma must be positive");
  if (!is_connected(gq_) || !is_connected(gs_)) throw std::invalid_argument("qubit and syndrome graphs must be connected");
  cfg_.gamma = std::min(cfg_.gamma, gs_.size());

  col_syn_.resize(h.cols());
  for (std::size_t c = 0; c < h.cols(); ++c) col_syn_[c] = to_mask(h.col_vector(c));
  for_each_patch(gq_, cfg_.beta, cfg_.max_patches, [&](std::span<const Index> k) {
    std::uint64_t m = 0;
    for (Index v : k) m |= std::uint64_t{1} << v;
    qubit_patches_.push_back(m);
    return true;
  });

  const auto bound = static_cast<std::size_t>(std::floor(cfg_.alpha * static_cast<double>(cfg_.beta) + 1e-9));
  std::size_t visited = 0;
  search(0, 0, bound, [&](std::uint64_t e) {
    const std::uint64_t s = syndrome_of(e);
    const std::size_t c = qubit_closeness(e);
    auto it = shadow_.find(s);
    if (it == shadow_.end()) shadow_.emplace(s, std::pair{c, e});
    else if (c < it->second.first) it->second = {c, e};
    return true;
  }, visited);
}

std::uint64_t StochasticShadowDecoder::syndrome_of(std::uint64_t e) const {
  std::uint64_t s = 0;
  for (Index q : mask_nodes(e)) s ^= col_syn_[q];
  return s;
}

std::size_t StochasticShadowDecoder::qubit_closeness(std::uint64_t e) const {
  std::size_t best = 0;
  for (std::uint64_t k : qubit_patches_) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(k & e)));
  return best;
}

std::size_t StochasticShadowDecoder::syndrome_closeness(std::uint64_t s) const {
  const auto nodes = mask_nodes(s);
  if (nodes.size() <= 16) return closeness_steiner(gs_, nodes, cfg_.gamma);
  return closeness(gs_, nodes, cfg_.gamma, cfg_.max_patches);
}

void StochasticShadowDecoder::search(std::uint64_t e, Index next, std::size_t bound,
                                     const std::function<bool(std::uint64_t)>& visit, std::size_t& visited) const {
  // Closeness is monotone under inclusion, so supersets of a rejected set are skipped.
  std::vector<std::pair<std::uint64_t, Index>> stack{{e, next}};
  while (!stack.empty()) {
    auto [cur, from] = stack.back();
    stack.pop_back();
    if (++visited > cfg_.max_error_sets) {
      throw EnumerationInfeasible("error-set search exceeded " + std::to_string(cfg_.max_error_sets) + " sets");
    }
    if (!visit(cur)) return;
    for (std::size_t q = h_.cols(); q-- > from;) {
      const std::uint64_t cand = cur | (std::uint64_t{1} << q);
      if (qubit_closeness(cand) <= bound) stack.emplace_back(cand, static_cast<Index>(q + 1));
    }
  }
}

std::size_t StochasticShadowDecoder::reduced_qubit_closeness(std::uint64_t e) const {
  const std::uint64_t target = syndrome_of(e);
  const std::size_t own = qubit_closeness(e);
  for (std::size_t b = 0; b < own; ++b) {
    bool found = false;
    std::size_t visited = 0;
    search(0, 0, b, [&](std::uint64_t f) {
      found = syndrome_of(f) == target;
      return !found;
    }, visited);
    if (found) return b;
  }
  return own;
}

StochasticDecodeResult StochasticShadowDecoder::decode(const BitVector& observed) const {
  if (observed.length() != h_.rows()) throw DimensionError("stochastic decode: syndrome length mismatch");
  const std::uint64_t s = to_mask(observed);
  // Bounds: the largest connected piece of r (capped at gamma) fits in one
  // patch, and no patch holds more than min(|r|, gamma) nodes of r.
  struct Candidate {
    std::size_t lo, hi;
    std::uint64_t r;
  };
  std::vector<Candidate> cands;
  cands.reserve(shadow_.size());
  for (const auto& entry : shadow_) {
    const std::uint64_t r = s ^ entry.first;
    std::size_t lo = 0;
    if (r != 0) {
      const auto nodes = mask_nodes(r);
      for (const auto& comp : induced_components(gs_, nodes)) lo = std::max(lo, comp.size());
    }
    lo = std::min(lo, cfg_.gamma);
    cands.push_back({lo, std::min<std::size_t>(std::popcount(r), cfg_.gamma), r});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return a.hi != b.hi ? a.hi < b.hi : mask_less(a.r, b.r);
  });
  std::uint64_t best_r = 0;
  std::size_t best_c = std::numeric_limits<std::size_t>::max();
  for (const auto& [lo, hi, r] : cands) {
    if (lo > best_c || (lo == best_c && !mask_less(r, best_r))) continue;
    const std::size_t c = lo == hi ? lo : syndrome_closeness(r);
    if (c < best_c || (c == best_c && mask_less(r, best_r))) {
      best_c = c;
      best_r = r;
    }
  }
  const auto& rec = shadow_.at(s ^ best_r);
  return {from_mask(best_r, h_.rows()), from_mask(rec.second, h_.cols())};
}

}  // namespace ssqec
