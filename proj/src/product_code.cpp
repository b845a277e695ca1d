#include "ssqec/product_code.hpp"

#include <bit>
#include <filesystem>
#include <fstream>
#include <limits>

#include "ssqec/errors.hpp"
#include "ssqec/matrix_io.hpp"

namespace ssqec {

// ------------------------------------------------------------------ Distance

std::string Distance::to_string() const {
  switch (kind_) {
    case Kind::finite: return std::to_string(value_);
    case Kind::infinite: return "inf";
    case Kind::unknown: break;
  }
  return "unknown";
}

nlohmann::json Distance::to_json() const {
  switch (kind_) {
    case Kind::finite: return value_;
    case Kind::infinite: return "inf";
    case Kind::unknown: break;
  }
  return nullptr;
}

Distance Distance::from_json(const nlohmann::json& j) {
  if (j.is_null()) return unknown();
  if (j.is_string() && j.get<std::string>() == "inf") return infinite();
  if (j.is_number_unsigned()) return of(j.get<std::size_t>());
  throw FormatError("distance: expected unsigned integer, \"inf\" or null");
}

Distance operator*(const Distance& a, const Distance& b) {
  if (a.is_infinite() || b.is_infinite()) return Distance::infinite();
  if (a.is_unknown() || b.is_unknown()) return Distance::unknown();
  return Distance::of(a.value() * b.value());
}

Distance min_distance(const std::vector<Distance>& ds) {
  Distance best = Distance::infinite();
  for (const auto& d : ds) {
    if (d.is_unknown()) return Distance::unknown();
    if (d.is_finite() && (!best.is_finite() || d.value() < best.value())) best = d;
  }
  return best;
}

// --------------------------------------------------------------------- seeds

Distance classical_distance(const SparseBitMatrix& h, std::size_t max_enum_dim) {
  const auto basis = kernel_basis(h);
  if (basis.empty()) return Distance::infinite();
  if (basis.size() > max_enum_dim) return Distance::unknown();
  const std::size_t words = (h.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> gens(basis.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (Index b : basis[i].support()) gens[i][b / 64] |= std::uint64_t{1} << (b % 64);
  }
  // Gray-code walk visits every nonzero codeword once.
  std::vector<std::uint64_t> cur(words, 0);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  const std::uint64_t total = std::uint64_t{1} << basis.size();
  for (std::uint64_t g = 1; g < total; ++g) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(g));
    std::size_t w = 0;
    for (std::size_t j = 0; j < words; ++j) {
      cur[j] ^= gens[flip][j];
      w += static_cast<std::size_t>(std::popcount(cur[j]));
    }
    best = std::min(best, w);
  }
  return Distance::of(best);
}

ClassicalSeed make_seed(SparseBitMatrix m, std::size_t max_enum_dim) {
  ClassicalSeed s;
  const std::size_t r = rank(m);
  s.n = m.cols();
  s.k = m.cols() - r;
  s.nt = m.rows();
  s.kt = m.rows() - r;
  s.d = classical_distance(m, max_enum_dim);
  s.dt = classical_distance(transpose(m), max_enum_dim);
  s.matrix = std::move(m);
  return s;
}

namespace {

SparseBitMatrix circulant(std::size_t L) {
  std::vector<std::vector<Index>> rows(L);
  for (std::size_t i = 0; i < L; ++i) {
    rows[i] = {static_cast<Index>(i)};
    const auto j = static_cast<Index>((i + 1) % L);
    if (j != i) rows[i].push_back(j);
  }
  return SparseBitMatrix(L, L, std::move(rows));
}

SparseBitMatrix repetition_check(std::size_t L) {
  std::vector<std::vector<Index>> rows(L - 1);
  for (std::size_t i = 0; i + 1 < L; ++i) rows[i] = {static_cast<Index>(i), static_cast<Index>(i + 1)};
  return SparseBitMatrix(L - 1, L, std::move(rows));
}

// (3,4)-regular parity checks of [16,4,6], [20,5,8] and [24,6,10] codes.
const std::vector<std::string> kLdpc16 = {
    "0001100000010010", "1000000011100000", "0010000001001001", "0001001000001001",
    "0000110010000010", "1100000000000110", "0100000100100100", "1000001011000000",
    "0010001000010100", "0000010100101000", "0000110100010000", "0111000000000001",
};
const std::vector<std::string> kLdpc20 = {
    "00101000000010001000", "10100000000010000010", "00000010100010000100", "00010000000000011001",
    "01000001000000100100", "00011000100100000000", "00100101000000010000", "00000000010001010001",
    "00000010001001001000", "10000000011000100000", "01000000101100000000", "10000110000000000010",
    "00001100000000000110", "00010000010101000000", "01000001000000100001",
};
const std::vector<std::string> kLdpc24 = {
    "001000010000000000000110", "100010000000010010000000", "000000000100010000001100",
    "000000000001010100000010", "000000001011000000000001", "001100000000100000010000",
    "101000010000000000100000", "000001100000000010000010", "100000000010001001000000",
    "010100000000000000000101", "000100000100001001000000", "000000101000100000001000",
    "000000001000000110000001", "000001000001100000010000", "010010110000000000000000",
    "000000000000000001111000", "010001000010000100000000", "000010000100001000100000",
};

}  // namespace

SeedTriple seeds_from_matrices(SparseBitMatrix a, SparseBitMatrix b, SparseBitMatrix c) {
  return {make_seed(std::move(a)), make_seed(std::move(b)), make_seed(std::move(c))};
}

SeedTriple toric_seeds(std::size_t L) {
  if (L < 2) throw std::invalid_argument("toric_seeds: L must be at least 2");
  return seeds_from_matrices(circulant(L), circulant(L), circulant(L));
}

SeedTriple surface_seeds(std::size_t L) {
  if (L < 2) throw std::invalid_argument("surface_seeds: L must be at least 2");
  return seeds_from_matrices(repetition_check(L), repetition_check(L), transpose(repetition_check(L)));
}

SeedTriple table_seeds(std::size_t row) {
  const std::vector<std::string>* a = nullptr;
  std::size_t L = 0;
  switch (row) {
    case 1: a = &kLdpc16, L = 6; break;
    case 2: a = &kLdpc20, L = 8; break;
    case 3: a = &kLdpc24, L = 10; break;
    default: throw std::invalid_argument("table_seeds: row must be 1, 2 or 3");
  }
  return seeds_from_matrices(SparseBitMatrix::from_strings(*a), repetition_check(L),
                             transpose(repetition_check(L)));
}

// ------------------------------------------------------------- chain complex

ChainComplex3 build_complex(const SeedTriple& seeds) {
  const auto& A = seeds.a.matrix;
  const auto& B = seeds.b.matrix;
  const auto& C = seeds.c.matrix;
  const std::size_t na = A.cols(), ma = A.rows();
  const std::size_t nb = B.cols(), mb = B.rows();
  const std::size_t nc = C.cols(), mc = C.rows();
  auto I = [](std::size_t n) { return SparseBitMatrix::identity(n); };
  auto Z = [](std::size_t r, std::size_t c) { return SparseBitMatrix::zeros(r, c); };

  ChainComplex3 cc;
  cc.c1_blocks = {ma * nb * nc, na * mb * nc, na * nb * mc};
  cc.c2_blocks = {ma * mb * nc, ma * nb * mc, na * mb * mc};
  cc.dims = {na * nb * nc, cc.c1_blocks[0] + cc.c1_blocks[1] + cc.c1_blocks[2],
             cc.c2_blocks[0] + cc.c2_blocks[1] + cc.c2_blocks[2], ma * mb * mc};

  cc.delta0 = stack_rows({kron(A, I(nb), I(nc)), kron(I(na), B, I(nc)), kron(I(na), I(nb), C)});
  const auto& [x1, x2, x3] = cc.c1_blocks;
  const auto& [y1, y2, y3] = cc.c2_blocks;
  cc.delta1 = block({
      {kron(I(ma), B, I(nc)), kron(A, I(mb), I(nc)), Z(y1, x3)},
      {kron(I(ma), I(nb), C), Z(y2, x2), kron(A, I(nb), I(mc))},
      {Z(y3, x1), kron(I(na), I(mb), C), kron(I(na), B, I(mc))},
  });
  cc.delta2 = stack_cols({kron(I(ma), I(mb), C), kron(I(ma), B, I(mc)), kron(A, I(mb), I(mc))});

  if (!multiply(cc.delta1, cc.delta0).is_zero() || !multiply(cc.delta2, cc.delta1).is_zero()) {
    throw ConsistencyError("build_complex: chain condition violated");
  }
  return cc;
}

// ------------------------------------------------------------------ homology

std::vector<BitVector> quotient_basis(const SparseBitMatrix& a, const SparseBitMatrix& span_rows) {
  if (span_rows.cols() != a.cols()) throw DimensionError("quotient_basis: length mismatch");
  Gf2Basis basis(a.cols());
  for (std::size_t r = 0; r < span_rows.rows(); ++r) basis.insert(span_rows.row_vector(r));
  std::vector<BitVector> out;
  for (auto& v : kernel_basis(a)) {
    if (basis.insert(v)) out.push_back(std::move(v));
  }
  return out;
}

HomologyGenerators homology_generators(const ChainComplex3& cc) {
  const std::size_t n2 = cc.dims[2];
  auto fm_cols = quotient_basis(cc.delta2, transpose(cc.delta1));
  auto lm_rows = quotient_basis(transpose(cc.delta1), cc.delta2);
  if (fm_cols.size() != lm_rows.size()) {
    throw ConsistencyError("homology_generators: homology and cohomology dimensions differ");
  }
  HomologyGenerators h{from_row_vectors(lm_rows, n2), from_col_vectors(fm_cols, n2)};
  if (rank(multiply(h.lm, h.fm)) != fm_cols.size()) {
    throw ConsistencyError("homology_generators: pairing matrix is not full rank");
  }
  return h;
}

ProductCode derive_code(const ChainComplex3& cc, const SeedTriple& seeds) {
  if (!multiply(cc.delta1, cc.delta0).is_zero() || !multiply(cc.delta2, cc.delta1).is_zero()) {
    throw ConsistencyError("derive_code: chain condition violated");
  }
  ProductCode code;
  code.seeds = seeds;
  code.complex = cc;
  code.hx = cc.delta1;
  code.hz = transpose(cc.delta0);
  code.meta = cc.delta2;

  const auto& a = seeds.a;
  const auto& b = seeds.b;
  const auto& c = seeds.c;
  auto& p = code.params;
  p.n = a.nt * b.n * c.n + a.n * b.nt * c.n + a.n * b.n * c.nt;
  if (p.n != cc.dims[1]) throw ConsistencyError("derive_code: n formula disagrees with dim C1");

  const std::size_t rank_hx = rank(code.hx);
  const std::size_t rank_hz = rank(code.hz);
  const std::size_t k_rank = p.n - rank_hx - rank_hz;
  const std::size_t k_formula = a.kt * b.k * c.k + a.k * b.kt * c.k + a.k * b.k * c.kt;
  if (k_formula != k_rank) {
    throw ConsistencyError("derive_code: k formula gives " + std::to_string(k_formula) +
                           " but ranks give " + std::to_string(k_rank));
  }
  p.k = k_rank;

  const std::size_t km = cc.dims[2] - rank(code.meta) - rank_hx;
  const std::size_t km_formula = a.kt * b.kt * c.k + a.kt * b.k * c.kt + a.k * b.kt * c.kt;
  if (km != km_formula) throw ConsistencyError("derive_code: metacode homology dimension mismatch");
  p.km = km;

  if (p.k == 0) {
    p.dx = p.dz = Distance::infinite();
  } else {
    p.dx = min_distance({b.d * c.d, a.d * c.d, a.d * b.d});
    p.dz = min_distance({a.dt, b.dt, c.dt});
  }
  p.dss = km == 0 ? Distance::infinite() : min_distance({a.d, b.d, c.d});

  auto h = homology_generators(cc);
  if (h.lm.rows() != km) throw ConsistencyError("derive_code: wrong number of homology generators");
  code.lm = std::move(h.lm);
  code.fm = std::move(h.fm);
  code.lx = from_row_vectors(quotient_basis(code.hz, code.hx), p.n);
  if (code.lx.rows() != p.k) throw ConsistencyError("derive_code: wrong number of logical operators");
  return code;
}

ProductCode build_code(const SeedTriple& seeds) { return derive_code(build_complex(seeds), seeds); }

DegreeReport ldpc_degree_bounds(const ChainComplex3& cc, const SeedTriple& seeds) {
  const std::size_t ca = seeds.a.matrix.max_col_weight(), ra = seeds.a.matrix.max_row_weight();
  const std::size_t cb = seeds.b.matrix.max_col_weight(), rb = seeds.b.matrix.max_row_weight();
  const std::size_t cw = seeds.c.matrix.max_col_weight(), rw = seeds.c.matrix.max_row_weight();
  DegreeReport rep;
  const SparseBitMatrix* ds[3] = {&cc.delta0, &cc.delta1, &cc.delta2};
  for (int i = 0; i < 3; ++i) {
    rep.col_weight[i] = ds[i]->max_col_weight();
    rep.row_weight[i] = ds[i]->max_row_weight();
  }
  rep.col_bound = {ca + cb + cw, std::max({ca + cb, ca + cw, cb + cw}), std::max({ca, cb, cw})};
  rep.row_bound = {std::max({ra, rb, rw}), std::max({ra + rb, ra + rw, rb + rw}), ra + rb + rw};
  for (int i = 0; i < 3; ++i) {
    if (rep.col_weight[i] > rep.col_bound[i] || rep.row_weight[i] > rep.row_bound[i]) {
      throw ConsistencyError("ldpc_degree_bounds: delta" + std::to_string(i) + " exceeds its weight bound");
    }
  }
  return rep;
}

// ------------------------------------------------------------------ file I/O

namespace {

std::size_t parse_size(const std::string& s, const std::string& spec) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw std::invalid_argument("bad seed spec '" + spec + "'");
  return v;
}

SparseBitMatrix seed_matrix_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (j.is_object() && j.contains("alist")) {
    std::filesystem::path p = j.at("alist").get<std::string>();
    if (p.is_relative()) p = base / p;
    return load_alist(p.string());
  }
  return matrix_from_json(j);
}

nlohmann::json seed_to_json(const ClassicalSeed& s) {
  return {{"matrix", matrix_to_json(s.matrix)}, {"n", s.n}, {"k", s.k}, {"d", s.d.to_json()},
          {"nt", s.nt}, {"kt", s.kt}, {"dt", s.dt.to_json()}};
}

}  // namespace

SeedTriple resolve_seeds(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string rest = spec.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad seed spec '" + spec + "'");
    const std::string family = rest.substr(0, colon);
    const std::size_t arg = parse_size(rest.substr(colon + 1), spec);
    if (family == "toric") return toric_seeds(arg);
    if (family == "surface") return surface_seeds(arg);
    if (family == "table1") return table_seeds(arg);
    throw std::invalid_argument("unknown builtin seed family '" + family + "'");
  }
  std::ifstream is(spec);
  if (!is) throw FormatError("cannot open seed file " + spec);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(spec + ": " + e.what());
  }
  const auto base = std::filesystem::path(spec).parent_path();
  for (const char* key : {"a", "b", "c"}) {
    if (!j.contains(key)) throw FormatError(spec + ": missing seed '" + key + "'");
  }
  return seeds_from_matrices(seed_matrix_from_json(j["a"], base), seed_matrix_from_json(j["b"], base),
                             seed_matrix_from_json(j["c"], base));
}

nlohmann::json code_to_json(const ProductCode& code) {
  const auto& p = code.params;
  return {
      {"schema_version", 1},
      {"seeds", {{"a", seed_to_json(code.seeds.a)}, {"b", seed_to_json(code.seeds.b)}, {"c", seed_to_json(code.seeds.c)}}},
      {"params",
       {{"n", p.n}, {"k", p.k}, {"dx", p.dx.to_json()}, {"dz", p.dz.to_json()}, {"dss", p.dss.to_json()}, {"km", p.km}}},
      {"hx", matrix_to_json(code.hx)},
      {"hz", matrix_to_json(code.hz)},
      {"meta", matrix_to_json(code.meta)},
      {"lm", matrix_to_json(code.lm)},
      {"fm", matrix_to_json(code.fm)},
  };
}

ProductCode code_from_json(const nlohmann::json& j) {
  SeedTriple seeds;
  try {
    const auto& s = j.at("seeds");
    seeds = seeds_from_matrices(matrix_from_json(s.at("a").at("matrix")), matrix_from_json(s.at("b").at("matrix")),
                                matrix_from_json(s.at("c").at("matrix")));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("code json: ") + e.what());
  }
  ProductCode code = build_code(seeds);
  // Stored matrices are redundant; if present they must agree with the rebuild.
  const std::pair<const char*, const SparseBitMatrix*> stored[] = {
      {"hx", &code.hx}, {"hz", &code.hz}, {"meta", &code.meta}};
  for (const auto& [key, m] : stored) {
    if (j.contains(key) && !(matrix_from_json(j[key]) == *m)) {
      throw ConsistencyError(std::string("code json: stored ") + key + " does not match the seeds");
    }
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (p.value("n", code.params.n) != code.params.n || p.value("k", code.params.k) != code.params.k) {
      throw ConsistencyError("code json: stored parameters do not match the seeds");
    }
  }
  return code;
}

ProductCode load_code(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open code file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return code_from_json(j);
}

}  // namespace ssqec
