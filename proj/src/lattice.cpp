#include "ssqec/lattice.hpp"

#include <algorithm>

namespace ssqec {

namespace {

int integer_coord(std::size_t i) { return 2 * static_cast<int>(i + 1); }
int half_coord(std::size_t a) { return 2 * static_cast<int>(a + 1) + 1; }

// 0-based seed index behind a doubled coordinate, on the shared integer line.
long line_index(int c) { return c % 2 == 0 ? c / 2 - 1 : (c - 3) / 2; }

// Length of the shortest run of consecutive integers covering `pts`.
std::size_t cover_length(std::vector<long> pts, std::size_t nu, LocalityKind kind) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return 0;
  if (kind == LocalityKind::euclidean || pts.size() == 1) return static_cast<std::size_t>(pts.back() - pts.front() + 1);
  long max_gap = static_cast<long>(nu) - (pts.back() - pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) max_gap = std::max(max_gap, pts[i] - pts[i - 1]);
  return nu - static_cast<std::size_t>(max_gap) + 1;
}

int coord(const LatticePoint& p, int axis) { return axis == 0 ? p.z : axis == 1 ? p.y : p.x; }

bool fits_box(const LatticePoint& centre, std::span<const Index> support, const LatticeCoords& lc, std::size_t rho,
              const std::array<LocalityKind, 3>& kinds) {
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<long> pts{line_index(coord(centre, axis))};
    for (Index q : support) pts.push_back(line_index(coord(lc.qubits[q], axis)));
    const std::size_t nu = std::max(lc.n[axis], lc.m[axis]);
    if (cover_length(pts, nu, kinds[axis]) > rho) return false;
  }
  return true;
}

}  // namespace

std::string to_string(QubitType t) {
  switch (t) {
    case QubitType::transverse: return "transverse";
    case QubitType::vertical: return "vertical";
    case QubitType::horizontal: return "horizontal";
  }
  return "?";
}

std::string to_string(XStabType t) {
  switch (t) {
    case XStabType::transverse_vertical: return "transverse_vertical";
    case XStabType::transverse_horizontal: return "transverse_horizontal";
    case XStabType::vertical_horizontal: return "vertical_horizontal";
  }
  return "?";
}

std::string to_string(LocalityKind k) { return k == LocalityKind::torus ? "torus" : "euclidean"; }

LatticeCoords embed(const ProductCode& code) {
  LatticeCoords lc;
  const ClassicalSeed* s[3] = {&code.seeds.a, &code.seeds.b, &code.seeds.c};
  for (int i = 0; i < 3; ++i) {
    lc.n[i] = s[i]->matrix.cols();
    lc.m[i] = s[i]->matrix.rows();
  }
  const auto [na, nb, nc] = lc.n;
  const auto [ma, mb, mc] = lc.m;

  for (std::size_t a = 0; a < ma; ++a)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < nc; ++k) {
        lc.qubits.push_back({half_coord(a), integer_coord(j), integer_coord(k)});
        lc.qubit_types.push_back(QubitType::transverse);
      }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t b = 0; b < mb; ++b)
      for (std::size_t k = 0; k < nc; ++k) {
        lc.qubits.push_back({integer_coord(i), half_coord(b), integer_coord(k)});
        lc.qubit_types.push_back(QubitType::vertical);
      }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t g = 0; g < mc; ++g) {
        lc.qubits.push_back({integer_coord(i), integer_coord(j), half_coord(g)});
        lc.qubit_types.push_back(QubitType::horizontal);
      }

  for (std::size_t a = 0; a < ma; ++a)
    for (std::size_t b = 0; b < mb; ++b)
      for (std::size_t k = 0; k < nc; ++k) {
        lc.xstabs.push_back({half_coord(a), half_coord(b), integer_coord(k)});
        lc.xstab_types.push_back(XStabType::transverse_vertical);
      }
  for (std::size_t a = 0; a < ma; ++a)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t g = 0; g < mc; ++g) {
        lc.xstabs.push_back({half_coord(a), integer_coord(j), half_coord(g)});
        lc.xstab_types.push_back(XStabType::transverse_horizontal);
      }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t b = 0; b < mb; ++b)
      for (std::size_t g = 0; g < mc; ++g) {
        lc.xstabs.push_back({integer_coord(i), half_coord(b), half_coord(g)});
        lc.xstab_types.push_back(XStabType::vertical_horizontal);
      }

  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < nc; ++k) lc.zstabs.push_back({integer_coord(i), integer_coord(j), integer_coord(k)});

  for (std::size_t a = 0; a < ma; ++a)
    for (std::size_t b = 0; b < mb; ++b)
      for (std::size_t g = 0; g < mc; ++g) lc.metachecks.push_back({half_coord(a), half_coord(b), half_coord(g)});
  return lc;
}

std::optional<std::pair<LatticeObject, Index>> LatticeCoords::locate(const LatticePoint& p) const {
  const int c[3] = {p.z, p.y, p.x};
  bool half[3];
  std::size_t idx[3];
  for (int a = 0; a < 3; ++a) {
    if (c[a] < 2) return std::nullopt;
    half[a] = c[a] % 2 != 0;
    idx[a] = static_cast<std::size_t>(line_index(c[a]));
    if (idx[a] >= (half[a] ? m[a] : n[a])) return std::nullopt;
  }
  auto ext = [&](int a) { return half[a] ? m[a] : n[a]; };
  const std::size_t local = (idx[0] * ext(1) + idx[1]) * ext(2) + idx[2];
  const int nhalf = half[0] + half[1] + half[2];
  auto id = [](std::size_t v) { return static_cast<Index>(v); };
  if (nhalf == 0) return std::pair{LatticeObject::zstab, id(local)};
  if (nhalf == 3) return std::pair{LatticeObject::metacheck, id(local)};
  if (nhalf == 1) {
    std::size_t off = 0;
    if (half[0]) return std::pair{LatticeObject::qubit, id(local)};
    off += m[0] * n[1] * n[2];
    if (half[1]) return std::pair{LatticeObject::qubit, id(off + local)};
    off += n[0] * m[1] * n[2];
    return std::pair{LatticeObject::qubit, id(off + local)};
  }
  std::size_t off = 0;
  if (!half[2]) return std::pair{LatticeObject::xstab, id(local)};
  off += m[0] * m[1] * n[2];
  if (!half[1]) return std::pair{LatticeObject::xstab, id(off + local)};
  off += m[0] * n[1] * m[2];
  return std::pair{LatticeObject::xstab, id(off + local)};
}

std::size_t seed_locality(const SparseBitMatrix& h, LocalityKind kind) {
  const std::size_t nu = std::max(h.rows(), h.cols());
  std::size_t rho = 1;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    std::vector<long> pts{static_cast<long>(r)};
    for (Index c : h.row(r)) pts.push_back(c);
    rho = std::max(rho, cover_length(pts, nu, kind));
  }
  for (std::size_t c = 0; c < h.cols(); ++c) {
    std::vector<long> pts{static_cast<long>(c)};
    for (Index r : h.col(c)) pts.push_back(r);
    rho = std::max(rho, cover_length(pts, nu, kind));
  }
  return rho;
}

std::array<LocalityKind, 3> detect_locality(const SeedTriple& seeds) {
  std::array<LocalityKind, 3> out{};
  const ClassicalSeed* s[3] = {&seeds.a, &seeds.b, &seeds.c};
  for (int i = 0; i < 3; ++i) {
    const auto rt = seed_locality(s[i]->matrix, LocalityKind::torus);
    const auto re = seed_locality(s[i]->matrix, LocalityKind::euclidean);
    out[i] = re <= rt ? LocalityKind::euclidean : LocalityKind::torus;
  }
  return out;
}

bool check_locality(const ProductCode& code, const LatticeCoords& coords, std::size_t rho,
                    std::optional<std::array<LocalityKind, 3>> kinds) {
  if (rho < 1) return false;
  const auto k = kinds ? *kinds : detect_locality(code.seeds);
  for (std::size_t r = 0; r < code.hx.rows(); ++r) {
    const auto sup = code.hx.row(r);
    if (sup.size() > 2 * rho || !fits_box(coords.xstabs[r], sup, coords, rho, k)) return false;
  }
  for (std::size_t r = 0; r < code.hz.rows(); ++r) {
    const auto sup = code.hz.row(r);
    if (sup.size() > 3 * rho || !fits_box(coords.zstabs[r], sup, coords, rho, k)) return false;
  }
  return true;
}

nlohmann::json lattice_to_json(const LatticeCoords& lc) {
  auto points = [](const std::vector<LatticePoint>& ps, auto type_of) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto xyz = ps[i].xyz();
      nlohmann::json o = {{"index", i}, {"xyz", {xyz[0], xyz[1], xyz[2]}}};
      if (auto t = type_of(i); !t.empty()) o["type"] = t;
      arr.push_back(std::move(o));
    }
    return arr;
  };
  auto none = [](std::size_t) { return std::string(); };
  return {{"schema_version", 1},
          {"axes", {"z", "y", "x"}},
          {"qubits", points(lc.qubits, [&](std::size_t i) { return to_string(lc.qubit_types[i]); })},
          {"xstabs", points(lc.xstabs, [&](std::size_t i) { return to_string(lc.xstab_types[i]); })},
          {"zstabs", points(lc.zstabs, none)},
          {"metachecks", points(lc.metachecks, none)}};
}

}  // namespace ssqec
