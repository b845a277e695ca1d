#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "ssqec/lattice.hpp"

using namespace ssqec;

namespace {

LatticePoint at(double z, double y, double x) {
  return {static_cast<int>(std::lround(2 * z)), static_cast<int>(std::lround(2 * y)),
          static_cast<int>(std::lround(2 * x))};
}

// Cyclic distance between two doubled coordinates on a ring of `len` unit cells.
int ring_dist(int a, int b, int len) {
  const int d = std::abs(a - b) % (2 * len);
  return std::min(d, 2 * len - d);
}

}  // namespace

TEST(Embed, WorkedExamplePoints) {
  const auto code = build_code(toric_seeds(4));
  const auto lc = embed(code);
  const std::size_t L = 4;
  // 1-based (i, j, k) = (1, 4, 2) is 0-based (0, 3, 1).
  const Index z_idx = (0 * L + 3) * L + 1;
  EXPECT_EQ(lc.locate(at(1, 4, 2)), (std::pair{LatticeObject::zstab, z_idx}));
  EXPECT_EQ(lc.zstabs[z_idx], at(1, 4, 2));

  const Index q_idx = (0 * L + 3) * L + 1;
  EXPECT_EQ(lc.locate(at(1.5, 4, 2)), (std::pair{LatticeObject::qubit, q_idx}));
  EXPECT_EQ(lc.qubit_types[q_idx], QubitType::transverse);

  const Index x_idx = static_cast<Index>(code.complex.c2_blocks[0] + (0 * L + 3) * L + 1);
  EXPECT_EQ(lc.locate(at(1.5, 4, 2.5)), (std::pair{LatticeObject::xstab, x_idx}));
  EXPECT_EQ(lc.xstab_types[x_idx], XStabType::transverse_horizontal);

  const Index m_idx = (0 * L + 3) * L + 1;
  EXPECT_EQ(lc.locate(at(1.5, 4.5, 2.5)), (std::pair{LatticeObject::metacheck, m_idx}));
}

TEST(Embed, ObjectCounts) {
  EXPECT_EQ(embed(build_code(toric_seeds(2))).qubits.size(), 24u);
  const auto s3 = build_code(surface_seeds(3));
  const auto lc = embed(s3);
  EXPECT_EQ(lc.qubits.size(), 51u);
  EXPECT_EQ(lc.xstabs.size(), s3.hx.rows());
  EXPECT_EQ(lc.zstabs.size(), s3.hz.rows());
  EXPECT_EQ(lc.metachecks.size(), s3.meta.rows());
}

TEST(Embed, LocateInvertsEmbed) {
  for (const auto& seeds : {toric_seeds(3), surface_seeds(3), surface_seeds(4), table_seeds(1)}) {
    const auto lc = embed(build_code(seeds));
    const std::pair<LatticeObject, const std::vector<LatticePoint>*> classes[] = {
        {LatticeObject::qubit, &lc.qubits},
        {LatticeObject::xstab, &lc.xstabs},
        {LatticeObject::zstab, &lc.zstabs},
        {LatticeObject::metacheck, &lc.metachecks}};
    for (const auto& [kind, pts] : classes) {
      for (std::size_t i = 0; i < pts->size(); ++i) {
        const auto hit = lc.locate((*pts)[i]);
        ASSERT_TRUE(hit.has_value());
        EXPECT_EQ(hit->first, kind);
        EXPECT_EQ(hit->second, i);
      }
    }
  }
}

TEST(Embed, LocateRejectsInvalidPoints) {
  const auto lc = embed(build_code(surface_seeds(3)));
  EXPECT_FALSE(lc.locate(at(0.5, 1, 1)).has_value());
  EXPECT_FALSE(lc.locate(at(4, 1, 1)).has_value());
  EXPECT_FALSE(lc.locate(at(1, 3.5, 1)).has_value());
  EXPECT_TRUE(lc.locate(at(3, 3, 2.5)).has_value());
}

TEST(Embed, ZStabilisersAreCrosses) {
  for (std::size_t L : {3, 4}) {
    for (bool toric : {true, false}) {
      const auto code = build_code(toric ? toric_seeds(L) : surface_seeds(L));
      const auto lc = embed(code);
      for (std::size_t r = 0; r < code.hz.rows(); ++r) {
        const auto v = lc.zstabs[r];
        for (Index q : code.hz.row(r)) {
          const auto e = lc.qubits[q];
          const int d[3] = {ring_dist(v.z, e.z, static_cast<int>(L)), ring_dist(v.y, e.y, static_cast<int>(L)),
                            ring_dist(v.x, e.x, static_cast<int>(L))};
          EXPECT_EQ((d[0] == 0) + (d[1] == 0) + (d[2] == 0), 2);
          if (toric) EXPECT_EQ(d[0] + d[1] + d[2], 1);
        }
      }
    }
  }
}

TEST(Embed, XStabilisersAreFaces) {
  const int L = 4;
  const auto code = build_code(toric_seeds(L));
  const auto lc = embed(code);
  for (std::size_t r = 0; r < code.hx.rows(); ++r) {
    const auto f = lc.xstabs[r];
    for (Index q : code.hx.row(r)) {
      const auto e = lc.qubits[q];
      EXPECT_EQ(ring_dist(f.z, e.z, L) + ring_dist(f.y, e.y, L) + ring_dist(f.x, e.x, L), 1);
    }
  }
}

TEST(SeedLocality, CirculantAndRepetition) {
  const auto t = toric_seeds(5).a.matrix;
  EXPECT_EQ(seed_locality(t, LocalityKind::torus), 2u);
  EXPECT_EQ(seed_locality(t, LocalityKind::euclidean), 5u);
  const auto s = surface_seeds(5).a.matrix;
  EXPECT_EQ(seed_locality(s, LocalityKind::euclidean), 2u);
  EXPECT_EQ(detect_locality(toric_seeds(5))[0], LocalityKind::torus);
  EXPECT_EQ(detect_locality(surface_seeds(5))[2], LocalityKind::euclidean);
}

TEST(CheckLocality, ToricAndSurface) {
  const auto t4 = build_code(toric_seeds(4));
  EXPECT_TRUE(check_locality(t4, embed(t4), 2));
  EXPECT_FALSE(check_locality(t4, embed(t4), 1));
  EXPECT_FALSE(check_locality(t4, embed(t4), 0));
  const auto s4 = build_code(surface_seeds(4));
  EXPECT_TRUE(check_locality(s4, embed(s4), 2));
  EXPECT_FALSE(check_locality(s4, embed(s4), 1));
  // Forcing Euclidean boxes on the torus breaks locality at the wrap-around.
  const std::array<LocalityKind, 3> eu{LocalityKind::euclidean, LocalityKind::euclidean, LocalityKind::euclidean};
  EXPECT_FALSE(check_locality(t4, embed(t4), 2, eu));
  EXPECT_TRUE(check_locality(t4, embed(t4), 4, eu));
}

TEST(LatticeJson, Shape) {
  const auto lc = embed(build_code(toric_seeds(2)));
  const auto j = lattice_to_json(lc);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("qubits").size(), 24u);
  EXPECT_EQ(j.at("qubits")[0].at("type"), "transverse");
  EXPECT_EQ(j.at("qubits")[0].at("xyz"), (nlohmann::json{1.5, 1.0, 1.0}));
  EXPECT_EQ(j.at("zstabs").size(), 8u);
  EXPECT_EQ(j.at("metachecks").size(), 8u);
  EXPECT_EQ(j.at("xstabs")[0].at("type"), "transverse_vertical");
}
