#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssqec/gf2.hpp"

namespace ssqec {

enum class BpVariant { min_sum, sum_product };
enum class BpSchedule { parallel, serial };

struct BpConfig {
  std::size_t max_iters = 50;
  BpVariant variant = BpVariant::min_sum;
  double ms_scale = 0.625;
  BpSchedule schedule = BpSchedule::parallel;
  /// Channel error probability used for the prior LLRs.
  double prior = 0.05;
  void validate() const;
};

enum class OsdMethod { osd0, exhaustive };

struct OsdConfig {
  OsdMethod method = OsdMethod::osd0;
  /// Number of non-pivot positions swept by the exhaustive method.
  std::size_t order = 0;
  std::size_t max_order = 6;
  void validate() const;
};

nlohmann::json to_json(const BpConfig& c);
nlohmann::json to_json(const OsdConfig& c);
/// Missing keys keep their defaults; unknown keys and bad values throw FormatError.
BpConfig bp_config_from_json(const nlohmann::json& j, BpConfig base = {});
OsdConfig osd_config_from_json(const nlohmann::json& j, OsdConfig base = {});

struct BpResult {
  std::vector<double> soft;  // posterior LLRs, positive favours "no error"
  std::vector<std::uint8_t> hard;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Reusable decoder for a fixed check matrix. Holds scratch buffers, so one
/// instance per thread; the matrix itself is only read.
class BpOsdDecoder {
 public:
  BpOsdDecoder(const SparseBitMatrix& h, BpConfig bp, OsdConfig osd);

  const SparseBitMatrix& matrix() const { return *h_; }
  const BpConfig& bp_config() const { return bp_; }
  void set_prior(double p);

  BpResult bp(std::span<const std::uint8_t> syndrome);
  /// Exact solution of H r = s ranked by `soft`; throws UnsatisfiableSyndrome.
  std::vector<std::uint8_t> osd(std::span<const std::uint8_t> syndrome, std::span<const double> soft);
  /// BP, falling back to OSD when BP does not reproduce the syndrome.
  std::vector<std::uint8_t> decode(std::span<const std::uint8_t> syndrome);

 private:
  void check_update(std::size_t c, std::span<const std::uint8_t> syndrome);
  bool syndrome_matches(std::span<const std::uint8_t> syndrome) const;

  const SparseBitMatrix* h_;
  BpConfig bp_;
  OsdConfig osd_;
  std::size_t rank_;
  // Edges are stored check-major; var_edges_ maps each variable to its edges.
  std::vector<std::size_t> check_ptr_;
  std::vector<Index> edge_var_;
  std::vector<Index> edge_check_;
  std::vector<std::size_t> var_ptr_;
  std::vector<std::size_t> var_edges_;
  std::vector<double> v2c_, c2v_, posterior_;
  std::vector<std::uint8_t> hard_;
  std::vector<std::size_t> order_;
};

BpResult bp_decode(const SparseBitMatrix& h, const BitVector& s, const BpConfig& cfg);
BitVector osd_post(const SparseBitMatrix& h, const BitVector& s, std::span<const double> soft, const OsdConfig& cfg);
BitVector bp_osd_decode(const SparseBitMatrix& h, const BitVector& s, const BpConfig& bp, const OsdConfig& osd);

}  // namespace ssqec
