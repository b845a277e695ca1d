#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssqec/bp_osd.hpp"
#include "ssqec/matching.hpp"
#include "ssqec/noise.hpp"
#include "ssqec/product_code.hpp"

namespace ssqec {

enum class Strategy { mwpm_bposd, bposd_x2, code_capacity };
enum class FailureCause { none, logical, metacode, unmatchable };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);
std::string to_string(FailureCause c);

struct ProtocolConfig {
  std::size_t cycles = 0;  // N
  Strategy strategy = Strategy::mwpm_bposd;
  NoiseModel noise;
  bool failure_subroutine = true;
  /// Stage-1 decoder (on M, or on [M; L_M] for the failure-mode repair).
  BpConfig bp_stage1;
  OsdConfig osd_stage1;
  /// Stage-2 decoder (on H_X) and the final round.
  BpConfig bp_stage2;
  OsdConfig osd_stage2;
  /// When set, BP priors follow the noise (q for stage 1, p for stage 2)
  /// instead of the `prior` fields above.
  bool priors_from_noise = true;
  MatchingConfig matching;
  void validate() const;
};

struct CycleState {
  std::vector<std::uint8_t> e_z;
  std::vector<std::uint8_t> s_x;
  std::vector<std::uint8_t> m;
  std::size_t cycle_index = 0;
};

struct TrialOutcome {
  bool success = true;
  FailureCause cause = FailureCause::none;
  std::size_t invalid_syndrome_events = 0;
  std::size_t stage1_fallbacks = 0;
  std::vector<std::size_t> residual_weight_trace;
};

/// Per-thread protocol runner; owns decoder scratch, shares the code.
class TrialRunner {
 public:
  TrialRunner(const ProductCode& code, ProtocolConfig cfg);
  TrialRunner(const TrialRunner&) = delete;
  TrialRunner& operator=(const TrialRunner&) = delete;

  TrialOutcome run(const RngStream& trial_stream);
  /// Same as run() but starts from `initial_error` instead of zero.
  TrialOutcome run_planted(const std::vector<std::uint8_t>& initial_error, const RngStream& trial_stream);

  const ProtocolConfig& config() const { return cfg_; }
  bool matching_available() const { return graph_.has_value(); }

 private:
  TrialOutcome run_impl(const std::vector<std::uint8_t>* planted, const RngStream& stream);
  void stage1(CycleState& st, TrialOutcome& out);
  void stage2(CycleState& st);

  const ProductCode* code_;
  ProtocolConfig cfg_;
  SparseBitMatrix meta_prime_;
  std::optional<MetaGraph> graph_;
  std::optional<MwpmRepairer> matcher_;
  std::optional<BpOsdDecoder> dec_meta_, dec_meta_prime_;
  BpOsdDecoder dec_qubit_;
  std::vector<std::uint8_t> scratch_;
};

TrialOutcome run_trial(const ProductCode& code, const ProtocolConfig& cfg, const RngStream& stream);

/// True iff lm . s != 0, i.e. s passes the metachecks but is not in im(hx).
bool is_invalid_syndrome(const ProductCode& code, const BitVector& s);

/// Decodes [M; L_M] r = (m; L_M s) with BP+OSD; s ^ r then satisfies both.
/// Throws UnsatisfiableSyndrome if no such r exists.
BitVector failure_mode_repair(const ProductCode& code, const BitVector& s, const BitVector& m, const BpConfig& bp,
                              const OsdConfig& osd);

nlohmann::json to_json(const ProtocolConfig& c);

}  // namespace ssqec
