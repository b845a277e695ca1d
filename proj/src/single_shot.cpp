#include "ssqec/single_shot.hpp"

#include <algorithm>

#include "ssqec/errors.hpp"

namespace ssqec {

namespace {

double usable_prior(double p) { return std::clamp(p, 1e-9, 1.0 - 1e-9); }

bool any(const std::vector<std::uint8_t>& v) {
  return std::any_of(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; });
}

std::size_t weight(const std::vector<std::uint8_t>& v) {
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), std::uint8_t{1}));
}

void xor_into(std::vector<std::uint8_t>& dst, const std::vector<std::uint8_t>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::mwpm_bposd: return "mwpm_bposd";
    case Strategy::bposd_x2: return "bposd_x2";
    case Strategy::code_capacity: return "code_capacity";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "mwpm_bposd") return Strategy::mwpm_bposd;
  if (s == "bposd_x2") return Strategy::bposd_x2;
  if (s == "code_capacity") return Strategy::code_capacity;
  throw std::invalid_argument("unknown strategy '" + s + "' (expected mwpm_bposd, bposd_x2 or code_capacity)");
}

std::string to_string(FailureCause c) {
  switch (c) {
    case FailureCause::none: return "none";
    case FailureCause::logical: return "logical";
    case FailureCause::metacode: return "metacode";
    case FailureCause::unmatchable: return "unmatchable";
  }
  return "?";
}

void ProtocolConfig::validate() const {
  noise.validate();
  bp_stage1.validate();
  bp_stage2.validate();
  osd_stage1.validate();
  osd_stage2.validate();
}

nlohmann::json to_json(const ProtocolConfig& c) {
  return {{"N", c.cycles},
          {"strategy", to_string(c.strategy)},
          {"p", c.noise.p},
          {"q", c.noise.q},
          {"failure_subroutine", c.failure_subroutine},
          {"bp_stage1", to_json(c.bp_stage1)},
          {"osd_stage1", to_json(c.osd_stage1)},
          {"bp_stage2", to_json(c.bp_stage2)},
          {"osd_stage2", to_json(c.osd_stage2)},
          {"priors_from_noise", c.priors_from_noise},
          {"allow_approx_matching", c.matching.allow_approx_matching}};
}

// ---------------------------------------------------------------- TrialRunner

TrialRunner::TrialRunner(const ProductCode& code, ProtocolConfig cfg)
    : code_(&code),
      cfg_(cfg),
      dec_qubit_(code.hx, [&] {
        BpConfig b = cfg.bp_stage2;
        if (cfg.priors_from_noise) b.prior = usable_prior(cfg.noise.p);
        return b;
      }(), cfg.osd_stage2) {
  cfg_.validate();
  if (cfg_.strategy == Strategy::code_capacity) return;
  BpConfig b1 = cfg_.bp_stage1;
  if (cfg_.priors_from_noise) b1.prior = usable_prior(cfg_.noise.q);
  if (cfg_.strategy == Strategy::mwpm_bposd) {
    try {
      graph_.emplace(build_meta_graph(code.meta));
      matcher_.emplace(*graph_, cfg_.matching);
    } catch (const MatchingInapplicable&) {
      graph_.reset();
    }
  }
  if (!graph_) dec_meta_.emplace(code.meta, b1, cfg_.osd_stage1);
  if (cfg_.failure_subroutine && code.lm.rows() > 0) {
    meta_prime_ = stack_rows({code.meta, code.lm});
    dec_meta_prime_.emplace(meta_prime_, b1, cfg_.osd_stage1);
  }
}

void TrialRunner::stage1(CycleState& st, TrialOutcome& out) {
  const auto& code = *code_;
  std::vector<std::uint8_t> r;
  if (graph_) {
    r = matcher_->repair(st.m);
  } else {
    if (cfg_.strategy == Strategy::mwpm_bposd) ++out.stage1_fallbacks;
    r = dec_meta_->decode(st.m);
  }
  std::vector<std::uint8_t> repaired = st.s_x;
  xor_into(repaired, r);

  if (code.lm.rows() > 0) {
    std::vector<std::uint8_t> check(code.lm.rows());
    mat_vec_dense(code.lm, repaired, check);
    if (any(check)) {
      ++out.invalid_syndrome_events;
      if (dec_meta_prime_) {
        ++out.stage1_fallbacks;
        // Revert and decode against [M; L_M] with target (m; L_M s).
        std::vector<std::uint8_t> target(st.m);
        std::vector<std::uint8_t> ls(code.lm.rows());
        mat_vec_dense(code.lm, st.s_x, ls);
        target.insert(target.end(), ls.begin(), ls.end());
        const auto r2 = dec_meta_prime_->decode(target);
        repaired = st.s_x;
        xor_into(repaired, r2);
      }
    }
  }
  st.s_x = std::move(repaired);
}

void TrialRunner::stage2(CycleState& st) {
  const auto r = dec_qubit_.decode(st.s_x);
  mat_vec_dense(code_->hx, r, scratch_);
  if (scratch_ != st.s_x) throw ConsistencyError("stage 2 correction does not reproduce its syndrome");
  xor_into(st.e_z, r);
}

TrialOutcome TrialRunner::run(const RngStream& trial_stream) { return run_impl(nullptr, trial_stream); }

TrialOutcome TrialRunner::run_planted(const std::vector<std::uint8_t>& initial_error, const RngStream& trial_stream) {
  if (initial_error.size() != code_->hx.cols()) throw DimensionError("run_planted: error length mismatch");
  return run_impl(&initial_error, trial_stream);
}

TrialOutcome TrialRunner::run_impl(const std::vector<std::uint8_t>* planted, const RngStream& stream) {
  const auto& code = *code_;
  const std::size_t n = code.hx.cols();
  const std::size_t ms = code.hx.rows();
  TrialOutcome out;
  CycleState st;
  st.e_z.assign(n, 0);
  st.s_x.assign(ms, 0);
  st.m.assign(code.meta.rows(), 0);
  scratch_.assign(ms, 0);
  if (planted) st.e_z = *planted;

  const std::size_t cycles = cfg_.strategy == Strategy::code_capacity ? 0 : cfg_.cycles;
  try {
    for (std::size_t c = 1; c <= cycles; ++c) {
      st.cycle_index = c;
      auto qs = stream.substream({c, static_cast<std::uint64_t>(Phase::qubit)});
      xor_bernoulli(st.e_z, cfg_.noise.p, qs);
      mat_vec_dense(code.hx, st.e_z, st.s_x);
      auto ss = stream.substream({c, static_cast<std::uint64_t>(Phase::syndrome)});
      xor_bernoulli(st.s_x, cfg_.noise.q, ss);
      mat_vec_dense(code.meta, st.s_x, st.m);
      stage1(st, out);
      stage2(st);
      out.residual_weight_trace.push_back(weight(st.e_z));
    }
    st.cycle_index = cycles + 1;
    auto fs = stream.substream({cycles + 1, static_cast<std::uint64_t>(Phase::final_qubit)});
    xor_bernoulli(st.e_z, cfg_.noise.p, fs);
    mat_vec_dense(code.hx, st.e_z, st.s_x);
    stage2(st);
  } catch (const UnsatisfiableSyndrome&) {
    out.success = false;
    out.cause = FailureCause::metacode;
    return out;
  } catch (const Unmatchable&) {
    out.success = false;
    out.cause = FailureCause::unmatchable;
    return out;
  }

  std::vector<std::uint8_t> logical(code.lx.rows());
  mat_vec_dense(code.lx, st.e_z, logical);
  if (any(logical)) {
    out.success = false;
    out.cause = FailureCause::logical;
  }
  return out;
}

TrialOutcome run_trial(const ProductCode& code, const ProtocolConfig& cfg, const RngStream& stream) {
  TrialRunner runner(code, cfg);
  return runner.run(stream);
}

bool is_invalid_syndrome(const ProductCode& code, const BitVector& s) {
  if (code.lm.rows() == 0) return false;
  return !mat_vec(code.lm, s).is_zero();
}

BitVector failure_mode_repair(const ProductCode& code, const BitVector& s, const BitVector& m, const BpConfig& bp,
                              const OsdConfig& osd) {
  if (s.length() != code.meta.cols() || m.length() != code.meta.rows()) {
    throw DimensionError("failure_mode_repair: vector lengths do not match the metacheck matrix");
  }
  const auto mp = stack_rows({code.meta, code.lm});
  auto target = m.to_dense();
  const auto ls = mat_vec(code.lm, s).to_dense();
  target.insert(target.end(), ls.begin(), ls.end());
  BpOsdDecoder dec(mp, bp, osd);
  return BitVector::from_dense(dec.decode(target));
}

}  // namespace ssqec
