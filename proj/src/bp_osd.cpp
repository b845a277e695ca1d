#include "ssqec/bp_osd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "ssqec/errors.hpp"

namespace ssqec {

namespace {

constexpr double kLlrClamp = 30.0;

double clamp_llr(double x) { return std::clamp(x, -kLlrClamp, kLlrClamp); }

double prior_llr(double p) { return clamp_llr(std::log((1.0 - p) / p)); }

}  // namespace

void BpConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("bp: max_iters must be at least 1");
  if (!(ms_scale > 0.0 && ms_scale <= 1.0)) throw std::invalid_argument("bp: ms_scale must lie in (0, 1]");
  if (!(prior > 0.0 && prior < 1.0)) throw std::invalid_argument("bp: prior must lie in (0, 1)");
}

void OsdConfig::validate() const {
  if (method == OsdMethod::exhaustive && order > max_order) {
    throw std::invalid_argument("osd: order " + std::to_string(order) + " exceeds cap " + std::to_string(max_order));
  }
  if (max_order > 20) throw std::invalid_argument("osd: max_order above 20 is not supported");
}

nlohmann::json to_json(const BpConfig& c) {
  return {{"max_iters", c.max_iters},
          {"variant", c.variant == BpVariant::min_sum ? "min_sum" : "sum_product"},
          {"ms_scale", c.ms_scale},
          {"schedule", c.schedule == BpSchedule::parallel ? "parallel" : "serial"},
          {"prior", c.prior}};
}

nlohmann::json to_json(const OsdConfig& c) {
  return {{"method", c.method == OsdMethod::osd0 ? "osd0" : "exhaustive"}, {"order", c.order}, {"max_order", c.max_order}};
}

BpConfig bp_config_from_json(const nlohmann::json& j, BpConfig c) {
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "max_iters") {
        c.max_iters = v.get<std::size_t>();
      } else if (key == "variant") {
        const auto s = v.get<std::string>();
        if (s == "min_sum") c.variant = BpVariant::min_sum;
        else if (s == "sum_product") c.variant = BpVariant::sum_product;
        else throw FormatError("bp.variant: expected min_sum or sum_product, got '" + s + "'");
      } else if (key == "ms_scale") {
        c.ms_scale = v.get<double>();
      } else if (key == "schedule") {
        const auto s = v.get<std::string>();
        if (s == "parallel") c.schedule = BpSchedule::parallel;
        else if (s == "serial") c.schedule = BpSchedule::serial;
        else throw FormatError("bp.schedule: expected parallel or serial, got '" + s + "'");
      } else if (key == "prior") {
        c.prior = v.get<double>();
      } else {
        throw FormatError("bp: unknown field '" + key + "'");
      }
    }
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bp: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return c;
}

OsdConfig osd_config_from_json(const nlohmann::json& j, OsdConfig c) {
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "method") {
        const auto s = v.get<std::string>();
        if (s == "osd0") c.method = OsdMethod::osd0;
        else if (s == "exhaustive") c.method = OsdMethod::exhaustive;
        else throw FormatError("osd.method: expected osd0 or exhaustive, got '" + s + "'");
      } else if (key == "order") {
        c.order = v.get<std::size_t>();
      } else if (key == "max_order") {
        c.max_order = v.get<std::size_t>();
      } else {
        throw FormatError("osd: unknown field '" + key + "'");
      }
    }
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("osd: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return c;
}

// ------------------------------------------------------------------- decoder

BpOsdDecoder::BpOsdDecoder(const SparseBitMatrix& h, BpConfig bp, OsdConfig osd)
    : h_(&h), bp_(bp), osd_(osd), rank_(rank(h)) {
  bp_.validate();
  osd_.validate();
  check_ptr_.assign(h.rows() + 1, 0);
  for (std::size_t c = 0; c < h.rows(); ++c) check_ptr_[c + 1] = check_ptr_[c] + h.row(c).size();
  edge_var_.resize(h.nnz());
  edge_check_.resize(h.nnz());
  for (std::size_t c = 0; c < h.rows(); ++c) {
    std::fill(edge_check_.begin() + static_cast<std::ptrdiff_t>(check_ptr_[c]),
              edge_check_.begin() + static_cast<std::ptrdiff_t>(check_ptr_[c + 1]), static_cast<Index>(c));
    std::copy(h.row(c).begin(), h.row(c).end(), edge_var_.begin() + static_cast<std::ptrdiff_t>(check_ptr_[c]));
  }
  var_ptr_.assign(h.cols() + 1, 0);
  for (std::size_t v = 0; v < h.cols(); ++v) var_ptr_[v + 1] = var_ptr_[v] + h.col(v).size();
  var_edges_.resize(h.nnz());
  std::vector<std::size_t> fill(var_ptr_.begin(), var_ptr_.end() - 1);
  for (std::size_t e = 0; e < edge_var_.size(); ++e) var_edges_[fill[edge_var_[e]]++] = e;
  v2c_.resize(h.nnz());
  c2v_.resize(h.nnz());
  posterior_.resize(h.cols());
  hard_.resize(h.cols());
  order_.resize(h.cols());
}

void BpOsdDecoder::set_prior(double p) {
  BpConfig c = bp_;
  c.prior = p;
  c.validate();
  bp_ = c;
}

void BpOsdDecoder::check_update(std::size_t c, std::span<const std::uint8_t> syndrome) {
  const std::size_t begin = check_ptr_[c], end = check_ptr_[c + 1];
  const bool flip = syndrome[c] & 1U;
  if (bp_.variant == BpVariant::min_sum) {
    double min1 = kLlrClamp * 4, min2 = kLlrClamp * 4;
    std::size_t arg = begin;
    bool parity = flip;
    for (std::size_t e = begin; e < end; ++e) {
      const double m = v2c_[e];
      parity ^= (m < 0);
      const double a = std::fabs(m);
      if (a < min1) {
        min2 = min1;
        min1 = a;
        arg = e;
      } else if (a < min2) {
        min2 = a;
      }
    }
    for (std::size_t e = begin; e < end; ++e) {
      const bool sign = parity ^ (v2c_[e] < 0);
      const double mag = bp_.ms_scale * (e == arg ? min2 : min1);
      c2v_[e] = sign ? -mag : mag;
    }
  } else {
    for (std::size_t e = begin; e < end; ++e) {
      double prod = flip ? -1.0 : 1.0;
      for (std::size_t f = begin; f < end; ++f) {
        if (f != e) prod *= std::tanh(0.5 * v2c_[f]);
      }
      prod = std::clamp(prod, -1.0 + 1e-15, 1.0 - 1e-15);
      c2v_[e] = clamp_llr(2.0 * std::atanh(prod));
    }
  }
}

bool BpOsdDecoder::syndrome_matches(std::span<const std::uint8_t> syndrome) const {
  for (std::size_t c = 0; c + 1 < check_ptr_.size(); ++c) {
    std::uint8_t acc = 0;
    for (std::size_t e = check_ptr_[c]; e < check_ptr_[c + 1]; ++e) acc ^= hard_[edge_var_[e]];
    if (acc != (syndrome[c] & 1U)) return false;
  }
  return true;
}

BpResult BpOsdDecoder::bp(std::span<const std::uint8_t> syndrome) {
  if (syndrome.size() != h_->rows()) throw DimensionError("bp: syndrome length does not match check count");
  const double prior = prior_llr(bp_.prior);
  const std::size_t n = h_->cols();
  BpResult out;
  if (std::none_of(syndrome.begin(), syndrome.end(), [](std::uint8_t b) { return b & 1U; })) {
    out.soft.assign(n, prior);
    out.hard.assign(n, 0);
    out.converged = true;
    return out;
  }
  std::fill(v2c_.begin(), v2c_.end(), prior);
  std::fill(c2v_.begin(), c2v_.end(), 0.0);
  std::fill(posterior_.begin(), posterior_.end(), prior);

  for (std::size_t it = 1; it <= bp_.max_iters; ++it) {
    out.iterations = it;
    if (bp_.schedule == BpSchedule::parallel) {
      for (std::size_t c = 0; c < h_->rows(); ++c) check_update(c, syndrome);
      for (std::size_t v = 0; v < n; ++v) {
        double total = prior;
        for (std::size_t k = var_ptr_[v]; k < var_ptr_[v + 1]; ++k) total += c2v_[var_edges_[k]];
        posterior_[v] = total;
        for (std::size_t k = var_ptr_[v]; k < var_ptr_[v + 1]; ++k) {
          const std::size_t e = var_edges_[k];
          v2c_[e] = clamp_llr(total - c2v_[e]);
        }
      }
    } else {
      // Variable-serial: refresh a variable's incoming messages from the
      // latest outgoing messages of its neighbours, then update it.
      for (std::size_t v = 0; v < n; ++v) {
        double total = prior;
        for (std::size_t k = var_ptr_[v]; k < var_ptr_[v + 1]; ++k) {
          const std::size_t e = var_edges_[k];
          check_update(edge_check_[e], syndrome);
          total += c2v_[e];
        }
        posterior_[v] = total;
        for (std::size_t k = var_ptr_[v]; k < var_ptr_[v + 1]; ++k) {
          const std::size_t e = var_edges_[k];
          v2c_[e] = clamp_llr(total - c2v_[e]);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) hard_[v] = posterior_[v] < 0 ? 1 : 0;
    if (syndrome_matches(syndrome)) {
      out.converged = true;
      break;
    }
  }
  out.soft.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.soft[v] = clamp_llr(posterior_[v]);
  out.hard = hard_;
  return out;
}

std::vector<std::uint8_t> BpOsdDecoder::osd(std::span<const std::uint8_t> syndrome, std::span<const double> soft) {
  const std::size_t n = h_->cols(), m = h_->rows();
  if (syndrome.size() != m || soft.size() != n) throw DimensionError("osd: input lengths do not match the matrix");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&soft](std::size_t a, std::size_t b) { return clamp_llr(soft[a]) < clamp_llr(soft[b]); });

  DenseBitMatrix d(m, n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (Index r : h_->col(order_[j])) d.set(r, j);
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (syndrome[r] & 1U) d.set(r, n);
  }
  const auto pivots = d.row_reduce(n, rank_);
  for (std::size_t r = pivots.size(); r < m; ++r) {
    if (d.get(r, n)) throw UnsatisfiableSyndrome("osd: syndrome is not in the image of the check matrix");
  }

  std::vector<std::uint8_t> x(n, 0);
  const std::size_t rk = pivots.size();
  std::size_t w = osd_.method == OsdMethod::exhaustive ? osd_.order : 0;
  std::vector<std::size_t> free_cols;
  if (w > 0) {
    std::size_t pi = 0;
    for (std::size_t j = 0; j < n && free_cols.size() < w; ++j) {
      if (pi < rk && pivots[pi] == j) {
        ++pi;
        continue;
      }
      free_cols.push_back(j);
    }
    w = free_cols.size();
  }

  if (w == 0) {
    for (std::size_t r = 0; r < rk; ++r) {
      if (d.get(r, n)) x[order_[pivots[r]]] = 1;
    }
    return x;
  }

  const std::size_t words = (rk + 63) / 64;
  auto column_bits = [&](std::size_t col) {
    std::vector<std::uint64_t> bits(words, 0);
    for (std::size_t r = 0; r < rk; ++r) {
      if (d.get(r, col)) bits[r / 64] |= std::uint64_t{1} << (r % 64);
    }
    return bits;
  };
  auto cur = column_bits(n);
  std::vector<std::vector<std::uint64_t>> cols;
  for (auto c : free_cols) cols.push_back(column_bits(c));

  auto weight = [&](const std::vector<std::uint64_t>& v) {
    std::size_t s = 0;
    for (auto word : v) s += static_cast<std::size_t>(std::popcount(word));
    return s;
  };
  std::size_t best_w = weight(cur);
  std::uint64_t best_pattern = 0, pattern = 0;
  // Gray-code order; the all-zero pattern (plain OSD-0) comes first and wins ties.
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << w); ++g) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(g));
    pattern ^= std::uint64_t{1} << bit;
    for (std::size_t k = 0; k < words; ++k) cur[k] ^= cols[bit][k];
    const std::size_t total = weight(cur) + static_cast<std::size_t>(std::popcount(pattern));
    if (total < best_w) {
      best_w = total;
      best_pattern = pattern;
    }
  }
  for (std::size_t t = 0; t < w; ++t) {
    if ((best_pattern >> t) & 1U) x[order_[free_cols[t]]] = 1;
  }
  for (std::size_t r = 0; r < rk; ++r) {
    bool bit = d.get(r, n);
    for (std::size_t t = 0; t < w; ++t) {
      if ((best_pattern >> t) & 1U) bit ^= d.get(r, free_cols[t]);
    }
    if (bit) x[order_[pivots[r]]] = 1;
  }
  return x;
}

std::vector<std::uint8_t> BpOsdDecoder::decode(std::span<const std::uint8_t> syndrome) {
  auto res = bp(syndrome);
  if (res.converged) return std::move(res.hard);
  return osd(syndrome, res.soft);
}

// ------------------------------------------------------------ free functions

BpResult bp_decode(const SparseBitMatrix& h, const BitVector& s, const BpConfig& cfg) {
  if (s.length() != h.rows()) throw DimensionError("bp_decode: syndrome length does not match check count");
  BpOsdDecoder dec(h, cfg, OsdConfig{});
  const auto dense = s.to_dense();
  return dec.bp(dense);
}

BitVector osd_post(const SparseBitMatrix& h, const BitVector& s, std::span<const double> soft, const OsdConfig& cfg) {
  if (s.length() != h.rows()) throw DimensionError("osd_post: syndrome length does not match check count");
  BpOsdDecoder dec(h, BpConfig{}, cfg);
  const auto dense = s.to_dense();
  return BitVector::from_dense(dec.osd(dense, soft));
}

BitVector bp_osd_decode(const SparseBitMatrix& h, const BitVector& s, const BpConfig& bp, const OsdConfig& osd) {
  if (s.length() != h.rows()) throw DimensionError("bp_osd_decode: syndrome length does not match check count");
  BpOsdDecoder dec(h, bp, osd);
  const auto dense = s.to_dense();
  return BitVector::from_dense(dec.decode(dense));
}

}  // namespace ssqec
