#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

#include "ssqec/gf2.hpp"

namespace ssqec {

struct NoiseModel {
  double p = 0.0;  // qubit phase-flip probability
  double q = 0.0;  // syndrome bit-flip probability
  /// Throws std::invalid_argument unless both lie in [0, 1].
  void validate() const;
};

std::uint64_t splitmix64_mix(std::uint64_t z);
/// Folds a list of words into one key; order-sensitive.
std::uint64_t hash_words(std::initializer_list<std::uint64_t> words);

/// Counter-based SplitMix64 stream. The sequence is a pure function of
/// (master seed, stream id), so results never depend on thread scheduling.
/// Also satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0) {}
  explicit RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> stream_id = {});

  /// Sub-stream keyed by this stream's key plus `id`; independent of how far
  /// this stream has advanced.
  RngStream substream(std::initializer_list<std::uint64_t> id) const;

  std::uint64_t key() const { return key_; }

  result_type operator()() { return splitmix64_mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Phase tags used in stream ids.
enum class Phase : std::uint64_t { qubit = 1, syndrome = 2, final_qubit = 3 };

BitVector sample_qubit_error(std::size_t n, double p, RngStream& stream);
BitVector sample_syndrome_error(std::size_t m, double q, RngStream& stream);
/// In-place dense variant: out[i] ^= Bernoulli(p).
void xor_bernoulli(std::span<std::uint8_t> out, double p, RngStream& stream);

}  // namespace ssqec
