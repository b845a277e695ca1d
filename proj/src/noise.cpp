#include "ssqec/noise.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ssqec {

void NoiseModel::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise: p must lie in [0, 1], got " + std::to_string(p));
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("noise: q must lie in [0, 1], got " + std::to_string(q));
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (auto w : words) h = splitmix64_mix(h ^ splitmix64_mix(w + 0x9e3779b97f4a7c15ULL));
  return h;
}

RngStream::RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> stream_id)
    : key_(splitmix64_mix(master_seed)) {
  for (auto w : stream_id) key_ = splitmix64_mix(key_ ^ splitmix64_mix(w + 0x9e3779b97f4a7c15ULL));
}

RngStream RngStream::substream(std::initializer_list<std::uint64_t> id) const {
  RngStream s;
  s.key_ = key_;
  for (auto w : id) s.key_ = splitmix64_mix(s.key_ ^ splitmix64_mix(w + 0x9e3779b97f4a7c15ULL));
  return s;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = (*this)();
  } while (x >= limit);
  return x % n;
}

BitVector sample_qubit_error(std::size_t n, double p, RngStream& stream) {
  NoiseModel{p, 0.0}.validate();
  std::vector<Index> support;
  for (std::size_t i = 0; i < n; ++i) {
    if (stream.bernoulli(p)) support.push_back(static_cast<Index>(i));
  }
  return BitVector(n, std::move(support));
}

BitVector sample_syndrome_error(std::size_t m, double q, RngStream& stream) {
  NoiseModel{0.0, q}.validate();
  std::vector<Index> support;
  for (std::size_t i = 0; i < m; ++i) {
    if (stream.bernoulli(q)) support.push_back(static_cast<Index>(i));
  }
  return BitVector(m, std::move(support));
}

void xor_bernoulli(std::span<std::uint8_t> out, double p, RngStream& stream) {
  for (auto& b : out) b ^= static_cast<std::uint8_t>(stream.bernoulli(p));
}

}  // namespace ssqec
