#include "hetseq/rng.hpp"

#include <cmath>

#include "hetseq/errors.hpp"

namespace hetseq {

namespace detail {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73Bull;

inline std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) >> 64);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64_10(
    const std::array<std::uint64_t, 4>& counter,
    const std::array<std::uint64_t, 2>& key) {
  std::uint64_t c0 = counter[0], c1 = counter[1], c2 = counter[2],
                c3 = counter[3];
  std::uint64_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t hi0 = mulhi64(kM0, c0);
    const std::uint64_t lo0 = kM0 * c0;
    const std::uint64_t hi1 = mulhi64(kM1, c2);
    const std::uint64_t lo1 = kM1 * c2;
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += kW0;
    k1 += kW1;
  }
  return {c0, c1, c2, c3};
}

}  // namespace detail

std::uint64_t RngStream::next_u64() {
  if (buffered_ == 0) {
    buffer_ = detail::philox4x64_10({block_, substream_id_, 0, 0},
                                    {base_seed_, stream_id_});
    ++block_;
    buffered_ = 4;
  }
  return buffer_[4 - buffered_--];
}

double RngStream::next_uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_uniform_open01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_uniform_sym() {
  // 2u - 1 is exact for u = k * 2^-53.
  return 2.0 * next_uniform01() - 1.0;
}

bool RngStream::next_bernoulli(double prob) {
  return next_uniform01() < prob;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
  if (n == 0) {
    throw DomainError("next_below: n must be positive");
  }
  const std::uint64_t threshold = (-n) % n;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x >= threshold) {
      return x % n;
    }
  }
}

double RngStream::next_normal() {
  for (;;) {
    const double u = next_uniform_sym();
    const double v = next_uniform_sym();
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

}  // namespace hetseq
