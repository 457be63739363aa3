// rng.hpp -- counter-based random number generation (Philox4x64-10).
//
// Every consumer of randomness owns an RngStream identified by
// (base_seed, stream_id). Output is a pure function of that pair plus the
// draw position, so distinct streams never interact and any stream can be
// replayed in isolation. This is what makes parallel Monte-Carlo replication
// deterministic regardless of scheduling.
#pragma once

#include <array>
#include <cstdint>

namespace hetseq {

namespace detail {
// One Philox4x64 block: 10 rounds, multipliers 0xD2E7470EE14C6C93 /
// 0xCA5A826395121157, Weyl key schedule 0x9E3779B97F4A7C15 /
// 0xBB67AE8584CAA73B (Salmon et al., SC'11). Exposed for known-answer tests.
std::array<std::uint64_t, 4> philox4x64_10(
    const std::array<std::uint64_t, 4>& counter,
    const std::array<std::uint64_t, 2>& key);
}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_id,
            std::uint64_t substream_id = 0)
      : base_seed_(base_seed),
        stream_id_(stream_id),
        substream_id_(substream_id) {}

  // A sibling stream with its own disjoint counter lane. Used to hand each
  // fold-level consumer (e.g. one learner fit per fold) independent
  // randomness that does not depend on evaluation order.
  RngStream substream(std::uint64_t substream_id) const {
    return RngStream(base_seed_, stream_id_, substream_id);
  }

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on [0,1), 53-bit resolution.
  double next_uniform01();
  // Uniform on (0,1), symmetric about 1/2.
  double next_uniform_open01();
  // Uniform on [-1,1).
  double next_uniform_sym();
  // P(true) = prob.
  bool next_bernoulli(double prob);
  // Unbiased integer in [0, n), n >= 1. Rejection method.
  std::uint64_t next_below(std::uint64_t n);
  // Standard normal via the Marsaglia polar method; the paired variate is
  // discarded so each call is self-contained.
  double next_normal();

 private:
  std::uint64_t base_seed_;
  std::uint64_t stream_id_;
  std::uint64_t substream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int buffered_ = 0;  // outputs remaining in buffer_
};

}  // namespace hetseq
