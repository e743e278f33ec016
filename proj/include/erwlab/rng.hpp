#pragma once

// Counter-based random streams.
//
// Philox4x32-10 (Salmon et al., SC 2011). The 64-bit seed is the key; the
// 128-bit counter is split into a 64-bit stream id (high half) and a 64-bit
// block index (low half), so distinct streams never overlap and any draw can
// be regenerated from (seed, stream, position) alone.

#include <array>
#include <cstdint>
#include <limits>

namespace erwlab {

class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == 2) refill();
    return buf_[pos_++];
  }

  // The raw 10-round bijection.
  static constexpr Block bijection(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  void refill() noexcept {
    const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const Block out = bijection(ctr, key_);
    buf_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buf_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    pos_ = 0;
    ++block_;
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int pos_ = 2;
};

// Seed of replica `index` under `master_seed`. A pure function of its inputs:
// one Philox block on a counter reserved for seed derivation.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  constexpr std::uint32_t kDeriveTag = 0x5EEDC0DEu;
  const Philox4x32::Block ctr{static_cast<std::uint32_t>(index),
                              static_cast<std::uint32_t>(index >> 32), kDeriveTag, kDeriveTag};
  const Philox4x32::Key key{static_cast<std::uint32_t>(master_seed),
                            static_cast<std::uint32_t>(master_seed >> 32)};
  const auto out = Philox4x32::bijection(ctr, key);
  return (std::uint64_t{out[1]} << 32) | out[0];
}

// Uniform on [0, 1) with 53 random bits.
template <class Engine>
inline double uniform01(Engine& eng) noexcept {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1]; safe as a log argument.
template <class Engine>
inline double uniform_open_closed(Engine& eng) noexcept {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// Uniform on (0, 1), symmetric about 1/2; safe as a quantile argument.
template <class Engine>
inline double uniform_open(Engine& eng) noexcept {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by Lemire's multiply-and-reject.
template <class Engine>
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(eng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(eng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace erwlab
