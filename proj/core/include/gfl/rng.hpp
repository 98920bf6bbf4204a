#pragma once

#include <cmath>
#include <cstdint>

namespace gfl {

/// Counter-based Philox4x32-10 stream. Splittable: stream identity is
/// (seed, chain_id); draws are a pure function of (key, counter), so
/// trajectories reproduce bit-exactly regardless of thread scheduling.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t chain_id = 0)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr2_(static_cast<std::uint32_t>(chain_id)),
        ctr3_(static_cast<std::uint32_t>(chain_id >> 32)) {}

  std::uint32_t next_u32() {
    if (have_ == 0) {
      refill();
      have_ = 4;
    }
    return buf_[4 - have_--];
  }

  /// Uniform in [0,1) with 53-bit resolution.
  double next_uniform() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return static_cast<double>((hi << 21) ^ (lo >> 11)) * 0x1p-53;
  }

  /// Standard normal via Box-Muller (caches the second deviate).
  double next_normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    double u1 = next_uniform();
    while (u1 <= 0.0) u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(th);
    have_normal_ = true;
    return r * std::cos(th);
  }

private:
  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) >> 32);
  }

  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = ctr2_, c3 = ctr3_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint32_t hi0 = mulhi(0xD2511F53u, c0);
      const std::uint32_t lo0 = 0xD2511F53u * c0;
      const std::uint32_t hi1 = mulhi(0xCD9E8D57u, c2);
      const std::uint32_t lo1 = 0xCD9E8D57u * c2;
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = c0; buf_[1] = c1; buf_[2] = c2; buf_[3] = c3;
    ++block_;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t ctr2_, ctr3_;  // chain id occupies the upper counter words
  std::uint64_t block_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  int have_ = 0;
  bool have_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace gfl
