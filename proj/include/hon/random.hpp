#pragma once

#include <cstdint>
#include <initializer_list>

namespace hon {

__extension__ using u128 = unsigned __int128;

/// Counter-based stream: the n-th draw is a pure function of
/// (seed, stream ids, n), so a walk or walker can be regenerated alone and
/// results never depend on scheduling.
///
/// The key is derived by folding the stream ids through the SplitMix64
/// finaliser; draw n is finalise(key + n * golden_gamma).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream_ids) {
    std::uint64_t k = mix(seed ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t id : stream_ids) k = mix(k ^ mix(id + 0x9e3779b97f4a7c15ULL));
    key_ = k;
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift; bias is below 2^-64 * n, irrelevant here
    return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace hon
