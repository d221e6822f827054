#pragma once

#include <cstdint>

namespace shiftspec {

namespace detail {
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Counter-based generator (Philox 2x64, 10 rounds). Each output block is a
// pure function of (key, stream, counter), so a stream keyed by
// (master seed, stream index) can be sampled in parallel with no shared
// state and replayed in isolation.
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream)
      : key_(detail::splitmix64(seed)), stream_(detail::splitmix64(stream ^ 0x1badb002deadbeefULL)) {}

  uint64_t next_u64() {
    if (avail_ == 0) refill();
    return buf_[--avail_];
  }

  // Uniform in [0, 1), 53-bit mantissa.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static void round(uint64_t& x0, uint64_t& x1, uint64_t k) {
    const uint64_t kMul = 0xd2b74407b1ce6e93ULL;
    const __uint128_t prod = static_cast<__uint128_t>(kMul) * x0;
    const uint64_t hi = static_cast<uint64_t>(prod >> 64);
    const uint64_t lo = static_cast<uint64_t>(prod);
    x0 = hi ^ k ^ x1;
    x1 = lo;
  }

  void refill() {
    uint64_t x0 = counter_++;
    uint64_t x1 = stream_;
    uint64_t k = key_;
    for (int r = 0; r < 10; ++r) {
      round(x0, x1, k);
      k += 0x9e3779b97f4a7c15ULL;
    }
    buf_[1] = x0;
    buf_[0] = x1;
    avail_ = 2;
  }

  uint64_t key_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  uint64_t buf_[2] = {0, 0};
  int avail_ = 0;
};

}  // namespace shiftspec
