#pragma once

#include <cstdint>
#include <random>

namespace copd {

// splitmix64 finalizer, used for seed derivation and digests.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed for replicate `replicate` of sweep point `point` under `base`.
// Part of the external reproducibility contract (documented in copd.h):
//   h0 = splitmix64(base); h1 = splitmix64(h0 + point);
//   seed = splitmix64(h1 + replicate)
inline uint64_t derive_seed(uint64_t base, uint64_t point, uint64_t replicate) {
  return splitmix64(splitmix64(splitmix64(base) + point) + replicate);
}

// Deterministic generator behind every simulation path. Wraps mt19937_64
// (whose output sequence is pinned by the standard) with fixed output
// mappings; the standard library distributions are implementation-defined
// and must not be used anywhere in the engine. Every helper consumes
// exactly one 64-bit draw, and the running draw count is observable so
// trajectory comparisons can assert draw-for-draw agreement.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() {
    ++draws_;
    return gen_();
  }

  // Uniform integer in [0, n) by 128-bit multiply-shift.
  uint32_t uniform_index(uint32_t n) {
    return static_cast<uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  uint64_t draws() const { return draws_; }

  bool operator==(const Rng& other) const {
    return gen_ == other.gen_ && draws_ == other.draws_;
  }

 private:
  std::mt19937_64 gen_;
  uint64_t draws_ = 0;
};

}  // namespace copd
