#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sap {

// Deterministic splittable RNG. All randomized routines take an explicit
// stream so results are reproducible across platforms (no std::uniform_*
// distributions, whose output is implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {
    // Warm up so nearby seeds decorrelate.
    next_u64();
    next_u64();
  }

  uint64_t next_u64() {
    // splitmix64
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), unbiased via rejection.
  uint64_t next_below(uint64_t n) {
    if (n <= 1) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  long long next_int(long long lo, long long hi) {  // inclusive bounds
    return lo + static_cast<long long>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double next_unit() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Derive an independent child stream from a label. Used to give each
  // (box, block, W-index, ...) its own reproducible bits.
  Rng derive(std::string_view label) const {
    uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return Rng(state_ ^ h);
  }

  Rng derive(uint64_t label) const { return Rng(state_ ^ (label * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL)); }

 private:
  uint64_t state_;
};

}  // namespace sap
