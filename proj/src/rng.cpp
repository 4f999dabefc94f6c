#include "levysup/rng.hpp"

#include <bit>

namespace levysup {

namespace {

// (m + 0.5) 2^-52 for the top 52 bits m, via 2^52 + m = bits of 0x4330.. | m so
// the loop below vectorizes without a 64-bit integer to double conversion.
inline double open_unit_from(std::uint64_t bits) {
  const double m = std::bit_cast<double>(0x4330000000000000ULL | (bits >> 12)) - 0x1.0p52;
  return (m + 0.5) * 0x1.0p-52;
}

// Same rounds as philox4x32_10 over a run of counters (lo, hi, step0 + j, 0).
__attribute__((target_clones("avx2", "default")))
void philox_pairs(std::uint32_t k0, std::uint32_t k1, std::uint32_t lo, std::uint32_t hi,
                  std::uint32_t step0, std::uint32_t count, double* u, double* v) {
  for (std::uint32_t j = 0; j < count; ++j) {
    std::uint32_t c0 = lo, c1 = hi, c2 = step0 + j, c3 = 0, a = k0, b = k1;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
      const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ a;
      const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ b;
      c1 = static_cast<std::uint32_t>(p1);
      c3 = static_cast<std::uint32_t>(p0);
      c0 = n0;
      c2 = n2;
      a += 0x9E3779B9u;
      b += 0xBB67AE85u;
    }
    u[j] = open_unit_from((std::uint64_t{c2} << 32) | c3);
    v[j] = open_unit_from((std::uint64_t{c0} << 32) | c1);
  }
}

}  // namespace

void PathRng::first_pairs(std::uint32_t step0, std::uint32_t count, double* u, double* v) const {
  philox_pairs(key_[0], key_[1], stream_lo_, stream_hi_, step0, count, u, v);
}

}  // namespace levysup
