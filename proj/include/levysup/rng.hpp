#pragma once

// Counter-based random numbers (Philox4x32-10). A draw is a pure function of
// (master seed, stream id, step index, draw index), so simulation output never
// depends on how paths are scheduled across workers.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace levysup {

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// Uniform on the open interval (0, 1) with 53 random bits.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Random stream for one path. Draws for step k are addressed by the counter
// (stream lo, stream hi, k, block), independent of any other step.
class PathRng {
 public:
  PathRng(std::uint64_t master_seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  void seek(std::uint32_t step) {
    step_ = step;
    block_ = 0;
    have_ = 0;
  }
  std::uint32_t step() const { return step_; }

  // The first two draws of a step, in the order uniform() returns them after
  // seek(step). Leaves the stream untouched, so blocks of steps can be
  // generated back to back.
  std::array<double, 2> first_pair(std::uint32_t step) const {
    const auto out = philox4x32_10({stream_lo_, stream_hi_, step, 0}, key_);
    return {to_open_unit((std::uint64_t{out[2]} << 32) | out[3]),
            to_open_unit((std::uint64_t{out[0]} << 32) | out[1])};
  }
  // first_pair for steps step0 .. step0 + count - 1 into u and v.
  void first_pairs(std::uint32_t step0, std::uint32_t count, double* u, double* v) const;
  // seek(step) followed by two uniform() calls.
  void seek_past_pair(std::uint32_t step) {
    step_ = step;
    block_ = 1;
    have_ = 0;
  }

  double uniform() {
    if (have_ == 0) refill();
    return buf_[--have_];
  }
  // Standard exponential.
  double exponential() { return -std::log(uniform()); }
  // Pair of independent standard normals (Box-Muller).
  std::array<double, 2> normal_pair() {
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  void refill() {
    const auto out = philox4x32_10({stream_lo_, stream_hi_, step_, block_++}, key_);
    buf_[0] = to_open_unit((std::uint64_t{out[0]} << 32) | out[1]);
    buf_[1] = to_open_unit((std::uint64_t{out[2]} << 32) | out[3]);
    have_ = 2;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint32_t step_ = 0, block_ = 0;
  std::array<double, 2> buf_{};
  int have_ = 0;
};

}  // namespace levysup
