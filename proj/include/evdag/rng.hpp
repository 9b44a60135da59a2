#pragma once

#include <array>
#include <cstdint>

namespace evdag {

// Philox4x32-10 counter-based generator (multipliers 0xD2511F53, 0xCD9E8D57;
// Weyl increments 0x9E3779B9, 0xBB67AE85). The 64-bit seed forms the key, the
// 64-bit stream id occupies the upper counter words, so (seed, stream) pairs
// index reproducible independent streams. Gaussians use the Box-Muller cosine
// branch (two uniforms per normal, no rejection); bounded ints use bitmask
// rejection, so they are exactly uniform.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // [0, 1), 53-bit resolution.
  double uniform01();
  // (0, 1], never zero; safe under log().
  double uniform_pos();
  double normal();
  // Uniform on {0, 1, ..., n-1}; n >= 1.
  std::int64_t uniform_int(std::int64_t n);

 private:
  void refill();
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_;
  int idx_;
};

// Raw block function exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

}  // namespace evdag
