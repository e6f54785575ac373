#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ptc {

/// Philox4x32-10 block function (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Purpose of a draw, so input, weight, output and programming noise never
/// share a stream.
enum class NoiseChannel : std::uint32_t { input = 1, weight = 2, output = 3, program = 4, data = 5 };

/// Counter-based Gaussian stream keyed on (seed, layer, tile, channel). The
/// n-th draw depends only on the key and n, so evaluation order and
/// parallelism cannot change results.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint32_t layer, std::uint32_t tile, NoiseChannel channel)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        layer_(layer),
        tile_(tile),
        channel_(static_cast<std::uint32_t>(channel)) {}

  /// Two independent uniforms in (0, 1) for cell `index`.
  std::array<double, 2> uniform2(std::uint32_t index) const {
    auto r = philox4x32({index, channel_, tile_, layer_}, key_);
    auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
      const std::uint64_t bits = (std::uint64_t(hi) << 21) ^ (lo >> 11);  // 53 bits
      return (double(bits) + 0.5) * 0x1.0p-53;
    };
    return {to_unit(r[0], r[1]), to_unit(r[2], r[3])};
  }

  double uniform(std::uint32_t index) const { return uniform2(index)[0]; }

  /// Standard normal draw for cell `index` (Box-Muller).
  double normal(std::uint32_t index) const {
    auto [u1, u2] = uniform2(index);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t layer_;
  std::uint32_t tile_;
  std::uint32_t channel_;
};

}  // namespace ptc
