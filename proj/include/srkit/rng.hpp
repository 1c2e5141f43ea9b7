#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace srk {

/// SplitMix64 step (Steele, Lea & Flood 2014). Used for seeding and for
/// deriving child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic 64-bit mix of a seed with a list of indices.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> indices) {
  std::uint64_t state = seed;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t i : indices) {
    state = out ^ (i + 0x632be59bd9b4e019ULL);
    out = splitmix64(state);
  }
  return out;
}

namespace detail {

struct ZigguratTables {
  std::array<double, 257> x;  // layer edges, x[1] = r, x[256] = 0
  std::array<double, 257> f;  // exp(-x^2 / 2)
};

const ZigguratTables& ziggurat_tables();

}  // namespace detail

/// Random stream "srk-rng v1":
///   * engine: xoshiro256++ (Blackman & Vigna 2019);
///   * substream (seed, index): the four state words are consecutive
///     SplitMix64 outputs started from derive_seed(seed, {index});
///   * uniform: top 53 bits scaled by 2^-53, in [0, 1);
///   * normal: 256-layer ziggurat (Marsaglia & Tsang 2000, r = 3.6541528853610088).
///     Each attempt consumes one 64-bit word: the low 8 bits pick the layer,
///     bit 8 the sign and the top 52 bits the abscissa. Wedge and tail
///     rejections draw further uniforms.
/// The output sequence depends only on (seed, index).
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = derive_seed(seed, {stream});
    for (auto& w : s_) w = splitmix64(sm);
    zt_ = &detail::ziggurat_tables();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_below() { return 1.0 - uniform(); }

  double normal() {
    const auto& zt = *zt_;
    for (;;) {
      const std::uint64_t bits = (*this)();
      const auto layer = static_cast<std::size_t>(bits & 0xff);
      const double sign = (bits & 0x100) ? -1.0 : 1.0;
      const double u = static_cast<double>(bits >> 12) * 0x1.0p-52;
      const double x = u * zt.x[layer];
      if (x < zt.x[layer + 1]) return sign * x;
      if (layer == 0) return sign * tail(zt.x[1]);
      const double y = zt.f[layer] + (zt.f[layer + 1] - zt.f[layer]) * uniform();
      if (y < std::exp(-0.5 * x * x)) return sign * x;
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  double tail(double r) {
    for (;;) {
      const double x = -std::log(uniform_open_below()) / r;
      const double y = -std::log(uniform_open_below());
      if (2.0 * y >= x * x) return r + x;
    }
  }

  std::array<std::uint64_t, 4> s_{};
  const detail::ZigguratTables* zt_ = nullptr;
};

}  // namespace srk
