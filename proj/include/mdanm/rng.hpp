#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mdanm {

/// Deterministic random source.  The engine is mt19937_64 (bit-exact across
/// platforms); all distribution transforms are implemented here instead of
/// through std::*_distribution so that draws do not depend on the standard
/// library implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 2.0 * 3.141592653589793238462643383279502884 * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Real and imaginary part each standard normal.
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

namespace stream {
// Named substreams fanned out from one master seed.  Keeping these fixed
// makes any single trial reproducible in isolation.
inline constexpr std::uint64_t frequencies = 1;
inline constexpr std::uint64_t amplitudes = 2;
inline constexpr std::uint64_t compressor = 3;
inline constexpr std::uint64_t noise = 4;
inline constexpr std::uint64_t init = 5;
}  // namespace stream

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Derive the seed of substream (id, level, trial) from the master seed.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t id,
                               std::uint64_t level = 0,
                               std::uint64_t trial = 0) {
  std::uint64_t h = splitmix64(seed ^ (0xA0761D6478BD642Full * (id + 1)));
  h = splitmix64(h ^ (0xE7037ED1A0B428DBull * (level + 1)));
  h = splitmix64(h ^ (0x8EBC6AF09C88C6E3ull * (trial + 1)));
  return h;
}

}  // namespace mdanm
