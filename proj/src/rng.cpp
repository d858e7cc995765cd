#include "rmtw/rng.hpp"

#include <cmath>
#include <numbers>

namespace rmtw {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(SeedSpec seed) {
  // Mix base_seed and stream through splitmix64 so nearby streams do not
  // produce correlated mt19937_64 states.
  std::uint64_t s = seed.base_seed;
  std::uint64_t a = splitmix64(s);
  s ^= seed.stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(s);
  gen_.seed(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
  gen_.discard(8);  // flush the low-entropy warmup
}

double Rng::uniform() {
  // 53-bit mantissa, strictly inside (0, 1).
  const std::uint64_t bits = gen_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::complex<double> Rng::complex_normal() {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  const double u = normal();
  const double v = normal();
  return {u * inv_sqrt2, v * inv_sqrt2};
}

}  // namespace rmtw
