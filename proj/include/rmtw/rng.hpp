#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace rmtw {

/// (base_seed, stream) fully determines every draw.  Distinct streams give
/// independent generators, so replicates can run on any number of workers.
struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t stream = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic generator: mt19937_64 keyed by splitmix64-mixed
/// (base_seed, stream).  Gaussians use Box-Muller on explicit uniforms so
/// the byte stream is pinned, not library-defined.
class Rng {
 public:
  explicit Rng(SeedSpec seed);

  double uniform();      // in (0, 1)
  double normal();       // standard real Gaussian
  std::complex<double> complex_normal();  // E|z|^2 = 1, z = (u + iv)/sqrt(2)

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmtw
