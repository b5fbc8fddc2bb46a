#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fraclab {

/// Deterministic random source. The distributions in <random> are
/// implementation-defined, so every draw here is built from raw engine
/// output to keep results bit-identical across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  /// Derive an independent stream, e.g. one per Monte-Carlo shell.
  Rng fork(std::uint64_t stream) const {
    return Rng(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 0x51ed2701)));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Box-Muller; two engine draws per call, no cached state.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

/// Radical-inverse (Halton) sequence, used for low-discrepancy probe points.
inline double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  for (std::uint64_t i = index + 1; i > 0; i /= base) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
  }
  return r;
}

}  // namespace fraclab
