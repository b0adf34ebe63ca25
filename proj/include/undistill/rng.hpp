#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace undistill {

/// Versioned, reproducible random stream.
///
/// Engine: std::mt19937_64, seeded through std::seed_seq from
/// (seed, stream, kVersion) split into 32-bit words. Both are fully specified
/// by the C++ standard, so a (seed, stream) pair yields the same sequence on
/// every conforming implementation. Uniforms take the top 53 bits of one draw;
/// normals use Box-Muller. Bump kVersion whenever the mapping changes.
class Rng {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on (0, 1].
  double uniform_open0();
  /// Standard normal.
  double normal();
  /// Re and Im independent standard normals.
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer applied to seed and index; used to hand each
/// independent task (sample, trial batch) its own seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace undistill
