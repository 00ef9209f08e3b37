#pragma once

#include <cstdint>
#include <random>

namespace hlab {

/// Named random streams. Each matrix role draws from its own stream so that,
/// for instance, the Wigner matrix W and the independent copy Y never share draws.
enum class StreamRole : std::uint64_t {
  wigner = 1,
  companion = 2,  // the independent copy Y_N
  field = 3,
  monte_carlo = 4,
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of the stream (master, role, replicate). Distinct triples give
/// statistically independent streams.
std::uint64_t stream_seed(std::uint64_t master, StreamRole role, std::uint64_t replicate) noexcept;

/// Deterministic uniform/normal source on top of mt19937_64.
///
/// Uniforms are (k + 1/2) / 2^53 for the top 53 bits k of one engine output, so
/// they lie strictly inside (0,1). Normals use the Box-Muller transform on two
/// consecutive uniforms and return the cosine branch first, then the sine branch.
/// Neither depends on the standard library's distribution implementations, so
/// streams are identical across toolchains.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hlab
