#pragma once

// Seed derivation and sampling helpers shared by the serial and OpenMP kernels.
// Both code paths draw from identical per-shard streams, so they agree bit for bit.

#include <cstdint>
#include <random>
#include <vector>

namespace selfsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t shard) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + shard);
}

/// Uniform double in [0,1) from the top 53 bits; avoids the implementation-
/// defined std::uniform_real_distribution so streams match across platforms.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Index i with cumulative[i-1] <= u < cumulative[i]; cumulative ends at 1.
inline std::size_t pick_index(const std::vector<double>& cumulative, double u) {
  std::size_t i = 0;
  while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
  return i;
}

inline std::vector<double> cumulative_weights(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    s += w[i];
    c[i] = s;
  }
  for (double& x : c) x /= s;
  c.back() = 1.0;
  return c;
}

/// Fixed shard size used by every sharded Monte Carlo kernel.
inline constexpr std::size_t kShardSize = 4096;

}  // namespace selfsim
