#pragma once

#include <cstdint>
#include <random>

namespace mecsim {

using Rng = std::mt19937_64;

enum class StreamPurpose : std::uint32_t { kArrivals = 1, kLifespans = 2, kThinning = 3 };

/// Independent stream for one (replication, class, purpose) triple under a
/// master seed. Policies share streams, so comparisons see common random numbers.
inline Rng make_stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t cls, StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(replication >> 32),
                    static_cast<std::uint32_t>(cls), static_cast<std::uint32_t>(purpose)};
  return Rng(seq);
}

/// Uniform draw on [0, 1).
inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace mecsim
