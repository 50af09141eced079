#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "riskcal/space.hpp"

namespace riskcal {

inline constexpr std::uint64_t kDefaultSeed = 20181201;
inline constexpr std::size_t kDefaultProbeCount = 200;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<RandomVariable> random_probes(std::size_t outcomes, std::size_t count, std::uint64_t seed,
                                          double lo = -1.0, double hi = 1.0);

/// Block-interleaved probes: the outcome-index ramp, and for each F1 block a
/// probe that places that block's values below every other block (values rising
/// within blocks), the same with values falling within blocks, and for each
/// block a probe whose first outcome is the global minimum while the rest of
/// that block lies above all other blocks.
std::vector<RandomVariable> crafted_probes(const OutcomeSpace& space, const Filtration& filtration);

/// Random probes followed by the crafted family.
std::vector<RandomVariable> default_probes(const OutcomeSpace& space, const Filtration& filtration,
                                           std::size_t count = kDefaultProbeCount,
                                           std::uint64_t seed = kDefaultSeed);

}  // namespace riskcal
