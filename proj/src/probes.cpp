#include "riskcal/probes.hpp"

namespace riskcal {

std::vector<RandomVariable> random_probes(std::size_t outcomes, std::size_t count, std::uint64_t seed,
                                          double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::vector<RandomVariable> out;
    out.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        std::vector<double> v(outcomes);
        for (double& x : v) x = lo + (hi - lo) * unit_uniform(rng);
        out.emplace_back(std::move(v));
    }
    return out;
}

std::vector<RandomVariable> crafted_probes(const OutcomeSpace& space, const Filtration& filtration) {
    const std::size_t n = space.size();
    const auto& f1 = filtration.f1;
    std::vector<RandomVariable> out;

    std::vector<double> ramp(n);
    for (std::size_t i = 0; i < n; ++i) ramp[i] = static_cast<double>(i);
    out.emplace_back(std::move(ramp));

    for (int direction : {1, -1}) {
        for (std::size_t bottom = 0; bottom < f1.block_count(); ++bottom) {
            std::vector<double> v(n);
            std::size_t level = 1;
            for (std::size_t b = 0; b < f1.block_count(); ++b) {
                const std::size_t shift = (b == bottom) ? 0 : level++;
                const auto& blk = f1.block(b);
                for (std::size_t j = 0; j < blk.size(); ++j) {
                    const double pos = static_cast<double>(direction > 0 ? j + 1 : blk.size() - j) /
                                       static_cast<double>(blk.size());
                    v[blk[j]] = 2.0 * static_cast<double>(shift) + pos;
                }
            }
            out.emplace_back(std::move(v));
        }
    }

    // One outcome of a block is the global minimum while its siblings sit above
    // every other block.
    for (std::size_t spiked = 0; spiked < f1.block_count(); ++spiked) {
        std::vector<double> v(n, 1.0);
        const auto& blk = f1.block(spiked);
        for (std::size_t j = 0; j < blk.size(); ++j) v[blk[j]] = j == 0 ? 0.0 : 10.0;
        out.emplace_back(std::move(v));
    }
    return out;
}

std::vector<RandomVariable> default_probes(const OutcomeSpace& space, const Filtration& filtration,
                                           std::size_t count, std::uint64_t seed) {
    auto out = random_probes(space.size(), count, seed);
    for (auto& p : crafted_probes(space, filtration)) out.push_back(std::move(p));
    return out;
}

}  // namespace riskcal
