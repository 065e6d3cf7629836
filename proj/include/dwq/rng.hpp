#ifndef DWQ_RNG_HPP
#define DWQ_RNG_HPP

/*
 * Deterministic sampling for property checks. std::uniform_real_distribution
 * is not pinned down by the standard, so uniforms are built directly from
 * mt19937_64 output bits; identical seeds give identical streams on every
 * platform, which is what makes byte-identical CLI reruns possible.
 */

#include <cstdint>
#include <random>

namespace dwq {

class UniformSampler {
public:
    explicit UniformSampler(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive). Modulo construction: the
    /// tiny bias is irrelevant for sampling, determinism is what matters.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace dwq

#endif  // DWQ_RNG_HPP
