#ifndef QCBIND_RNG_HPP
#define QCBIND_RNG_HPP

#include <cstdint>
#include <random>

namespace qcbind {

// mt19937_64 output is pinned by the standard; the double mappings below avoid
// std::*_distribution, whose results differ between library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Count of successes in n Bernoulli(p) draws. O(n), reproducible everywhere.
    std::uint64_t binomial(std::uint64_t n, double p) {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (next_unit() < p) ++k;
        }
        return k;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace qcbind

#endif
