#include "rcm/rng.hpp"

#include <algorithm>
#include <cmath>

namespace rcm::rng {

double pair_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag,
                    std::uint64_t i, std::uint64_t j) noexcept
{
    if (i > j)
        std::swap(i, j);
    std::uint64_t h = combine(seed, trial);
    h = combine(h, tag);
    h = combine(h, i);
    h = combine(h, j);
    return to_unit(h);
}

Stream::Stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) noexcept
    : key_(combine(combine(combine(0x5eed5eed5eed5eedULL, seed), trial), tag))
{
}

std::uint64_t poisson(Stream& s, double mean)
{
    if (!(mean > 0.0))
        return 0;
    if (mean < 30.0) {
        const double u = s.uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    // Hormann (1993), "The transformed rejection method for generating Poisson random variables"
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = s.uniform() - 0.5;
        const double v = s.uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr)
            return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

} // namespace rcm::rng
