#pragma once

#include <cstdint>

namespace rcm::rng {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

/// Order-sensitive hash of a word sequence; each step avalanches the full state.
constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept
{
    return mix64(h ^ mix64(v + golden));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t z) noexcept
{
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Stream tags keep the independent uses of one (seed, trial) apart.
enum StreamTag : std::uint64_t {
    kPoints = 1,
    kEdges = 2,
    kBoundaryThinning = 3,
};

/// Uniform variate for the unordered pair {i, j}: a pure function of its arguments.
double pair_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag,
                    std::uint64_t i, std::uint64_t j) noexcept;

/// Sequential counter-based stream keyed by (seed, trial, tag).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) noexcept;

    std::uint64_t next_u64() noexcept { return mix64(key_ + golden * ++counter_); }
    double uniform() noexcept { return to_unit(next_u64()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Poisson(mean) draw: inversion below mean 30, PTRS transformed rejection above.
std::uint64_t poisson(Stream& s, double mean);

} // namespace rcm::rng
