#pragma once

#include "rcm/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace rcm {

/// Per-trial statistics. The coupled fields are set only for torus/square coupled trials.
struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::size_t n_points = 0;
    std::size_t n_edges = 0;
    std::size_t isolated = 0;
    std::size_t n_components = 0;
    bool connected = true;
    double mean_degree = 0.0;

    struct Coupling {
        std::size_t isolated_torus = 0;
        std::size_t isolated_square = 0;
        std::size_t isolated_boundary = 0;

        friend bool operator==(const Coupling&, const Coupling&) = default;
    };
    std::optional<Coupling> coupling;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct ComponentSummary {
    std::size_t n_components = 0;
    bool connected = true;
};

std::vector<std::size_t> degrees(const NetworkSample& sample);

/// Number of degree-zero nodes.
std::size_t isolated_count(const NetworkSample& sample);

/// Union-find (path compression, union by size). Empty and single-node graphs are connected.
ComponentSummary components(const NetworkSample& sample);

TrialRecord trial_statistics(const NetworkSample& sample);

/// Statistics of the square graph plus the torus/square/boundary isolated split.
TrialRecord trial_statistics(const CoupledSample& sample);

} // namespace rcm
