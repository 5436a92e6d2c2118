#pragma once

#include "rcm/geometry.hpp"
#include "rcm/models.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace rcm {

struct SampleParams {
    double rho = 0.0;
    double b = 0.0;
    std::shared_ptr<const ConnectionModel> model;
    Metric metric = Metric::Torus;
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
    /// Scan all pairs instead of the bucket grid. Lifts the grid precondition for the square
    /// metric (including models without a finite cutoff); the torus restriction stays.
    bool exact = false;

    /// r_rho for these parameters; throws ParameterError when ln rho + b <= 0.
    double radius() const;
    /// Throws ParameterError/ModelError if the parameters cannot be sampled.
    void validate() const;
};

struct Edge {
    std::uint32_t i;
    std::uint32_t j;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// One realisation: points, edges (i < j, sorted) and the connection radius used.
struct NetworkSample {
    SampleParams params;
    std::vector<Point2> points;
    std::vector<Edge> edges;
    double r = 0.0;

    std::size_t size() const noexcept { return points.size(); }
    double distance(const Edge& e) const
    {
        return rcm::distance(params.metric, points[e.i], points[e.j]);
    }
};

/// The torus graph and the square graph obtained from it by edge thinning, on one point set.
struct CoupledSample {
    NetworkSample torus_graph;
    NetworkSample square_graph;
    std::vector<Edge> removed_edges;
};

/// N ~ Poisson(rho) uniform points on the unit cell; a pure function of (master_seed, trial_index).
std::vector<Point2> sample_points(const SampleParams& params);

/// Includes each pair at distance d <= r * cutoff independently with probability g(d / r),
/// scanning 3x3 neighbourhoods of a bucket grid (or all pairs in exact mode).
NetworkSample build_graph(const SampleParams& params, std::vector<Point2> points);

/// All-pairs construction sharing the per-pair random function with build_graph.
NetworkSample build_graph_brute_force(const SampleParams& params, std::vector<Point2> points);

using KeepRatio = std::function<double(const NetworkSample&, const Edge&)>;

/// Keeps each edge independently with probability keep_ratio(edge). The output keeps the
/// input's params; callers relabel the metric when the thinning changes it.
NetworkSample thin_edges(const NetworkSample& sample, const KeepRatio& keep_ratio,
                         std::uint64_t stream_tag);

/// Samples points once, builds the torus graph and thins each edge with keep probability
/// g(d_euclid / r) / g(d_torus / r), giving the square-metric graph on the same points.
CoupledSample couple_torus_to_square(const SampleParams& params);

/// Expected number of pairs dropped per trial because g is cut off: (rho^2 r^2 / 2) x
/// integral beyond the cutoff of 2 pi x g(x).
double truncation_bias(const ConnectionModel& model, double rho, double b);

/// Header "n_points rho b model metric seed trial", then one "i j d" line per edge.
void write_edge_list(std::ostream& out, const NetworkSample& sample);

} // namespace rcm
