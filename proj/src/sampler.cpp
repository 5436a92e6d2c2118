#include "rcm/sampler.hpp"

#include "rcm/errors.hpp"
#include "rcm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace rcm {

namespace {

// Largest coordinate strictly below 1/2.
const double kCellTop = std::nextafter(0.5, 0.0);

double reach_of(const SampleParams& p, double r)
{
    return r * p.model->cutoff();
}

// Edge rule shared by the grid and brute-force scans.
struct PairRule {
    const SampleParams& params;
    const std::vector<Point2>& points;
    double r;
    double reach;

    bool operator()(std::uint32_t i, std::uint32_t j) const
    {
        const double d = distance(params.metric, points[i], points[j]);
        if (!(d <= reach))
            return false;
        const double g = (*params.model)(d / r);
        if (g <= 0.0)
            return false;
        return rng::pair_uniform(params.master_seed, params.trial_index, rng::kEdges, i, j) < g;
    }
};

} // namespace

double SampleParams::radius() const
{
    if (!model)
        throw ParameterError("sample parameters carry no connection model");
    return connection_radius(model->C(), rho, b);
}

void SampleParams::validate() const
{
    const double r = radius();
    if (metric == Metric::Torus) {
        if (!model->has_finite_cutoff() || r * model->cutoff() > 0.5)
            throw ParameterError("torus sampling needs r * cutoff <= 1/2 (got r = " + std::to_string(r) +
                                 ", cutoff = " + std::to_string(model->cutoff()) +
                                 "); use the square metric with exact mode for larger scales");
    } else if (!exact && !model->has_finite_cutoff()) {
        throw ParameterError("grid construction needs a finite cutoff; use exact (all-pairs) mode");
    }
}

std::vector<Point2> sample_points(const SampleParams& params)
{
    if (!(params.rho > 0.0))
        throw ParameterError("rho must be positive");
    rng::Stream stream(params.master_seed, params.trial_index, rng::kPoints);
    const auto n = rng::poisson(stream, params.rho);
    std::vector<Point2> points;
    points.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const double x = std::min(stream.uniform() - 0.5, kCellTop);
        const double y = std::min(stream.uniform() - 0.5, kCellTop);
        points.emplace_back(x, y);
    }
    return points;
}

NetworkSample build_graph_brute_force(const SampleParams& params, std::vector<Point2> points)
{
    params.validate();
    NetworkSample out{params, std::move(points), {}, params.radius()};
    const PairRule rule{out.params, out.points, out.r, reach_of(params, out.r)};
    const auto n = static_cast<std::uint32_t>(out.points.size());
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (rule(i, j))
                out.edges.push_back({i, j});
    return out;
}

NetworkSample build_graph(const SampleParams& params, std::vector<Point2> points)
{
    if (params.exact)
        return build_graph_brute_force(params, std::move(points));
    params.validate();

    NetworkSample out{params, std::move(points), {}, params.radius()};
    const double reach = reach_of(params, out.r);
    const PairRule rule{out.params, out.points, out.r, reach};
    const auto n = static_cast<std::uint32_t>(out.points.size());
    if (n < 2)
        return out;

    // Cells are at least `reach` wide, so every candidate pair sits in adjacent cells.
    // The cell count is capped near sqrt(n) per side; wider cells stay correct.
    const double per_side = std::floor((1.0 / reach) * (1.0 - 1e-9));
    const double cap = std::ceil(2.0 * std::sqrt(static_cast<double>(n))) + 1.0;
    const int m = static_cast<int>(std::clamp(per_side, 1.0, cap));
    const bool wrap = params.metric == Metric::Torus;

    auto cell_coord = [m](double v) {
        return std::min(m - 1, static_cast<int>((v + 0.5) * m));
    };
    std::vector<std::uint32_t> start(static_cast<std::size_t>(m) * m + 1, 0);
    std::vector<int> cell_of(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        cell_of[i] = cell_coord(out.points[i].x()) * m + cell_coord(out.points[i].y());
        ++start[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start.size(); ++c)
        start[c] += start[c - 1];
    std::vector<std::uint32_t> members(n);
    {
        auto fill = start;
        for (std::uint32_t i = 0; i < n; ++i)
            members[fill[cell_of[i]]++] = i;
    }

    std::vector<int> neighbours;
    for (int cx = 0; cx < m; ++cx) {
        for (int cy = 0; cy < m; ++cy) {
            neighbours.clear();
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    int nx = cx + dx, ny = cy + dy;
                    if (wrap) {
                        nx = (nx + m) % m;
                        ny = (ny + m) % m;
                    } else if (nx < 0 || ny < 0 || nx >= m || ny >= m) {
                        continue;
                    }
                    neighbours.push_back(nx * m + ny);
                }
            }
            std::sort(neighbours.begin(), neighbours.end());
            neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());

            const int here = cx * m + cy;
            for (std::uint32_t a = start[here]; a < start[here + 1]; ++a) {
                const std::uint32_t i = members[a];
                for (int nb : neighbours)
                    for (std::uint32_t k = start[nb]; k < start[nb + 1]; ++k) {
                        const std::uint32_t j = members[k];
                        if (j > i && rule(i, j))
                            out.edges.push_back({i, j});
                    }
            }
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

NetworkSample thin_edges(const NetworkSample& sample, const KeepRatio& keep_ratio,
                         std::uint64_t stream_tag)
{
    NetworkSample out{sample.params, sample.points, {}, sample.r};
    out.edges.reserve(sample.edges.size());
    for (const Edge& e : sample.edges) {
        const double keep = keep_ratio(sample, e);
        if (!(keep >= 0.0 && keep <= 1.0))
            throw ModelError("keep probability " + std::to_string(keep) + " for edge (" +
                             std::to_string(e.i) + ", " + std::to_string(e.j) +
                             ") is outside [0, 1]; g is not monotone or the metrics are inverted");
        const double u = rng::pair_uniform(sample.params.master_seed, sample.params.trial_index,
                                           stream_tag, e.i, e.j);
        if (u < keep)
            out.edges.push_back(e);
    }
    return out;
}

CoupledSample couple_torus_to_square(const SampleParams& params)
{
    SampleParams torus = params;
    torus.metric = Metric::Torus;
    torus.exact = false;

    CoupledSample out;
    out.torus_graph = build_graph(torus, sample_points(torus));
    const ConnectionModel& g = *params.model;
    const double r = out.torus_graph.r;
    auto keep = [&g, r](const NetworkSample& s, const Edge& e) {
        const double dt = toroidal_distance(s.points[e.i], s.points[e.j]);
        const double de = euclidean_distance(s.points[e.i], s.points[e.j]);
        if (de == dt)
            return 1.0;
        const double denom = g(dt / r);
        return denom > 0.0 ? g(de / r) / denom : 0.0;
    };
    out.square_graph = thin_edges(out.torus_graph, keep, rng::kBoundaryThinning);
    out.square_graph.params.metric = Metric::Square;
    std::set_difference(out.torus_graph.edges.begin(), out.torus_graph.edges.end(),
                        out.square_graph.edges.begin(), out.square_graph.edges.end(),
                        std::back_inserter(out.removed_edges));
    return out;
}

double truncation_bias(const ConnectionModel& model, double rho, double b)
{
    const double r = connection_radius(model.C(), rho, b);
    if (!model.has_finite_cutoff())
        throw ParameterError("model has no finite cutoff; nothing is truncated in exact mode");
    const auto tail = radial_tail(model, model.cutoff());
    return 0.5 * rho * rho * r * r * tail.value;
}

void write_edge_list(std::ostream& out, const NetworkSample& s)
{
    char buf[96];
    out << s.points.size();
    std::snprintf(buf, sizeof buf, " %.17g %.17g ", s.params.rho, s.params.b);
    out << buf << (s.params.model ? s.params.model->name() : std::string("none")) << ' '
        << to_string(s.params.metric) << ' ' << s.params.master_seed << ' ' << s.params.trial_index
        << '\n';
    for (const Edge& e : s.edges) {
        std::snprintf(buf, sizeof buf, "%u %u %.17g\n", e.i, e.j, s.distance(e));
        out << buf;
    }
}

} // namespace rcm
