#include "rcm/analysis.hpp"

#include <algorithm>
#include <numeric>

namespace rcm {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), count_(n)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t v)
    {
        std::size_t root = v;
        while (parent_[root] != root)
            root = parent_[root];
        while (parent_[v] != root) {
            const std::size_t next = parent_[v];
            parent_[v] = root;
            v = next;
        }
        return root;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (size_[a] < size_[b])
            std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --count_;
    }

    std::size_t count() const noexcept { return count_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t count_;
};

} // namespace

std::vector<std::size_t> degrees(const NetworkSample& sample)
{
    std::vector<std::size_t> deg(sample.points.size(), 0);
    for (const Edge& e : sample.edges) {
        ++deg[e.i];
        ++deg[e.j];
    }
    return deg;
}

std::size_t isolated_count(const NetworkSample& sample)
{
    const auto deg = degrees(sample);
    return static_cast<std::size_t>(std::count(deg.begin(), deg.end(), std::size_t{0}));
}

ComponentSummary components(const NetworkSample& sample)
{
    DisjointSets sets(sample.points.size());
    for (const Edge& e : sample.edges)
        sets.unite(e.i, e.j);
    return {sets.count(), sets.count() <= 1};
}

TrialRecord trial_statistics(const NetworkSample& sample)
{
    TrialRecord rec;
    rec.trial_index = sample.params.trial_index;
    rec.n_points = sample.points.size();
    rec.n_edges = sample.edges.size();
    rec.isolated = isolated_count(sample);
    const auto comp = components(sample);
    rec.n_components = comp.n_components;
    rec.connected = comp.connected;
    rec.mean_degree = rec.n_points == 0 ? 0.0
                                        : 2.0 * static_cast<double>(rec.n_edges) /
                                              static_cast<double>(rec.n_points);
    return rec;
}

TrialRecord trial_statistics(const CoupledSample& sample)
{
    TrialRecord rec = trial_statistics(sample.square_graph);
    TrialRecord::Coupling c;
    c.isolated_torus = isolated_count(sample.torus_graph);
    c.isolated_square = rec.isolated;
    // nodes whose every torus edge was removed by the thinning
    const auto deg_torus = degrees(sample.torus_graph);
    const auto deg_square = degrees(sample.square_graph);
    for (std::size_t v = 0; v < deg_torus.size(); ++v)
        if (deg_torus[v] > 0 && deg_square[v] == 0)
            ++c.isolated_boundary;
    rec.coupling = c;
    return rec;
}

} // namespace rcm
