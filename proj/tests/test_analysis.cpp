#include "doctest.h"

#include "rcm/analysis.hpp"

#include <queue>
#include <random>
#include <set>

using namespace rcm;

namespace {

NetworkSample graph(std::size_t n, std::vector<Edge> edges)
{
    NetworkSample s;
    for (std::size_t k = 0; k < n; ++k)
        s.points.emplace_back(-0.5 + static_cast<double>(k) / static_cast<double>(n + 1), 0.0);
    std::sort(edges.begin(), edges.end());
    s.edges = std::move(edges);
    return s;
}

std::size_t bfs_components(const NetworkSample& s)
{
    std::vector<std::vector<std::uint32_t>> adj(s.size());
    for (const auto& e : s.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<bool> seen(s.size(), false);
    std::size_t count = 0;
    for (std::uint32_t start = 0; start < s.size(); ++start) {
        if (seen[start])
            continue;
        ++count;
        std::queue<std::uint32_t> q;
        q.push(start);
        seen[start] = true;
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            for (auto w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    q.push(w);
                }
        }
    }
    return count;
}

NetworkSample random_graph(std::mt19937_64& gen)
{
    std::uniform_int_distribution<std::size_t> size(0, 1000);
    const std::size_t n = size(gen);
    std::set<Edge> edges;
    if (n >= 2) {
        // mean degree spread across the connectivity threshold
        std::uniform_real_distribution<double> deg(0.0, 2.5 * std::log(static_cast<double>(n)) + 1.0);
        const auto m = static_cast<std::size_t>(deg(gen) * static_cast<double>(n) / 2.0);
        std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(n - 1));
        for (std::size_t k = 0; k < m; ++k) {
            auto a = node(gen), b = node(gen);
            if (a == b)
                continue;
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    return graph(n, {edges.begin(), edges.end()});
}

} // namespace

TEST_CASE("isolated_count examples")
{
    CHECK(isolated_count(graph(5, {})) == 5);
    CHECK(isolated_count(graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})) == 0);
    CHECK(isolated_count(graph(4, {{0, 1}, {1, 2}})) == 1);
}

TEST_CASE("components examples")
{
    auto c = components(graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
    CHECK(c.n_components == 1);
    CHECK(c.connected);
    c = components(graph(5, {{0, 1}, {2, 3}}));
    CHECK(c.n_components == 3);
    CHECK_FALSE(c.connected);
    c = components(graph(0, {}));
    CHECK(c.n_components == 0);
    CHECK(c.connected);
    c = components(graph(1, {}));
    CHECK(c.n_components == 1);
    CHECK(c.connected);
}

TEST_CASE("trial_statistics examples")
{
    auto r = trial_statistics(graph(4, {}));
    CHECK(r.isolated == 4);
    CHECK(r.n_components == 4);
    CHECK(r.mean_degree == 0.0);
    CHECK_FALSE(r.connected);
    CHECK_FALSE(r.coupling);

    r = trial_statistics(graph(3, {{0, 1}, {0, 2}, {1, 2}}));
    CHECK(r.isolated == 0);
    CHECK(r.n_components == 1);
    CHECK(r.mean_degree == 2.0);
    CHECK(r.n_edges == 3);

    r = trial_statistics(graph(0, {}));
    CHECK(r.mean_degree == 0.0);
    CHECK(r.connected);
}

TEST_CASE("coupled trial statistics split the isolated nodes")
{
    CoupledSample c;
    c.torus_graph = graph(5, {{0, 1}, {1, 2}, {3, 4}});
    c.square_graph = graph(5, {{0, 1}});
    c.removed_edges = {{1, 2}, {3, 4}};
    const auto r = trial_statistics(c);
    REQUIRE(r.coupling);
    CHECK(r.coupling->isolated_torus == 0);
    CHECK(r.coupling->isolated_square == 3);
    CHECK(r.coupling->isolated_boundary == 3);
    CHECK(r.isolated == 3);
    CHECK(r.n_edges == 1);
    CHECK(r.n_components == 4);
}

TEST_CASE("property: union-find agrees with BFS and degrees on 10^4 random graphs")
{
    std::mt19937_64 gen(31337);
    int failures = 0;
    for (int k = 0; k < 10000; ++k) {
        const auto s = random_graph(gen);
        const auto c = components(s);
        failures += c.n_components != bfs_components(s);
        failures += c.connected != (c.n_components <= 1);

        std::vector<bool> touched(s.size(), false);
        for (const auto& e : s.edges)
            touched[e.i] = touched[e.j] = true;
        const auto iso = static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
        failures += isolated_count(s) != iso;
        const auto deg = degrees(s);
        failures += static_cast<std::size_t>(std::count(deg.begin(), deg.end(), 0u)) != iso;
        if (s.size() >= 2 && c.connected)
            failures += iso != 0;

        const auto r = trial_statistics(s);
        failures += r.isolated > r.n_points;
        failures += r.n_points ? r.mean_degree != 2.0 * double(s.edges.size()) / double(s.size())
                               : r.mean_degree != 0.0;
    }
    CHECK(failures == 0);
}
