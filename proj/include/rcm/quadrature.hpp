#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace rcm::quad {

struct Options {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    std::size_t max_panels = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    std::size_t panels = 0;

    Result& operator+=(const Result& o)
    {
        value += o.value;
        error += o.error;
        converged = converged && o.converged;
        panels += o.panels;
        return *this;
    }
};

namespace detail {

// 15-point Kronrod abscissae on [0, 1], with the embedded 7-point Gauss rule on odd indices.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod(F& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kronrod_w[7];
    double gauss = fc * gauss_w[3];
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_x[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        kronrod += kronrod_w[j] * (f1[j] + f2[j]);
        if (j % 2 == 1)
            gauss += gauss_w[j / 2] * (f1[j] + f2[j]);
    }
    // QUADPACK-style error scaling
    const double mean = kronrod * 0.5;
    double asc = kronrod_w[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        asc += kronrod_w[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    asc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0)
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    return {a, b, kronrod * half, err};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
/// Interior breakpoints (kinks, jumps) are honoured as initial panel edges.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {})
{
    Result out;
    if (!(b > a))
        return out;

    std::vector<double> edges{a};
    for (double p : breakpoints)
        if (p > a && p < b)
            edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<detail::Panel> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        auto p = detail::gauss_kronrod(f, edges[k], edges[k + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    std::size_t panels = heap.size();

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (total_err > target() && panels < opt.max_panels) {
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            break; // panel cannot be refined further in double precision
        heap.pop();
        auto left = detail::gauss_kronrod(f, worst.a, mid);
        auto right = detail::gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // resum to shed accumulated cancellation in the running totals
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = total_err;
    out.panels = panels;
    out.converged = total_err <= target();
    return out;
}

} // namespace rcm::quad
