#include "rcm/theory.hpp"

#include "rcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rcm {

namespace {

constexpr double kPi = std::numbers::pi;

quad::Options radial_opts(double abs_tol)
{
    return {.abs_tol = abs_tol, .rel_tol = 1e-13, .max_panels = 2000};
}

// Integral of f over [lo, hi] after s = lo + (hi - lo) w^2, which flattens the square-root
// behaviour the angular factors have at the lower limit.
template <class F>
quad::Result integrate_from_sqrt_edge(F&& f, double lo, double hi, std::span<const double> bps,
                                      const quad::Options& opt)
{
    if (!(hi > lo))
        return {};
    const double span = hi - lo;
    std::vector<double> wb;
    for (double k : bps)
        if (k > lo && k < hi)
            wb.push_back(std::sqrt((k - lo) / span));
    auto h = [&](double w) {
        const double s = lo + span * w * w;
        return f(s) * 2.0 * span * w;
    };
    return quad::integrate(h, 0.0, 1.0, opt, wb);
}

void require_finite_cutoff(const ConnectionModel& model)
{
    if (!model.has_finite_cutoff())
        throw ParameterError("theory quadrature needs a model with a finite cutoff");
}

void require(const quad::Result& r, const char* what)
{
    if (!r.converged)
        throw QuadratureError(std::string(what) + ": quadrature did not reach its tolerance (estimate " +
                                  std::to_string(r.value) + ", error " + std::to_string(r.error) + ")",
                              r.value, r.error);
}

struct Scaled {
    double r;      // connection radius
    double lambda; // rho r^2: density in units of r
    double L;      // side of the unit square in units of r
};

Scaled scaled(const ConnectionModel& model, double rho, double b)
{
    const double r = connection_radius(model.C(), rho, b);
    return {r, rho * r * r, 1.0 / r};
}

} // namespace

double half_plane_mass(const ConnectionModel& model, double t, double abs_tol)
{
    const double c = model.cutoff();
    t = std::max(t, 0.0);
    if (t >= c)
        return 0.0;
    auto f = [&](double s) {
        return s > 0.0 ? 2.0 * s * model(s) * std::acos(std::min(1.0, t / s)) : 0.0;
    };
    return integrate_from_sqrt_edge(f, t, c, model.breakpoints(), radial_opts(abs_tol)).value;
}

double quadrant_mass(const ConnectionModel& model, double a, double b, double abs_tol)
{
    const double c = model.cutoff();
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    const double s0 = std::hypot(a, b);
    if (s0 >= c)
        return 0.0;
    auto f = [&](double s) {
        if (s <= 0.0)
            return 0.0;
        const double arc = std::acos(std::min(1.0, a / s)) - std::asin(std::min(1.0, b / s));
        return s * model(s) * std::max(arc, 0.0);
    };
    return integrate_from_sqrt_edge(f, s0, c, model.breakpoints(), radial_opts(abs_tol)).value;
}

namespace {

double window_mass(const ConnectionModel& model, double left, double right, double bottom, double top,
                   double abs_tol)
{
    double m = model.support_integral().value;
    m -= half_plane_mass(model, left, abs_tol) + half_plane_mass(model, right, abs_tol) +
         half_plane_mass(model, bottom, abs_tol) + half_plane_mass(model, top, abs_tol);
    m += quadrant_mass(model, left, bottom, abs_tol) + quadrant_mass(model, left, top, abs_tol) +
         quadrant_mass(model, right, bottom, abs_tol) + quadrant_mass(model, right, top, abs_tol);
    return m;
}

} // namespace

double square_window_mass(const ConnectionModel& model, double left, double right, double bottom,
                          double top)
{
    require_finite_cutoff(model);
    return window_mass(model, left, right, bottom, top, 1e-12);
}

double overlap_mass(const ConnectionModel& model, double D, double abs_tol)
{
    require_finite_cutoff(model);
    const double c = model.cutoff();
    D = std::abs(D);
    if (D >= 2.0 * c)
        return 0.0;

    auto angular = [&](double s) {
        if (s <= 0.0 || D <= 0.0)
            return 2.0 * kPi * model(std::max(s, D));
        const double two_sd = 2.0 * s * D;
        const double base = s * s + D * D;
        auto cos_at = [&](double k) { return std::clamp((base - k * k) / two_sd, -1.0, 1.0); };
        const double theta_max = (s + D <= c) ? kPi : std::acos(cos_at(c));
        if (theta_max <= 0.0)
            return 0.0;
        std::vector<double> bps;
        for (double k : model.breakpoints())
            if (k < c) {
                const double th = std::acos(cos_at(k));
                if (th > 0.0 && th < theta_max)
                    bps.push_back(th);
            }
        auto h = [&](double th) {
            return model(std::sqrt(std::max(0.0, base - two_sd * std::cos(th))));
        };
        return 2.0 * quad::integrate(h, 0.0, theta_max, radial_opts(abs_tol * 1e-2), bps).value;
    };

    const double lo = std::max(0.0, D - c);
    std::vector<double> bps;
    for (double k : model.breakpoints()) {
        bps.push_back(std::abs(D - k));
        bps.push_back(D + k);
        bps.push_back(k);
    }
    auto res = quad::integrate([&](double s) { return s * model(s) * angular(s); }, lo, c,
                               radial_opts(abs_tol), bps);
    return res.value;
}

Estimate expected_isolated(const ConnectionModel& model, double rho, double b, Metric metric,
                           const TheoryOptions& opt)
{
    require_finite_cutoff(model);
    const Scaled sc = scaled(model, rho, b);
    const double c = model.cutoff();
    const double half = 0.5 * sc.L;
    // exponent tolerance spread over the nine terms of a window mass
    const double radial_tol = opt.inner_abs_tol / (9.0 * std::max(sc.lambda, 1.0));
    const quad::Result& support = model.support_integral();

    if (metric == Metric::Torus) {
        // the cutoff disk fits inside the cell: radial reduction; otherwise the cell as a window
        const double mass = (c <= half) ? support.value
                                        : window_mass(model, half, half, half, half, radial_tol);
        const double value = rho * std::exp(-sc.lambda * mass);
        return {value, value * sc.lambda * (support.error + 9.0 * radial_tol)};
    }

    // Square: by symmetry, four copies of the corner quadrant [0, L/2]^2 in (a, b) = distances
    // to the nearest vertical and horizontal sides. Beyond m = min(c, L/2) from the near sides the
    // integrand no longer depends on that coordinate, which splits the quadrant into a corner
    // block, two edge strips and an interior block.
    const double m = std::min(c, half);
    std::vector<double> edge_bps;
    for (double k : model.breakpoints()) {
        edge_bps.push_back(k);
        edge_bps.push_back(sc.L - k);
    }

    double worst_inner_err = 0.0;
    auto inner = [&](double a) {
        const double da = half_plane_mass(model, a, radial_tol) + half_plane_mass(model, sc.L - a, radial_tol);
        auto f = [&](double bb) {
            double mass = support.value - da;
            mass -= half_plane_mass(model, bb, radial_tol) + half_plane_mass(model, sc.L - bb, radial_tol);
            mass += quadrant_mass(model, a, bb, radial_tol) + quadrant_mass(model, sc.L - a, bb, radial_tol) +
                    quadrant_mass(model, a, sc.L - bb, radial_tol) +
                    quadrant_mass(model, sc.L - a, sc.L - bb, radial_tol);
            return std::exp(-sc.lambda * mass);
        };
        std::vector<double> bps = edge_bps;
        for (double k : model.breakpoints()) {
            if (k > a)
                bps.push_back(std::sqrt(k * k - a * a));
            const double far = sc.L - a;
            if (k > far)
                bps.push_back(std::sqrt(k * k - far * far));
        }
        const auto res = quad::integrate(f, 0.0, m,
                                         {.abs_tol = 1e-15, .rel_tol = opt.outer_rel_tol * 1e-2,
                                          .max_panels = opt.max_panels},
                                         bps);
        require(res, "expected_isolated inner integral");
        worst_inner_err = std::max(worst_inner_err, res.error);
        return res.value;
    };

    const auto corner = quad::integrate(inner, 0.0, m,
                                        {.abs_tol = 1e-15, .rel_tol = opt.outer_rel_tol,
                                         .max_panels = opt.max_panels},
                                        edge_bps);
    require(corner, "expected_isolated outer integral");

    const double rest = half - m;
    double strip = 0.0, interior = 0.0;
    if (rest > 0.0) {
        strip = rest * inner(m);
        const double mass = window_mass(model, m, sc.L - m, m, sc.L - m, radial_tol);
        interior = rest * rest * std::exp(-sc.lambda * mass);
    }
    const double value = 4.0 * sc.lambda * (corner.value + 2.0 * strip + interior);
    const double err = 4.0 * sc.lambda *
                           (corner.error + m * worst_inner_err + 2.0 * rest * worst_inner_err) +
                       value * sc.lambda * (support.error + 9.0 * radial_tol);
    return {value, err};
}

TheoryReport asymptotic_report(double rho, double b)
{
    const double s = std::log(rho) + b;
    if (!(rho > 0.0) || !(s > 0.0))
        throw ParameterError("log rho + b <= 0");
    TheoryReport rep;
    rep.asymptotic_mean = std::exp(-b);
    rep.prob_no_isolated = std::exp(-std::exp(-b));
    rep.mean_degree = s;
    return rep;
}

TheoryReport theory_report(const ConnectionModel& model, double rho, double b, Metric metric,
                           const TheoryOptions& opt)
{
    TheoryReport rep = asymptotic_report(rho, b);
    rep.metric = metric;
    const auto torus = expected_isolated(model, rho, b, Metric::Torus, opt);
    const auto square = expected_isolated(model, rho, b, Metric::Square, opt);
    const auto& chosen = metric == Metric::Torus ? torus : square;
    rep.expected_isolated = chosen.value;
    rep.expected_isolated_error = chosen.error;
    rep.boundary_excess = square.value - torus.value;
    rep.boundary_excess_error = square.error + torus.error;
    return rep;
}

double pair_correlation_factor(const ConnectionModel& model, double rho, double b, double d)
{
    if (!(d >= 0.0))
        throw ParameterError("pair distance must be non-negative");
    const Scaled sc = scaled(model, rho, b);
    const double D = d / sc.r;
    return (1.0 - model(D)) * std::exp(sc.lambda * overlap_mass(model, D));
}

ChenSteinTerms chen_stein_terms(const ConnectionModel& model, double rho, double b,
                                const ChenSteinParams& params)
{
    const double eps = params.epsilon;
    if (!(eps > 0.0 && eps < 0.5))
        throw ParameterError("epsilon must lie in (0, 1/2)");
    require_finite_cutoff(model);
    const Scaled sc = scaled(model, rho, b);
    const double c = model.cutoff();
    const double e_torus = expected_isolated(model, rho, b, Metric::Torus, params.quadrature).value;

    ChenSteinTerms out;
    const double scale = (std::log(rho) + b) / (model.C() * rho); // r^2
    out.b1 = 4.0 * kPi * e_torus * e_torus * std::pow(scale, 1.0 - eps);

    // neighbourhood disk radius 2 r^{-eps} in scaled units
    const double R = 2.0 * std::pow(sc.r, -eps);
    if (R > 0.5 * sc.L || 4.0 * c > sc.L)
        throw ParameterError("Chen-Stein neighbourhood wraps around the torus at this density; "
                             "increase rho or epsilon");

    const double upper = std::min(R, 2.0 * c);
    std::vector<double> bps{c};
    for (double k : model.breakpoints()) {
        bps.push_back(k);
        bps.push_back(2.0 * k);
    }
    const double overlap_tol = params.quadrature.inner_abs_tol / std::max(sc.lambda, 1.0) * 1e-2;
    auto integrand = [&](double s) {
        const double miss = 1.0 - model(s);
        if (miss <= 0.0)
            return 0.0;
        return s * miss * std::exp(sc.lambda * overlap_mass(model, s, overlap_tol));
    };
    const auto near = quad::integrate(integrand, 0.0, upper,
                                      {.abs_tol = 1e-14, .rel_tol = params.quadrature.outer_rel_tol,
                                       .max_panels = params.quadrature.max_panels},
                                      bps);
    require(near, "chen_stein_terms b2 integral");
    // beyond 2c both g and the overlap vanish
    const double far = R > upper ? 0.5 * (R * R - upper * upper) : 0.0;
    const double pre = 2.0 * kPi * sc.r * sc.r * e_torus * e_torus;
    out.b2 = pre * (near.value + far);
    out.b2_error = pre * near.error;
    return out;
}

double chen_stein_tv_bound(double b1, double b2, double b3, double lambda)
{
    if (!(b1 >= 0.0 && b2 >= 0.0 && b3 >= 0.0))
        throw ParameterError("Chen-Stein terms must be non-negative");
    if (!(lambda > 0.0))
        throw ParameterError("lambda must be positive");
    return (b1 + b2) * std::min(1.0, 1.0 / lambda) + b3 * std::min(1.0, 1.0 / std::sqrt(lambda));
}

DiscreteDistribution poisson_pmf(double lambda, std::size_t k_max)
{
    if (!(lambda > 0.0))
        throw ParameterError("Poisson mean must be positive");
    DiscreteDistribution d;
    d.pmf.resize(k_max + 1);
    d.pmf[0] = std::exp(-lambda);
    double sum = d.pmf[0];
    for (std::size_t k = 1; k <= k_max; ++k) {
        d.pmf[k] = d.pmf[k - 1] * lambda / static_cast<double>(k);
        sum += d.pmf[k];
    }
    d.tail_mass = std::max(0.0, 1.0 - sum);
    return d;
}

DiscreteDistribution poisson_pmf_until(double lambda, double tail_tol)
{
    std::size_t k_max = static_cast<std::size_t>(lambda + 10.0 * std::sqrt(lambda) + 20.0);
    auto d = poisson_pmf(lambda, k_max);
    while (d.tail_mass > tail_tol && k_max < 100000) {
        k_max *= 2;
        d = poisson_pmf(lambda, k_max);
    }
    return d;
}

DiscreteDistribution empirical_distribution(std::span<const std::size_t> counts)
{
    DiscreteDistribution d;
    if (counts.empty())
        return d;
    const std::size_t top = *std::max_element(counts.begin(), counts.end());
    d.pmf.assign(top + 1, 0.0);
    const double w = 1.0 / static_cast<double>(counts.size());
    for (std::size_t k : counts)
        d.pmf[k] += w;
    return d;
}

double tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q)
{
    const std::size_t n = std::max(p.pmf.size(), q.pmf.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = k < p.pmf.size() ? p.pmf[k] : 0.0;
        const double b = k < q.pmf.size() ? q.pmf[k] : 0.0;
        sum += std::abs(a - b);
    }
    sum += std::abs(p.tail_mass - q.tail_mass);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

} // namespace rcm
