#include "doctest.h"

#include "rcm/errors.hpp"
#include "rcm/models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace rcm;
using std::numbers::pi;

namespace {

std::vector<ConnectionModel> builtin_models()
{
    return {ConnectionModel::unit_disk(), ConnectionModel::gaussian(), ConnectionModel::log_normal(4.0, 2.0),
            ConnectionModel::log_normal(8.0, 3.0),
            ConnectionModel::table({{0.0, 1.0}, {0.5, 0.8}, {1.0, 0.3}, {2.0, 0.0}})};
}

// C = pi E[X^2] where X has tail g, i.e. X = exp(xi Z); importance-sampled over Z
double lognormal_C_monte_carlo(double sigma_db, double eta, std::size_t n, double& stderr_out)
{
    const double xi = sigma_db * std::log(10.0) / (10.0 * eta);
    const double mu = 1.8 * xi, tau = 1.1;
    std::mt19937_64 gen(77);
    std::normal_distribution<double> proposal(mu, tau);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double z = proposal(gen);
        const double log_w = 2.0 * xi * z - 0.5 * z * z + 0.5 * (z - mu) * (z - mu) / (tau * tau) + std::log(tau);
        const double w = pi * std::exp(log_w);
        sum += w;
        sum_sq += w * w;
    }
    const double mean = sum / static_cast<double>(n);
    stderr_out = std::sqrt((sum_sq / static_cast<double>(n) - mean * mean) / static_cast<double>(n));
    return mean;
}

} // namespace

TEST_CASE("eval_g examples")
{
    const auto disk = ConnectionModel::unit_disk();
    CHECK(eval_g(disk, 0.5) == 1.0);
    CHECK(eval_g(disk, 1.0) == 1.0);
    CHECK(eval_g(disk, 1.5) == 0.0);
    CHECK(eval_g(ConnectionModel::log_normal(4.0, 2.0), 1.0) == 0.5);
    CHECK(eval_g(ConnectionModel::log_normal(11.0, 3.5), 1.0) == 0.5);
    CHECK(eval_g(ConnectionModel::log_normal(4.0, 2.0), 0.0) == 1.0);
    CHECK(eval_g(ConnectionModel::gaussian(), 1.3) == doctest::Approx(std::exp(-1.69)));
    CHECK_THROWS_AS(eval_g(disk, -0.1), ParameterError);
}

TEST_CASE("table interpolation is linear and clamped")
{
    const auto t = ConnectionModel::table({{0.5, 0.9}, {1.0, 0.5}, {2.0, 0.1}});
    CHECK(eval_g(t, 0.0) == 0.9);
    CHECK(eval_g(t, 0.75) == doctest::Approx(0.7));
    CHECK(eval_g(t, 1.5) == doctest::Approx(0.3));
    CHECK(eval_g(t, 50.0) == 0.1);
    CHECK_FALSE(t.has_finite_cutoff());

    const auto c = ConnectionModel::table({{0.0, 1.0}, {1.0, 1.0}, {3.0, 0.0}});
    CHECK(c.cutoff() == doctest::Approx(3.0 - 2e-12));
    CHECK(eval_g(c, 3.5) == 0.0);
    CHECK(integral_C(c) == doctest::Approx(pi * 13.0 / 3.0).epsilon(1e-9));

    CHECK_THROWS_AS(ConnectionModel::table({}), ParameterError);
    CHECK_THROWS_AS(ConnectionModel::table({{1.0, 0.5}, {1.0, 0.4}}), ParameterError);
}

TEST_CASE("table text format")
{
    std::istringstream in("# radius value\n0 1\n1 1\n\n2 0  # end\n");
    const auto t = ConnectionModel::load_table(in);
    REQUIRE(t.knots().size() == 3);
    CHECK(eval_g(t, 1.5) == doctest::Approx(0.5));
    std::istringstream bad("0 1\n1\n");
    CHECK_THROWS_AS(ConnectionModel::load_table(bad), ParameterError);
}

TEST_CASE("integral_C examples")
{
    CHECK(integral_C(ConnectionModel::unit_disk()) == pi);
    CHECK(integral_C(ConnectionModel::gaussian()) == pi);

    double se = 0.0;
    const double mc = lognormal_C_monte_carlo(4.0, 2.0, 2'000'000, se);
    const double c = integral_C(ConnectionModel::log_normal(4.0, 2.0));
    CHECK(se / mc < 2e-4);
    CHECK(std::abs(c - mc) / mc < 1e-3);
    const double xi = 4.0 * std::log(10.0) / 20.0;
    CHECK(c == doctest::Approx(pi * std::exp(2.0 * xi * xi)).epsilon(1e-9));
}

TEST_CASE("quadrature path reproduces pi for the unit disk and the Gaussian")
{
    ModelOptions opt;
    opt.analytic_integrals = false;
    CHECK(std::abs(integral_C(ConnectionModel::unit_disk(opt)) - pi) < 1e-9);
    CHECK(std::abs(integral_C(ConnectionModel::gaussian(opt)) - pi) < 1e-9);
    const auto detail = integral_C_detailed(ConnectionModel::gaussian(opt));
    CHECK(detail.converged);
    CHECK(detail.error < 1e-9);
}

TEST_CASE("connection_radius examples")
{
    CHECK(connection_radius(pi, 100.0, 0.0) == doctest::Approx(0.121077).epsilon(1e-5));
    CHECK(connection_radius(pi, 1e4, 1.0) == doctest::Approx(0.018028).epsilon(1e-4));
    CHECK_THROWS_AS(connection_radius(1.0, 2.0, -1.0), ParameterError);
    CHECK_THROWS_AS(connection_radius(pi, 0.0, 1.0), ParameterError);
}

TEST_CASE("validate_model examples")
{
    const auto disk = ConnectionModel::unit_disk();
    CHECK(disk.validation().usable());
    CHECK_FALSE(disk.validation().tail_witness);

    std::vector<Knot> inverse{{0.0, 1.0}};
    for (double x = 1.0; x <= 1000.0; x *= 1.25)
        inverse.push_back({x, 1.0 / x});
    const auto slow = ConnectionModel::table(inverse);
    CHECK_FALSE(slow.validation().integral_finite);
    CHECK_FALSE(slow.validation().usable());
    CHECK_THROWS_AS(slow.C(), ModelError);

    const auto bumpy = ConnectionModel::table({{0.0, 0.5}, {1.0, 0.8}, {2.0, 0.0}});
    CHECK_FALSE(bumpy.validation().monotone_ok);
    CHECK(bumpy.validation().integral_finite);

    const auto out_of_range = ConnectionModel::table({{0.0, 1.5}, {1.0, 0.0}});
    CHECK_FALSE(out_of_range.validation().range_ok);

    for (const auto& m : builtin_models())
        CHECK(m.validation().usable());
}

TEST_CASE("tail proxy flags a heavy tail the integral alone accepts")
{
    // g ~ x^-2.5 beyond 1: integrable, but x^2 log^2 x g(x) is still above tolerance in the
    // decade past a forced cutoff of 1000
    std::vector<Knot> knots{{0.0, 1.0}};
    for (double x = 1.0; x <= 2e4; x *= 1.1)
        knots.push_back({x, std::pow(x, -2.5)});
    knots.push_back({2.1e4, 0.0});
    ModelOptions opt;
    opt.cutoff = 1000.0;
    const auto m = ConnectionModel::table(knots, opt);
    CHECK(m.validation().integral_finite);
    CHECK_FALSE(m.validation().tail_ok);
    REQUIRE(m.validation().tail_witness);
    CHECK(*m.validation().tail_witness > 1.0);
}

TEST_CASE("validate_model rejects malformed grids")
{
    const auto g = ConnectionModel::gaussian();
    const std::vector<double> empty;
    CHECK_THROWS_AS(validate_model(g, empty), ParameterError);
    const std::vector<double> short_grid{0.0, 1.0, 2.0};
    CHECK_THROWS_AS(validate_model(g, short_grid), ParameterError);
    const std::vector<double> unsorted{0.0, 2.0, 1.0, 100.0};
    CHECK_THROWS_AS(validate_model(g, unsorted), ParameterError);
}

TEST_CASE("cutoffs")
{
    CHECK(ConnectionModel::unit_disk().cutoff() == 1.0);
    CHECK(ConnectionModel::gaussian().cutoff() == doctest::Approx(std::sqrt(-std::log(1e-12))));
    const auto ln = ConnectionModel::log_normal(4.0, 2.0);
    CHECK(ln.raw(ln.cutoff()) <= 1e-12);
    CHECK(ln.raw(ln.cutoff() * (1.0 - 1e-9)) > 1e-12 * 0.999);
    ModelOptions opt;
    opt.cutoff = 2.0;
    CHECK(ConnectionModel::gaussian(opt).cutoff() == 2.0);
    CHECK(eval_g(ConnectionModel::gaussian(opt), 2.5) == 0.0);
}

TEST_CASE("property: g is non-increasing over 10^4 random pairs per model")
{
    std::mt19937_64 gen(5);
    for (const auto& m : builtin_models()) {
        const double top = m.has_finite_cutoff() ? 1.5 * m.cutoff() : 10.0;
        std::uniform_real_distribution<double> u(0.0, top);
        int failures = 0;
        for (int k = 0; k < 10000; ++k) {
            double x = u(gen), y = u(gen);
            if (x > y)
                std::swap(x, y);
            const double gx = eval_g(m, x), gy = eval_g(m, y);
            failures += gx < gy || gx < 0.0 || gx > 1.0 || gy < 0.0 || gy > 1.0;
        }
        CHECK_MESSAGE(failures == 0, m.name());
    }
}

TEST_CASE("property: nothing survives past the cutoff")
{
    std::mt19937_64 gen(6);
    for (const auto& m : builtin_models()) {
        std::uniform_real_distribution<double> u(0.0, 10.0 * m.cutoff());
        int failures = 0;
        for (int k = 0; k < 10000; ++k) {
            const double x = m.cutoff() + u(gen) + 1e-12;
            failures += eval_g(m, x) != 0.0;
        }
        CHECK(failures == 0);
        // continuous kernels sit at or below epsilon at the cutoff itself; the unit disk jumps there
        if (m.kind() != ModelKind::UnitDisk)
            CHECK(m.raw(m.cutoff()) <= m.options().truncation_epsilon * (1.0 + 1e-9));
    }
}

TEST_CASE("property: connection radius decreases in rho")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> lr(0.0, 14.0), ub(-3.0, 3.0);
    int failures = 0, tested = 0;
    for (int k = 0; k < 10000; ++k) {
        const double b = ub(gen);
        double r1 = std::exp(lr(gen)), r2 = std::exp(lr(gen));
        if (r1 > r2)
            std::swap(r1, r2);
        if (r1 == r2 || std::log(r1) + b <= 1.0)
            continue;
        ++tested;
        failures += !(connection_radius(pi, r1, b) > connection_radius(pi, r2, b));
    }
    CHECK(tested > 3000);
    CHECK(failures == 0);
}
