#pragma once

#include "rcm/geometry.hpp"
#include "rcm/models.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace rcm {

/// A quadrature value with its absolute error estimate.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Finite-density and limiting predictions for one (model, rho, b, metric).
struct TheoryReport {
    Metric metric = Metric::Torus;
    /// rho * E[exp(-rho * neighbourhood integral)] for the chosen metric.
    double expected_isolated = 0.0;
    double expected_isolated_error = 0.0;
    /// e^{-b}
    double asymptotic_mean = 0.0;
    /// e^{-e^{-b}}
    double prob_no_isolated = 0.0;
    /// ln rho + b
    double mean_degree = 0.0;
    /// expected_isolated(square) - expected_isolated(torus)
    double boundary_excess = 0.0;
    double boundary_excess_error = 0.0;
};

struct TheoryOptions {
    double inner_abs_tol = 1e-9;
    double outer_rel_tol = 1e-7;
    std::size_t max_panels = 4000;
};

struct ChenSteinParams {
    /// Neighbourhood exponent: the strong-dependence disk has radius 2 r^{1 - epsilon}.
    double epsilon = 0.25;
    TheoryOptions quadrature;
};

struct ChenSteinTerms {
    double b1 = 0.0;
    double b2 = 0.0;
    double b2_error = 0.0;
};

/// Probability mass on k = 0..pmf.size()-1, plus the mass beyond.
struct DiscreteDistribution {
    std::vector<double> pmf;
    double tail_mass = 0.0;
};

// --- scaled-plane building blocks (lengths in units of r) ---

/// Mass of g(|x|) over the half-plane {x1 > t}, t >= 0.
double half_plane_mass(const ConnectionModel& model, double t, double abs_tol = 1e-12);

/// Mass of g(|x|) over the quadrant {x1 > a, x2 > b}, a, b >= 0.
double quadrant_mass(const ConnectionModel& model, double a, double b, double abs_tol = 1e-12);

/// Mass of g(|x - y|) over x in a square, for y at distances (left, right, bottom, top)
/// from its sides. Exact inclusion-exclusion over the four outer half-planes.
double square_window_mass(const ConnectionModel& model, double left, double right, double bottom,
                          double top);

/// Cross integral of g(|x|) g(|x - D u|) over the plane, for a unit vector u.
double overlap_mass(const ConnectionModel& model, double D, double abs_tol = 1e-11);

// --- operations ---

/// Expected number of isolated nodes at density rho. Torus: rho exp(-rho I) with I the
/// toroidal neighbourhood integral. Square: integral over node positions of rho exp(-rho I(y)).
/// Throws QuadratureError if the requested tolerance is not reached.
Estimate expected_isolated(const ConnectionModel& model, double rho, double b, Metric metric,
                           const TheoryOptions& opt = {});

/// Limiting fields only; expected_isolated and boundary_excess are left at zero.
TheoryReport asymptotic_report(double rho, double b);

/// All fields, including both metrics' finite-density expectations.
TheoryReport theory_report(const ConnectionModel& model, double rho, double b, Metric metric,
                           const TheoryOptions& opt = {});

/// Pr(both isolated) / (Pr(isolated)^2) for two nodes a distance d apart on the torus:
/// (1 - g(d/r)) exp(rho * integral of g(|x|/r) g(|x - d u|/r)).
double pair_correlation_factor(const ConnectionModel& model, double rho, double b, double d);

/// Finite-density evaluation of the Chen-Stein b1 and b2 expressions for the torus.
ChenSteinTerms chen_stein_terms(const ConnectionModel& model, double rho, double b,
                                const ChenSteinParams& params = {});

/// (b1 + b2) min(1, 1/lambda) + b3 min(1, 1/sqrt(lambda)).
double chen_stein_tv_bound(double b1, double b2, double b3, double lambda);

/// Po(lambda) on 0..k_max by the recurrence p_k = p_{k-1} lambda / k.
DiscreteDistribution poisson_pmf(double lambda, std::size_t k_max);

/// Po(lambda) truncated where the remaining mass drops below tail_tol.
DiscreteDistribution poisson_pmf_until(double lambda, double tail_tol = 1e-12);

/// Empirical law of a sample of counts.
DiscreteDistribution empirical_distribution(std::span<const std::size_t> counts);

/// Half the L1 distance, shorter pmf zero-extended, tails compared as one extra atom.
double tv_distance(const DiscreteDistribution& p, const DiscreteDistribution& q);

} // namespace rcm
