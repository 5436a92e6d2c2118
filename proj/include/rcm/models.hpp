#pragma once

#include "rcm/quadrature.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rcm {

enum class ModelKind { UnitDisk, Gaussian, LogNormal, Table };

struct Knot {
    double radius;
    double value;
};

/// Outcome of checking g against the model conditions. A model is usable only if every flag holds.
struct ModelValidationReport {
    bool monotone_ok = false;
    bool range_ok = false;
    bool integral_finite = false;
    bool tail_ok = false;
    /// Largest sampled x where x^2 log^2(x) g(x) exceeded the tail tolerance.
    std::optional<double> tail_witness;

    bool usable() const noexcept { return monotone_ok && range_ok && integral_finite && tail_ok; }
};

struct ModelOptions {
    /// g is treated as zero beyond the smallest x with g(x) <= this value.
    double truncation_epsilon = 1e-12;
    /// Replaces the epsilon-derived cutoff when set.
    std::optional<double> cutoff;
    /// Use the closed forms for the unit disk and Gaussian kernels; tests switch this off.
    bool analytic_integrals = true;
    /// Threshold for the x^2 log^2(x) g(x) tail proxy.
    double tail_tolerance = 1e-2;
};

/// An isotropic connection function g: [0, inf) -> [0, 1] with its plane integral C.
/// Immutable after construction; construction runs the default validation.
class ConnectionModel {
public:
    static ConnectionModel unit_disk(const ModelOptions& opt = {});
    static ConnectionModel gaussian(const ModelOptions& opt = {});
    /// g(x) = Q(10 eta log10(x) / sigma_db): log-normal shadowing around a path-loss law.
    static ConnectionModel log_normal(double sigma_db, double eta, const ModelOptions& opt = {});
    /// Piecewise-linear g through the knots; radii must be strictly increasing.
    static ConnectionModel table(std::vector<Knot> knots, const ModelOptions& opt = {});
    /// Two-column text: "radius value" per line, '#' starts a comment.
    static ConnectionModel load_table(std::istream& in, const ModelOptions& opt = {});

    ModelKind kind() const noexcept { return kind_; }
    double sigma_db() const noexcept { return sigma_db_; }
    double eta() const noexcept { return eta_; }
    const std::vector<Knot>& knots() const noexcept { return knots_; }
    const ModelOptions& options() const noexcept { return opt_; }

    /// Radius beyond which g is treated as exactly zero (+inf if g never decays below epsilon).
    double cutoff() const noexcept { return cutoff_; }
    bool has_finite_cutoff() const noexcept;

    /// Untruncated g; no argument check.
    double raw(double x) const noexcept;
    /// Truncated g, for x >= 0.
    double operator()(double x) const noexcept { return x > cutoff_ ? 0.0 : raw(x); }

    /// Radii in (0, cutoff] where g has a kink or a jump.
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }

    const ModelValidationReport& validation() const noexcept { return validation_; }

    /// Plane integral of g. Throws ModelError when g is not integrable.
    double C() const;

    /// Plane integral of the truncated g, i.e. what a sampled graph actually sees.
    const quad::Result& support_integral() const noexcept { return support_; }

    /// Single-token name used in dumps and CSV headers.
    std::string name() const;

private:
    ConnectionModel(ModelKind kind, const ModelOptions& opt);
    void finish();

    ModelKind kind_;
    ModelOptions opt_;
    double sigma_db_ = 0.0;
    double eta_ = 0.0;
    std::vector<Knot> knots_;
    double cutoff_ = 0.0;
    std::vector<double> breakpoints_;
    quad::Result support_;
    std::optional<quad::Result> integral_;
    ModelValidationReport validation_;
};

/// g(x); throws ParameterError for negative x.
double eval_g(const ConnectionModel& model, double x);

/// C = integral over the plane of g(|x|), with its error estimate. The part beyond the cutoff
/// is integrated by doubling the upper limit; ModelError if the partial integrals keep growing.
quad::Result integral_C_detailed(const ConnectionModel& model);
double integral_C(const ConnectionModel& model);

/// Integral of 2 pi x g(x) over [from, inf) for the untruncated g, by doubling the upper limit.
/// Throws ModelError when the partial integrals are not Cauchy.
quad::Result radial_tail(const ConnectionModel& model, double from);

/// r = sqrt((ln rho + b) / (C rho)). Throws ParameterError when ln rho + b <= 0.
double connection_radius(double C, double rho, double b);

/// Checks range, monotonicity, integrability and the tail condition on the given radii.
/// The grid must be increasing, start at 0 and reach 10 x cutoff (when the cutoff is finite).
ModelValidationReport validate_model(const ConnectionModel& model, std::span<const double> grid);

/// Log-spaced radii from 0 to 10 x cutoff (or 10 x last table knot for non-decaying tables).
std::vector<double> default_validation_grid(const ConnectionModel& model);

} // namespace rcm
