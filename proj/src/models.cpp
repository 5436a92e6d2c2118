#include "rcm/models.hpp"

#include "rcm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

namespace rcm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

quad::Options radial_options()
{
    return {.abs_tol = 1e-11, .rel_tol = 0.0, .max_panels = 4000};
}

// smallest x with raw(x) <= eps for a continuous non-increasing g
template <class G>
double bisect_cutoff(G&& g, double eps)
{
    double hi = 1.0;
    int guard = 0;
    while (g(hi) > eps) {
        hi *= 2.0;
        if (++guard > 1100)
            return kInf;
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > eps ? lo : hi) = mid;
    }
    return hi;
}

} // namespace

ConnectionModel::ConnectionModel(ModelKind kind, const ModelOptions& opt)
    : kind_(kind), opt_(opt)
{
}

ConnectionModel ConnectionModel::unit_disk(const ModelOptions& opt)
{
    ConnectionModel m(ModelKind::UnitDisk, opt);
    m.finish();
    return m;
}

ConnectionModel ConnectionModel::gaussian(const ModelOptions& opt)
{
    ConnectionModel m(ModelKind::Gaussian, opt);
    m.finish();
    return m;
}

ConnectionModel ConnectionModel::log_normal(double sigma_db, double eta, const ModelOptions& opt)
{
    if (!(sigma_db > 0.0) || !(eta > 0.0) || !std::isfinite(sigma_db) || !std::isfinite(eta))
        throw ParameterError("log-normal model needs sigma_db > 0 and eta > 0");
    ConnectionModel m(ModelKind::LogNormal, opt);
    m.sigma_db_ = sigma_db;
    m.eta_ = eta;
    m.finish();
    return m;
}

ConnectionModel ConnectionModel::table(std::vector<Knot> knots, const ModelOptions& opt)
{
    if (knots.empty())
        throw ParameterError("table model needs at least one knot");
    for (std::size_t k = 0; k < knots.size(); ++k) {
        if (!std::isfinite(knots[k].radius) || !std::isfinite(knots[k].value) || knots[k].radius < 0.0)
            throw ParameterError("table knot " + std::to_string(k) + " is not a finite (radius >= 0, value) pair");
        if (k > 0 && !(knots[k].radius > knots[k - 1].radius))
            throw ParameterError("table radii must be strictly increasing (knot " + std::to_string(k) + ")");
    }
    ConnectionModel m(ModelKind::Table, opt);
    m.knots_ = std::move(knots);
    m.finish();
    return m;
}

ConnectionModel ConnectionModel::load_table(std::istream& in, const ModelOptions& opt)
{
    std::vector<Knot> knots;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        Knot k{};
        if (!(ss >> k.radius)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            throw ParameterError("table line " + std::to_string(lineno) + ": expected 'radius value'");
        }
        std::string rest;
        if (!(ss >> k.value) || (ss >> rest))
            throw ParameterError("table line " + std::to_string(lineno) + ": expected 'radius value'");
        knots.push_back(k);
    }
    return table(std::move(knots), opt);
}

bool ConnectionModel::has_finite_cutoff() const noexcept
{
    return std::isfinite(cutoff_);
}

double ConnectionModel::raw(double x) const noexcept
{
    switch (kind_) {
    case ModelKind::UnitDisk:
        return x <= 1.0 ? 1.0 : 0.0;
    case ModelKind::Gaussian:
        return std::exp(-x * x);
    case ModelKind::LogNormal:
        if (x <= 0.0)
            return 1.0;
        return 0.5 * std::erfc(10.0 * eta_ * std::log10(x) / (std::numbers::sqrt2 * sigma_db_));
    case ModelKind::Table: {
        if (x <= knots_.front().radius)
            return knots_.front().value;
        if (x >= knots_.back().radius)
            return knots_.back().value;
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                   [](double v, const Knot& k) { return v < k.radius; });
        const Knot& hi = *it;
        const Knot& lo = *(it - 1);
        const double t = (x - lo.radius) / (hi.radius - lo.radius);
        return lo.value + t * (hi.value - lo.value);
    }
    }
    return 0.0;
}

void ConnectionModel::finish()
{
    const double eps = opt_.truncation_epsilon;
    if (opt_.cutoff) {
        if (!(*opt_.cutoff > 0.0))
            throw ParameterError("cutoff override must be positive");
        cutoff_ = *opt_.cutoff;
    } else {
        switch (kind_) {
        case ModelKind::UnitDisk:
            cutoff_ = 1.0;
            break;
        case ModelKind::Gaussian:
            cutoff_ = std::sqrt(-std::log(eps));
            break;
        case ModelKind::LogNormal:
            cutoff_ = bisect_cutoff([this](double x) { return raw(x); }, eps);
            break;
        case ModelKind::Table: {
            cutoff_ = kInf;
            if (knots_.front().value <= eps) {
                cutoff_ = knots_.front().radius;
                break;
            }
            for (std::size_t k = 1; k < knots_.size(); ++k) {
                const Knot& lo = knots_[k - 1];
                const Knot& hi = knots_[k];
                if (hi.value <= eps && lo.value > eps) {
                    const double t = (lo.value - eps) / (lo.value - hi.value);
                    cutoff_ = lo.radius + t * (hi.radius - lo.radius);
                    break;
                }
            }
            break;
        }
        }
    }

    breakpoints_.clear();
    if (kind_ == ModelKind::UnitDisk)
        breakpoints_.push_back(std::min(1.0, cutoff_));
    for (const Knot& k : knots_)
        if (k.radius > 0.0 && k.radius < cutoff_)
            breakpoints_.push_back(k.radius);
    if (std::isfinite(cutoff_) && (breakpoints_.empty() || breakpoints_.back() < cutoff_))
        breakpoints_.push_back(cutoff_);

    // integral of the truncated g
    if (opt_.analytic_integrals && kind_ == ModelKind::UnitDisk) {
        const double c = std::min(1.0, cutoff_);
        support_ = {kPi * c * c, 0.0, true, 0};
    } else if (opt_.analytic_integrals && kind_ == ModelKind::Gaussian) {
        support_ = {kPi * -std::expm1(-cutoff_ * cutoff_), 0.0, true, 0};
    } else if (std::isfinite(cutoff_)) {
        support_ = quad::integrate([this](double x) { return 2.0 * kPi * x * raw(x); }, 0.0, cutoff_,
                                   radial_options(), breakpoints_);
    } else {
        support_ = {kInf, kInf, false, 0};
    }

    try {
        integral_ = integral_C_detailed(*this);
    } catch (const ModelError&) {
        integral_.reset();
    }
    validation_ = validate_model(*this, default_validation_grid(*this));
}

double ConnectionModel::C() const
{
    if (!integral_)
        throw ModelError("connection function '" + name() + "' is not integrable over the plane");
    return integral_->value;
}

std::string ConnectionModel::name() const
{
    switch (kind_) {
    case ModelKind::UnitDisk:
        return "unit_disk";
    case ModelKind::Gaussian:
        return "gaussian";
    case ModelKind::LogNormal: {
        std::ostringstream ss;
        ss << "log_normal:" << sigma_db_ << ':' << eta_;
        return ss.str();
    }
    case ModelKind::Table:
        return "table";
    }
    return "unknown";
}

double eval_g(const ConnectionModel& model, double x)
{
    if (!(x >= 0.0))
        throw ParameterError("g is defined on [0, inf); got x = " + std::to_string(x));
    return model(x);
}

quad::Result integral_C_detailed(const ConnectionModel& model)
{
    const auto& opt = model.options();
    if (opt.analytic_integrals &&
        (model.kind() == ModelKind::UnitDisk || model.kind() == ModelKind::Gaussian))
        return {kPi, 0.0, true, 0};

    auto radial = [&model](double x) { return 2.0 * kPi * x * model.raw(x); };

    double lo = 0.0;
    quad::Result out;
    if (model.has_finite_cutoff()) {
        out = model.support_integral();
        lo = model.cutoff();
    } else {
        // non-decaying table: integrate the knot range, then probe the clamped tail
        lo = std::max(1.0, model.knots().back().radius);
        std::vector<double> bps;
        for (const auto& k : model.knots())
            bps.push_back(k.radius);
        out = quad::integrate(radial, 0.0, lo, radial_options(), bps);
    }
    if (!out.converged)
        throw ModelError("quadrature of g did not converge on [0, " + std::to_string(lo) + "]");

    const auto tail = radial_tail(model, lo);
    out.value += tail.value;
    out.error += tail.error;
    out.converged = out.converged && tail.converged;
    if (!(out.value > 0.0) || !std::isfinite(out.value))
        throw ModelError("integral of g is not positive and finite");
    return out;
}

quad::Result radial_tail(const ConnectionModel& model, double from)
{
    const double tol = 1e-9;
    auto radial = [&model](double x) { return 2.0 * kPi * x * model.raw(x); };
    double lo = from > 0.0 ? from : 1.0;
    quad::Result out;
    if (from <= 0.0)
        out = quad::integrate(radial, 0.0, lo, radial_options(), model.breakpoints());

    // Cauchy test: divergence when three successive doublings each move the partial
    // integral by more than tol without the increments shrinking.
    double prev_inc = kInf;
    int growing = 0;
    for (int k = 0; k < 200; ++k) {
        const double hi = 2.0 * lo;
        auto opt = radial_options();
        opt.rel_tol = 1e-10;
        const auto piece = quad::integrate(radial, lo, hi, opt, model.breakpoints());
        const double inc = std::abs(piece.value);
        out += piece;
        if (inc <= tol * 1e-3 || (inc <= tol && inc < prev_inc)) {
            // geometric bound on what is left once increments shrink
            if (std::isfinite(prev_inc) && prev_inc > 0.0 && inc < prev_inc) {
                const double ratio = inc / prev_inc;
                out.error += inc * ratio / (1.0 - ratio);
            } else {
                out.error += inc;
            }
            return out;
        }
        growing = (inc >= prev_inc) ? growing + 1 : 0;
        if (growing >= 3 || !std::isfinite(out.value))
            throw ModelError("integral of g diverges: partial integrals are not Cauchy");
        prev_inc = inc;
        lo = hi;
    }
    out.converged = false;
    return out;
}

double integral_C(const ConnectionModel& model)
{
    return integral_C_detailed(model).value;
}

double connection_radius(double C, double rho, double b)
{
    if (!(C > 0.0) || !std::isfinite(C))
        throw ParameterError("C must be positive and finite");
    if (!(rho > 0.0))
        throw ParameterError("rho must be positive");
    const double s = std::log(rho) + b;
    if (!(s > 0.0))
        throw ParameterError("log rho + b <= 0");
    return std::sqrt(s / (C * rho));
}

std::vector<double> default_validation_grid(const ConnectionModel& model)
{
    double top;
    if (model.has_finite_cutoff())
        top = 10.0 * std::max(model.cutoff(), 1e-6);
    else
        top = 10.0 * std::max(1.0, model.knots().back().radius);
    const double bottom = top * 1e-5;
    const int per_decade = 64;
    const int n = 5 * per_decade;
    std::vector<double> grid{0.0};
    for (int k = 0; k <= n; ++k)
        grid.push_back(bottom * std::pow(10.0, static_cast<double>(k) / per_decade));
    grid.back() = top;
    for (const auto& k : model.knots())
        grid.push_back(k.radius);
    if (model.has_finite_cutoff())
        grid.push_back(model.cutoff());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

ModelValidationReport validate_model(const ConnectionModel& model, std::span<const double> grid)
{
    if (grid.empty())
        throw ParameterError("validation grid is empty");
    if (grid.front() != 0.0)
        throw ParameterError("validation grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw ParameterError("validation grid must be strictly increasing");
    if (model.has_finite_cutoff() && grid.back() < 10.0 * model.cutoff() * (1.0 - 1e-12))
        throw ParameterError("validation grid must reach 10 x cutoff");

    ModelValidationReport rep;
    rep.range_ok = true;
    rep.monotone_ok = true;
    double prev = model.raw(grid.front());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double g = model.raw(grid[k]);
        if (!(g >= 0.0 && g <= 1.0))
            rep.range_ok = false;
        if (k > 0 && g > prev)
            rep.monotone_ok = false;
        prev = g;
    }
    for (std::size_t k = 1; k < model.knots().size(); ++k)
        if (model.knots()[k].value > model.knots()[k - 1].value)
            rep.monotone_ok = false;
    for (const auto& k : model.knots())
        if (!(k.value >= 0.0 && k.value <= 1.0))
            rep.range_ok = false;

    try {
        const auto c = integral_C_detailed(model);
        rep.integral_finite = c.converged && std::isfinite(c.value) && c.value > 0.0;
    } catch (const ModelError&) {
        rep.integral_finite = false;
    }

    // tail proxy over the largest decade of the grid
    const double top = grid.back();
    const double tol = model.options().tail_tolerance;
    rep.tail_ok = true;
    double last = kInf;
    for (double x : grid) {
        if (x < top / 10.0 || x <= 1.0)
            continue;
        const double l = std::log(x);
        const double v = x * x * l * l * model.raw(x);
        if (v > last * (1.0 + 1e-12))
            rep.tail_ok = false;
        if (v > tol) {
            rep.tail_ok = false;
            rep.tail_witness = x;
        }
        last = v;
    }
    return rep;
}

} // namespace rcm
