#include "rcm/geometry.hpp"

#include "rcm/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rcm {

Point2::Point2(double x, double y)
    : x_(x), y_(y)
{
    if (!in_cell(x) || !in_cell(y))
        throw ParameterError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                             ") lies outside the unit cell [-1/2, 1/2)^2");
}

std::string_view to_string(Metric m) noexcept
{
    return m == Metric::Torus ? "torus" : "square";
}

Metric metric_from_string(std::string_view s)
{
    if (s == "torus")
        return Metric::Torus;
    if (s == "square")
        return Metric::Square;
    throw ParameterError("unknown metric '" + std::string(s) + "'");
}

double euclidean_distance(const Point2& p, const Point2& q) noexcept
{
    // same rounding as the z = 0 translate below, so torus <= square holds bitwise
    const double dx = p.x() - q.x();
    const double dy = p.y() - q.y();
    return std::sqrt(dx * dx + dy * dy);
}

double toroidal_distance(const Point2& p, const Point2& q) noexcept
{
    const double dx = p.x() - q.x();
    const double dy = p.y() - q.y();
    double best = std::numeric_limits<double>::infinity();
    for (int zx = -1; zx <= 1; ++zx) {
        for (int zy = -1; zy <= 1; ++zy) {
            const double ex = dx + zx;
            const double ey = dy + zy;
            best = std::min(best, ex * ex + ey * ey);
        }
    }
    return std::sqrt(best);
}

} // namespace rcm
