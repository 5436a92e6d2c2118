#pragma once

#include <string_view>

namespace rcm {

/// A point of the unit cell [-1/2, 1/2)^2. Construction rejects anything outside.
class Point2 {
public:
    constexpr Point2() = default;
    Point2(double x, double y);

    constexpr double x() const noexcept { return x_; }
    constexpr double y() const noexcept { return y_; }

    static bool in_cell(double v) noexcept { return v >= -0.5 && v < 0.5; }

    friend constexpr bool operator==(const Point2&, const Point2&) = default;

private:
    double x_ = 0.0;
    double y_ = 0.0;
};

enum class Metric { Torus, Square };

std::string_view to_string(Metric m) noexcept;
Metric metric_from_string(std::string_view s);

double euclidean_distance(const Point2& p, const Point2& q) noexcept;

/// Minimum Euclidean distance over the 3x3 integer translates of q - p.
double toroidal_distance(const Point2& p, const Point2& q) noexcept;

inline double distance(Metric m, const Point2& p, const Point2& q) noexcept
{
    return m == Metric::Torus ? toroidal_distance(p, q) : euclidean_distance(p, q);
}

} // namespace rcm
