#pragma once

// The measure dx dy / y^2 on the rank-2 shape space F = {0 <= x <= 1/2, x^2 + y^2 >= 1}:
// region measures, equal-measure grids, point location and exact sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "shape_geometry.hpp"

namespace shapelab {

inline constexpr double kMuTotal = std::numbers::pi / 6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rect {
    double x1 = 0, x2 = 0.5, y1 = 0, y2 = kInf;
};

/// Finite union of rectangles, each intersected with F; rectangles are assumed
/// disjoint up to measure zero.
struct Rank2Region {
    std::vector<Rect> rects;

    bool contains(const UHPoint& p) const
    {
        for (const auto& r : rects)
            if (p.x >= r.x1 && p.x <= r.x2 && p.y >= r.y1 && p.y <= r.y2) return true;
        return false;
    }
};

namespace detail {

// x at which the unit circle reaches height y, i.e. sqrt(1 - y^2) for y < 1.
inline double circle_x(double y)
{
    return y >= 1 ? 0.0 : std::sqrt(1 - y * y);
}

}  // namespace detail

/// mu(R cap F) in closed form: for each x the fibre is [max(y1, sqrt(1-x^2)), y2],
/// which splits [0, 1/2] at sqrt(1-y2^2) and sqrt(1-y1^2) into an empty part, an
/// arcsin part and a plain rectangle.
inline double mu_measure(const Rect& r)
{
    if (!(r.y1 >= 0) || r.y2 < r.y1 || r.x2 < r.x1) throw std::invalid_argument("mu_measure: malformed rectangle");
    const double x1 = std::clamp(r.x1, 0.0, 0.5), x2 = std::clamp(r.x2, 0.0, 0.5);
    if (x2 <= x1 || r.y2 <= r.y1) return 0;
    const double inv_y2 = std::isinf(r.y2) ? 0.0 : 1 / r.y2;
    const double a = detail::circle_x(r.y2), b = detail::circle_x(r.y1);
    double total = 0;
    // arcsin part: x in [a, b], fibre [sqrt(1-x^2), y2]
    const double lo = std::max(x1, a), hi = std::min(x2, b);
    if (hi > lo) total += std::asin(hi) - std::asin(lo) - (hi - lo) * inv_y2;
    // rectangle part: x in [b, 1/2], fibre [y1, y2]
    const double lo2 = std::max(x1, b);
    if (x2 > lo2 && r.y1 > 0) total += (x2 - lo2) * (1 / r.y1 - inv_y2);
    return total;
}

inline double mu_measure(const Rank2Region& w)
{
    double s = 0;
    for (const auto& r : w.rects) s += mu_measure(r);
    return s;
}

struct Cell {
    Rect rect;
    double mu = 0;
};

/// kx strips of equal mass, each cut into ky cells of equal mass; cell index is
/// strip * ky + row, rows ordered by increasing y.
struct PartitionSpec {
    int kx = 1, ky = 1;
    std::vector<double> x_breaks;               // kx + 1 values from 0 to 1/2
    std::vector<std::vector<double>> y_breaks;  // per strip, ky + 1 values ending in +inf
    std::vector<Cell> cells;

    std::size_t size() const { return cells.size(); }
};

/// Marginal CDF of x under normalized mu: 6 arcsin(t) / pi on [0, 1/2].
inline double cdf_x(double t)
{
    if (!(t >= 0 && t <= 0.5)) throw std::domain_error("cdf_x: argument outside [0, 1/2]");
    return t == 0.5 ? 1.0 : 6 * std::asin(t) / std::numbers::pi;
}

/// P(Y > t) = 3 / (pi t) for t >= 1.
inline double tail_y(double t)
{
    if (!(t >= 1)) throw std::domain_error("tail_y: argument below 1");
    return 3 / (std::numbers::pi * t);
}

/// Exact CDF of y under normalized mu, all t.
inline double cdf_y(double t)
{
    if (t <= std::sqrt(3.0) / 2) return 0;
    return mu_measure(Rect{0, 0.5, 0, t}) / kMuTotal;
}

inline PartitionSpec equal_measure_partition(int kx, int ky)
{
    if (kx < 1 || ky < 1) throw std::invalid_argument("equal_measure_partition: kx, ky >= 1");
    PartitionSpec spec;
    spec.kx = kx;
    spec.ky = ky;
    for (int j = 0; j <= kx; ++j) spec.x_breaks.push_back(j == kx ? 0.5 : std::sin(j * std::numbers::pi / (6.0 * kx)));
    const double cell_mass = kMuTotal / (static_cast<double>(kx) * ky);
    for (int j = 0; j < kx; ++j) {
        const double xa = spec.x_breaks[j], xb = spec.x_breaks[j + 1];
        std::vector<double> ys{0};
        for (int k = 1; k < ky; ++k) {
            // mass of the strip below y is increasing in y; bisect on [sqrt(3)/2, hi]
            const double target = k * cell_mass;
            double lo = std::sqrt(3.0) / 2, hi = 2;
            while (mu_measure(Rect{xa, xb, 0, hi}) < target) hi *= 2;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (mu_measure(Rect{xa, xb, 0, mid}) < target ? lo : hi) = mid;
            }
            ys.push_back(0.5 * (lo + hi));
        }
        ys.push_back(kInf);
        for (int k = 0; k < ky; ++k) {
            Rect r{xa, xb, ys[k], ys[k + 1]};
            spec.cells.push_back({r, mu_measure(r)});
        }
        spec.y_breaks.push_back(std::move(ys));
    }
    return spec;
}

/// Cell containing p; points on a cell boundary go to the lower index.
inline std::size_t locate_cell(const UHPoint& p, const PartitionSpec& spec)
{
    if (!in_fundamental_domain(p)) throw std::domain_error("locate_cell: point outside the fundamental domain");
    const auto& xb = spec.x_breaks;
    // first interior breakpoint >= x
    auto sx = static_cast<std::size_t>(std::lower_bound(xb.begin() + 1, xb.end() - 1, p.x) - (xb.begin() + 1));
    const auto& yb = spec.y_breaks[sx];
    auto sy = static_cast<std::size_t>(std::lower_bound(yb.begin() + 1, yb.end() - 1, p.y) - (yb.begin() + 1));
    return sx * static_cast<std::size_t>(spec.ky) + sy;
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
template <class Rng>
double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exact sample from normalized mu: x uniform on [0, 1/2], y with density
/// proportional to 1/y^2 on [sqrt(3)/2, inf), accepted iff x^2 + y^2 >= 1.
template <class Rng>
UHPoint sample_mu(Rng& rng, std::uint64_t* proposals = nullptr)
{
    const double y0 = std::sqrt(3.0) / 2;
    for (;;) {
        if (proposals) ++*proposals;
        const double x = 0.5 * uniform01(rng);
        const double y = y0 / (1 - uniform01(rng));
        if (x * x + y * y >= 1) return {x, y};
    }
}

}  // namespace shapelab
