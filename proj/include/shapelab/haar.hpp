#pragma once

// Monte Carlo checks of the volume machinery for binary cubic forms: base points
// with identity shape and |disc| = 1, their stabilizers, the constancy of the
// Jacobian constant relating Haar measure on the group to |disc|^-1 dv, and the
// volume ratio of shape-restricted regions against the measure on shape space.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubic_form.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "shape_geometry.hpp"
#include "shape_space.hpp"

namespace shapelab {

struct BasePoint {
    int signature = 0;
    RealCubicForm form;
    double disc = 0;
    UHPoint shape;
};

struct McEstimate {
    double value = 0;
    double stderr_ = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    nlohmann::ordered_json config;
};

inline nlohmann::ordered_json to_json(const McEstimate& e)
{
    nlohmann::ordered_json j;
    j["estimate"] = e.value;
    j["stderr"] = e.stderr_;
    j["N"] = e.samples;
    j["seed"] = e.seed;
    j["config"] = e.config;
    return j;
}

struct McBoxTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double disc_real(const RealCubicForm& f)
{
    return discriminant(f);
}

inline RealCubicForm scale_form(const RealCubicForm& f, double k)
{
    return {f.a * k, f.b * k, f.c * k, f.d * k};
}

// Lower-triangular g0 with g0 g0^T = (1/y)[[1, x], [x, x^2 + y^2]], the normalized
// Gram of the lattice basis {1, x + iy}.
inline Mat2 iwasawa(double x, double y, double theta, int det_sign)
{
    const double sy = std::sqrt(y);
    const Mat2 g0{1 / sy, 0, x / sy, sy};
    const Mat2 k{std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
    const Mat2 f{1, 0, 0, static_cast<double>(det_sign)};
    return g0 * k * f;
}

// Independent 64-bit stream per batch.
inline std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (batch + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

struct BatchStats {
    double mean = 0, stderr_ = 0;
};

inline BatchStats batch_stats(const std::vector<double>& v)
{
    const double n = static_cast<double>(v.size());
    double m = 0;
    for (double x : v) m += x;
    m /= n;
    double s2 = 0;
    for (double x : v) s2 += (x - m) * (x - m);
    return {m, std::sqrt(s2 / (n - 1) / n)};
}

inline constexpr std::size_t kBatches = 32;

}  // namespace detail

/// v^(i): the seed form x y (x + y) (i = 0) or x^3 + x y^2 (i = 1), moved to identity
/// shape by the inverse Cholesky factor of its shape Gram and scaled to |disc| = 1.
inline BasePoint make_basepoint(int i)
{
    if (i != 0 && i != 1) throw std::invalid_argument("make_basepoint: i must be 0 or 1");
    const RealCubicForm seed = i == 0 ? RealCubicForm{0, 1, 1, 0} : RealCubicForm{1, 0, 1, 0};
    const SymMatrix G = shape_gram_closed(seed);
    // G = L L^T, L lower triangular; gamma = L^-1 gives gamma G gamma^T = I
    const double l00 = std::sqrt(static_cast<double>(G(0, 0)));
    const double l10 = static_cast<double>(G(1, 0)) / l00;
    const double l11 = std::sqrt(static_cast<double>(G(1, 1)) - l10 * l10);
    const Mat2 gamma{1 / l00, 0, -l10 / (l00 * l11), 1 / l11};
    RealCubicForm v = act(gamma, seed);
    v = detail::scale_form(v, std::pow(std::abs(detail::disc_real(v)), -0.25));
    BasePoint bp{i, v, detail::disc_real(v), gauss_reduce(shape_gram_closed(v)).point};
    return bp;
}

/// Elements g of GL2(R) with g.v = v, found as conjugates of the integer
/// automorphisms of the seed form and each checked to fix v within 1e-10.
inline std::vector<Mat2> stabilizer(int i)
{
    const BasePoint bp = make_basepoint(i);
    const RealCubicForm seed = i == 0 ? RealCubicForm{0, 1, 1, 0} : RealCubicForm{1, 0, 1, 0};
    // recover the real transform: v = k act(gamma, seed) with gamma as in make_basepoint
    const SymMatrix G = shape_gram_closed(seed);
    const double l00 = std::sqrt(static_cast<double>(G(0, 0)));
    const double l10 = static_cast<double>(G(1, 0)) / l00;
    const double l11 = std::sqrt(static_cast<double>(G(1, 1)) - l10 * l10);
    const Mat2 gamma{1 / l00, 0, -l10 / (l00 * l11), 1 / l11};
    const Mat2 gamma_inv{l00, 0, l10, l11};
    std::vector<Mat2> out;
    for (int p = -1; p <= 1; ++p)
        for (int q = -1; q <= 1; ++q)
            for (int r = -1; r <= 1; ++r)
                for (int s = -1; s <= 1; ++s) {
                    const int det = p * s - q * r;
                    if (det != 1 && det != -1) continue;
                    const UnimodularMatrix2 u(p, q, r, s);
                    if (act(u, SmallCubicForm{static_cast<std::int64_t>(seed.a), static_cast<std::int64_t>(seed.b),
                                              static_cast<std::int64_t>(seed.c), static_cast<std::int64_t>(seed.d)})
                        != SmallCubicForm{static_cast<std::int64_t>(seed.a), static_cast<std::int64_t>(seed.b),
                                          static_cast<std::int64_t>(seed.c), static_cast<std::int64_t>(seed.d)})
                        continue;
                    // act(h g, f) = act(h, act(g, f)); with v = act(gamma, seed), h = gamma u gamma^-1 fixes v
                    const Mat2 um{static_cast<double>(p), static_cast<double>(q), static_cast<double>(r),
                                  static_cast<double>(s)};
                    const Mat2 h = gamma * um * gamma_inv;
                    const RealCubicForm w = act(h, bp.form);
                    const double err = std::max({std::abs(w.a - bp.form.a), std::abs(w.b - bp.form.b),
                                                 std::abs(w.c - bp.form.c), std::abs(w.d - bp.form.d)});
                    if (err > 1e-10) throw std::logic_error("stabilizer: conjugated automorphism does not fix v");
                    out.push_back(h);
                }
    return out;
}

/// n_i: the stabilizer of v^(i) in GL2(R) has 6 (i = 0) or 2 (i = 1) elements.
inline int stabilizer_order(int i)
{
    return static_cast<int>(stabilizer(i).size());
}

/// Compactly supported test functions on coefficient space: products of
/// smoothsteps 1 - |v_k - c_k| / r.
struct BumpFunction {
    RealCubicForm centre;
    double radius = 0.1;

    double operator()(const RealCubicForm& v) const
    {
        const double d[4] = {v.a - centre.a, v.b - centre.b, v.c - centre.c, v.d - centre.d};
        double prod = 1;
        for (double e : d) {
            const double t = 1 - std::abs(e) / radius;
            if (t <= 0) return 0;
            prod *= t * t * (3 - 2 * t);
        }
        return prod;
    }
};

/// Test function "A" is centred at v^(i); "B" at a rotated, rescaled copy.
inline BumpFunction make_testfn(int i, char id)
{
    const BasePoint bp = make_basepoint(i);
    auto norm = [](const RealCubicForm& f) { return std::max({std::abs(f.a), std::abs(f.b), std::abs(f.c), std::abs(f.d)}); };
    if (id == 'A') return {bp.form, 0.12 * norm(bp.form)};
    if (id == 'B') {
        const Mat2 rot{std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7)};
        const Mat2 shear{1, 0.3, 0, 1};
        const RealCubicForm c = detail::scale_form(act(shear * rot, bp.form), 1.2);
        return {c, 0.1 * norm(c)};
    }
    throw std::invalid_argument("make_testfn: id must be A or B");
}

namespace detail {

// Group coordinates of w = lambda g v^(i): lambda = |disc w|^(1/4) and the point
// x + iy of the normalized shape Gram g g^T.
inline std::array<double, 3> group_coordinates(const RealCubicForm& w)
{
    const double lambda = std::pow(std::abs(disc_real(w)), 0.25);
    const SymMatrix G = shape_gram_closed(w);
    const double det = static_cast<double>(G(0, 0) * G(1, 1) - G(0, 1) * G(0, 1));
    const double m00 = static_cast<double>(G(0, 0)) / std::sqrt(det), m01 = static_cast<double>(G(0, 1)) / std::sqrt(det);
    const double y = 1 / m00;
    return {lambda, m01 * y, y};
}

}  // namespace detail

/// Estimate of c_i = LHS / RHS where LHS = integral over the group of phi(g v^(i)) dg
/// (Haar: d^x lambda, dx dy / y^2 d theta, both determinant signs, both signs of
/// lambda) and RHS = integral of |disc v|^-1 phi(v) dv over signature i. Half the
/// samples go to each side; the standard error combines both batch-mean errors.
inline McEstimate mc_jacobian_constant(int i, char testfn, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1)
{
    if (samples < 2 * detail::kBatches * 100) throw std::invalid_argument("mc_jacobian_constant: too few samples");
    const BasePoint bp = make_basepoint(i);
    const BumpFunction phi = make_testfn(i, testfn);
    const RealCubicForm& c = phi.centre;
    const double r = phi.radius;

    // support survey: signature, |disc| and group-coordinate ranges over the support box
    std::mt19937_64 pilot(detail::batch_seed(seed, 1000003));
    double dmin = 1e300, lmin = 1e300, lmax = 0, xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = 0;
    for (int k = 0; k < 20000; ++k) {
        const RealCubicForm w{detail::uniform(pilot, c.a - r, c.a + r), detail::uniform(pilot, c.b - r, c.b + r),
                              detail::uniform(pilot, c.c - r, c.c + r), detail::uniform(pilot, c.d - r, c.d + r)};
        const double D = detail::disc_real(w);
        if ((D > 0) != (i == 0)) throw std::invalid_argument("mc_jacobian_constant: support meets the other signature");
        dmin = std::min(dmin, std::abs(D));
        const auto gc = detail::group_coordinates(w);
        lmin = std::min(lmin, gc[0]);
        lmax = std::max(lmax, gc[0]);
        xmin = std::min(xmin, gc[1]);
        xmax = std::max(xmax, gc[1]);
        ymin = std::min(ymin, gc[2]);
        ymax = std::max(ymax, gc[2]);
    }
    if (dmin < 1e-3 * std::abs(detail::disc_real(c))) throw std::invalid_argument("mc_jacobian_constant: degenerate support");
    // widen by half the observed range on each side
    const double loglo = std::log(lmin) - 0.5 * std::log(lmax / lmin) - 0.05, loghi = std::log(lmax) + 0.5 * std::log(lmax / lmin) + 0.05;
    const double xlo = xmin - 0.5 * (xmax - xmin) - 0.05, xhi = xmax + 0.5 * (xmax - xmin) + 0.05;
    const double tylo = std::log(ymin) - 0.5 * std::log(ymax / ymin) - 0.05, tyhi = std::log(ymax) + 0.5 * std::log(ymax / ymin) + 0.05;
    const double lhs_volume = (loghi - loglo) * (xhi - xlo) * (tyhi - tylo) * (2 * std::numbers::pi) * 4;
    const double rhs_volume = std::pow(2 * r, 4);

    const std::uint64_t per_batch = samples / (2 * detail::kBatches);
    std::vector<double> lhs(detail::kBatches), rhs(detail::kBatches);
    std::vector<int> edge_hits(detail::kBatches, 0);
    parallel_units(detail::kBatches, resolve_threads(threads), [&](std::size_t b) {
        std::mt19937_64 rng(detail::batch_seed(seed, b));
        double sl = 0, sr = 0;
        for (std::uint64_t k = 0; k < per_batch; ++k) {
            const double tl = detail::uniform(rng, loglo, loghi);
            const double x = detail::uniform(rng, xlo, xhi);
            const double ty = detail::uniform(rng, tylo, tyhi);
            const double theta = detail::uniform(rng, 0, 2 * std::numbers::pi);
            const std::uint64_t signs = rng();
            const int det_sign = (signs & 1) ? 1 : -1;
            const double lam = (signs & 2 ? 1 : -1) * std::exp(tl);
            const double y = std::exp(ty);
            const RealCubicForm w = detail::scale_form(act(detail::iwasawa(x, y, theta, det_sign), bp.form), lam);
            const double f = phi(w);
            if (f > 0) {
                // dx dy / y^2 with dy = y d(log y); d^x lambda = d(log |lambda|)
                sl += f / y;
                const double mt = 0.02;
                if (tl < loglo + mt * (loghi - loglo) || tl > loghi - mt * (loghi - loglo) || x < xlo + mt * (xhi - xlo)
                    || x > xhi - mt * (xhi - xlo) || ty < tylo + mt * (tyhi - tylo) || ty > tyhi - mt * (tyhi - tylo))
                    ++edge_hits[b];
            }
            const RealCubicForm v{detail::uniform(rng, c.a - r, c.a + r), detail::uniform(rng, c.b - r, c.b + r),
                                  detail::uniform(rng, c.c - r, c.c + r), detail::uniform(rng, c.d - r, c.d + r)};
            const double D = detail::disc_real(v);
            if ((D > 0) == (i == 0)) sr += phi(v) / std::abs(D);
        }
        lhs[b] = lhs_volume * sl / static_cast<double>(per_batch);
        rhs[b] = rhs_volume * sr / static_cast<double>(per_batch);
    });
    for (int e : edge_hits)
        if (e) throw McBoxTooSmall("mc_jacobian_constant: support reaches the group-coordinate box edge");
    const auto L = detail::batch_stats(lhs), R = detail::batch_stats(rhs);
    if (!(R.mean > 0)) throw std::invalid_argument("mc_jacobian_constant: degenerate support");
    McEstimate e;
    e.value = L.mean / R.mean;
    e.stderr_ = std::abs(e.value) * std::hypot(L.stderr_ / L.mean, R.stderr_ / R.mean);
    e.samples = per_batch * 2 * detail::kBatches;
    e.seed = seed;
    e.config = {{"kind", "jacobian"}, {"i", i}, {"testfn", std::string(1, testfn)}, {"batches", detail::kBatches}};
    return e;
}

/// Coefficient box containing every w = lambda g v^(i) with |lambda| <= 1 whose shape
/// Gram is reduced with height at most ymax: row norms of g satisfy
/// |r1|^2 <= 2/sqrt(3) and |r2|^2 <= ymax + 1/(4 ymax), and a symmetric trilinear
/// form is bounded by the sup of its cubic on the unit circle.
inline std::array<double, 4> reduced_region_box(int i, double ymax)
{
    const BasePoint bp = make_basepoint(i);
    double sup = 0;
    for (int k = 0; k < 100000; ++k) {
        const double t = 2 * std::numbers::pi * k / 100000;
        sup = std::max(sup, std::abs(bp.form(std::cos(t), std::sin(t))));
    }
    sup *= 1.01;
    const double n1 = std::sqrt(2 / std::sqrt(3.0)), n2 = std::sqrt(std::max(ymax, 1.0) + 0.25 / std::max(ymax, 1.0));
    return {sup * n1 * n1 * n1, 3 * sup * n1 * n1 * n2, 3 * sup * n1 * n2 * n2, sup * n2 * n2 * n2};
}

/// Volume ratio vol(R_W) / vol(R) for R = {v : |disc v| < 1, signature i, shape Gram
/// reduced (identity Gauss transform), shape height <= ymax} and R_W its subset with
/// shape in W, by uniform sampling of a coefficient box; compared by the caller with
/// mu(W cap {y <= ymax}) / mu({y <= ymax}). Standard error from batch ratios.
inline McEstimate mc_theorem6_ratio(const Rank2Region& W, int i, double ymax, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 1)
{
    if (i != 0 && i != 1) throw std::invalid_argument("mc_theorem6_ratio: i must be 0 or 1");
    if (!(ymax >= 1 && ymax <= 8)) throw std::invalid_argument("mc_theorem6_ratio: ymax must be in [1, 8]");
    if (samples < detail::kBatches * 100) throw std::invalid_argument("mc_theorem6_ratio: too few samples");
    const auto box = reduced_region_box(i, ymax);
    const std::uint64_t per_batch = samples / detail::kBatches;
    std::vector<double> ratio(detail::kBatches);
    std::vector<std::uint64_t> num(detail::kBatches), den(detail::kBatches);
    std::vector<int> edge(detail::kBatches, 0);
    parallel_units(detail::kBatches, resolve_threads(threads), [&](std::size_t b) {
        std::mt19937_64 rng(detail::batch_seed(seed, b));
        for (std::uint64_t k = 0; k < per_batch; ++k) {
            const RealCubicForm v{detail::uniform(rng, -box[0], box[0]), detail::uniform(rng, -box[1], box[1]),
                                  detail::uniform(rng, -box[2], box[2]), detail::uniform(rng, -box[3], box[3])};
            const double D = detail::disc_real(v);
            if (D == 0 || (D > 0) != (i == 0) || std::abs(D) >= 1) continue;
            const auto red = gauss_reduce(shape_gram_closed(v));
            if (!(red.transform == UnimodularMatrix2::identity())) continue;
            if (red.point.y > ymax) continue;
            ++den[b];
            if (W.contains(red.point)) ++num[b];
            const double m = 1e-6;
            if (std::abs(v.a) > box[0] * (1 - m) || std::abs(v.b) > box[1] * (1 - m) || std::abs(v.c) > box[2] * (1 - m)
                || std::abs(v.d) > box[3] * (1 - m))
                ++edge[b];
        }
        ratio[b] = den[b] ? static_cast<double>(num[b]) / static_cast<double>(den[b]) : 0;
    });
    for (int e : edge)
        if (e) throw McBoxTooSmall("mc_theorem6_ratio: accepted point within 1e-6 of the box boundary");
    const auto st = detail::batch_stats(ratio);
    McEstimate e;
    e.value = st.mean;
    e.stderr_ = st.stderr_;
    e.samples = per_batch * detail::kBatches;
    e.seed = seed;
    std::uint64_t nd = 0;
    for (auto d : den) nd += d;
    e.config = {{"kind", "ratio"}, {"i", i}, {"ymax", ymax}, {"accepted", nd}, {"batches", detail::kBatches}};
    return e;
}

/// mu(W cap {y <= ymax}) / mu({y <= ymax}) for rectangle regions.
inline double mu_ratio_truncated(const Rank2Region& W, double ymax)
{
    double num = 0;
    for (const auto& r : W.rects)
        if (r.y1 < ymax) num += mu_measure(Rect{r.x1, r.x2, r.y1, std::min(r.y2, ymax)});
    return num / mu_measure(Rect{0, 0.5, 0, ymax});
}

}  // namespace shapelab
