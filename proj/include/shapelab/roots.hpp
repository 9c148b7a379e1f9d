#pragma once

// Polynomial roots in extended precision with certified inclusion radii.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace shapelab {

using real_t = long double;
using complex_t = std::complex<real_t>;

struct CertifiedRoot {
    complex_t value;
    real_t radius;  // a root of the polynomial lies within this distance
};

namespace detail {

// Horner evaluation of p and p' with a running bound on the rounding error of p.
inline void horner(const std::vector<real_t>& coeffs, complex_t z, complex_t& p, complex_t& dp, real_t& err)
{
    p = 0;
    dp = 0;
    err = 0;
    const real_t az = std::abs(z);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
        err = err * az + std::abs(p);
    }
    err *= 4 * std::numeric_limits<real_t>::epsilon() * static_cast<real_t>(coeffs.size());
}

}  // namespace detail

/// Roots of sum_k coeffs[k] x^k (leading coefficient nonzero), by Aberth-Ehrlich
/// iteration followed by Newton polishing. Each root carries an inclusion radius
/// n*(|p(z)|+rounding)/|p'(z)|; radii are checked to give pairwise disjoint disks.
inline std::vector<CertifiedRoot> polynomial_roots(const std::vector<real_t>& coeffs)
{
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1 || coeffs.back() == 0) throw std::invalid_argument("polynomial_roots: bad degree");

    // Cauchy bound for the initial circle.
    real_t bound = 0;
    for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(coeffs[k] / coeffs[n]));
    bound += 1;

    std::vector<complex_t> z(n);
    for (int k = 0; k < n; ++k) {
        real_t ang = 2 * std::numbers::pi_v<real_t> * k / n + 0.4L;
        z[k] = std::polar(bound * 0.5L, ang);
    }

    for (int iter = 0; iter < 500; ++iter) {
        real_t max_step = 0;
        for (int k = 0; k < n; ++k) {
            complex_t p, dp;
            real_t err;
            detail::horner(coeffs, z[k], p, dp, err);
            if (p == complex_t(0)) continue;
            complex_t ratio = p / dp;
            complex_t sum = 0;
            for (int j = 0; j < n; ++j)
                if (j != k) sum += complex_t(1) / (z[k] - z[j]);
            complex_t step = ratio / (complex_t(1) - ratio * sum);
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max<real_t>(1, std::abs(z[k])));
        }
        if (max_step < 1e-17L) break;
    }

    std::vector<CertifiedRoot> out(n);
    for (int k = 0; k < n; ++k) {
        // Newton polish.
        for (int it = 0; it < 3; ++it) {
            complex_t p, dp;
            real_t err;
            detail::horner(coeffs, z[k], p, dp, err);
            if (dp == complex_t(0)) break;
            z[k] -= p / dp;
        }
        complex_t p, dp;
        real_t err;
        detail::horner(coeffs, z[k], p, dp, err);
        real_t radius = std::numeric_limits<real_t>::infinity();
        if (std::abs(dp) > 0) radius = n * (std::abs(p) + err) / std::abs(dp);
        out[k] = {z[k], radius};
    }

    // Snap numerically real roots onto the real axis when the disk straddles it.
    for (auto& r : out) {
        if (std::abs(r.value.imag()) <= r.radius) r.value = {r.value.real(), 0};
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(out[i].value - out[j].value) <= out[i].radius + out[j].radius)
                throw std::runtime_error("polynomial_roots: root disks overlap (multiple root?)");
    return out;
}

/// The real root of a cubic a x^3 + b x^2 + c x + d that has exactly one real root
/// (negative discriminant). Cardano start, Newton polish in long double.
inline real_t unique_real_root(real_t a, real_t b, real_t c, real_t d)
{
    const real_t bn = b / a, cn = c / a, dn = d / a;
    const real_t shift = -bn / 3;
    const real_t p = cn - bn * bn / 3;
    const real_t q = 2 * bn * bn * bn / 27 - bn * cn / 3 + dn;
    const real_t disc = q * q / 4 + p * p * p / 27;
    real_t t;
    if (disc >= 0) {
        real_t s = std::sqrt(disc);
        t = std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s);
    }
    else {
        // Rounding put us in the three-real-root branch; take the largest magnitude root.
        real_t r = std::sqrt(-p / 3);
        real_t phi = std::acos(std::clamp(-q / (2 * r * r * r), real_t(-1), real_t(1)));
        t = 2 * r * std::cos(phi / 3);
    }
    real_t x = t + shift;
    for (int it = 0; it < 4; ++it) {
        real_t f = ((a * x + b) * x + c) * x + d;
        real_t df = (3 * a * x + 2 * b) * x + c;
        if (df == 0) break;
        real_t step = f / df;
        x -= step;
        if (std::abs(step) <= std::abs(x) * 1e-19L) break;
    }
    return x;
}

/// Three real roots of a cubic with positive discriminant, ascending. Trigonometric
/// start, Newton polish.
inline std::array<real_t, 3> three_real_roots(real_t a, real_t b, real_t c, real_t d)
{
    const real_t bn = b / a, cn = c / a, dn = d / a;
    const real_t shift = -bn / 3;
    const real_t p = cn - bn * bn / 3;
    const real_t q = 2 * bn * bn * bn / 27 - bn * cn / 3 + dn;
    std::array<real_t, 3> x{};
    if (p >= 0) {
        x = {shift, shift, shift};
    }
    else {
        real_t r = std::sqrt(-p / 3);
        real_t phi = std::acos(std::clamp(-q / (2 * r * r * r), real_t(-1), real_t(1)));
        for (int k = 0; k < 3; ++k)
            x[k] = 2 * r * std::cos((phi - 2 * std::numbers::pi_v<real_t> * k) / 3) + shift;
    }
    for (auto& xi : x) {
        for (int it = 0; it < 5; ++it) {
            real_t f = ((a * xi + b) * xi + c) * xi + d;
            real_t df = (3 * a * xi + 2 * b) * xi + c;
            if (df == 0) break;
            real_t step = f / df;
            xi -= step;
            if (std::abs(step) <= std::abs(xi) * 1e-19L) break;
        }
    }
    std::sort(x.begin(), x.end());
    return x;
}

}  // namespace shapelab
