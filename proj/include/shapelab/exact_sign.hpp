#pragma once

// Exact sign of an integer polynomial evaluated at the real root of an
// irreducible monic cubic with exactly one real root.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "arith.hpp"
#include "roots.hpp"

namespace shapelab {

using BigRational = boost::multiprecision::cpp_rational;

/// Dense polynomial with BigInt coefficients, ascending powers.
using BigPoly = std::vector<BigInt>;

inline BigPoly poly_mul(const BigPoly& x, const BigPoly& y)
{
    if (x.empty() || y.empty()) return {};
    BigPoly r(x.size() + y.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    return r;
}

inline BigPoly poly_add(BigPoly x, const BigPoly& y)
{
    if (x.size() < y.size()) x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
    return x;
}

inline BigPoly poly_scale(BigPoly x, const BigInt& k)
{
    for (auto& v : x) v *= k;
    return x;
}

/// Remainder of h modulo a monic polynomial g.
inline BigPoly poly_rem_monic(BigPoly h, const BigPoly& g)
{
    const std::size_t n = g.size() - 1;
    for (std::size_t k = h.size(); k-- > n;) {
        BigInt lead = h[k];
        if (lead == 0) continue;
        for (std::size_t j = 0; j <= n; ++j) h[k - n + j] -= lead * g[j];
    }
    if (h.size() > n) h.resize(n);
    return h;
}

namespace detail {

template <class Num>
Num eval_poly(const std::vector<Num>& p, const Num& x)
{
    Num r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

inline int sgn(const BigRational& v)
{
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

}  // namespace detail

/// The real root y0 of a monic cubic with negative discriminant, and the sign of
/// integer polynomials at y0. Signs are first decided in long double with a
/// conservative error margin; undecided cases fall back to exact bisection on
/// a rational isolating interval. h(y0) = 0 only when h vanishes modulo g.
class CubicRealRoot {
public:
    explicit CubicRealRoot(BigPoly monic_cubic) : g_(std::move(monic_cubic))
    {
        if (g_.size() != 4 || g_[3] != 1) throw std::invalid_argument("CubicRealRoot: need a monic cubic");
        root_ = unique_real_root(1.0L, static_cast<real_t>(g_[2]), static_cast<real_t>(g_[1]),
                                 static_cast<real_t>(g_[0]));
    }

    real_t approx() const { return root_; }

    int sign(const BigPoly& h) const
    {
        BigPoly r = poly_rem_monic(h, g_);
        bool zero = true;
        for (auto& v : r) zero = zero && v == 0;
        if (zero) return 0;

        // Fast path.
        real_t val = 0, mag = 0;
        const real_t y = root_;
        const real_t ay = std::abs(y);
        for (auto it = r.rbegin(); it != r.rend(); ++it) {
            const real_t c = static_cast<real_t>(*it);
            val = val * y + c;
            mag = mag * ay + std::abs(c);
        }
        // Relative accuracy of the root is ~1e-18; 1e-12 leaves a wide margin.
        if (std::abs(val) > 1e-12L * mag * (1 + ay)) return val > 0 ? 1 : -1;
        return exact_sign(r);
    }

private:
    int exact_sign(const BigPoly& r) const
    {
        std::vector<BigRational> g(g_.begin(), g_.end());
        std::vector<BigRational> h(r.begin(), r.end());
        // a rational root of a monic integer cubic is an integer
        const BigRational y_int = BigInt(static_cast<long long>(std::llround(root_)));
        if (detail::eval_poly(g, y_int) == 0) return detail::sgn(detail::eval_poly(h, y_int));
        std::vector<BigRational> dh;
        for (std::size_t k = 1; k < h.size(); ++k) dh.push_back(h[k] * static_cast<int>(k));

        // Bracket: g is monic with one real root so g < 0 left of it and > 0 right.
        real_t w = std::max<real_t>(1e-6L, std::abs(root_) * 1e-6L);
        BigRational lo = to_rational(root_ - w), hi = to_rational(root_ + w);
        while (detail::eval_poly(g, lo) >= 0) lo -= (hi - lo);
        while (detail::eval_poly(g, hi) <= 0) hi += (hi - lo);

        for (int iter = 0; iter < 2000; ++iter) {
            BigRational width = hi - lo;
            BigRational h_lo = detail::eval_poly(h, lo);
            // |h(y) - h(lo)| <= sum_k |h_k| |y^k - lo^k| bounded by |h'| growth on [lo, hi].
            BigRational bound = 0;
            BigRational m = boost::multiprecision::abs(lo) > boost::multiprecision::abs(hi)
                                ? boost::multiprecision::abs(lo)
                                : boost::multiprecision::abs(hi);
            BigRational mk = 1;
            for (std::size_t k = 1; k < h.size(); ++k) {
                bound += boost::multiprecision::abs(h[k]) * static_cast<int>(k) * mk;
                mk *= m;
            }
            bound *= width;
            if (boost::multiprecision::abs(h_lo) > bound) return detail::sgn(h_lo);
            BigRational mid = (lo + hi) / 2;
            int gm = detail::sgn(detail::eval_poly(g, mid));
            if (gm == 0) return detail::sgn(detail::eval_poly(h, mid));
            if (gm < 0)
                lo = mid;
            else
                hi = mid;
        }
        throw std::runtime_error("CubicRealRoot: sign undecided");
    }

    static BigRational to_rational(real_t v)
    {
        int e = 0;
        real_t m = std::frexp(v, &e);
        // 64-bit mantissa
        auto mi = static_cast<long long>(std::ldexp(m, 62));
        BigRational r(mi);
        int shift = e - 62;
        if (shift >= 0)
            r *= BigRational(BigInt(1) << shift);
        else
            r /= BigRational(BigInt(1) << (-shift));
        return r;
    }

    BigPoly g_;
    real_t root_;
};

}  // namespace shapelab
