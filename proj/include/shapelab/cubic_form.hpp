#pragma once

// Binary cubic forms f(x,y) = a x^3 + b x^2 y + c x y^2 + d y^3: invariants,
// the GL2 action, classification, the associated cubic ring and its embeddings.

#include <array>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "roots.hpp"

namespace shapelab {

template <class T>
struct basic_cubic_form {
    T a{}, b{}, c{}, d{};

    auto operator<=>(const basic_cubic_form&) const = default;
    bool operator==(const basic_cubic_form&) const = default;

    /// f(x, y) evaluated exactly in T.
    T operator()(const T& x, const T& y) const
    {
        return ((a * x + b * y) * x + c * y * y) * x + d * y * y * y;
    }

    template <class U>
    basic_cubic_form<U> as() const
    {
        return {static_cast<U>(a), static_cast<U>(b), static_cast<U>(c), static_cast<U>(d)};
    }
};

using BinaryCubicForm = basic_cubic_form<BigInt>;
using SmallCubicForm = basic_cubic_form<std::int64_t>;
using RealCubicForm = basic_cubic_form<double>;

template <class T>
std::ostream& operator<<(std::ostream& os, const basic_cubic_form<T>& f)
{
    return os << '(' << f.a << ',' << f.b << ',' << f.c << ',' << f.d << ')';
}

/// Integer 2x2 matrix [[p,q],[r,s]] with determinant +-1.
class UnimodularMatrix2 {
public:
    std::int64_t p, q, r, s;

    UnimodularMatrix2(std::int64_t p_, std::int64_t q_, std::int64_t r_, std::int64_t s_)
        : p(p_), q(q_), r(r_), s(s_)
    {
        auto det = p * s - q * r;
        if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular");
    }

    static UnimodularMatrix2 identity() { return {1, 0, 0, 1}; }

    std::int64_t det() const { return p * s - q * r; }

    UnimodularMatrix2 operator*(const UnimodularMatrix2& o) const
    {
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
    }

    UnimodularMatrix2 inverse() const
    {
        auto dt = det();
        return {s * dt, -q * dt, -r * dt, p * dt};
    }

    bool operator==(const UnimodularMatrix2&) const = default;
};

/// Real 2x2 matrix, for the action of GL2(R).
struct Mat2 {
    double p = 1, q = 0, r = 0, s = 1;

    double det() const { return p * s - q * r; }
    Mat2 operator*(const Mat2& o) const
    {
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
    }
    Mat2 transpose() const { return {p, r, q, s}; }
};

namespace detail {

// (g.f)(x,y) = f((x,y) g) = f(p x + r y, q x + s y).
template <class T, class S>
basic_cubic_form<T> act_impl(const S& p, const S& q, const S& r, const S& s, const basic_cubic_form<T>& f)
{
    const T P = static_cast<T>(p), Q = static_cast<T>(q), R = static_cast<T>(r), Sx = static_cast<T>(s);
    basic_cubic_form<T> g;
    g.a = f(P, Q);
    g.d = f(R, Sx);
    g.b = 3 * f.a * P * P * R + f.b * (P * P * Sx + 2 * P * Q * R) + f.c * (Q * Q * R + 2 * P * Q * Sx)
          + 3 * f.d * Q * Q * Sx;
    g.c = 3 * f.a * P * R * R + f.b * (R * R * Q + 2 * P * R * Sx) + f.c * (Sx * Sx * P + 2 * Q * R * Sx)
          + 3 * f.d * Q * Sx * Sx;
    return g;
}

}  // namespace detail

/// The GL2(Z) action (g.f)(x,y) = f((x,y) g).
template <class T>
basic_cubic_form<T> act(const UnimodularMatrix2& g, const basic_cubic_form<T>& f)
{
    return detail::act_impl<T, std::int64_t>(g.p, g.q, g.r, g.s, f);
}

/// The same action for real matrices on real forms.
inline RealCubicForm act(const Mat2& g, const RealCubicForm& f)
{
    return detail::act_impl<double, double>(g.p, g.q, g.r, g.s, f);
}

template <class T>
T discriminant(const basic_cubic_form<T>& f)
{
    const T& a = f.a;
    const T& b = f.b;
    const T& c = f.c;
    const T& d = f.d;
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d;
}

/// Quadratic covariant P x^2 + Q x y + R y^2 with Q^2 - 4 P R = -3 disc(f).
template <class T>
struct basic_hessian_form {
    T P{}, Q{}, R{};
    bool operator==(const basic_hessian_form&) const = default;

    T discriminant() const { return Q * Q - 4 * P * R; }
};

using HessianForm = basic_hessian_form<BigInt>;

template <class T>
basic_hessian_form<T> hessian(const basic_cubic_form<T>& f)
{
    return {f.b * f.b - 3 * f.a * f.c, f.b * f.c - 9 * f.a * f.d, f.c * f.c - 3 * f.b * f.d};
}

/// H o g for the row-vector convention: matrix M -> g M g^T.
template <class T>
basic_hessian_form<T> act(const UnimodularMatrix2& g, const basic_hessian_form<T>& h)
{
    const T p = g.p, q = g.q, r = g.r, s = g.s;
    // H(p x + r y, q x + s y)
    return {h.P * p * p + h.Q * p * q + h.R * q * q, 2 * h.P * p * r + h.Q * (p * s + q * r) + 2 * h.R * q * s,
            h.P * r * r + h.Q * r * s + h.R * s * s};
}

// gcd usable for both builtin and multiprecision integers.
inline std::int64_t gcd_value(std::int64_t x, std::int64_t y)
{
    return std::gcd(x, y);
}
inline BigInt gcd_value(const BigInt& x, const BigInt& y)
{
    return boost::multiprecision::gcd(x, y);
}

template <class T>
T content(const basic_cubic_form<T>& f)
{
    using std::abs;
    using boost::multiprecision::abs;
    T g = gcd_value(gcd_value(abs(f.a), abs(f.b)), gcd_value(abs(f.c), abs(f.d)));
    return g;
}

enum class FormKind { zero_disc, reducible, irreducible_c3, irreducible_s3 };

inline const char* to_string(FormKind k)
{
    switch (k) {
        case FormKind::zero_disc: return "zero_disc";
        case FormKind::reducible: return "reducible";
        case FormKind::irreducible_c3: return "irreducible_c3";
        case FormKind::irreducible_s3: return "irreducible_s3";
    }
    return "?";
}

template <class T>
struct Classification {
    FormKind kind;
    int signature;  // number of complex pairs; -1 when disc = 0
    T content;
};

namespace detail {

inline std::vector<std::int64_t> divisors(std::uint64_t n)
{
    std::vector<std::int64_t> out;
    for (std::uint64_t k = 1; k * k <= n; ++k) {
        if (n % k) continue;
        out.push_back(static_cast<std::int64_t>(k));
        if (k * k != n) out.push_back(static_cast<std::int64_t>(n / k));
    }
    return out;
}

template <class T>
real_t to_real(const T& v)
{
    return static_cast<real_t>(v);
}

}  // namespace detail

/// True iff f has a linear factor over Q. Requires disc(f) != 0. Real roots are
/// located numerically and every candidate u/v with v | a is verified exactly.
template <class T>
bool has_rational_root(const basic_cubic_form<T>& f, const T& disc)
{
    if (f.a == 0 || f.d == 0) return true;
    using std::abs;
    using boost::multiprecision::abs;
    const T aa = abs(f.a);
    if (aa > T(std::int64_t{1} << 40)) throw std::domain_error("has_rational_root: leading coefficient too large");
    const auto A = detail::to_real(f.a), B = detail::to_real(f.b), C = detail::to_real(f.c), D = detail::to_real(f.d);
    std::vector<real_t> real_roots;
    if (disc > 0) {
        auto r = three_real_roots(A, B, C, D);
        real_roots.assign(r.begin(), r.end());
    }
    else {
        real_roots.push_back(unique_real_root(A, B, C, D));
    }
    const auto divs = detail::divisors(static_cast<std::uint64_t>(static_cast<std::int64_t>(aa)));
    for (real_t x : real_roots) {
        for (auto v : divs) {
            real_t uv = std::round(x * static_cast<real_t>(v));
            if (std::abs(uv) > 9e18L) continue;
            T u = static_cast<T>(static_cast<std::int64_t>(uv));
            T vv = static_cast<T>(v);
            if (f(u, vv) == 0) return true;
        }
    }
    return false;
}

template <class T>
Classification<T> classify(const basic_cubic_form<T>& f)
{
    const T disc = discriminant(f);
    const T cont = content(f);
    if (disc == 0) return {FormKind::zero_disc, -1, cont};
    const int sig = disc > 0 ? 0 : 1;
    basic_cubic_form<T> prim{f.a / cont, f.b / cont, f.c / cont, f.d / cont};
    if (has_rational_root(prim, discriminant(prim))) return {FormKind::reducible, sig, cont};
    return {is_square(disc) ? FormKind::irreducible_c3 : FormKind::irreducible_s3, sig, cont};
}

/// Multiplication table of R(f) on the basis <1, omega, theta>. Products are
/// stored as coordinate triples (constant, omega, theta).
template <class T>
struct CubicRingTable {
    T omega_theta;                 // omega * theta (a constant)
    std::array<T, 3> omega_sq;     // omega^2
    std::array<T, 3> theta_sq;     // theta^2
    T trace_omega;
    T trace_theta;

    using Element = std::array<T, 3>;

    Element multiply(const Element& x, const Element& y) const
    {
        // (x0 + x1 w + x2 t)(y0 + y1 w + y2 t)
        Element r{x[0] * y[0], x[0] * y[1] + x[1] * y[0], x[0] * y[2] + x[2] * y[0]};
        const T ww = x[1] * y[1];
        const T tt = x[2] * y[2];
        const T wt = x[1] * y[2] + x[2] * y[1];
        for (int k = 0; k < 3; ++k) r[k] += ww * omega_sq[k] + tt * theta_sq[k];
        r[0] += wt * omega_theta;
        return r;
    }

    T trace(const Element& x) const { return 3 * x[0] + x[1] * trace_omega + x[2] * trace_theta; }
};

template <class T>
CubicRingTable<T> ring_table(const basic_cubic_form<T>& f)
{
    CubicRingTable<T> t;
    t.omega_theta = -f.a * f.d;
    t.omega_sq = {-f.a * f.c, -f.b, f.a};
    t.theta_sq = {-f.b * f.d, -f.d, f.c};
    t.trace_omega = -f.b;
    t.trace_theta = f.c;
    return t;
}

/// Complex embeddings of R(f): roots xi_j of f(x,1) and the images of omega and theta.
struct EmbeddingData {
    std::array<CertifiedRoot, 3> roots;  // real roots first; for i=1: real, upper, lower
    std::array<complex_t, 3> omega;
    std::array<complex_t, 3> theta;
    int signature = 0;
    real_t error_bound = 0;  // absolute bound on each omega/theta image
};

struct EmbeddingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class T>
EmbeddingData embeddings(const basic_cubic_form<T>& f, real_t target_precision = 1e-14L)
{
    if (f.a == 0) throw EmbeddingError("embeddings: leading coefficient is zero");
    const T disc = discriminant(f);
    if (disc == 0) throw EmbeddingError("embeddings: zero discriminant");

    const real_t a = detail::to_real(f.a), b = detail::to_real(f.b), c = detail::to_real(f.c),
                 d = detail::to_real(f.d);
    auto roots = polynomial_roots({d, c, b, a});
    EmbeddingData e;
    e.signature = disc > 0 ? 0 : 1;

    std::sort(roots.begin(), roots.end(), [](const CertifiedRoot& x, const CertifiedRoot& y) {
        const bool xr = x.value.imag() == 0, yr = y.value.imag() == 0;
        if (xr != yr) return xr;
        if (x.value.imag() != y.value.imag()) return x.value.imag() > y.value.imag();
        return x.value.real() < y.value.real();
    });
    const int nreal = static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                                     [](const CertifiedRoot& r) { return r.value.imag() == 0; }));
    if (nreal != 3 - 2 * e.signature) throw EmbeddingError("embeddings: root count disagrees with signature");

    real_t err = 0;
    for (int j = 0; j < 3; ++j) {
        const auto& r = roots[j];
        const real_t scale = std::max<real_t>(1, std::abs(r.value));
        if (!(r.radius <= target_precision * scale)) throw EmbeddingError("embeddings: root not certified");
        e.roots[j] = r;
        e.omega[j] = a * r.value;
        e.theta[j] = (a * r.value + b) * r.value + c;
        const real_t dtheta = (2 * std::abs(a) * std::abs(r.value) + std::abs(b)) * r.radius
                              + std::abs(a) * r.radius * r.radius;
        err = std::max({err, std::abs(a) * r.radius, dtheta});
    }
    e.error_bound = err;
    return e;
}

}  // namespace shapelab
