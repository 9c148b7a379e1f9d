#pragma once

// p-adic maximality of cubic rings R(f), an independent Dedekind-criterion
// route for monic polynomials, and exact local densities by exhaustive count.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include "arith.hpp"
#include "cubic_form.hpp"

namespace shapelab {

struct InvariantBreach : std::logic_error {
    using std::logic_error::logic_error;
};

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

template <class T>
u64 residue(const T& v, u64 m)
{
    if constexpr (std::is_same_v<T, BigInt>) {
        BigInt r = v % m;
        if (r < 0) r += m;
        return static_cast<u64>(r);
    }
    else {
        auto r = static_cast<std::int64_t>(v % static_cast<std::int64_t>(m));
        return static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
    }
}

struct ModForm {
    u64 a, b, c, d, m;

    u64 mul(u64 x, u64 y) const { return static_cast<u64>(static_cast<u128>(x) * y % m); }
    u64 add(u64 x, u64 y) const { return static_cast<u64>((static_cast<u128>(x) + y) % m); }

    u64 eval(u64 x, u64 y) const
    {
        const u64 x2 = mul(x, x), y2 = mul(y, y);
        u64 r = mul(a, mul(x2, x));
        r = add(r, mul(b, mul(x2, y)));
        r = add(r, mul(c, mul(x, y2)));
        return add(r, mul(d, mul(y2, y)));
    }
    // partial derivatives
    u64 dx(u64 x, u64 y) const
    {
        u64 r = mul(mul(3 % m, a), mul(x, x));
        r = add(r, mul(mul(2 % m, b), mul(x, y)));
        return add(r, mul(c, mul(y, y)));
    }
    u64 dy(u64 x, u64 y) const
    {
        u64 r = mul(b, mul(x, x));
        r = add(r, mul(mul(2 % m, c), mul(x, y)));
        return add(r, mul(mul(3 % m, d), mul(y, y)));
    }
};

template <class T>
ModForm reduce_form(const basic_cubic_form<T>& f, u64 m)
{
    return {residue(f.a, m), residue(f.b, m), residue(f.c, m), residue(f.d, m), m};
}

inline u64 inv_mod(u64 x, u64 p)
{
    return powmod(x, p - 2, p);
}

// Monic-normalized polynomial gcd over F_p, coefficients ascending.
inline std::vector<u64> poly_gcd_mod(std::vector<u64> x, std::vector<u64> y, u64 p)
{
    auto trim = [](std::vector<u64>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(x);
    trim(y);
    while (!y.empty()) {
        // x mod y
        const u64 inv = inv_mod(y.back(), p);
        while (x.size() >= y.size()) {
            const u64 q = mulmod(x.back(), inv, p);
            const std::size_t shift = x.size() - y.size();
            for (std::size_t k = 0; k < y.size(); ++k)
                x[shift + k] = (x[shift + k] + p - mulmod(q, y[k], p)) % p;
            trim(x);
            if (x.empty()) break;
        }
        std::swap(x, y);
    }
    if (!x.empty()) {
        const u64 inv = inv_mod(x.back(), p);
        for (auto& v : x) v = mulmod(v, inv, p);
    }
    return x;
}

// Multiple roots (u:v) of f mod p on P^1, as integer representatives.
inline std::vector<std::pair<u64, u64>> multiple_roots_mod_p(const ModForm& fp, u64 p)
{
    std::vector<std::pair<u64, u64>> out;
    auto is_multiple = [&](u64 u, u64 v) { return fp.eval(u, v) == 0 && fp.dx(u, v) == 0 && fp.dy(u, v) == 0; };
    if (is_multiple(1, 0)) out.emplace_back(1, 0);
    if (p <= 2000) {
        for (u64 u = 0; u < p; ++u)
            if (is_multiple(u, 1)) out.emplace_back(u, 1);
        return out;
    }
    // finite multiple roots are the roots of gcd(h, h') with h(x) = f(x, 1)
    std::vector<u64> h{fp.d, fp.c, fp.b, fp.a};
    std::vector<u64> dh{fp.c, mulmod(2, fp.b, p), mulmod(3, fp.a, p)};
    auto g = poly_gcd_mod(h, dh, p);
    if (g.size() == 2) {
        out.emplace_back((p - g[0]) % p, 1);
    }
    else if (g.size() == 3) {
        // (x - r)^2 = x^2 - 2 r x + r^2
        const u64 r = mulmod((p - g[1]) % p, inv_mod(2, p), p);
        out.emplace_back(r, 1);
    }
    else if (g.size() == 4) {
        // h' = 0 identically only for p = 3 and h = x^3 - r^3, covered by the scan above.
        throw InvariantBreach("multiple_roots_mod_p: unexpected gcd degree");
    }
    return out;
}

// Maximality test depending only on f mod p^2; does not require disc != 0.
inline bool maximal_mod_p2(const ModForm& f2, u64 p)
{
    const ModForm fp{f2.a % p, f2.b % p, f2.c % p, f2.d % p, p};
    if (fp.a == 0 && fp.b == 0 && fp.c == 0 && fp.d == 0) return false;
    for (auto [u, v] : multiple_roots_mod_p(fp, p)) {
        // f(u + p s, v + p t) = f(u, v) mod p^2 because both partials vanish mod p at a
        // multiple root, so one lift decides.
        if (f2.eval(u, v) == 0) return false;
    }
    return true;
}

}  // namespace detail

/// R(f) is maximal at p. Non-maximal iff p | content(f) or a multiple root of f mod p
/// lifts to a zero of f mod p^2. A false answer with p^2 not dividing disc is an
/// invariant breach.
template <class T>
bool is_maximal_at(const basic_cubic_form<T>& f, std::uint64_t p)
{
    if (p < 2 || p > 0xFFFFFFFFull) throw std::invalid_argument("is_maximal_at: prime out of range");
    const auto m = p * p;
    const bool maximal = detail::maximal_mod_p2(detail::reduce_form(f, m), p);
    if (!maximal) {
        const T disc = discriminant(f);
        if (disc == 0) throw std::invalid_argument("is_maximal_at: zero discriminant");
        if (detail::residue(disc, m) != 0) throw InvariantBreach("is_maximal_at: non-maximal at p but p^2 does not divide disc");
    }
    return maximal;
}

/// Maximality at every prime: only primes with p^2 | disc are tested.
template <class T>
bool is_maximal(const basic_cubic_form<T>& f)
{
    const T disc = discriminant(f);
    if (disc == 0) throw std::invalid_argument("is_maximal: zero discriminant");
    using std::abs;
    using boost::multiprecision::abs;
    const T ad = abs(disc);
    if (ad > T(std::numeric_limits<std::int64_t>::max())) throw std::domain_error("is_maximal: |disc| exceeds 2^63");
    for (auto p : square_divisor_primes(static_cast<std::uint64_t>(static_cast<std::int64_t>(ad))))
        if (!is_maximal_at(f, p)) return false;
    return true;
}

/// Dedekind criterion for Z[x]/(g), g = x^3 + b x^2 + c x + d: with g = prod phi_i^e_i
/// mod p, G = prod phi_i, H = prod phi_i^(e_i - 1) and F = (G H - g)/p, the order is
/// maximal at p iff gcd(F, G, H) = 1 mod p. Only linear factors can repeat for a cubic.
inline bool dedekind_oracle(std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t p)
{
    if (p < 2 || p > 100000) throw std::invalid_argument("dedekind_oracle: prime out of range");
    using Poly = std::vector<std::int64_t>;  // ascending, exact integers
    auto mul = [](const Poly& x, const Poly& y) {
        Poly r(x.size() + y.size() - 1, 0);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
        return r;
    };
    auto eval_mod = [p](const Poly& x, std::int64_t r) {
        std::int64_t v = 0;
        for (auto it = x.rbegin(); it != x.rend(); ++it) v = mod_floor<std::int64_t>(v * r + *it, p);
        return v;
    };
    // factor g mod p: linear factors with multiplicity, then the squarefree remainder
    Poly rem{mod_floor(d, p), mod_floor(c, p), mod_floor(b, p), 1};
    std::vector<std::pair<std::int64_t, int>> roots;  // root, multiplicity
    for (std::int64_t r = 0; r < p && rem.size() > 1; ++r) {
        int e = 0;
        while (rem.size() > 1 && eval_mod(rem, r) == 0) {
            // synthetic division by (x - r) mod p
            Poly q(rem.size() - 1);
            std::int64_t carry = 0;
            for (std::size_t k = rem.size(); k-- > 1;) {
                carry = mod_floor<std::int64_t>(carry * r + rem[k], p);
                q[k - 1] = carry;
            }
            rem = q;
            ++e;
        }
        if (e) roots.emplace_back(r, e);
    }
    Poly G = rem, H{1};
    for (auto [r, e] : roots) {
        G = mul(G, Poly{-r, 1});
        for (int k = 1; k < e; ++k) H = mul(H, Poly{-r, 1});
    }
    Poly GH = mul(G, H);
    const Poly g{d, c, b, 1};
    Poly F(std::max(GH.size(), g.size()), 0);
    for (std::size_t k = 0; k < F.size(); ++k) {
        const std::int64_t v = (k < GH.size() ? GH[k] : 0) - (k < g.size() ? g[k] : 0);
        if (v % p != 0) throw InvariantBreach("dedekind_oracle: G H - g not divisible by p");
        F[k] = v / p;
    }
    for (auto [r, e] : roots)
        if (e >= 2 && eval_mod(F, r) == 0) return false;
    return true;
}

/// Exact rational density of a predicate on (Z/p^2)^4.
struct Density {
    std::uint64_t count = 0;
    std::uint64_t total = 1;
    Rational reduced() const
    {
        return Rational(static_cast<std::int64_t>(count), static_cast<std::int64_t>(total));
    }
};

/// Exhaustive count of maximal-at-p forms over (Z/p^2)^4.
inline Density local_density_maximal(std::uint64_t p)
{
    if (p != 2 && p != 3 && p != 5 && p != 7) throw std::invalid_argument("local_density: p must be 2, 3, 5 or 7");
    const std::uint64_t m = p * p;
    Density out{0, m * m * m * m};
    for (std::uint64_t a = 0; a < m; ++a)
        for (std::uint64_t b = 0; b < m; ++b)
            for (std::uint64_t c = 0; c < m; ++c)
                for (std::uint64_t d = 0; d < m; ++d)
                    if (detail::maximal_mod_p2({a, b, c, d, m}, p)) ++out.count;
    return out;
}

/// Congruence predicate on coefficient vectors mod m: an admissible residue set.
struct CongruencePredicate {
    std::uint64_t modulus = 1;
    std::vector<std::array<std::uint64_t, 4>> residues;  // sorted

    bool contains(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const
    {
        return std::binary_search(residues.begin(), residues.end(), std::array<std::uint64_t, 4>{a, b, c, d});
    }

    template <class T>
    bool admits(const basic_cubic_form<T>& f) const
    {
        return contains(detail::residue(f.a, modulus), detail::residue(f.b, modulus), detail::residue(f.c, modulus),
                        detail::residue(f.d, modulus));
    }
};

/// Exhaustive density of a congruence predicate, counted over (Z/M)^4 where M is
/// the predicate modulus (p^8 states for M = p^2).
inline Density local_density_congruence(const CongruencePredicate& pred)
{
    const auto m = pred.modulus;
    if (m == 0 || m > 60) throw std::invalid_argument("local_density: modulus too large for exhaustive mode");
    return {pred.residues.size(), m * m * m * m};
}

}  // namespace shapelab
