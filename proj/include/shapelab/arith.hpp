#pragma once

// Integer helpers: exact square roots, primality, factorization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace shapelab {

using BigInt = boost::multiprecision::cpp_int;
using i128 = __int128;

namespace detail {

template <class T>
constexpr T abs_value(T v)
{
    return v < 0 ? -v : v;
}

}  // namespace detail

/// floor(sqrt(n)) for n >= 0.
inline std::uint64_t isqrt_u64(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// floor(sqrt(n)) for 0 <= n < 2^126.
inline i128 isqrt_i128(i128 n)
{
    if (n < 0) throw std::domain_error("isqrt of negative value");
    auto r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(std::int64_t n)
{
    if (n < 0) return false;
    auto r = isqrt_u64(static_cast<std::uint64_t>(n));
    return static_cast<std::int64_t>(r * r) == n;
}

inline bool is_square(const BigInt& n)
{
    if (n < 0) return false;
    BigInt r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

/// Floor division for signed integers.
template <class T>
constexpr T floor_div(T a, T b)
{
    T q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

template <class T>
constexpr T ceil_div(T a, T b)
{
    return -floor_div<T>(-a, b);
}

/// Non-negative residue.
template <class T>
constexpr T mod_floor(T a, T m)
{
    T r = a % m;
    return r < 0 ? r + m : r;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
inline std::uint64_t pollard_rho(std::uint64_t n)
{
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1; c < 1000; ++c) {
        auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        std::uint64_t r = 1;
        const std::uint64_t m = 128;
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
    throw std::runtime_error("pollard rho failed to split " + std::to_string(n));
}

inline void factor_rec(std::uint64_t n, std::vector<std::uint64_t>& out)
{
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace detail

struct PrimePower {
    std::uint64_t p;
    int e;
    bool operator==(const PrimePower&) const = default;
};

/// Factor |n| (n != 0): trial division to 10^6, Pollard rho beyond.
inline std::vector<PrimePower> factorize(std::uint64_t n)
{
    if (n == 0) throw std::domain_error("factorize(0)");
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p * p <= n && p <= 1000000; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    if (n > 1) detail::factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<PrimePower> out;
    for (auto p : primes) {
        if (!out.empty() && out.back().p == p)
            ++out.back().e;
        else
            out.push_back({p, 1});
    }
    return out;
}

/// Primes p with p^2 | n.
inline std::vector<std::uint64_t> square_divisor_primes(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (auto [p, e] : factorize(n))
        if (e >= 2) out.push_back(p);
    return out;
}

inline std::vector<std::uint64_t> primes_below(std::uint64_t bound)
{
    std::vector<std::uint64_t> out;
    std::vector<bool> sieve(bound, true);
    for (std::uint64_t i = 2; i < bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j < bound; j += i) sieve[j] = false;
    }
    return out;
}

/// Exact nonnegative rational in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d)
    {
        if (d == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        auto g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

inline Rational operator*(const Rational& x, const Rational& y)
{
    return Rational(x.num * y.num, x.den * y.den);
}

}  // namespace shapelab
