#pragma once

// One canonical binary cubic form per GL2(Z)-class with 0 < |disc| < X: the
// orbit section, the coefficient-space enumeration, the maximality sieve and a
// brute-force box search used as completeness oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "arith.hpp"
#include "cubic_form.hpp"
#include "exact_sign.hpp"
#include "format.hpp"
#include "maximality.hpp"
#include "parallel.hpp"
#include "shape_geometry.hpp"

namespace shapelab {

/// One GL2(Z)-class: canonical form, discriminant, signature, Galois type,
/// maximality and shape.
struct FieldClassRecord {
    SmallCubicForm form;
    std::int64_t disc = 0;
    int signature = 0;
    bool s3 = true;
    bool maximal = true;
    UHPoint shape;

    auto key() const { return std::make_tuple(detail::abs_value(disc), form.a, form.b, form.c, form.d); }
    bool operator==(const FieldClassRecord& o) const
    {
        return form == o.form && disc == o.disc && signature == o.signature && s3 == o.s3 && maximal == o.maximal;
    }
};

inline bool record_less(const FieldClassRecord& x, const FieldClassRecord& y)
{
    return x.key() < y.key();
}

enum class SignatureFilter { totally_real = 0, complex = 1, both = 2 };

struct EnumerationTask {
    std::int64_t X = 0;  // strict bound on |disc|
    SignatureFilter signature = SignatureFilter::both;
    bool maximal_only = false;
    bool include_c3 = false;
    std::optional<CongruencePredicate> congruence;
    bool compute_shape = true;
    double bound_scale = 1.0;  // > 1 widens every coefficient bound (completeness audit)

    bool wants(int sig) const { return signature == SignatureFilter::both || static_cast<int>(signature) == sig; }
};

namespace detail {

inline i128 disc_i128(const SmallCubicForm& f)
{
    const i128 a = f.a, b = f.b, c = f.c, d = f.d;
    return 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d;
}

inline BigInt to_big(i128 v)
{
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    BigInt r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? BigInt(-r) : r;
}

inline int sign_of(i128 v)
{
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Every matrix with entries in {-1, 0, 1} and determinant +-1 other than the identity.
inline const std::vector<UnimodularMatrix2>& residual_set()
{
    static const std::vector<UnimodularMatrix2> set = [] {
        std::vector<UnimodularMatrix2> out;
        for (int p = -1; p <= 1; ++p)
            for (int q = -1; q <= 1; ++q)
                for (int r = -1; r <= 1; ++r)
                    for (int s = -1; s <= 1; ++s) {
                        const int det = p * s - q * r;
                        if (det != 1 && det != -1) continue;
                        if (p == 1 && q == 0 && r == 0 && s == 1) continue;
                        out.emplace_back(p, q, r, s);
                    }
        return out;
    }();
    return set;
}

// Signs of (A - 2B, A + 2B, C - A) for the shape Gram of a complex cubic, decided
// exactly at the real root y0 of g(y) = y^3 + b y^2 + a c y + a^2 d (y0 = a r).
// With F = 3y^2 + 2by + ac = a f'(r), 3F^2 G equals
// [[2P F^2 + 3|D| a^2, Q F^2 - 3|D| a y], [., 2R F^2 + 3|D| y^2]].
inline std::array<int, 3> exact_complex_signs(const SmallCubicForm& f, i128 abs_disc)
{
    const BigInt a = f.a, b = f.b, c = f.c, d = f.d, D = to_big(abs_disc);
    const CubicRealRoot root(BigPoly{a * a * d, a * c, b, 1});
    const BigPoly F{a * c, 2 * b, 3};
    const BigPoly F2 = poly_mul(F, F);
    const BigInt P = b * b - 3 * a * c, Q = b * c - 9 * a * d, R = c * c - 3 * b * d;
    const BigPoly At = poly_add(poly_scale(F2, 2 * P), BigPoly{3 * D * a * a});
    const BigPoly Bt = poly_add(poly_scale(F2, Q), BigPoly{0, -3 * D * a});
    const BigPoly Ct = poly_add(poly_scale(F2, 2 * R), BigPoly{0, 0, 3 * D});
    const BigPoly twoB = poly_scale(Bt, 2);
    return {root.sign(poly_add(At, poly_scale(twoB, -1))), root.sign(poly_add(At, twoB)),
            root.sign(poly_add(Ct, poly_scale(At, -1)))};
}

}  // namespace detail

/// Signs of (A - 2B, A + 2B, C - A) for the shape Gram [[A,B],[B,C]] of f. The form
/// is reduced iff all are >= 0 and strictly inside iff all are > 0.
inline std::array<int, 3> reduction_signs(const SmallCubicForm& f, i128 disc)
{
    const i128 a = f.a, b = f.b, c = f.c, d = f.d;
    if (disc > 0) {
        // G = (1/3)[[2P, Q], [Q, 2R]]
        const i128 P = b * b - 3 * a * c, Q = b * c - 9 * a * d, R = c * c - 3 * b * d;
        return {detail::sign_of(P - Q), detail::sign_of(P + Q), detail::sign_of(R - P)};
    }
    const SymMatrix G = shape_gram_closed(f);
    const real_t A = G(0, 0), B = G(0, 1), C = G(1, 1);
    const real_t margin = 1e-10L * (std::abs(A) + std::abs(C));
    const real_t v[3] = {A - 2 * B, A + 2 * B, C - A};
    std::array<int, 3> s{};
    bool decided = true;
    for (int k = 0; k < 3; ++k) {
        if (v[k] > margin)
            s[k] = 1;
        else if (v[k] < -margin)
            s[k] = -1;
        else
            decided = false;
    }
    if (decided) return s;
    return detail::exact_complex_signs(f, -disc);
}

namespace detail {

inline bool is_canonical_with(const SmallCubicForm& f, i128 disc)
{
    if (f.a <= 0) return false;
    const auto s = reduction_signs(f, disc);
    if (s[0] < 0 || s[1] < 0 || s[2] < 0) return false;
    const auto flip = SmallCubicForm{f.a, -f.b, f.c, -f.d};
    if (s[0] > 0 && s[1] > 0 && s[2] > 0) {
        // strictly inside: only the identity and diag(1,-1) keep the form reduced with a > 0
        return !(flip < f);
    }
    for (const auto& g : residual_set()) {
        const auto h = act(g, f);
        if (h.a <= 0 || !(h < f)) continue;
        const auto t = reduction_signs(h, disc);
        if (t[0] >= 0 && t[1] >= 0 && t[2] >= 0) return false;
    }
    return true;
}

}  // namespace detail

/// Orbit section: a > 0, the shape Gram satisfies |2B| <= A <= C (decided exactly),
/// and f is lexicographically least among its images under the residual matrices
/// with entries in {-1, 0, 1} that also satisfy both conditions.
inline bool is_canonical(const SmallCubicForm& f)
{
    const i128 disc = detail::disc_i128(f);
    if (disc == 0) throw std::invalid_argument("is_canonical: zero discriminant");
    return detail::is_canonical_with(f, disc);
}

/// Smallest-prime-factor table on [0, n).
class PrimeSieve {
public:
    explicit PrimeSieve(std::uint32_t n) : spf_(n, 0)
    {
        for (std::uint32_t i = 2; i < n; ++i) {
            if (spf_[i]) continue;
            for (std::uint64_t j = i; j < n; j += i)
                if (!spf_[j]) spf_[j] = i;
        }
    }

    std::uint32_t limit() const { return static_cast<std::uint32_t>(spf_.size()); }

    /// Primes p with p^2 | n (n < limit); falls back to general factorization.
    std::vector<std::uint64_t> square_divisor_primes(std::uint64_t n) const
    {
        if (n >= spf_.size()) return shapelab::square_divisor_primes(n);
        std::vector<std::uint64_t> out;
        while (n > 1) {
            const std::uint32_t p = spf_[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e >= 2) out.push_back(p);
        }
        return out;
    }

private:
    std::vector<std::uint32_t> spf_;
};

/// Aggregate counts per signature (index 0 and 1).
struct ClassCounts {
    static constexpr std::array<std::uint64_t, 6> tail_primes{2, 3, 5, 7, 11, 13};

    std::array<std::uint64_t, 2> s3_all{}, s3_maximal{}, c3_all{}, c3_maximal{};
    std::array<std::array<std::uint64_t, 6>, 2> s3_nonmaximal_at{};  // per tail prime

    void merge(const ClassCounts& o)
    {
        for (int i = 0; i < 2; ++i) {
            s3_all[i] += o.s3_all[i];
            s3_maximal[i] += o.s3_maximal[i];
            c3_all[i] += o.c3_all[i];
            c3_maximal[i] += o.c3_maximal[i];
            for (std::size_t k = 0; k < tail_primes.size(); ++k) s3_nonmaximal_at[i][k] += o.s3_nonmaximal_at[i][k];
        }
    }
};

namespace detail {

struct ScanContext {
    const EnumerationTask* task;
    const PrimeSieve* sieve;
    double bmax_coeff;  // |b| <= bmax_coeff * a^(-1/3) for reduced forms
};

struct ClassInfo {
    SmallCubicForm form;
    std::int64_t disc;
    int signature;
    bool s3;
    bool maximal;
    std::array<bool, 6> nonmaximal_at;  // per ClassCounts::tail_primes
};

// Classify a canonical form; false when reducible.
inline bool describe(const SmallCubicForm& f, std::int64_t disc, const PrimeSieve* sieve, ClassInfo& out)
{
    // rational roots of f and of its primitive part coincide; only the sign of disc is used
    if (has_rational_root(f, disc)) return false;
    out.form = f;
    out.disc = disc;
    out.signature = disc > 0 ? 0 : 1;
    out.s3 = !is_square(disc);
    const auto n = static_cast<std::uint64_t>(detail::abs_value(disc));
    auto primes = sieve ? sieve->square_divisor_primes(n) : square_divisor_primes(n);
    out.maximal = true;
    out.nonmaximal_at.fill(false);
    for (auto p : primes) {
        if (is_maximal_at(f, p)) continue;
        out.maximal = false;
        for (std::size_t k = 0; k < ClassCounts::tail_primes.size(); ++k)
            if (ClassCounts::tail_primes[k] == p) out.nonmaximal_at[k] = true;
    }
    return true;
}

inline i128 ceil_sqrt_i128(i128 n)
{
    if (n <= 0) return 0;
    i128 r = isqrt_i128(n);
    return r * r == n ? r : r + 1;
}

// All canonical irreducible forms with leading coefficient a and b = b0 mod 3a.
template <class Sink>
void scan_unit(std::int64_t a, std::int64_t b0, const ScanContext& ctx, Sink&& sink)
{
    const EnumerationTask& task = *ctx.task;
    const double s = task.bound_scale;
    const i128 X = task.X;
    const i128 m = 3 * a;
    const i128 A27 = 27 * static_cast<i128>(a) * a;
    const auto Pmax = static_cast<std::int64_t>(std::floor(s * static_cast<double>(isqrt_i128(X - 1)))) + (s > 1 ? 1 : 0);
    // 64 |D| >= 729 a^4 for reduced forms
    const i128 a4 = static_cast<i128>(a) * a * a * a;
    i128 dmin_a = (729 * a4 + 63) / 64;
    if (s > 1) dmin_a = static_cast<i128>(static_cast<double>(dmin_a) / (s * s * s * s));
    const double bmax = ctx.bmax_coeff * std::pow(static_cast<double>(a), -1.0 / 3) * s * 1.001 + 1;

    for (int sig = 0; sig < 2; ++sig) {
        if (!task.wants(sig)) continue;
        const std::int64_t Plo = sig == 0 ? 1 : -Pmax;
        // first P >= Plo with P = b0^2 mod 3a
        const i128 b0sq = static_cast<i128>(b0) * b0;
        i128 P = Plo + mod_floor<i128>(b0sq - Plo, m);
        for (; P <= Pmax; P += m) {
            const i128 c = (b0sq - P) / m;
            const i128 U0 = 2 * b0sq * b0 - 9 * static_cast<i128>(a) * b0 * c;
            i128 dmin = std::max<i128>(std::max<i128>(P * P, dmin_a), 1);
            if (s > 1) dmin = std::max<i128>(std::min<i128>(dmin_a, static_cast<i128>(static_cast<double>(P * P) / (s * s))), 1);
            const i128 P3 = 4 * P * P * P;
            i128 lo, hi;  // bounds on U^2
            if (sig == 0) {
                lo = P3 - A27 * (X - 1);
                hi = P3 - A27 * dmin;
            }
            else {
                lo = P3 + A27 * dmin;
                hi = P3 + A27 * (X - 1);
            }
            if (hi < 0 || hi < lo) continue;
            const i128 Uhi = isqrt_i128(hi);
            const i128 Ulo = ceil_sqrt_i128(lo);
            if (Ulo > Uhi) continue;
            std::array<std::pair<i128, i128>, 2> ranges{{{Ulo, Uhi}, {-Uhi, -Ulo}}};
            const int nranges = Ulo == 0 ? 1 : 2;
            if (Ulo == 0) ranges[0] = {-Uhi, Uhi};
            for (int rr = 0; rr < nranges; ++rr) {
                const i128 d1 = ceil_div<i128>(ranges[rr].first - U0, A27);
                const i128 d2 = floor_div<i128>(ranges[rr].second - U0, A27);
                for (i128 d = d1; d <= d2; ++d) {
                    const SmallCubicForm f{a, b0, static_cast<std::int64_t>(c), static_cast<std::int64_t>(d)};
                    const i128 D = disc_i128(f);
                    if (D == 0 || (D > 0) != (sig == 0) || D >= X || -D >= X) continue;
                    // shears x -> x + k y keep a, P and D; find those with |2B| <= A
                    i128 klo, khi;
                    if (sig == 0) {
                        const i128 Q = static_cast<i128>(b0) * c - 9 * static_cast<i128>(a) * d;
                        klo = ceil_div<i128>(-P - Q, 2 * P);
                        khi = floor_div<i128>(P - Q, 2 * P);
                    }
                    else {
                        const SymMatrix G = shape_gram_closed(f);
                        const real_t k0 = std::round(-G(0, 1) / G(0, 0));
                        if (std::abs(k0) > 1e15L) continue;
                        klo = static_cast<i128>(k0) - 1;
                        khi = static_cast<i128>(k0) + 1;
                    }
                    for (i128 k = klo; k <= khi; ++k) {
                        const i128 bk = b0 + m * k;
                        if (static_cast<double>(bk < 0 ? -bk : bk) > bmax) continue;
                        const i128 ck = c + 2 * static_cast<i128>(b0) * k + m * k * k;
                        const i128 dk = ((a * k + b0) * k + c) * k + d;
                        constexpr i128 lim = static_cast<i128>(1) << 62;
                        if (ck > lim || ck < -lim || dk > lim || dk < -lim) continue;
                        const SmallCubicForm g{a, static_cast<std::int64_t>(bk), static_cast<std::int64_t>(ck),
                                               static_cast<std::int64_t>(dk)};
                        if (!is_canonical_with(g, D)) continue;
                        sink(g, static_cast<std::int64_t>(D));
                    }
                }
            }
        }
    }
}

inline std::int64_t max_leading(std::int64_t X, double scale)
{
    // largest a with 729 a^4 <= 64 (X - 1)
    std::int64_t a = 0;
    while (729 * static_cast<i128>(a + 1) * (a + 1) * (a + 1) * (a + 1) <= 64 * static_cast<i128>(X - 1)) ++a;
    if (scale > 1) a = static_cast<std::int64_t>(std::ceil(a * scale)) + 1;
    return a;
}

inline bool passes(const ClassInfo& info, const EnumerationTask& task)
{
    if (!task.wants(info.signature)) return false;
    if (!info.s3 && !task.include_c3) return false;
    if (task.maximal_only && !info.maximal) return false;
    if (task.congruence && !task.congruence->admits(info.form)) return false;
    return true;
}

struct Units {
    std::vector<std::pair<std::int64_t, std::int64_t>> list;  // (a, b0)
};

inline Units make_units(const EnumerationTask& task)
{
    Units u;
    const auto amax = max_leading(task.X, task.bound_scale);
    for (std::int64_t a = 1; a <= amax; ++a)
        for (std::int64_t b0 = 0; b0 < 3 * a; ++b0) u.list.emplace_back(a, b0);
    return u;
}

inline void validate(const EnumerationTask& task)
{
    if (task.X < 1) throw std::invalid_argument("enumeration: X must be >= 1");
    if (task.X > 2000000000LL) throw std::invalid_argument("enumeration: X beyond desk scale");
    if (task.bound_scale < 1) throw std::invalid_argument("enumeration: bound_scale must be >= 1");
    if (task.congruence && (task.congruence->modulus == 0 || task.congruence->modulus > 1000000))
        throw std::invalid_argument("enumeration: congruence modulus must be in [1, 10^6]");
}

inline std::optional<PrimeSieve> make_sieve(std::int64_t X)
{
    if (X <= 60000000) return PrimeSieve(static_cast<std::uint32_t>(X));
    return std::nullopt;
}

// 4 sqrt(3) X^(1/3): every root of a reduced form satisfies |xi| <= (4/sqrt 3) X^(1/3) a^(-4/3).
inline double bmax_coefficient(std::int64_t X)
{
    return 4 * std::sqrt(3.0) * std::cbrt(static_cast<double>(X));
}

}  // namespace detail

/// Canonical irreducible forms with |disc| < X meeting the task filters, ordered by
/// (|disc|, a, b, c, d). The output does not depend on the worker count.
inline std::vector<FieldClassRecord> enumerate_classes(const EnumerationTask& task, unsigned threads = 1)
{
    detail::validate(task);
    const auto units = detail::make_units(task);
    const auto sieve = detail::make_sieve(task.X);
    const detail::ScanContext ctx{&task, sieve ? &*sieve : nullptr, detail::bmax_coefficient(task.X)};
    std::vector<std::vector<FieldClassRecord>> slots(units.list.size());
    parallel_units(units.list.size(), threads, [&](std::size_t u) {
        auto& out = slots[u];
        detail::scan_unit(units.list[u].first, units.list[u].second, ctx, [&](const SmallCubicForm& f, std::int64_t D) {
            detail::ClassInfo info;
            if (!detail::describe(f, D, ctx.sieve, info)) return;
            if (!detail::passes(info, task)) return;
            FieldClassRecord r{info.form, info.disc, info.signature, info.s3, info.maximal, {}};
            if (task.compute_shape) r.shape = shape_point(info.form);
            out.push_back(r);
        });
    });
    std::vector<FieldClassRecord> all;
    for (auto& s : slots) all.insert(all.end(), s.begin(), s.end());
    std::sort(all.begin(), all.end(), record_less);
    return all;
}

/// Counting mode: the same scan without storing records. Signature, congruence
/// and bound filters apply; S3/C3 and maximality are tallied separately.
inline ClassCounts count_classes(const EnumerationTask& task, unsigned threads = 1)
{
    detail::validate(task);
    const auto units = detail::make_units(task);
    const auto sieve = detail::make_sieve(task.X);
    const detail::ScanContext ctx{&task, sieve ? &*sieve : nullptr, detail::bmax_coefficient(task.X)};
    std::vector<ClassCounts> slots(units.list.size());
    parallel_units(units.list.size(), threads, [&](std::size_t u) {
        auto& out = slots[u];
        detail::scan_unit(units.list[u].first, units.list[u].second, ctx, [&](const SmallCubicForm& f, std::int64_t D) {
            detail::ClassInfo info;
            if (!detail::describe(f, D, ctx.sieve, info)) return;
            if (task.congruence && !task.congruence->admits(f)) return;
            const int i = info.signature;
            if (info.s3) {
                ++out.s3_all[i];
                if (info.maximal) ++out.s3_maximal[i];
                for (std::size_t k = 0; k < info.nonmaximal_at.size(); ++k)
                    if (info.nonmaximal_at[k]) ++out.s3_nonmaximal_at[i][k];
            }
            else {
                ++out.c3_all[i];
                if (info.maximal) ++out.c3_maximal[i];
            }
        });
    });
    ClassCounts total;
    for (const auto& s : slots) total.merge(s);
    return total;
}

/// Canonical representative of the orbit of an irreducible form: Gauss-reduce the
/// shape, then search the residual matrices for the unique canonical image.
inline SmallCubicForm canonicalize(const SmallCubicForm& f)
{
    const i128 D = detail::disc_i128(f);
    if (D == 0) throw std::invalid_argument("canonicalize: zero discriminant");
    const auto red = gauss_reduce(shape_gram_closed(f)).transform;
    const auto f1 = act(UnimodularMatrix2(red.p, red.r, red.q, red.s), f);
    const auto sg = reduction_signs(f1, D);
    if (sg[0] > 0 && sg[1] > 0 && sg[2] > 0) {
        // strictly inside: the residual images keeping the Gram reduced are +-f1 and their flips
        const SmallCubicForm flip{f1.a, -f1.b, f1.c, -f1.d};
        const SmallCubicForm pos = f1.a > 0 ? f1 : SmallCubicForm{-f1.a, -f1.b, -f1.c, -f1.d};
        const SmallCubicForm fpos = flip.a > 0 ? flip : SmallCubicForm{-flip.a, -flip.b, -flip.c, -flip.d};
        return std::min(pos, fpos);
    }
    std::set<SmallCubicForm> found;
    if (detail::is_canonical_with(f1, D)) found.insert(f1);
    for (const auto& g : detail::residual_set()) {
        const auto h = act(g, f1);
        if (detail::is_canonical_with(h, D)) found.insert(h);
    }
    if (found.size() != 1) {
        std::ostringstream os;
        os << "canonicalize: " << found.size() << " canonical images for " << f;
        throw InvariantBreach(os.str());
    }
    return *found.begin();
}

/// Completeness oracle for small X: every form in a coefficient box twice the size
/// of the reduction bounds is canonicalized independently, then deduplicated.
/// Reported classes carry both signatures, both Galois types and the maximal flag.
inline std::vector<FieldClassRecord> brute_force_classes(std::int64_t X)
{
    if (X < 1 || X > 10000) throw std::invalid_argument("brute_force_classes: X must be in [1, 10^4]");
    const double x = static_cast<double>(X);
    const auto amax = static_cast<std::int64_t>(std::floor(2 * std::sqrt(8.0 / 27) * std::pow(x, 0.25))) + 1;
    const double sqrtX = std::sqrt(x);
    std::set<SmallCubicForm> classes;
    for (std::int64_t a = -amax; a <= amax; ++a) {
        if (a == 0) continue;
        const auto aa = detail::abs_value(a);
        const auto bmax = static_cast<std::int64_t>(2 * detail::bmax_coefficient(X) * std::pow(static_cast<double>(aa), -1.0 / 3)) + 1;
        for (std::int64_t b = -bmax; b <= bmax; ++b) {
            // |P| = |b^2 - 3ac| <= sqrt|D| for reduced forms; doubled
            const double c1 = (static_cast<double>(b * b) - 2 * sqrtX) / (3.0 * static_cast<double>(a));
            const double c2 = (static_cast<double>(b * b) + 2 * sqrtX) / (3.0 * static_cast<double>(a));
            const auto clo = static_cast<std::int64_t>(std::floor(std::min(c1, c2))) - 1;
            const auto chi = static_cast<std::int64_t>(std::ceil(std::max(c1, c2))) + 1;
            for (std::int64_t c = clo; c <= chi; ++c) {
                // D(d) = -27 a^2 d^2 + (18abc - 4b^3) d + (b^2 c^2 - 4 a c^3) > -X
                const long double qa = -27.0L * a * a, qb = 18.0L * a * b * c - 4.0L * b * b * b,
                                  qc = static_cast<long double>(b) * b * c * c - 4.0L * a * c * c * c + x;
                const long double disc = qb * qb - 4 * qa * qc;
                if (disc < 0) continue;
                const long double r1 = (-qb + std::sqrt(disc)) / (2 * qa), r2 = (-qb - std::sqrt(disc)) / (2 * qa);
                const auto dlo = static_cast<std::int64_t>(std::floor(std::min(r1, r2))) - 1;
                const auto dhi = static_cast<std::int64_t>(std::ceil(std::max(r1, r2))) + 1;
                for (std::int64_t d = dlo; d <= dhi; ++d) {
                    const SmallCubicForm f{a, b, c, d};
                    const i128 D = detail::disc_i128(f);
                    if (D == 0 || D >= X || -D >= X) continue;
                    const auto cl = classify(f);
                    if (cl.kind == FormKind::reducible) continue;
                    classes.insert(canonicalize(f));
                }
            }
        }
    }
    std::vector<FieldClassRecord> out;
    for (const auto& f : classes) {
        const auto D = static_cast<std::int64_t>(detail::disc_i128(f));
        out.push_back({f, D, D > 0 ? 0 : 1, !is_square(D), is_maximal(f), shape_point(f)});
    }
    std::sort(out.begin(), out.end(), record_less);
    return out;
}

/// Records passing the task filters (signature, Galois type, maximality, congruence).
inline std::vector<FieldClassRecord> filter_records(const std::vector<FieldClassRecord>& in, const EnumerationTask& task)
{
    std::vector<FieldClassRecord> out;
    for (const auto& r : in) {
        if (!task.wants(r.signature)) continue;
        if (!r.s3 && !task.include_c3) continue;
        if (task.maximal_only && !r.maximal) continue;
        if (task.congruence && !task.congruence->admits(r.form)) continue;
        out.push_back(r);
    }
    return out;
}

inline constexpr const char* kFormsHeader = "a,b,c,d,disc,i,s3,maximal,x,y";

inline void write_forms_csv(std::ostream& os, const std::vector<FieldClassRecord>& records)
{
    os << kFormsHeader << '\n';
    for (const auto& r : records) {
        os << r.form.a << ',' << r.form.b << ',' << r.form.c << ',' << r.form.d << ',' << r.disc << ',' << r.signature
           << ',' << (r.s3 ? 1 : 0) << ',' << (r.maximal ? 1 : 0) << ',' << format_double(r.shape.x) << ','
           << format_double(r.shape.y) << '\n';
    }
}

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<FieldClassRecord> read_forms_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != kFormsHeader) throw DataError("forms.csv: missing or wrong header");
    std::vector<FieldClassRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() != 10) throw DataError("forms.csv line " + std::to_string(lineno) + ": expected 10 columns");
        try {
            FieldClassRecord r;
            r.form = {parse_int64(cols[0]), parse_int64(cols[1]), parse_int64(cols[2]), parse_int64(cols[3])};
            r.disc = parse_int64(cols[4]);
            r.signature = static_cast<int>(parse_int64(cols[5]));
            r.s3 = parse_int64(cols[6]) != 0;
            r.maximal = parse_int64(cols[7]) != 0;
            r.shape = {parse_double(cols[8]), parse_double(cols[9])};
            if (r.signature != 0 && r.signature != 1) throw std::invalid_argument("signature must be 0 or 1");
            out.push_back(r);
        }
        catch (const std::invalid_argument& e) {
            throw DataError("forms.csv line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

/// Residue file: one admissible residue class per line, "a b c d" modulo m.
inline CongruencePredicate read_residues(std::istream& is, std::uint64_t modulus)
{
    if (modulus == 0 || modulus > 1000000) throw DataError("residues: modulus must be in [1, 10^6]");
    CongruencePredicate pred;
    pred.modulus = modulus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::array<std::int64_t, 4> v{};
        for (auto& x : v)
            if (!(ls >> x)) throw DataError("residues line " + std::to_string(lineno) + ": expected four integers");
        std::array<std::uint64_t, 4> r{};
        for (int k = 0; k < 4; ++k) r[k] = static_cast<std::uint64_t>(mod_floor<std::int64_t>(v[k], static_cast<std::int64_t>(modulus)));
        pred.residues.push_back(r);
    }
    std::sort(pred.residues.begin(), pred.residues.end());
    pred.residues.erase(std::unique(pred.residues.begin(), pred.residues.end()), pred.residues.end());
    return pred;
}

}  // namespace shapelab
