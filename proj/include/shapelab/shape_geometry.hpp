#pragma once

// Shapes of rings: the trace-zero Gram matrix of the Minkowski form, reduction
// to canonical coordinates (Gauss for rank 2, LLL + Minkowski for ranks 3 and 4).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cubic_form.hpp"

namespace shapelab {

/// Dense symmetric matrix of small rank, row-major.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), v_(static_cast<std::size_t>(n * n), 0) {}
    SymMatrix(int n, std::initializer_list<real_t> rows) : n_(n), v_(rows)
    {
        if (static_cast<int>(v_.size()) != n * n) throw std::invalid_argument("SymMatrix: size mismatch");
    }

    int rank() const { return n_; }
    real_t& operator()(int i, int j) { return v_[static_cast<std::size_t>(i * n_ + j)]; }
    real_t operator()(int i, int j) const { return v_[static_cast<std::size_t>(i * n_ + j)]; }

    real_t max_abs() const
    {
        real_t m = 0;
        for (auto x : v_) m = std::max(m, std::abs(x));
        return m;
    }

    real_t determinant() const
    {
        std::vector<real_t> a = v_;
        real_t det = 1;
        for (int c = 0; c < n_; ++c) {
            int piv = c;
            for (int r = c + 1; r < n_; ++r)
                if (std::abs(a[r * n_ + c]) > std::abs(a[piv * n_ + c])) piv = r;
            if (a[piv * n_ + c] == 0) return 0;
            if (piv != c) {
                for (int k = 0; k < n_; ++k) std::swap(a[c * n_ + k], a[piv * n_ + k]);
                det = -det;
            }
            det *= a[c * n_ + c];
            for (int r = c + 1; r < n_; ++r) {
                real_t f = a[r * n_ + c] / a[c * n_ + c];
                for (int k = c; k < n_; ++k) a[r * n_ + k] -= f * a[c * n_ + k];
            }
        }
        return det;
    }

    /// All leading principal minors positive (relative tolerance 1e-12).
    bool positive_definite() const
    {
        const real_t tol = 1e-12L * max_abs();
        for (int k = 1; k <= n_; ++k) {
            SymMatrix sub(k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub(i, j) = (*this)(i, j);
            if (!(sub.determinant() > tol * std::pow(max_abs(), k - 1))) return false;
        }
        return true;
    }

    SymMatrix scaled(real_t s) const
    {
        SymMatrix r = *this;
        for (auto& x : r.v_) x *= s;
        return r;
    }

    /// Scale to determinant 1.
    SymMatrix normalized() const { return scaled(1 / std::pow(determinant(), real_t(1) / n_)); }

private:
    int n_ = 0;
    std::vector<real_t> v_;
};

/// Quadratic form of a rank-m shape; any positive multiple denotes the same shape.
struct ShapeGram {
    SymMatrix gram;
    int rank() const { return gram.rank(); }
};

/// Canonical coordinates of a rank-2 shape in {0 <= x <= 1/2, x^2 + y^2 >= 1}.
struct UHPoint {
    double x = 0;
    double y = 1;
    bool operator==(const UHPoint&) const = default;
};

inline bool in_fundamental_domain(const UHPoint& p, double tol = 1e-9)
{
    return p.y > 0 && p.x >= -tol && p.x <= 0.5 + tol && p.x * p.x + p.y * p.y >= 1 - tol;
}

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline real_t q_inner(const std::vector<complex_t>& u, const std::vector<complex_t>& v)
{
    real_t s = 0;
    for (std::size_t j = 0; j < u.size(); ++j) s += (u[j] * std::conj(v[j])).real();
    return s;
}

inline real_t trace_of(const std::vector<complex_t>& u)
{
    complex_t s = 0;
    for (auto& x : u) s += x;
    return s.real();
}

}  // namespace detail

/// Shape Gram on the basis (omega, theta) projected orthogonally to 1 under q.
inline ShapeGram shape_gram(const EmbeddingData& e)
{
    std::vector<complex_t> w(e.omega.begin(), e.omega.end()), t(e.theta.begin(), e.theta.end());
    const real_t tw = detail::trace_of(w), tt = detail::trace_of(t);
    SymMatrix g(2);
    g(0, 0) = detail::q_inner(w, w) - tw * tw / 3;
    g(0, 1) = g(1, 0) = detail::q_inner(w, t) - tw * tt / 3;
    g(1, 1) = detail::q_inner(t, t) - tt * tt / 3;
    if (!g.positive_definite()) throw ShapeError("shape_gram: projected form is not positive definite");
    return {g};
}

/// Closed form of the shape Gram for a real form with nonzero discriminant:
/// (1/3)[[2P,Q],[Q,2R]] plus, for one complex pair, |D| s^2 (t,-s)(t,-s)^T / f_y(s,t)^2
/// where (s:t) is the real root (equivalently t^2 (t,-s)(t,-s)^T / f_x(s,t)^2).
template <class F>
SymMatrix shape_gram_closed(const basic_cubic_form<F>& f)
{
    const real_t a = static_cast<real_t>(f.a), b = static_cast<real_t>(f.b), c = static_cast<real_t>(f.c),
                 d = static_cast<real_t>(f.d);
    const real_t P = b * b - 3 * a * c, Q = b * c - 9 * a * d, R = c * c - 3 * b * d;
    const real_t D = 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d;
    SymMatrix g(2);
    g(0, 0) = 2 * P / 3;
    g(0, 1) = g(1, 0) = Q / 3;
    g(1, 1) = 2 * R / 3;
    if (D < 0) {
        real_t s, t;
        if (std::abs(a) >= std::abs(d)) {
            s = unique_real_root(a, b, c, d);
            t = 1;
        }
        else {
            // root of f(1, y) = d y^3 + c y^2 + b y + a
            s = 1;
            t = unique_real_root(d, c, b, a);
        }
        const real_t fx = 3 * a * s * s + 2 * b * s * t + c * t * t;
        const real_t fy = b * s * s + 2 * c * s * t + 3 * d * t * t;
        real_t k;
        if (std::abs(fx) >= std::abs(fy))
            k = t * t / (fx * fx);
        else
            k = s * s / (fy * fy);
        k *= -D;
        g(0, 0) += k * t * t;
        g(0, 1) -= k * s * t;
        g(1, 0) -= k * s * t;
        g(1, 1) += k * s * s;
    }
    return g;
}

struct GaussReduction {
    UHPoint point;
    UnimodularMatrix2 transform;  // gamma with gamma^T G gamma reduced
    std::array<real_t, 3> reduced;  // A, B, C
};

/// Classical Gauss reduction: returns gamma with gamma^T G gamma = [[A,B],[B,C]],
/// 0 <= 2B <= A <= C, and the point (B/A, sqrt(AC-B^2)/A). Already reduced input
/// yields the identity.
inline GaussReduction gauss_reduce(const SymMatrix& G)
{
    if (G.rank() != 2) throw ShapeError("gauss_reduce: rank 2 expected");
    real_t A = G(0, 0), B = G(0, 1), C = G(1, 1);
    if (!(A > 0 && C > 0 && A * C - B * B > 0)) throw ShapeError("gauss_reduce: form is not positive definite");
    // columns of the transform
    std::int64_t p = 1, q = 0, r = 0, s = 1;
    for (int iter = 0; iter < 10000; ++iter) {
        if (2 * std::abs(B) > A) {
            real_t m = std::round(B / A);
            if (std::abs(B / A - m) == 0.5L) m = std::trunc(B / A);
            auto mi = static_cast<std::int64_t>(m);
            // b2 <- b2 - m b1
            C = C - 2 * m * B + m * m * A;
            B = B - m * A;
            q -= mi * p;
            s -= mi * r;
            continue;
        }
        if (C < A) {
            // (b1, b2) <- (b2, -b1)
            std::swap(A, C);
            B = -B;
            std::int64_t np = q, nr = s, nq = -p, ns = -r;
            p = np;
            r = nr;
            q = nq;
            s = ns;
            continue;
        }
        break;
    }
    if (B < 0) {
        B = -B;
        q = -q;
        s = -s;
    }
    UHPoint pt{static_cast<double>(B / A), static_cast<double>(std::sqrt(A * C - B * B) / A)};
    if (pt.x < 1e-9) pt.x = 0;
    if (std::abs(pt.x - 0.5) < 1e-9) pt.x = 0.5;
    if (std::abs(C / A - 1) < 1e-9) pt.y = std::sqrt(1 - pt.x * pt.x);
    return {pt, UnimodularMatrix2(p, q, r, s), {A, B, C}};
}

/// Shape of R(f) in canonical coordinates via certified embeddings. The form is
/// first moved to reduced position, where its roots are well separated.
template <class T>
UHPoint shape_point(const basic_cubic_form<T>& f)
{
    const auto pre = gauss_reduce(shape_gram_closed(f)).transform;
    const auto g = act(UnimodularMatrix2(pre.p, pre.r, pre.q, pre.s), f);
    return gauss_reduce(shape_gram(embeddings(g.a != 0 ? g : f)).gram).point;
}

/// Images of a ring basis under all n complex embeddings (conjugate pairs both present).
struct EmbeddedBasis {
    int degree = 0;
    std::vector<std::vector<complex_t>> images;  // images[k][j] = sigma_j(u_k); u_0 = 1
};

/// Gram matrix of the full lattice under q.
inline SymMatrix full_gram(const EmbeddedBasis& e)
{
    const int n = e.degree;
    SymMatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = detail::q_inner(e.images[i], e.images[j]);
    return g;
}

/// Gram of the projection of u_1..u_{n-1} orthogonal to 1.
inline ShapeGram shape_via_projection(const EmbeddedBasis& e)
{
    const int n = e.degree;
    std::vector<std::vector<complex_t>> proj;
    for (int k = 1; k < n; ++k) {
        auto v = e.images[k];
        const real_t tr = detail::trace_of(v);
        for (auto& x : v) x -= tr / n;
        proj.push_back(std::move(v));
    }
    SymMatrix g(n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) g(i, j) = detail::q_inner(proj[i], proj[j]);
    if (!g.positive_definite()) throw ShapeError("shape_via_projection: rank-deficient basis");
    return {g};
}

/// Gram of the trace-zero sublattice of Z + nO spanned by n u_j - Tr(u_j).
inline ShapeGram shape_via_sublattice(const EmbeddedBasis& e)
{
    const int n = e.degree;
    if (static_cast<int>(e.images.size()) != n) throw ShapeError("shape_via_sublattice: basis size mismatch");
    std::vector<std::vector<complex_t>> sub;
    for (int k = 1; k < n; ++k) {
        auto v = e.images[k];
        const real_t tr = detail::trace_of(v);
        for (auto& x : v) x = x * static_cast<real_t>(n) - tr;
        sub.push_back(std::move(v));
    }
    SymMatrix g(n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) g(i, j) = detail::q_inner(sub[i], sub[j]);
    if (!g.positive_definite()) throw ShapeError("shape_via_sublattice: rank-deficient basis");
    return {g};
}

/// Relative error between det(full Gram) and |disc|.
inline double gram_det_check(const SymMatrix& full, const BigInt& disc)
{
    const real_t target = std::abs(static_cast<real_t>(disc));
    return static_cast<double>(std::abs(std::abs(full.determinant()) - target) / target);
}

/// Integer square matrix, columns are basis vectors in input coordinates.
using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct ReducedShape {
    SymMatrix gram;       // transform^T G transform, scaled to determinant 1
    IntMatrix transform;  // transform[i][j]: coordinate i of new basis vector j
};

namespace detail {

inline SymMatrix congruence(const SymMatrix& G, const IntMatrix& U)
{
    const int n = G.rank();
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            real_t s = 0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += U[k][i] * G(k, l) * U[l][j];
            r(i, j) = s;
        }
    return r;
}

inline real_t quad_value(const SymMatrix& G, const std::vector<std::int64_t>& x)
{
    real_t s = 0;
    for (int i = 0; i < G.rank(); ++i)
        for (int j = 0; j < G.rank(); ++j) s += x[i] * G(i, j) * x[j];
    return s;
}

// LLL on a Gram matrix (delta = 0.99); returns the column transform.
inline IntMatrix lll_transform(const SymMatrix& G0)
{
    const int n = G0.rank();
    IntMatrix U(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) U[i][i] = 1;
    auto gram = [&]() { return congruence(G0, U); };
    const real_t delta = 0.99L;
    int k = 1;
    int guard = 0;
    while (k < n && guard++ < 100000) {
        SymMatrix G = gram();
        // Gram-Schmidt coefficients from the Gram matrix
        std::vector<std::vector<real_t>> mu(n, std::vector<real_t>(n, 0));
        std::vector<real_t> bstar(n, 0);
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j < i; ++j) {
                real_t s = G(i, j);
                for (int l = 0; l < j; ++l) s -= mu[j][l] * mu[i][l] * bstar[l];
                mu[i][j] = s / bstar[j];
            }
            real_t s = G(i, i);
            for (int l = 0; l < i; ++l) s -= mu[i][l] * mu[i][l] * bstar[l];
            bstar[i] = s;
        }
        bool changed = false;
        for (int j = k - 1; j >= 0; --j) {
            real_t m = std::round(mu[k][j]);
            if (m != 0) {
                auto mi = static_cast<std::int64_t>(m);
                for (int r = 0; r < n; ++r) U[r][k] -= mi * U[r][j];
                for (int l = 0; l <= j; ++l) mu[k][l] -= m * (l == j ? 1 : mu[j][l]);
                changed = true;
            }
        }
        if (changed) continue;  // recompute with exact Gram
        if (bstar[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            for (int r = 0; r < n; ++r) std::swap(U[r][k], U[r][k - 1]);
            k = std::max(1, k - 1);
        }
        else {
            ++k;
        }
    }
    return U;
}

// All nonzero integer vectors x (up to sign) with x^T G x <= bound (Fincke-Pohst).
inline std::vector<std::vector<std::int64_t>> short_vectors(const SymMatrix& G, real_t bound)
{
    const int n = G.rank();
    // Cholesky-style decomposition q_ii, q_ij
    std::vector<std::vector<real_t>> q(n, std::vector<real_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q[i][j] = G(i, j);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (int k = i + 1; k < n; ++k)
            for (int l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> x(n, 0);
    std::vector<real_t> remaining(n + 1, 0);
    remaining[n] = bound * (1 + 1e-12L);
    auto rec = [&](auto&& self, int i) -> void {
        real_t center = 0;
        for (int j = i + 1; j < n; ++j) center -= q[i][j] * x[j];
        real_t r = std::sqrt(std::max<real_t>(0, remaining[i + 1] / q[i][i]));
        auto lo = static_cast<std::int64_t>(std::ceil(center - r - 1e-12L));
        auto hi = static_cast<std::int64_t>(std::floor(center + r + 1e-12L));
        for (std::int64_t v = lo; v <= hi; ++v) {
            x[i] = v;
            real_t t = v - center;
            real_t rem = remaining[i + 1] - q[i][i] * t * t;
            if (rem < -1e-12L * bound) continue;
            remaining[i] = rem;
            if (i == 0) {
                bool nz = false;
                for (auto c : x) nz = nz || c != 0;
                if (!nz) continue;
                // keep one of +-x: first nonzero coordinate positive
                for (auto c : x) {
                    if (c == 0) continue;
                    if (c > 0) out.push_back(x);
                    break;
                }
            }
            else {
                self(self, i - 1);
            }
        }
        x[i] = 0;
    };
    rec(rec, n - 1);
    return out;
}

inline std::int64_t gcd_of_minors(const std::vector<std::vector<std::int64_t>>& vecs)
{
    // vecs: k vectors of length n; gcd over all k x k minors.
    const int k = static_cast<int>(vecs.size());
    const int n = static_cast<int>(vecs[0].size());
    std::int64_t g = 0;
    std::vector<int> rows(k);
    auto det = [&](const std::vector<int>& rs) {
        std::vector<std::vector<long double>> m(k, std::vector<long double>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) m[i][j] = static_cast<long double>(vecs[j][rs[i]]);
        long double d = 1;
        for (int c = 0; c < k; ++c) {
            int piv = c;
            for (int r = c + 1; r < k; ++r)
                if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
            if (m[piv][c] == 0) return std::int64_t{0};
            if (piv != c) {
                std::swap(m[piv], m[c]);
                d = -d;
            }
            d *= m[c][c];
            for (int r = c + 1; r < k; ++r) {
                long double f = m[r][c] / m[c][c];
                for (int l = c; l < k; ++l) m[r][l] -= f * m[c][l];
            }
        }
        return static_cast<std::int64_t>(std::llround(d));
    };
    auto choose = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) {
            g = std::gcd(g, std::abs(det(rows)));
            return;
        }
        for (int i = start; i < n; ++i) {
            rows[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    choose(choose, 0, 0);
    return g;
}

}  // namespace detail

/// LLL (delta 0.99) followed by greedy Minkowski reduction over an exhaustive
/// short-vector list. Ties in length (relative 1e-9) go to the lexicographically
/// greatest sign-normalized coefficient vector in input coordinates.
inline ReducedShape lll_minkowski_reduce(const SymMatrix& G)
{
    const int n = G.rank();
    if (n < 2 || n > 4) throw ShapeError("lll_minkowski_reduce: rank 2..4 expected");
    if (!G.positive_definite()) throw ShapeError("lll_minkowski_reduce: form is not positive definite");

    IntMatrix L = detail::lll_transform(G);
    SymMatrix GL = detail::congruence(G, L);
    real_t bound = 0;
    for (int i = 0; i < n; ++i) bound = std::max(bound, GL(i, i));

    for (int attempt = 0; attempt < 8; ++attempt, bound *= 2) {
        struct Cand {
            std::vector<std::int64_t> v;  // input coordinates
            real_t norm;
        };
        std::vector<Cand> cands;
        for (auto& x : detail::short_vectors(GL, bound)) {
            std::vector<std::int64_t> v(n, 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) v[i] += L[i][j] * x[j];
            for (auto c : v) {
                if (c == 0) continue;
                if (c < 0)
                    for (auto& t : v) t = -t;
                break;
            }
            cands.push_back({v, detail::quad_value(G, v)});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.norm < b.norm; });
        // group near-equal norms and order each group lexicographically descending
        for (std::size_t i = 0; i < cands.size();) {
            std::size_t j = i + 1;
            while (j < cands.size() && cands[j].norm - cands[i].norm <= 1e-9L * cands[i].norm) ++j;
            std::sort(cands.begin() + static_cast<std::ptrdiff_t>(i), cands.begin() + static_cast<std::ptrdiff_t>(j),
                      [](const Cand& a, const Cand& b) { return a.v > b.v; });
            i = j;
        }
        std::vector<std::vector<std::int64_t>> chosen;
        for (auto& c : cands) {
            auto trial = chosen;
            trial.push_back(c.v);
            if (detail::gcd_of_minors(trial) == 1) chosen = std::move(trial);
            if (static_cast<int>(chosen.size()) == n) break;
        }
        if (static_cast<int>(chosen.size()) < n) continue;
        IntMatrix U(n, std::vector<std::int64_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) U[i][j] = chosen[j][i];
        return {detail::congruence(G, U).normalized(), U};
    }
    throw ShapeError("lll_minkowski_reduce: short-vector search did not complete a basis");
}

}  // namespace shapelab
