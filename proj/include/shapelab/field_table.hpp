#pragma once

// Field tables of degree 3 to 5 with given integral bases: parsing with
// line/column diagnostics, serialization, the shape of each record under the
// trace-zero projection, and the lattice-symmetry test for quartic shapes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "exact_sign.hpp"
#include "format.hpp"
#include "json.hpp"
#include "maximality.hpp"
#include "roots.hpp"
#include "shape_geometry.hpp"

namespace shapelab {

enum class FieldTableErrorCode {
    bad_header,
    wrong_column_count,
    malformed_integer,
    malformed_rational,
    degree_mismatch,
    not_monic,
    bad_first_row,
    singular_basis,
    signature_mismatch,
    covolume_mismatch,
};

inline const char* to_string(FieldTableErrorCode c)
{
    switch (c) {
        case FieldTableErrorCode::bad_header: return "bad_header";
        case FieldTableErrorCode::wrong_column_count: return "wrong_column_count";
        case FieldTableErrorCode::malformed_integer: return "malformed_integer";
        case FieldTableErrorCode::malformed_rational: return "malformed_rational";
        case FieldTableErrorCode::degree_mismatch: return "degree_mismatch";
        case FieldTableErrorCode::not_monic: return "not_monic";
        case FieldTableErrorCode::bad_first_row: return "bad_first_row";
        case FieldTableErrorCode::singular_basis: return "singular_basis";
        case FieldTableErrorCode::signature_mismatch: return "signature_mismatch";
        case FieldTableErrorCode::covolume_mismatch: return "covolume_mismatch";
    }
    return "?";
}

struct FieldTableError : std::runtime_error {
    FieldTableErrorCode code;
    std::size_t line, column;  // 1-based; column counts CSV fields

    FieldTableError(FieldTableErrorCode c, std::size_t l, std::size_t col, const std::string& msg)
        : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(col) + ": " + to_string(c) + ": " + msg),
          code(c), line(l), column(col)
    {
    }
};

struct FieldTableRecord {
    std::string label;
    int degree = 0;
    int signature = 0;  // complex pairs
    BigInt disc;
    std::vector<std::int64_t> poly;             // ascending, monic
    std::vector<std::vector<BigRational>> basis;  // rows in the power basis
    std::size_t line = 0;                         // source line, for diagnostics

    bool operator==(const FieldTableRecord& o) const
    {
        return label == o.label && degree == o.degree && signature == o.signature && disc == o.disc && poly == o.poly
               && basis == o.basis;
    }
};

inline constexpr const char* kFieldTableHeader = "label,degree,i,disc,poly,basis";

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline BigRational parse_rational(const std::string& tok)
{
    const auto slash = tok.find('/');
    auto parse_big = [](const std::string& t) {
        if (t.empty() || t.find_first_not_of("+-0123456789") != std::string::npos
            || t.find_first_of("0123456789") == std::string::npos)
            throw std::invalid_argument("not an integer: " + t);
        return BigInt(t[0] == '+' ? t.substr(1) : t);
    };
    if (slash == std::string::npos) return BigRational(parse_big(tok));
    const BigInt den = parse_big(tok.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return BigRational(parse_big(tok.substr(0, slash)), den);
}

inline BigRational determinant(std::vector<std::vector<BigRational>> m)
{
    const std::size_t n = m.size();
    BigRational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const BigRational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

inline std::string rational_text(const BigRational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline std::vector<CertifiedRoot> roots_of(const std::vector<std::int64_t>& poly)
{
    std::vector<real_t> c(poly.begin(), poly.end());
    return polynomial_roots(c);
}

inline int real_root_count(const std::vector<CertifiedRoot>& roots)
{
    int k = 0;
    for (const auto& r : roots) k += r.value.imag() == 0;
    return k;
}

}  // namespace detail

/// Parse the field table. The header line is required; blank lines are skipped.
inline std::vector<FieldTableRecord> parse_field_table(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    using E = FieldTableErrorCode;
    if (!std::getline(is, line) || (++lineno, line != kFieldTableHeader))
        throw FieldTableError(E::bad_header, 1, 1, std::string("expected header ") + kFieldTableHeader);
    std::vector<FieldTableRecord> out;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cols = detail::split(line, ',');
        if (cols.size() != 6) throw FieldTableError(E::wrong_column_count, lineno, cols.size(), "expected 6 columns");
        FieldTableRecord r;
        r.label = cols[0];
        r.line = lineno;
        std::int64_t deg = 0, sig = 0;
        try {
            deg = parse_int64(cols[1]);
        }
        catch (const std::invalid_argument& e) {
            throw FieldTableError(E::malformed_integer, lineno, 2, e.what());
        }
        try {
            sig = parse_int64(cols[2]);
        }
        catch (const std::invalid_argument& e) {
            throw FieldTableError(E::malformed_integer, lineno, 3, e.what());
        }
        if (deg < 3 || deg > 5) throw FieldTableError(E::degree_mismatch, lineno, 2, "degree must be 3, 4 or 5");
        r.degree = static_cast<int>(deg);
        r.signature = static_cast<int>(sig);
        try {
            const auto q = detail::parse_rational(cols[3]);
            if (boost::multiprecision::denominator(q) != 1) throw std::invalid_argument("disc must be an integer");
            r.disc = boost::multiprecision::numerator(q);
        }
        catch (const std::invalid_argument& e) {
            throw FieldTableError(E::malformed_integer, lineno, 4, e.what());
        }
        {
            std::istringstream ps(cols[4]);
            std::string tok;
            while (ps >> tok) {
                try {
                    r.poly.push_back(parse_int64(tok));
                }
                catch (const std::invalid_argument& e) {
                    throw FieldTableError(E::malformed_integer, lineno, 5, e.what());
                }
            }
        }
        if (static_cast<int>(r.poly.size()) != r.degree + 1)
            throw FieldTableError(E::degree_mismatch, lineno, 5, "polynomial has " + std::to_string(r.poly.size()) + " coefficients");
        if (r.poly.back() != 1) throw FieldTableError(E::not_monic, lineno, 5, "leading coefficient must be 1");
        const auto entries = detail::split(cols[5], ';');
        if (static_cast<int>(entries.size()) != r.degree * r.degree)
            throw FieldTableError(E::degree_mismatch, lineno, 6, "basis needs n^2 entries");
        r.basis.assign(r.degree, std::vector<BigRational>(r.degree));
        for (int k = 0; k < r.degree * r.degree; ++k) {
            try {
                r.basis[k / r.degree][k % r.degree] = detail::parse_rational(entries[k]);
            }
            catch (const std::exception& e) {
                throw FieldTableError(E::malformed_rational, lineno, 6, "entry " + std::to_string(k + 1) + ": " + e.what());
            }
        }
        for (int k = 0; k < r.degree; ++k)
            if (r.basis[0][k] != (k == 0 ? 1 : 0)) throw FieldTableError(E::bad_first_row, lineno, 6, "first basis row must be (1,0,...,0)");
        if (detail::determinant(r.basis) == 0) throw FieldTableError(E::singular_basis, lineno, 6, "basis matrix is singular");
        std::vector<CertifiedRoot> roots;
        try {
            roots = detail::roots_of(r.poly);
        }
        catch (const std::exception& e) {
            throw FieldTableError(E::signature_mismatch, lineno, 5, e.what());
        }
        if (detail::real_root_count(roots) != r.degree - 2 * r.signature)
            throw FieldTableError(E::signature_mismatch, lineno, 3, "real root count does not match i");
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string serialize_field_table(const std::vector<FieldTableRecord>& records)
{
    std::ostringstream os;
    os << kFieldTableHeader << '\n';
    for (const auto& r : records) {
        os << r.label << ',' << r.degree << ',' << r.signature << ',' << r.disc.str() << ',';
        for (std::size_t k = 0; k < r.poly.size(); ++k) os << (k ? " " : "") << r.poly[k];
        os << ',';
        bool first = true;
        for (const auto& row : r.basis)
            for (const auto& q : row) {
                os << (first ? "" : ";") << detail::rational_text(q);
                first = false;
            }
        os << '\n';
    }
    return os.str();
}

struct ShapeRecord45 {
    std::string label;
    int degree = 0;
    int signature = 0;
    BigInt disc;
    SymMatrix gram;                    // reduced, determinant 1
    std::vector<double> diagonal;      // sorted ascending
    std::vector<double> cosines;       // G_ij / sqrt(G_ii G_jj), i < j, row-major
    std::optional<UHPoint> point;      // degree 3
    std::optional<bool> d4_symmetric;  // degree 4, when tested
    double covolume_rel_error = 0;
};

namespace detail {

inline EmbeddedBasis embed_record(const FieldTableRecord& r)
{
    const auto roots = roots_of(r.poly);
    std::vector<complex_t> ordered;
    for (const auto& z : roots)
        if (z.value.imag() == 0) ordered.push_back(z.value);
    std::vector<complex_t> upper;
    for (const auto& z : roots)
        if (z.value.imag() > 0) upper.push_back(z.value);
    std::sort(ordered.begin(), ordered.end(), [](complex_t a, complex_t b) { return a.real() < b.real(); });
    for (auto z : upper) {
        ordered.push_back(z);
        ordered.push_back(std::conj(z));
    }
    EmbeddedBasis e;
    e.degree = r.degree;
    for (const auto& row : r.basis) {
        std::vector<complex_t> img;
        for (auto z : ordered) {
            complex_t v = 0, zk = 1;
            for (const auto& c : row) {
                v += static_cast<real_t>(c) * zk;
                zk *= z;
            }
            img.push_back(v);
        }
        e.images.push_back(std::move(img));
    }
    return e;
}

}  // namespace detail

/// Shape of a field-table record: embeds the basis, gates on det(full Gram) = |disc|
/// (relative 1e-8), projects orthogonally to 1, cross-checks the trace-zero
/// sublattice route (1e-9) and reduces.
inline ShapeRecord45 shape_of_record(const FieldTableRecord& r)
{
    using E = FieldTableErrorCode;
    const auto e = detail::embed_record(r);
    ShapeRecord45 s;
    s.label = r.label;
    s.degree = r.degree;
    s.signature = r.signature;
    s.disc = r.disc;
    s.covolume_rel_error = gram_det_check(full_gram(e), r.disc);
    if (!(s.covolume_rel_error <= 1e-8))
        throw FieldTableError(E::covolume_mismatch, r.line, 6, "det(Gram) differs from |disc| (relative " + format_double(s.covolume_rel_error) + ")");
    const SymMatrix proj = shape_via_projection(e).gram;
    const SymMatrix sub = shape_via_sublattice(e).gram;
    const int m = r.degree - 1;
    const auto pn = proj.normalized(), sn = sub.normalized();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (std::abs(pn(i, j) - sn(i, j)) > 1e-9L * pn.max_abs()) throw InvariantBreach("shape_of_record: projection and sublattice routes disagree");
    if (m == 2) {
        const auto red = gauss_reduce(proj);
        s.point = red.point;
        SymMatrix g(2);
        g(0, 0) = red.reduced[0];
        g(0, 1) = g(1, 0) = red.reduced[1];
        g(1, 1) = red.reduced[2];
        s.gram = g.normalized();
    }
    else {
        s.gram = lll_minkowski_reduce(proj).gram;
    }
    for (int i = 0; i < m; ++i) s.diagonal.push_back(static_cast<double>(s.gram(i, i)));
    std::sort(s.diagonal.begin(), s.diagonal.end());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            s.cosines.push_back(static_cast<double>(s.gram(i, j) / std::sqrt(s.gram(i, i) * s.gram(j, j))));
    return s;
}

/// True iff some integer U other than +-I satisfies U^T G U = G (relative 1e-6) and
/// U^2 = I. Columns are drawn from vectors whose norm matches the corresponding
/// diagonal entry, with entries bounded by ceil(max diag / min diag) + 1.
inline bool d4_symmetry_test(const SymMatrix& G)
{
    const int n = G.rank();
    real_t dmax = 0, dmin = G(0, 0);
    for (int i = 0; i < n; ++i) {
        dmax = std::max(dmax, G(i, i));
        dmin = std::min(dmin, G(i, i));
    }
    const auto bound = static_cast<std::int64_t>(std::ceil(static_cast<double>(dmax / dmin))) + 1;
    const real_t tol = 1e-6L * G.max_abs();
    // candidate columns per index
    std::vector<std::vector<std::vector<std::int64_t>>> cols(n);
    std::vector<std::int64_t> v(n, -bound);
    for (;;) {
        real_t q = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) q += G(i, j) * static_cast<real_t>(v[i] * v[j]);
        for (int j = 0; j < n; ++j)
            if (std::abs(q - G(j, j)) <= tol) cols[j].push_back(v);
        int k = 0;
        while (k < n && v[k] == bound) v[k++] = -bound;
        if (k == n) break;
        ++v[k];
    }
    std::vector<std::vector<std::int64_t>> U(n);
    auto inner = [&](const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
        real_t s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += G(i, j) * static_cast<real_t>(x[i] * y[j]);
        return s;
    };
    auto is_pm_identity = [&] {
        for (int sgn : {1, -1}) {
            bool same = true;
            for (int j = 0; j < n && same; ++j)
                for (int i = 0; i < n; ++i) same = same && U[j][i] == (i == j ? sgn : 0);
            if (same) return true;
        }
        return false;
    };
    auto involution = [&] {
        // U^2 = I with U[j] the j-th column
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                std::int64_t s = 0;
                for (int k = 0; k < n; ++k) s += U[k][i] * U[j][k];
                if (s != (i == j ? 1 : 0)) return false;
            }
        return true;
    };
    auto search = [&](auto&& self, int j) -> bool {
        if (j == n) return !is_pm_identity() && involution();
        for (const auto& c : cols[j]) {
            bool ok = true;
            for (int k = 0; k < j && ok; ++k) ok = std::abs(inner(U[k], c) - G(k, j)) <= tol;
            if (!ok) continue;
            U[j] = c;
            if (self(self, j + 1)) return true;
        }
        return false;
    };
    return search(search, 0);
}

inline nlohmann::ordered_json to_json(const ShapeRecord45& s)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["label"] = s.label;
    j["degree"] = s.degree;
    j["i"] = s.signature;
    j["disc"] = s.disc.str();
    ordered_json g = ordered_json::array();
    for (int r = 0; r < s.gram.rank(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < s.gram.rank(); ++c) row.push_back(static_cast<double>(s.gram(r, c)));
        g.push_back(row);
    }
    j["gram"] = g;
    j["diagonal"] = s.diagonal;
    j["cosines"] = s.cosines;
    if (s.point) j["point"] = ordered_json::array({s.point->x, s.point->y});
    if (s.d4_symmetric) j["d4_symmetric"] = *s.d4_symmetric;
    j["covolume_rel_error"] = s.covolume_rel_error;
    return j;
}

}  // namespace shapelab
