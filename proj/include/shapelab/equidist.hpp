#pragma once

// Equidistribution reports for shape streams: cell histograms against the
// normalized measure, chi-square, Kolmogorov-Smirnov statistics for the x-marginal
// and the y-tail, region ratios with Wilson intervals, and congruence ratios.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "format.hpp"
#include "json.hpp"
#include "shape_space.hpp"
#include "tabulate.hpp"

namespace shapelab {

/// Cell counts of a partition plus points that fell outside the fundamental domain.
struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t overflow = 0;

    explicit Histogram(std::size_t cells = 0) : counts(cells, 0) {}

    std::uint64_t total() const
    {
        std::uint64_t s = overflow;
        for (auto c : counts) s += c;
        return s;
    }

    void merge(const Histogram& o)
    {
        for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += o.counts[k];
        overflow += o.overflow;
    }
};

template <class Range>
Histogram accumulate(const Range& points, const PartitionSpec& spec)
{
    Histogram h(spec.size());
    for (const UHPoint& p : points) {
        if (!in_fundamental_domain(p)) {
            ++h.overflow;
            continue;
        }
        ++h.counts[locate_cell(p, spec)];
    }
    return h;
}

struct WilsonInterval {
    double lo = 0, hi = 1;
};

/// Wilson score interval for k successes in n trials; z = 1.959963984540054 gives 95%.
inline WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054)
{
    if (n == 0) return {0, 1};
    const double nn = static_cast<double>(n), ph = static_cast<double>(k) / nn, z2 = z * z;
    const double centre = (ph + z2 / (2 * nn)) / (1 + z2 / nn);
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Two-sided one-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf)
{
    if (xs.empty()) return 0;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double f = cdf(xs[k]);
        d = std::max({d, (static_cast<double>(k) + 1) / n - f, f - static_cast<double>(k) / n});
    }
    return d;
}

/// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical_1pct(std::uint64_t n)
{
    return n == 0 ? 1.0 : 1.628 / std::sqrt(static_cast<double>(n));
}

struct CellReport {
    Rect rect;
    double mu = 0;
    std::uint64_t count = 0;
    double expected = 0;
    double rel_dev = 0;  // count / expected - 1
};

struct RatioReport {
    std::string region;
    std::uint64_t n_w = 0, n = 0;
    double ratio = 0, mu_ratio = 0;
    WilsonInterval wilson95;

    bool mu_ratio_inside() const { return mu_ratio >= wilson95.lo && mu_ratio <= wilson95.hi; }
};

struct ReportFilters {
    int signature = 2;  // 0, 1, or 2 for both
    bool maximal_only = false;
    bool include_c3 = false;
};

struct StatsReport {
    std::int64_t X = 0;
    ReportFilters filters;
    std::vector<CellReport> cells;
    std::uint64_t N = 0;
    std::uint64_t overflow = 0;
    double chisq = 0;
    int dof = 0;
    double ks_x = 0, ks_ytail = 0;
    std::uint64_t n_ytail = 0;
    std::vector<RatioReport> ratios;

    double max_rel_dev() const
    {
        double m = 0;
        for (const auto& c : cells) m = std::max(m, std::abs(c.rel_dev));
        return m;
    }
};

/// A region label "x1,x2,y1,y2" with its rectangle.
struct NamedRegion {
    std::string label;
    Rank2Region region;
};

inline NamedRegion parse_region(const std::string& text)
{
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string tok = text.substr(start, end - start);
        v.push_back(tok == "inf" ? kInf : parse_double(tok));
        start = end + 1;
    }
    if (v.size() != 4) throw std::invalid_argument("region must be x1,x2,y1,y2");
    const Rect r{v[0], v[1], v[2], v[3]};
    if (!(r.x1 <= r.x2 && r.y1 <= r.y2 && r.y1 >= 0)) throw std::invalid_argument("region: malformed bounds");
    return {text, Rank2Region{{r}}};
}

/// Histogram, statistics and region ratios for a set of shapes; points outside the
/// fundamental domain are counted in overflow and excluded from every statistic.
inline StatsReport equidist_report(const std::vector<UHPoint>& shapes, const PartitionSpec& spec,
                                   const std::vector<NamedRegion>& regions, std::int64_t X = 0,
                                   ReportFilters filters = {})
{
    StatsReport rep;
    rep.X = X;
    rep.filters = filters;
    const Histogram h = accumulate(shapes, spec);
    rep.overflow = h.overflow;
    rep.N = h.total() - h.overflow;
    const double n = static_cast<double>(rep.N);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        CellReport c{spec.cells[k].rect, spec.cells[k].mu, h.counts[k], 0, 0};
        c.expected = n * c.mu / kMuTotal;
        c.rel_dev = c.expected > 0 ? static_cast<double>(c.count) / c.expected - 1 : 0;
        if (c.expected > 0) rep.chisq += (static_cast<double>(c.count) - c.expected) * (static_cast<double>(c.count) - c.expected) / c.expected;
        rep.cells.push_back(c);
    }
    rep.dof = static_cast<int>(spec.size()) - 1;

    std::vector<double> xs, ytail;
    for (const auto& p : shapes) {
        if (!in_fundamental_domain(p)) continue;
        xs.push_back(std::clamp(p.x, 0.0, 0.5));
        if (p.y >= 1) ytail.push_back(p.y);
    }
    rep.ks_x = ks_statistic(xs, [](double t) { return cdf_x(t); });
    // conditional on y >= 1 the tail is P(Y > t) = 1/t
    rep.n_ytail = ytail.size();
    rep.ks_ytail = ks_statistic(ytail, [](double t) { return 1 - 1 / t; });

    for (const auto& w : regions) {
        RatioReport r;
        r.region = w.label;
        r.n = rep.N;
        for (const auto& p : shapes)
            if (in_fundamental_domain(p) && w.region.contains(p)) ++r.n_w;
        r.ratio = rep.N ? static_cast<double>(r.n_w) / n : 0;
        r.mu_ratio = mu_measure(w.region) / kMuTotal;
        r.wilson95 = wilson_interval(r.n_w, r.n);
        rep.ratios.push_back(r);
    }
    return rep;
}

inline std::vector<UHPoint> shapes_of(const std::vector<FieldClassRecord>& records)
{
    std::vector<UHPoint> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.shape);
    return out;
}

namespace detail {

inline nlohmann::ordered_json number_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace detail

/// report.json layout with fixed key order; an unbounded y2 is written as null.
inline nlohmann::ordered_json to_json(const StatsReport& rep)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["X"] = rep.X;
    j["i"] = rep.filters.signature == 2 ? ordered_json("both") : ordered_json(rep.filters.signature);
    j["filters"] = ordered_json{{"maximal_only", rep.filters.maximal_only},
                                {"include_c3", rep.filters.include_c3},
                                {"overflow", rep.overflow}};
    ordered_json cells = ordered_json::array();
    for (const auto& c : rep.cells) {
        ordered_json cj;
        cj["x1"] = c.rect.x1;
        cj["x2"] = c.rect.x2;
        cj["y1"] = c.rect.y1;
        cj["y2"] = detail::number_or_null(c.rect.y2);
        cj["mu"] = c.mu;
        cj["count"] = c.count;
        cj["expected"] = c.expected;
        cj["rel_dev"] = c.rel_dev;
        cells.push_back(cj);
    }
    j["cells"] = cells;
    j["chisq"] = rep.chisq;
    j["dof"] = rep.dof;
    j["ks_x"] = rep.ks_x;
    j["ks_ytail"] = rep.ks_ytail;
    ordered_json ratios = ordered_json::array();
    for (const auto& r : rep.ratios) {
        ordered_json rj;
        rj["region"] = r.region;
        rj["N_W"] = r.n_w;
        rj["N"] = r.n;
        rj["ratio"] = r.ratio;
        rj["mu_ratio"] = r.mu_ratio;
        rj["wilson95"] = ordered_json::array({r.wilson95.lo, r.wilson95.hi});
        ratios.push_back(rj);
    }
    j["ratios"] = ratios;
    return j;
}

/// Empirical N(S; X) / N(X) against an expected limit.
struct CongruenceRatio {
    std::string label;
    std::uint64_t n_s = 0, n = 0;
    double ratio = 0, expected = 0;
    WilsonInterval wilson95;

    double rel_error() const { return expected != 0 ? std::abs(ratio / expected - 1) : 0; }
};

inline CongruenceRatio congruence_ratio(std::string label, std::uint64_t n_s, std::uint64_t n, double expected)
{
    CongruenceRatio r{std::move(label), n_s, n, n ? static_cast<double>(n_s) / static_cast<double>(n) : 0, expected, {}};
    r.wilson95 = wilson_interval(n_s, n);
    return r;
}

/// Product over primes p < bound of the local maximal densities (1 - p^-2)(1 - p^-3).
inline double maximal_density_product(std::uint64_t bound)
{
    double prod = 1;
    for (auto p : primes_below(bound)) {
        const double q = static_cast<double>(p);
        prod *= (1 - 1 / (q * q)) * (1 - 1 / (q * q * q));
    }
    return prod;
}

/// Ratios for S = maximal and S = everything, per signature, from one counting pass.
inline std::vector<CongruenceRatio> congruence_ratio_report(const ClassCounts& counts, std::uint64_t prime_bound = 100)
{
    std::vector<CongruenceRatio> out;
    const double limit = maximal_density_product(prime_bound);
    for (int i = 0; i < 2; ++i) {
        const std::string tag = "i=" + std::to_string(i);
        out.push_back(congruence_ratio("maximal " + tag, counts.s3_maximal[i], counts.s3_all[i], limit));
        out.push_back(congruence_ratio("everything " + tag, counts.s3_all[i], counts.s3_all[i], 1.0));
    }
    return out;
}

}  // namespace shapelab
