#pragma once

// Stream-level implementations of the command-line operations. The executable
// only parses flags and opens files; everything observable lives here.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "equidist.hpp"
#include "field_table.hpp"
#include "haar.hpp"
#include "maximality.hpp"
#include "parallel.hpp"
#include "tabulate.hpp"

namespace shapelab {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInvariant = 3 };

struct EnumerateOptions {
    std::int64_t X = 0;
    SignatureFilter signature = SignatureFilter::both;
    bool maximal_only = false;
    bool include_c3 = false;
    std::optional<CongruencePredicate> congruence;
    unsigned threads = 0;
};

inline SignatureFilter parse_signature(const std::string& s)
{
    if (s == "0") return SignatureFilter::totally_real;
    if (s == "1") return SignatureFilter::complex;
    if (s == "both") return SignatureFilter::both;
    throw std::invalid_argument("--i must be 0, 1 or both");
}

inline void run_enumerate(const EnumerateOptions& opt, std::ostream& out)
{
    EnumerationTask t;
    t.X = opt.X;
    t.signature = opt.signature;
    t.maximal_only = opt.maximal_only;
    t.include_c3 = opt.include_c3;
    t.congruence = opt.congruence;
    write_forms_csv(out, enumerate_classes(t, resolve_threads(opt.threads)));
}

/// Every class with 0 < |disc| < X, both signatures and both Galois types.
inline void run_brute(std::int64_t X, std::ostream& out)
{
    write_forms_csv(out, brute_force_classes(X));
}

inline std::pair<int, int> parse_cells(const std::string& s)
{
    const auto x = s.find('x');
    if (x == std::string::npos) throw std::invalid_argument("--cells must be KXxKY");
    const auto kx = parse_int64(s.substr(0, x)), ky = parse_int64(s.substr(x + 1));
    if (kx < 1 || ky < 1 || kx > 1000 || ky > 1000) throw std::invalid_argument("--cells: counts must be in [1, 1000]");
    return {static_cast<int>(kx), static_cast<int>(ky)};
}

/// Report over every record of a forms file. The filters block describes the
/// stream: a single signature if all records share one, maximal_only if every
/// record is maximal, include_c3 if any cyclic class is present; X is the
/// smallest strict bound consistent with the data.
inline StatsReport equidist_of_records(const std::vector<FieldClassRecord>& recs, int kx, int ky,
                                       const std::vector<std::string>& regions)
{
    std::vector<NamedRegion> named;
    for (const auto& r : regions) named.push_back(parse_region(r));
    ReportFilters f;
    std::int64_t X = 0;
    bool all0 = !recs.empty(), all1 = !recs.empty();
    f.maximal_only = !recs.empty();
    for (const auto& r : recs) {
        X = std::max(X, detail::abs_value(r.disc) + 1);
        all0 = all0 && r.signature == 0;
        all1 = all1 && r.signature == 1;
        f.maximal_only = f.maximal_only && r.maximal;
        f.include_c3 = f.include_c3 || !r.s3;
    }
    f.signature = all0 ? 0 : all1 ? 1 : 2;
    return equidist_report(shapes_of(recs), equal_measure_partition(kx, ky), named, X, f);
}

inline void run_equidist(std::istream& in, const std::string& cells, const std::vector<std::string>& regions, std::ostream& out)
{
    const auto [kx, ky] = parse_cells(cells);
    out << to_json(equidist_of_records(read_forms_csv(in), kx, ky, regions)).dump(2) << '\n';
}

/// --what maximal: exhaustive maximal-at-p density with its closed form.
/// --what file:<path>: density of the residue set mod p^2 read from the file.
inline nlohmann::ordered_json run_local_density(std::uint64_t p, const std::string& what)
{
    nlohmann::ordered_json j;
    j["p"] = p;
    if (!is_prime_u64(p)) throw std::invalid_argument("--p must be prime");
    if (what == "maximal") {
        const auto d = local_density_maximal(p);
        const auto r = d.reduced();
        const auto q = static_cast<std::int64_t>(p);
        const Rational closed((q * q - 1) * (q * q * q - 1), q * q * q * q * q);
        j["what"] = "maximal";
        j["count"] = d.count;
        j["total"] = d.total;
        j["density"] = std::to_string(r.num) + "/" + std::to_string(r.den);
        j["closed_form"] = std::to_string(closed.num) + "/" + std::to_string(closed.den);
        j["equal"] = r.num == closed.num && r.den == closed.den;
        return j;
    }
    if (what.rfind("file:", 0) != 0) throw std::invalid_argument("--what must be maximal or file:<path>");
    const std::string path = what.substr(5);
    std::ifstream is(path);
    if (!is) throw DataError("cannot open residue file " + path);
    const auto pred = read_residues(is, p * p);
    const auto d = local_density_congruence(pred);
    const auto r = d.reduced();
    j["what"] = what;
    j["count"] = d.count;
    j["total"] = d.total;
    j["density"] = std::to_string(r.num) + "/" + std::to_string(r.den);
    return j;
}

inline int parse_signature01(const std::string& s)
{
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw std::invalid_argument("--i must be 0 or 1");
}

inline nlohmann::ordered_json run_mc_jacobian(int i, char testfn, std::uint64_t samples, std::uint64_t seed, unsigned threads = 0)
{
    return to_json(mc_jacobian_constant(i, testfn, samples, seed, resolve_threads(threads)));
}

inline nlohmann::ordered_json run_mc_ratio(int i, double ymax, const std::string& region, std::uint64_t samples,
                                           std::uint64_t seed, unsigned threads = 0)
{
    const auto w = parse_region(region);
    const auto est = mc_theorem6_ratio(w.region, i, ymax, samples, seed, resolve_threads(threads));
    auto j = to_json(est);
    const double mu = mu_ratio_truncated(w.region, ymax);
    j["mu_ratio"] = mu;
    j["z"] = est.stderr_ > 0 ? (est.value - mu) / est.stderr_ : 0.0;
    return j;
}

struct IngestResult {
    nlohmann::ordered_json json;
    std::size_t rejected = 0;
};

/// Shapes of all records in input order. Records failing the covolume gate are
/// listed under "rejected" with their diagnostic instead of aborting the run.
inline IngestResult run_ingest(const std::string& table, bool d4_test, unsigned threads = 0)
{
    const auto recs = parse_field_table(table);
    std::vector<std::optional<ShapeRecord45>> shapes(recs.size());
    std::vector<std::string> errors(recs.size());
    parallel_units(recs.size(), resolve_threads(threads), [&](std::size_t k) {
        try {
            auto s = shape_of_record(recs[k]);
            if (d4_test && s.degree == 4) s.d4_symmetric = d4_symmetry_test(s.gram);
            shapes[k] = std::move(s);
        }
        catch (const FieldTableError& e) {
            errors[k] = e.what();
        }
    });
    IngestResult res;
    res.json["shapes"] = nlohmann::ordered_json::array();
    res.json["rejected"] = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < recs.size(); ++k) {
        if (shapes[k])
            res.json["shapes"].push_back(to_json(*shapes[k]));
        else {
            res.json["rejected"].push_back({{"label", recs[k].label}, {"reason", errors[k]}});
            ++res.rejected;
        }
    }
    return res;
}

}  // namespace shapelab
