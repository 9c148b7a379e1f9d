// Command-line surface: flag parsing, file handling and exit codes.
// 0 success, 1 usage, 2 data validation, 3 invariant breach.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "shapelab/commands.hpp"

using namespace shapelab;

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write " + path);
    return os;
}

std::string slurp(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

char parse_testfn(const std::string& s)
{
    if (s != "A" && s != "B") throw std::invalid_argument("--testfn must be A or B");
    return s[0];
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cubic field tabulation, lattice shapes and equidistribution checks"};
    app.require_subcommand(1);

    auto* enumerate = app.add_subcommand("enumerate", "Tabulate cubic orders with |disc| < X");
    std::int64_t xmax = 0;
    std::string sig = "both", residues, out;
    bool maximal_only = false, include_c3 = false;
    std::uint64_t modulus = 0, seed = 0;
    unsigned threads = 0;
    enumerate->add_option("--xmax", xmax, "strict bound on |disc|")->required();
    enumerate->add_option("--i", sig, "0, 1 or both")->required()->check(CLI::IsMember({"0", "1", "both"}));
    enumerate->add_flag("--maximal-only", maximal_only);
    enumerate->add_flag("--include-c3", include_c3);
    auto* mod_opt = enumerate->add_option("--mod", modulus, "congruence modulus");
    auto* res_opt = enumerate->add_option("--residues", residues, "admissible residues, one 'a b c d' per line");
    mod_opt->needs(res_opt);
    res_opt->needs(mod_opt);
    enumerate->add_option("--out", out, "forms.csv")->required();
    enumerate->add_option("--threads", threads);
    enumerate->add_option("--seed", seed, "accepted for interface uniformity; enumeration is deterministic");

    auto* equidist = app.add_subcommand("equidist", "Equidistribution report for a forms file");
    std::string in, cells;
    std::vector<std::string> regions;
    equidist->add_option("--in", in)->required();
    equidist->add_option("--cells", cells, "KXxKY")->required();
    equidist->add_option("--region", regions, "x1,x2,y1,y2 (repeatable)")->allow_extra_args(false);
    equidist->add_option("--out", out)->required();

    auto* local = app.add_subcommand("local-density", "Exact local density mod p^2");
    std::uint64_t p = 0;
    std::string what;
    local->add_option("--p", p)->required();
    local->add_option("--what", what, "maximal or file:<path>")->required();

    auto* jac = app.add_subcommand("mc-jacobian", "Monte Carlo Jacobian constant");
    std::string testfn;
    std::uint64_t samples = 0;
    jac->add_option("--i", sig)->required()->check(CLI::IsMember({"0", "1"}));
    jac->add_option("--testfn", testfn, "A or B")->required()->check(CLI::IsMember({"A", "B"}));
    jac->add_option("--samples", samples)->required();
    jac->add_option("--seed", seed)->required();

    auto* ratio = app.add_subcommand("mc-ratio", "Monte Carlo volume ratio of a shape window");
    double ymax = 0;
    std::string region;
    ratio->add_option("--i", sig)->required()->check(CLI::IsMember({"0", "1"}));
    ratio->add_option("--ymax", ymax)->required();
    ratio->add_option("--region", region, "x1,x2,y1,y2")->required();
    ratio->add_option("--samples", samples)->required();
    ratio->add_option("--seed", seed)->required();

    auto* ingest = app.add_subcommand("ingest", "Shapes of a degree 3-5 field table");
    bool d4 = false;
    ingest->add_option("--in", in)->required();
    ingest->add_option("--out", out)->required();
    ingest->add_flag("--d4-test", d4);

    auto* brute = app.add_subcommand("brute", "Brute-force oracle for |disc| < X <= 10^4");
    brute->add_option("--xmax", xmax)->required();
    brute->add_option("--out", out)->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*enumerate) {
            EnumerateOptions opt;
            opt.X = xmax;
            opt.signature = parse_signature(sig);
            opt.maximal_only = maximal_only;
            opt.include_c3 = include_c3;
            opt.threads = threads;
            if (*mod_opt) {
                std::ifstream rs(residues);
                if (!rs) throw DataError("cannot open " + residues);
                opt.congruence = read_residues(rs, modulus);
            }
            auto os = open_out(out);
            run_enumerate(opt, os);
        }
        else if (*equidist) {
            std::ifstream is(in);
            if (!is) throw DataError("cannot open " + in);
            auto os = open_out(out);
            run_equidist(is, cells, regions, os);
        }
        else if (*local) {
            std::cout << run_local_density(p, what).dump(2) << '\n';
        }
        else if (*jac) {
            std::cout << run_mc_jacobian(parse_signature01(sig), parse_testfn(testfn), samples, seed).dump(2) << '\n';
        }
        else if (*ratio) {
            std::cout << run_mc_ratio(parse_signature01(sig), ymax, region, samples, seed).dump(2) << '\n';
        }
        else if (*ingest) {
            const auto res = run_ingest(slurp(in), d4);
            auto os = open_out(out);
            os << res.json.dump(2) << '\n';
            for (const auto& r : res.json["rejected"]) std::cerr << "rejected " << r["label"].get<std::string>() << ": " << r["reason"].get<std::string>() << '\n';
            if (res.rejected) return kExitData;
        }
        else if (*brute) {
            auto os = open_out(out);
            run_brute(xmax, os);
        }
    }
    catch (const InvariantBreach& e) {
        std::cerr << "invariant breach: " << e.what() << '\n';
        return kExitInvariant;
    }
    catch (const std::exception& e) {
        // DataError, FieldTableError, ShapeError and argument validation
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}
