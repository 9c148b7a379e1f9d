#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "shapelab/tabulate.hpp"

using namespace shapelab;

namespace {

std::vector<std::int64_t> discs_of(const std::vector<FieldClassRecord>& rs)
{
    std::vector<std::int64_t> out;
    for (const auto& r : rs) out.push_back(r.disc);
    return out;
}

EnumerationTask task_for(std::int64_t X, SignatureFilter sig, bool maximal, bool c3 = false)
{
    EnumerationTask t;
    t.X = X;
    t.signature = sig;
    t.maximal_only = maximal;
    t.include_c3 = c3;
    return t;
}

UnimodularMatrix2 random_unimodular(std::mt19937_64& rng, int length)
{
    const UnimodularMatrix2 gens[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, -1}};
    UnimodularMatrix2 g = UnimodularMatrix2::identity();
    for (int k = 0; k < length; ++k) g = g * gens[rng() % 4];
    return g;
}

}  // namespace

TEST(Maximality, HandExamples)
{
    EXPECT_FALSE(is_maximal_at(SmallCubicForm{1, 0, 0, -4}, 2));
    EXPECT_TRUE(is_maximal_at(SmallCubicForm{1, 0, 0, -2}, 2));
    EXPECT_TRUE(is_maximal_at(SmallCubicForm{1, 0, 0, -2}, 3));
    EXPECT_FALSE(is_maximal_at(SmallCubicForm{2, 2, 2, 2}, 2));
    EXPECT_TRUE(is_maximal(SmallCubicForm{1, 0, -1, -1}));
    EXPECT_FALSE(is_maximal(SmallCubicForm{1, 0, 0, -4}));
    EXPECT_TRUE(is_maximal(SmallCubicForm{1, 1, -2, -1}));
}

TEST(Maximality, DedekindExamples)
{
    EXPECT_TRUE(dedekind_oracle(0, -1, -1, 23));
    EXPECT_FALSE(dedekind_oracle(0, 0, -4, 2));
    EXPECT_TRUE(dedekind_oracle(0, 0, -2, 3));
}

TEST(Maximality, AgreesWithDedekindOnRandomMonicForms)
{
    std::mt19937_64 rng(7);
    const std::int64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    std::uniform_int_distribution<std::int64_t> coef(-60, 60);
    int checked = 0;
    while (checked < 100000) {
        const SmallCubicForm f{1, coef(rng), coef(rng), coef(rng)};
        if (discriminant(f) == 0) continue;
        const auto p = primes[rng() % std::size(primes)];
        ASSERT_EQ(is_maximal_at(f, static_cast<std::uint64_t>(p)), dedekind_oracle(f.b, f.c, f.d, p)) << f << " p=" << p;
        ++checked;
    }
}

TEST(Maximality, LocalDensities)
{
    EXPECT_EQ(local_density_maximal(2).reduced(), Rational(21, 32));
    EXPECT_EQ(local_density_maximal(3).reduced(), Rational(208, 243));
    EXPECT_EQ(local_density_maximal(5).reduced(), Rational(2976, 3125));
    EXPECT_THROW(local_density_maximal(11), std::invalid_argument);
}

TEST(Maximality, CongruenceDensity)
{
    CongruencePredicate even_a;
    even_a.modulus = 2;
    for (std::uint64_t b = 0; b < 2; ++b)
        for (std::uint64_t c = 0; c < 2; ++c)
            for (std::uint64_t d = 0; d < 2; ++d) even_a.residues.push_back({0, b, c, d});
    std::sort(even_a.residues.begin(), even_a.residues.end());
    EXPECT_EQ(local_density_congruence(even_a).reduced(), Rational(1, 2));
    EXPECT_TRUE(even_a.admits(SmallCubicForm{4, 1, 2, 3}));
    EXPECT_FALSE(even_a.admits(SmallCubicForm{-3, 1, 2, 3}));
}

TEST(Canonical, SectionExamples)
{
    const SmallCubicForm f{1, 0, -1, -1}, g{1, 3, 2, -1};
    // same orbit; the lex-least reduced member is x^3 - x^2 y + y^3
    EXPECT_EQ(canonicalize(f), canonicalize(g));
    EXPECT_EQ(canonicalize(f), (SmallCubicForm{1, -1, 0, 1}));
    EXPECT_FALSE(is_canonical(f));
    EXPECT_FALSE(is_canonical(g));
    EXPECT_TRUE(is_canonical(SmallCubicForm{1, -1, -3, 1}));
    // the Hessian (7,7,7) lies on every boundary; exactly one image is canonical
    const SmallCubicForm h{1, 1, -2, -1};
    std::set<SmallCubicForm> canon;
    for (const auto& d : detail::residual_set()) {
        const auto img = act(d, h);
        if (is_canonical(img)) canon.insert(img);
    }
    if (is_canonical(h)) canon.insert(h);
    EXPECT_EQ(canon.size(), 1u);
    EXPECT_EQ(*canon.begin(), canonicalize(h));
}

TEST(Canonical, SectionPropertyUnderRandomWords)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> coef(-9, 9);
    int checked = 0;
    while (checked < 3000) {
        const SmallCubicForm f{coef(rng), coef(rng), coef(rng), coef(rng)};
        if (discriminant(f) == 0 || classify(f).kind == FormKind::reducible) continue;
        const auto g = act(random_unimodular(rng, 1 + static_cast<int>(rng() % 8)), f);
        const auto cf = canonicalize(f);
        ASSERT_TRUE(is_canonical(cf));
        ASSERT_EQ(cf, canonicalize(g)) << f << " vs " << g;
        ++checked;
    }
}

TEST(Enumerate, SmallExamples)
{
    EXPECT_EQ(discs_of(enumerate_classes(task_for(50, SignatureFilter::complex, true))),
              (std::vector<std::int64_t>{-23, -31, -44}));
    EXPECT_EQ(discs_of(enumerate_classes(task_for(150, SignatureFilter::totally_real, true))),
              (std::vector<std::int64_t>{148}));
    EXPECT_TRUE(enumerate_classes(task_for(10, SignatureFilter::totally_real, false)).empty());
    const auto c3 = enumerate_classes(task_for(100, SignatureFilter::totally_real, true, true));
    EXPECT_EQ(discs_of(c3), (std::vector<std::int64_t>{49, 81}));
    for (const auto& r : c3) {
        EXPECT_FALSE(r.s3);
        EXPECT_NEAR(r.shape.x, 0.5, 1e-9);
        EXPECT_NEAR(r.shape.y, 0.8660254038, 1e-9);
    }
}

TEST(Enumerate, FirstMaximalDiscriminants)
{
    const auto cx = discs_of(enumerate_classes(task_for(109, SignatureFilter::complex, true)));
    EXPECT_EQ(cx, (std::vector<std::int64_t>{-23, -31, -44, -59, -76, -83, -87, -104, -107, -108}));
    const auto re = discs_of(enumerate_classes(task_for(474, SignatureFilter::totally_real, true)));
    EXPECT_EQ(re, (std::vector<std::int64_t>{148, 229, 257, 316, 321, 404, 469, 473}));
}

TEST(Enumerate, MatchesBruteForce)
{
    for (std::int64_t X : {500, 3000}) {
        const auto brute = brute_force_classes(X);
        auto all = task_for(X, SignatureFilter::both, false, true);
        EXPECT_EQ(enumerate_classes(all), brute) << "X=" << X;
    }
}

TEST(Enumerate, DeterministicAcrossThreads)
{
    const auto t = task_for(20000, SignatureFilter::both, false);
    const auto one = enumerate_classes(t, 1);
    EXPECT_EQ(enumerate_classes(t, 3), one);
    const auto counts = count_classes(t, 2);
    std::uint64_t n = 0;
    for (int i = 0; i < 2; ++i) n += counts.s3_all[i];
    EXPECT_EQ(n, one.size());
}

TEST(Enumerate, RejectsInvalidTask)
{
    EXPECT_THROW(enumerate_classes(task_for(0, SignatureFilter::both, false)), std::invalid_argument);
    auto t = task_for(100, SignatureFilter::both, false);
    t.bound_scale = 0.5;
    EXPECT_THROW(enumerate_classes(t), std::invalid_argument);
}

TEST(Enumerate, CsvRoundTrip)
{
    const auto rs = enumerate_classes(task_for(2000, SignatureFilter::both, false, true));
    std::stringstream ss;
    write_forms_csv(ss, rs);
    const auto back = read_forms_csv(ss);
    ASSERT_EQ(back.size(), rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        EXPECT_EQ(back[k], rs[k]);
        EXPECT_EQ(back[k].shape, rs[k].shape);
    }
    std::stringstream bad("a,b,c\n");
    EXPECT_THROW(read_forms_csv(bad), DataError);
}

TEST(Enumerate, ResidueFile)
{
    std::stringstream ss("# even leading coefficient\n0 0 0 0\n0 1 0 0\n2 1 0 0\n");
    const auto p = read_residues(ss, 2);
    EXPECT_EQ(p.residues.size(), 2u);
    std::stringstream bad("0 1\n");
    EXPECT_THROW(read_residues(bad, 2), DataError);
}
