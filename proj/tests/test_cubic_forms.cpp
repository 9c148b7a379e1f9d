#include <gtest/gtest.h>

#include <random>

#include "shapelab/cubic_form.hpp"
#include "shapelab/exact_sign.hpp"

using namespace shapelab;

namespace {

BinaryCubicForm big(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
{
    return {a, b, c, d};
}

UnimodularMatrix2 random_unimodular(std::mt19937_64& rng, int length)
{
    const UnimodularMatrix2 gens[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {1, 0, -1, 1}, {0, 1, 1, 0}, {-1, 0, 0, 1}};
    UnimodularMatrix2 g = UnimodularMatrix2::identity();
    for (int k = 0; k < length; ++k) g = g * gens[rng() % 6];
    return g;
}

}  // namespace

TEST(Discriminant, Examples)
{
    EXPECT_EQ(discriminant(big(1, 0, -1, -1)), -23);
    EXPECT_EQ(discriminant(big(1, 1, -2, -1)), 49);
    EXPECT_EQ(discriminant(big(1, 3, 2, -1)), -23);
    EXPECT_EQ(discriminant(big(0, 0, 0, 0)), 0);
    EXPECT_EQ(discriminant(big(1, 0, 0, -2)), -108);
}

TEST(Hessian, Examples)
{
    auto h = hessian(big(1, 0, -1, -1));
    EXPECT_EQ(h, (HessianForm{3, 9, 1}));
    EXPECT_EQ(h.discriminant(), 69);
    EXPECT_EQ(hessian(big(1, 1, -2, -1)), (HessianForm{7, 7, 7}));
    auto h2 = hessian(big(1, -1, -3, 1));
    EXPECT_EQ(h2, (HessianForm{10, -6, 12}));
    EXPECT_EQ(h2.discriminant(), -444);
}

TEST(Act, Examples)
{
    EXPECT_EQ(act(UnimodularMatrix2(1, 0, 1, 1), big(1, 0, -1, -1)), big(1, 3, 2, -1));
    EXPECT_EQ(act(UnimodularMatrix2::identity(), big(3, -5, 7, 11)), big(3, -5, 7, 11));
    // f(-x,-y) = -f(x,y); f(-x,y) flips the odd-x-degree coefficients.
    EXPECT_EQ(act(UnimodularMatrix2(-1, 0, 0, -1), big(3, -5, 7, 11)), big(-3, 5, -7, -11));
    EXPECT_EQ(act(UnimodularMatrix2(-1, 0, 0, 1), big(3, -5, 7, 11)), big(-3, -5, -7, 11));
}

TEST(Act, RejectsNonUnimodular)
{
    EXPECT_THROW(UnimodularMatrix2(2, 0, 0, 1), std::invalid_argument);
}

TEST(Act, CompositionIsAnAction)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        auto g = random_unimodular(rng, 5), h = random_unimodular(rng, 5);
        auto f = big(static_cast<std::int64_t>(rng() % 41) - 20, static_cast<std::int64_t>(rng() % 41) - 20,
                     static_cast<std::int64_t>(rng() % 41) - 20, static_cast<std::int64_t>(rng() % 41) - 20);
        EXPECT_EQ(act(g, act(h, f)), act(g * h, f));
    }
}

TEST(Properties, DiscriminantAndHessianCovariance)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> coef(-1000000, 1000000);
    for (int t = 0; t < 500; ++t) {
        auto f = big(coef(rng), coef(rng), coef(rng), coef(rng));
        auto h = hessian(f);
        EXPECT_EQ(h.discriminant(), -3 * discriminant(f));
        auto g = random_unimodular(rng, 8);
        auto gf = act(g, f);
        EXPECT_EQ(discriminant(gf), discriminant(f));
        EXPECT_EQ(hessian(gf), act(g, h));
    }
}

TEST(Classify, Examples)
{
    auto c1 = classify(big(1, 0, -1, -1));
    EXPECT_EQ(c1.kind, FormKind::irreducible_s3);
    EXPECT_EQ(c1.signature, 1);
    EXPECT_EQ(c1.content, 1);
    auto c2 = classify(big(1, 1, -2, -1));
    EXPECT_EQ(c2.kind, FormKind::irreducible_c3);
    EXPECT_EQ(c2.signature, 0);
    EXPECT_EQ(classify(big(1, 0, 0, 1)).kind, FormKind::reducible);
    auto c4 = classify(big(2, 2, 2, 2));
    EXPECT_EQ(c4.kind, FormKind::reducible);
    EXPECT_EQ(c4.content, 2);
    EXPECT_EQ(classify(big(0, 0, 0, 0)).kind, FormKind::zero_disc);
    // 2x^3 - 3x^2 y + y^3 = (x - y)^2 (2x + y) has zero discriminant
    EXPECT_EQ(classify(big(2, -3, 0, 1)).kind, FormKind::zero_disc);
    // (2x - y)(x^2 + y^2): rational root 1/2 with non-monic leading coefficient
    EXPECT_EQ(classify(big(2, -1, 2, -1)).kind, FormKind::reducible);
}

TEST(Classify, InvariantUnderAction)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> coef(-30, 30);
    for (int t = 0; t < 300; ++t) {
        SmallCubicForm f{coef(rng), coef(rng), coef(rng), coef(rng)};
        auto gf = act(random_unimodular(rng, 4), f);
        auto c = classify(f), cg = classify(gf);
        EXPECT_EQ(c.kind, cg.kind) << f << " vs " << gf;
        EXPECT_EQ(c.signature, cg.signature);
        EXPECT_EQ(c.content, cg.content);
    }
}

TEST(RingTable, Examples)
{
    auto t = ring_table(big(1, 0, -1, -1));
    EXPECT_EQ(t.omega_theta, 1);
    EXPECT_EQ(t.omega_sq, (std::array<BigInt, 3>{1, 0, 1}));
    EXPECT_EQ(t.theta_sq, (std::array<BigInt, 3>{0, 1, -1}));
    auto t2 = ring_table(big(1, 1, -2, -1));
    EXPECT_EQ(t2.trace_omega, -1);
    EXPECT_EQ(t2.trace_theta, -2);
    auto t3 = ring_table(big(0, 1, 1, 0));
    EXPECT_EQ(t3.omega_theta, 0);
    EXPECT_EQ(t3.omega_sq, (std::array<BigInt, 3>{0, -1, 0}));
    EXPECT_EQ(t3.theta_sq, (std::array<BigInt, 3>{0, 0, 1}));
}

TEST(RingTable, AssociativeCommutativeAndTraces)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> coef(-50, 50);
    for (int t = 0; t < 200; ++t) {
        auto f = big(coef(rng), coef(rng), coef(rng), coef(rng));
        auto tab = ring_table(f);
        using E = CubicRingTable<BigInt>::Element;
        const E w{0, 1, 0}, th{0, 0, 1};
        E x{coef(rng), coef(rng), coef(rng)}, y{coef(rng), coef(rng), coef(rng)}, z{coef(rng), coef(rng), coef(rng)};
        EXPECT_EQ(tab.multiply(tab.multiply(x, y), z), tab.multiply(x, tab.multiply(y, z)));
        EXPECT_EQ(tab.multiply(x, y), tab.multiply(y, x));
        EXPECT_EQ(tab.trace(tab.multiply(w, w)), f.b * f.b - 2 * f.a * f.c);
        EXPECT_EQ(tab.trace(tab.multiply(th, th)), f.c * f.c - 2 * f.b * f.d);
        EXPECT_EQ(tab.trace(tab.multiply(w, th)), -3 * f.a * f.d);
    }
}

TEST(Embeddings, Examples)
{
    auto e = embeddings(big(1, 0, -1, -1));
    EXPECT_EQ(e.signature, 1);
    // mpmath polyroots at 30 digits
    EXPECT_NEAR(static_cast<double>(e.roots[0].value.real()), 1.32471795724474602596, 1e-15);
    EXPECT_EQ(e.roots[0].value.imag(), 0);
    EXPECT_NEAR(static_cast<double>(e.roots[1].value.imag()), 0.56227951206230124390, 1e-15);
    complex_t sw = e.omega[0] + e.omega[1] + e.omega[2];
    EXPECT_NEAR(static_cast<double>(std::abs(sw)), 0.0, 1e-14);

    auto e2 = embeddings(big(1, 1, -2, -1));
    EXPECT_EQ(e2.signature, 0);
    complex_t st = e2.theta[0] + e2.theta[1] + e2.theta[2];
    EXPECT_NEAR(static_cast<double>(st.real()), -2.0, 1e-14);

    auto e3 = embeddings(big(1, 0, 0, -2));
    EXPECT_NEAR(static_cast<double>(e3.roots[0].value.real()), std::cbrt(2.0), 1e-15);
    complex_t sww = 0;
    for (auto w : e3.omega) sww += w * w;
    EXPECT_NEAR(static_cast<double>(std::abs(sww)), 0.0, 1e-13);
}

TEST(Embeddings, Rejects)
{
    EXPECT_THROW(embeddings(big(0, 1, 1, 0)), EmbeddingError);
    EXPECT_THROW(embeddings(big(1, -2, 1, 0)), EmbeddingError);
}

TEST(Embeddings, TraceIdentitiesWithinBound)
{
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<std::int64_t> coef(-200, 200);
    int checked = 0;
    while (checked < 300) {
        SmallCubicForm f{coef(rng), coef(rng), coef(rng), coef(rng)};
        if (f.a == 0 || discriminant(f) == 0) continue;
        ++checked;
        auto e = embeddings(f);
        const real_t a = f.a, b = f.b, c = f.c, d = f.d;
        complex_t sw = 0, st = 0, sww = 0, stt = 0, swt = 0;
        real_t mag = 1;
        for (int j = 0; j < 3; ++j) {
            sw += e.omega[j];
            st += e.theta[j];
            sww += e.omega[j] * e.omega[j];
            stt += e.theta[j] * e.theta[j];
            swt += e.omega[j] * e.theta[j];
            mag = std::max({mag, std::abs(e.omega[j]), std::abs(e.theta[j])});
        }
        // rounding of sums adds a few ulps of the largest term on top of the certified bound
        const real_t tol1 = 3 * e.error_bound + 1e-17L * mag;
        const real_t tol2 = 6 * e.error_bound * mag + 1e-17L * mag * mag;
        EXPECT_LE(std::abs(sw - complex_t(-b)), tol1);
        EXPECT_LE(std::abs(st - complex_t(c)), tol1);
        EXPECT_LE(std::abs(sww - complex_t(b * b - 2 * a * c)), tol2);
        EXPECT_LE(std::abs(stt - complex_t(c * c - 2 * b * d)), tol2);
        EXPECT_LE(std::abs(swt - complex_t(-3 * a * d)), tol2);
        complex_t prod = a * a * a * a;
        for (int j = 0; j < 3; ++j)
            for (int k = j + 1; k < 3; ++k) prod *= (e.roots[j].value - e.roots[k].value) * (e.roots[j].value - e.roots[k].value);
        EXPECT_NEAR(static_cast<double>(prod.real() / static_cast<real_t>(discriminant(f))), 1.0, 1e-10);
    }
}

TEST(ExactSign, AgreesWithRationalArithmetic)
{
    // g = y^3 - 2 has real root 2^(1/3)
    CubicRealRoot r({-2, 0, 0, 1});
    EXPECT_EQ(r.sign({-1, 1}), 1);              // y - 1
    EXPECT_EQ(r.sign({-2, 0, 0, 1}), 0);        // g itself
    EXPECT_EQ(r.sign({-4, 0, 0, 0, 0, 0, 1}), 0);  // y^6 - 4
    EXPECT_EQ(r.sign({0, 0, 1}), 1);            // y^2
    // y^2 - 1.5874...: 2^(2/3) = 1.587401051..., compare to 1587401051/10^9 (below)
    EXPECT_EQ(r.sign({-1587401051, 0, 1000000000}), 1);
    EXPECT_EQ(r.sign({-1587401052, 0, 1000000000}), -1);
    // 2^(1/3) = 1.259921049894873164767..., beyond long double resolution
    const BigInt scale("1000000000000000000");
    EXPECT_EQ(r.sign({BigInt("-1259921049894873164"), scale}), 1);
    EXPECT_EQ(r.sign({BigInt("-1259921049894873165"), scale}), -1);
}
