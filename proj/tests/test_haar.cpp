#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "shapelab/haar.hpp"

using namespace shapelab;

TEST(Haar, SeedDiscriminants)
{
    EXPECT_EQ(discriminant(SmallCubicForm{0, 1, 1, 0}), 1);
    EXPECT_EQ(discriminant(SmallCubicForm{1, 0, 1, 0}), -4);
}

TEST(Haar, BasePointInvariants)
{
    for (int i : {0, 1}) {
        const auto bp = make_basepoint(i);
        EXPECT_NEAR(std::abs(bp.disc), 1, 1e-12);
        EXPECT_EQ(bp.disc > 0, i == 0);
        const auto G = shape_gram_closed(bp.form);
        const double scale = static_cast<double>(G(0, 0));
        EXPECT_NEAR(static_cast<double>(G(1, 1)) / scale, 1, 1e-10);
        EXPECT_NEAR(static_cast<double>(G(0, 1)) / scale, 0, 1e-10);
        EXPECT_NEAR(bp.shape.x, 0, 1e-9);
        EXPECT_NEAR(bp.shape.y, 1, 1e-9);
    }
    EXPECT_THROW(make_basepoint(2), std::invalid_argument);
}

TEST(Haar, StabilizerOrders)
{
    EXPECT_EQ(stabilizer_order(0), 6);
    EXPECT_EQ(stabilizer_order(1), 2);
    for (int i : {0, 1}) {
        const auto v = make_basepoint(i).form;
        for (const auto& h : stabilizer(i)) {
            const auto w = act(h, v);
            EXPECT_LE(std::max({std::abs(w.a - v.a), std::abs(w.b - v.b), std::abs(w.c - v.c), std::abs(w.d - v.d)}), 1e-10);
        }
    }
}

TEST(Haar, DiscriminantHomogeneity)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3, 3), l(0.2, 5);
    for (int k = 0; k < 1000; ++k) {
        const RealCubicForm v{u(rng), u(rng), u(rng), u(rng)};
        const double lam = l(rng);
        const RealCubicForm w{lam * v.a, lam * v.b, lam * v.c, lam * v.d};
        const double expect = std::pow(lam, 4) * discriminant(v);
        EXPECT_NEAR(discriminant(w), expect, 1e-12 * std::max(1.0, std::abs(expect)) * 100);
    }
}

TEST(Haar, ShapeOfGroupElementIsReducedIwasawaPoint)
{
    // shape(g v) for g with Iwasawa point z is the reduction of z
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(-3, 3), uy(0.05, 4), ut(0, 2 * std::numbers::pi);
    for (int i : {0, 1}) {
        const auto v = make_basepoint(i).form;
        for (int k = 0; k < 10000; ++k) {
            const double x = ux(rng), y = uy(rng);
            const auto g = detail::iwasawa(x, y, ut(rng), (rng() & 1) ? 1 : -1);
            const auto shape = gauss_reduce(shape_gram_closed(act(g, v))).point;
            SymMatrix M(2);
            M(0, 0) = 1 / y;
            M(0, 1) = M(1, 0) = x / y;
            M(1, 1) = (x * x + y * y) / y;
            const auto expect = gauss_reduce(M).point;
            ASSERT_NEAR(shape.x, expect.x, 1e-7) << x << ' ' << y;
            ASSERT_NEAR(shape.y, expect.y, 1e-7 * expect.y) << x << ' ' << y;
        }
    }
}

TEST(Haar, JacobianConstantIndependentOfTestFunction)
{
    for (int i : {0, 1}) {
        const auto a = mc_jacobian_constant(i, 'A', 2000000, 11);
        const auto b = mc_jacobian_constant(i, 'B', 2000000, 12);
        EXPECT_GT(a.value, 0);
        EXPECT_LE(std::abs(a.value - b.value), 3 * std::hypot(a.stderr_, b.stderr_))
            << "i=" << i << " A=" << a.value << "+-" << a.stderr_ << " B=" << b.value << "+-" << b.stderr_;
    }
}

TEST(Haar, StandardErrorScaling)
{
    const auto a = mc_jacobian_constant(1, 'A', 400000, 5);
    const auto b = mc_jacobian_constant(1, 'A', 1600000, 6);
    EXPECT_NEAR(a.stderr_ / b.stderr_, 2, 0.6);
}

TEST(Haar, TheoremSixRatio)
{
    const Rank2Region full{{Rect{0, 0.5, 0, kInf}}};
    const auto one = mc_theorem6_ratio(full, 1, 4, 200000, 3);
    EXPECT_EQ(one.value, 1.0);
    const Rank2Region band{{Rect{0, 0.5, 1, 2}}};
    const auto e = mc_theorem6_ratio(band, 1, 4, 2000000, 4);
    EXPECT_LE(std::abs(e.value - mu_ratio_truncated(band, 4)), 3 * e.stderr_) << e.value << " +- " << e.stderr_;
    const Rank2Region strip{{Rect{0, std::sin(std::numbers::pi / 12), 0, kInf}}};
    const auto f = mc_theorem6_ratio(strip, 0, 4, 2000000, 5);
    EXPECT_LE(std::abs(f.value - mu_ratio_truncated(strip, 4)), 3 * f.stderr_) << f.value << " +- " << f.stderr_;
}

TEST(Haar, JsonLayout)
{
    const auto e = mc_theorem6_ratio(Rank2Region{{Rect{0, 0.5, 1, 2}}}, 0, 4, 100000, 9);
    const auto j = to_json(e);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"estimate", "stderr", "N", "seed", "config"}));
}
