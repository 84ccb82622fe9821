#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eqlayer/domain.hpp"
#include "eqlayer/errors.hpp"
#include "eqlayer/norms.hpp"
#include "oracles.hpp"

using namespace eqlayer;

namespace {

Grid box(int ny, int nz, double ymax, double zmax) {
    DomainCase d;
    d.y_max = ymax;
    d.z_max = zmax;
    return make_grid(d, ny, nz);
}

}  // namespace

TEST(Norms, ZeroStateHasZeroNorms) {
    const StatePair u(box(16, 8, 10.0, 4.0));
    EXPECT_EQ(norm_E0(u), 0.0);
    EXPECT_EQ(norm_E00(u), 0.0);
    EXPECT_EQ(norm_E0tilde(u), 0.0);
}

TEST(Norms, Homogeneity) {
    const StatePair u = oracle::random_state(box(24, 12, 10.0, 4.0), 7);
    const StatePair w = -3.0 * u;
    EXPECT_NEAR(norm_E0(w), 3.0 * norm_E0(u), 1e-12 * norm_E0(u));
    EXPECT_NEAR(norm_E0tilde(w), 3.0 * norm_E0tilde(u), 1e-12 * norm_E0tilde(u));
}

TEST(Norms, E0MatchesQuadratureOracle) {
    const double Y = 30.0, Z = 5.0;
    const Grid g = box(600, 200, Y, Z);
    StatePair u(g);
    u.v = sample(g, [](double y, double z) { return y * std::exp(-y - z); });
    u.psi = sample(g, [](double y, double z) { return y * y * std::exp(-y - z); });

    // v = y e^-y, v' = (1-y) e^-y; psi = y^2 e^-y, psi'' = (2 - 4y + y^2) e^-y.
    const double ybit = oracle::integrate(
        [](double y) {
            const double e = std::exp(-y);
            const double dv = (1.0 - y) * e, wv = y * e / (1.0 + y);
            const double dpp = (2.0 - 4.0 * y + y * y) * e, wp = y * y * e / (1.0 + y * y);
            return dv * dv + wv * wv + dpp * dpp + wp * wp;
        },
        0.0, Y);
    const double zbit = oracle::integrate([](double z) { return std::exp(-2.0 * z); }, 0.0, Z);
    const double ref = std::sqrt(ybit * zbit);
    EXPECT_NEAR(norm_E0(u), ref, 5e-3 * ref);
}

TEST(Norms, E0TildeAddsPlainL2) {
    const StatePair u = oracle::random_state(box(24, 12, 10.0, 4.0), 3);
    const double e0 = norm_E0(u), et = norm_E0tilde(u);
    EXPECT_NEAR(et * et, e0 * e0 + l2_squared(u.v) + l2_squared(u.psi), 1e-10 * et * et);
}

TEST(Norms, DifferenceStencilsAreExactOnLowDegree) {
    const double h = 0.1;
    Eigen::VectorXd f(12), q(12);
    for (int i = 0; i < 12; ++i) {
        const double y = i * h;
        f(i) = 3.0 * y * y - y + 2.0;
        q(i) = y * y * y;
    }
    const Eigen::VectorXd d = diff_y(f, h);
    const Eigen::VectorXd dd = diff_yy(q, h);
    for (int i = 0; i < 12; ++i) {
        EXPECT_NEAR(d(i), 6.0 * i * h - 1.0, 1e-12);
        EXPECT_NEAR(dd(i), 6.0 * i * h, 1e-10);
    }
}

TEST(Hardy, ZeroFieldIsDegenerate) {
    const Field f(box(32, 4, 10.0, 1.0));
    const HardyResult r = hardy_ratio(f, 1);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.ratio, 0.0);
}

TEST(Hardy, CutoffLinearFieldRespectsConstantFour) {
    // f = y on [0,1] continued by a smooth cutoff to zero at y = 3.
    auto cut = [](double y) {
        if (y <= 1.0) return y;
        if (y >= 3.0) return 0.0;
        const double s = (y - 1.0) / 2.0;
        return (1.0 - s * s * (3.0 - 2.0 * s));
    };
    const Grid g = box(800, 2, 10.0, 1.0);
    const Field f = sample(g, [&](double y, double) { return cut(y); });
    const HardyResult r = hardy_ratio(f, 1);
    ASSERT_FALSE(r.degenerate);
    EXPECT_LE(r.ratio, 4.0 * (1.0 + 1e-2));

    // Brute-force continuum value of the same ratio.
    const double num = oracle::integrate([&](double y) { return y > 0 ? std::pow(cut(y) / y, 2) : 1.0; }, 0.0, 1.0) +
                       oracle::integrate([&](double y) { return std::pow(cut(y) / y, 2); }, 1.0, 3.0);
    const double den = 1.0 + oracle::integrate([](double y) {
                           const double s = (y - 1.0) / 2.0;
                           const double d = -3.0 * s * (1.0 - s);
                           return d * d;
                       }, 1.0, 3.0);
    EXPECT_NEAR(r.ratio, num / den, 1e-2 * num / den);
}

TEST(Hardy, SecondOrderRatioIsStableUnderRefinement) {
    auto f = [](double y, double) { return y * y * std::exp(-y); };
    const double r1 = hardy_ratio(sample(box(400, 2, 30.0, 1.0), f), 2).ratio;
    const double r2 = hardy_ratio(sample(box(800, 2, 30.0, 1.0), f), 2).ratio;
    EXPECT_GT(r1, 0.0);
    EXPECT_TRUE(std::isfinite(r1));
    EXPECT_NEAR(r1, r2, 1e-2 * r2);
}

TEST(Hardy, RejectsFieldNotVanishingAtZero) {
    const Field f = sample(box(32, 2, 10.0, 1.0), [](double y, double) { return 1.0 + y; });
    EXPECT_THROW(hardy_ratio(f, 1), PreconditionError);
    EXPECT_THROW(hardy_ratio(f, 3), DomainError);
}
