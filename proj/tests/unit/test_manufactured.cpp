#include <gtest/gtest.h>

#include <cmath>

#include "eqlayer/manufactured.hpp"

using namespace eqlayer;

namespace {

// Central differences of u* for an independent evaluation of L u*.
double d(const std::function<double(double, double)>& f, double y, double z, int ky, int kz) {
    const double h = 1e-2;
    if (kz == 1) return (f(y, z + h) - f(y, z - h)) / (2 * h);
    switch (ky) {
        case 1: return (f(y + h, z) - f(y - h, z)) / (2 * h);
        case 2: return (f(y + h, z) - 2 * f(y, z) + f(y - h, z)) / (h * h);
        case 4:
            return (f(y + 2 * h, z) - 4 * f(y + h, z) + 6 * f(y, z) - 4 * f(y - h, z) + f(y - 2 * h, z)) /
                   (h * h * h * h);
    }
    return 0.0;
}

}  // namespace

TEST(Manufactured, SourcesMatchFiniteDifferenceOracle) {
    auto v = [](double y, double z) { return manufactured_v(y, z); };
    auto p = [](double y, double z) { return manufactured_psi(y, z); };
    for (bool zo : {false, true})
        for (double y : {0.7, 2.0, 5.5})
            for (double z : {0.4, 1.3, 3.0}) {
                const double zeta = zo ? 1.0 : 0.0;
                const double sp = d(v, y, z, 0, 1) + z * d(v, y, z, 1, 0) - 0.5 * d(p, y, z, 4, 0) - zeta * p(y, z);
                const double sv = d(p, y, z, 0, 1) + z * d(p, y, z, 1, 0) + 0.5 * d(v, y, z, 2, 0) - zeta * v(y, z);
                EXPECT_NEAR(manufactured_s_psi(y, z, zo), sp, 1e-3);
                EXPECT_NEAR(manufactured_s_v(y, z, zo), sv, 1e-3);
            }
}

TEST(Manufactured, HomogeneousTraces) {
    for (double z : {0.0, 0.5, 2.0}) {
        EXPECT_EQ(manufactured_v(0.0, z), 0.0);
        EXPECT_EQ(manufactured_psi(0.0, z), 0.0);
    }
    for (double y : {0.5, 3.0}) EXPECT_EQ(manufactured_psi(y, 0.0), 0.0);
    EXPECT_NEAR(poly_exp_derivative(3, 1, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(poly_exp_derivative(2, 2, 0.0), 2.0, 1e-15);
}
