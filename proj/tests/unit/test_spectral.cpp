#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>

#include "eqlayer/errors.hpp"
#include "eqlayer/spectral.hpp"
#include "oracles.hpp"

using namespace eqlayer;

TEST(ModeEvolve, DecayingModeModulusAndPhase) {
    const Complex w = mode_evolve(1.0, -1, 1.0, 2.0);
    EXPECT_NEAR(std::abs(w), std::exp(-2.0), 1e-15);
    const Complex phase = w / std::abs(w);
    EXPECT_NEAR(std::abs(phase - std::exp(Complex(0.0, -2.0))), 0.0, 1e-14);
}

TEST(ModeEvolve, ZeroFrequencyIsConstant) {
    for (int sigma : {1, -1})
        for (double z : {0.0, 0.7, 5.0}) EXPECT_EQ(mode_evolve(0.0, sigma, Complex(2.0, -1.0), z), Complex(2.0, -1.0));
}

TEST(ModeEvolve, UnitSourceAgreesWithOdeIntegration) {
    auto one = [](double) { return Complex(1.0, 0.0); };
    const Complex w = mode_evolve(1.0, -1, 0.0, 2.0, one);
    const Complex ref = oracle::mode_ode(1.0, -1, 0.0, 2.0, one);
    EXPECT_LE(std::abs(w - ref), 1e-8 * std::abs(ref));
}

TEST(ModeEvolve, RateScalesTheDiffusiveExponent) {
    auto s = [](double z) { return Complex(std::cos(z), 0.5); };
    for (double xi : {0.5, 2.0}) {
        const Complex w = mode_evolve(xi, -1, Complex(0.2, 0.1), 1.5, s, 0.5);
        const Complex ref = oracle::mode_ode(xi, -1, Complex(0.2, 0.1), 1.5, s, 0.5);
        EXPECT_LE(std::abs(w - ref), 1e-8 * std::abs(ref));
    }
}

TEST(Halfplane, BottomDataSuppressesGrowingMode) {
    HalfplaneProblem p;
    p.xi = {0.5, -1.0, 2.0};
    p.bc_data = {Complex(1.0, 0.0), Complex(0.0, 2.0), Complex(-0.5, 0.5)};
    p.rate = 1.0;
    p.z_nodes = {0.0, 0.5, 1.0};
    const SpectralSolution sol = halfplane_solve(p);
    for (int k = 0; k < 3; ++k) {
        const double a = std::abs(p.xi[k]);
        EXPECT_LE(std::abs(sol.w_plus(k, 0)), 1e-15);
        EXPECT_LE(std::abs(sol.w_minus(k, 0) + 2.0 * a * p.bc_data[k]), 1e-14);
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(std::abs(sol.w_minus(k, j)), std::abs(sol.w_minus(k, 0)) * std::exp(-a * a * a * p.z_nodes[j]),
                        1e-14);
            const Complex v = 0.5 * (sol.w_plus(k, j) + sol.w_minus(k, j));
            const Complex psi = (sol.w_plus(k, j) - sol.w_minus(k, j)) / (2.0 * a);
            EXPECT_LE(std::abs(v - sol.v_hat(k, j)), 1e-14);
            EXPECT_LE(std::abs(psi - sol.psi_hat(k, j)), 1e-14);
        }
    }
}

TEST(Halfplane, ConjugateInputsReconstructRealFields) {
    HalfplaneProblem p;
    p.xi = {1.0, -1.0, 3.0, -3.0};
    p.bc_data = {Complex(0.3, -0.4), Complex(0.3, 0.4), Complex(0.0, 1.0), Complex(0.0, -1.0)};
    p.s_v = {[](double z) { return Complex(z, 1.0) * (z < 1.0 ? 1.0 - z : 0.0); },
             [](double z) { return Complex(z, -1.0) * (z < 1.0 ? 1.0 - z : 0.0); }, {}, {}};
    p.support = 1.0;
    p.z_nodes = {0.0, 0.25, 0.5, 1.0, 2.0};
    const SpectralSolution sol = halfplane_solve(p);
    std::vector<double> y;
    for (int i = 0; i <= 20; ++i) y.push_back(0.3 * i);
    EXPECT_LE(reconstruct(sol, sol.v_hat, y).imag().cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE(reconstruct(sol, sol.psi_hat, y).imag().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Halfplane, SourceWithoutSupportIsRejected) {
    HalfplaneProblem p;
    p.xi = {1.0};
    p.bc_data = {1.0};
    p.s_v = {[](double) { return Complex(1.0, 0.0); }};
    p.z_nodes = {0.0, 1.0};
    EXPECT_THROW(halfplane_solve(p), PreconditionError);
}

TEST(LambdaExact, SineModeMapsToMinusInverseWavenumber) {
    const int n = 64;
    const double Y = 10.0;
    for (int m : {1, 3, 7}) {
        const double k = M_PI * m / Y;
        Eigen::VectorXd t(n - 1);
        for (int i = 1; i < n; ++i) t(i - 1) = std::sin(k * i * Y / n);
        const Eigen::VectorXd r = lambda_exact_sine(t, Y);
        EXPECT_LE((r + t / k).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(LambdaExact, PeriodicSineMode) {
    const int n = 48;
    const double P = 2.0 * M_PI;
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t(i) = std::sin(2.0 * i * P / n);
    const PeriodicLambda r = lambda_exact_periodic(t, P);
    EXPECT_LE((r.values + t / 2.0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_FALSE(r.mean_flagged);
}

TEST(LambdaExact, ZeroTraceGivesZero) {
    EXPECT_EQ(lambda_exact_sine(Eigen::VectorXd::Zero(15), 4.0).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(lambda_exact_periodic(Eigen::VectorXd::Zero(16), 4.0).values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LambdaExact, QuadraticFormMatchesDirectSpectralSum) {
    const int n = 40;
    const double P = 7.0, h = P / n;
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    Eigen::VectorXd t(n);
    for (auto& x : t) x = g(rng);
    t.array() -= t.mean();
    const Eigen::VectorXd r = lambda_exact_periodic(t, P).values;
    const double form = h * t.dot(r);

    // Direct O(n^2) discrete Fourier sum: int t Lambda t = -P sum_k |t_k|^2 / |xi_k|.
    double direct = 0.0;
    for (int k = 1; k < n; ++k) {
        Complex c = 0.0;
        for (int j = 0; j < n; ++j) c += t(j) * std::exp(Complex(0.0, -2.0 * M_PI * k * j / n));
        c /= static_cast<double>(n);
        const int ks = k <= n / 2 ? k : k - n;
        direct -= P * std::norm(c) / std::abs(2.0 * M_PI * ks / P);
    }
    EXPECT_LE(form, 0.0);
    EXPECT_NEAR(form, direct, 1e-10 * std::abs(direct));
}

TEST(LambdaExact, MatricesAreNonPositive) {
    const Eigen::MatrixXd a = lambda_sine_matrix(32, 8.0);
    const Eigen::MatrixXd b = lambda_periodic_matrix(32, 8.0);
    EXPECT_LE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (a + a.transpose())).eigenvalues().maxCoeff(),
              1e-12);
    EXPECT_LE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (b + b.transpose())).eigenvalues().maxCoeff(),
              1e-12);
}
