#include <gtest/gtest.h>

#include <Eigen/LU>
#include <sstream>
#include <cmath>
#include <random>

#include "eqlayer/domain.hpp"
#include "eqlayer/errors.hpp"
#include "eqlayer/norms.hpp"
#include "eqlayer/operators.hpp"
#include "oracles.hpp"

using namespace eqlayer;

namespace {

ProblemSpec spec_for(CaseTag tag, int ny, int nz, double ymax = 4.0, double zmax = 3.0) {
    DomainCase d;
    d.tag = tag;
    d.y_max = ymax;
    d.z_max = zmax;
    d.H = tag == CaseTag::UpperStrip ? 1.0 : zmax;
    return make_spec(d, ny, nz);
}

}  // namespace

TEST(Assemble, SystemIsSquareWithEveryRowAssigned) {
    for (CaseTag tag : {CaseTag::QuarterPlane, CaseTag::Strip, CaseTag::UpperStrip}) {
        const DiscreteOperator op = assemble(spec_for(tag, 12, 10));
        EXPECT_EQ(op.matrix.rows(), op.matrix.cols());
        EXPECT_EQ(op.dim(), 2 * op.nodes() + 2 * (op.grid.nz + 1));
        EXPECT_EQ(static_cast<Eigen::Index>(op.row_kind.size()), op.dim());
    }
}

TEST(Assemble, FourthDifferenceIsExactOnQuartics) {
    const DiscreteOperator op = assemble(spec_for(CaseTag::QuarterPlane, 16, 6, 2.0));
    StatePair u(op.grid);
    u.psi = sample(op.grid, [](double y, double) { return y * y * y * y; });
    const Eigen::VectorXd Dx = op.diffusion * op.pack(u);
    const auto [veq, psieq] = op.interior_values(Dx);
    // Away from Ymax the mirrored ghost agrees with y^4, which is even.
    for (int i = 1; i <= op.grid.ny - 2; ++i)
        for (int j = 1; j <= op.grid.nz; ++j) EXPECT_NEAR(veq(i, j), 24.0, 1e-7) << i << ',' << j;
}

TEST(Assemble, SecondDifferenceIsExactOnQuadratics) {
    const DiscreteOperator op = assemble(spec_for(CaseTag::QuarterPlane, 16, 6));
    StatePair u(op.grid);
    u.v = sample(op.grid, [](double y, double) { return y * y; });
    const auto [veq, psieq] = op.interior_values(op.diffusion * op.pack(u));
    for (int i = 1; i <= op.grid.ny - 1; ++i)
        for (int j = 1; j <= op.grid.nz; ++j) EXPECT_NEAR(psieq(i, j), -2.0, 1e-10);
}

TEST(Assemble, TransportOnBilinearState) {
    const DiscreteOperator op = assemble(spec_for(CaseTag::QuarterPlane, 20, 10));
    StatePair u(op.grid);
    u.v = sample(op.grid, [](double y, double z) { return y * z; });
    u.psi = u.v;
    const auto [veq, psieq] = op.interior_values(op.transport * op.pack(u));
    const double hz = op.grid.hz();
    double err_node = 0.0;
    for (int i = 1; i < op.grid.ny; ++i)
        for (int j = 1; j <= op.grid.nz; ++j) {
            const double y = op.grid.y(i), zc = op.grid.z(j) - 0.5 * hz;
            // d_z(yz) + z d_y(yz) = y + z^2, carried at the cell midpoint.
            EXPECT_NEAR(veq(i, j), y + zc * zc, 1e-11);
            EXPECT_NEAR(psieq(i, j), y + zc * zc, 1e-11);
            err_node = std::max(err_node, std::abs(veq(i, j) - (y + op.grid.z(j) * op.grid.z(j))));
        }
    EXPECT_LE(err_node, 2.0 * op.grid.z_max * hz);
}

TEST(Assemble, TransportSkewAndDiffusionNonnegative) {
    const DiscreteOperator op = assemble(spec_for(CaseTag::QuarterPlane, 24, 20));
    const Grid& g = op.grid;
    StatePair u = oracle::random_state(g, 11);
    for (int i = 0; i <= g.ny; ++i)
        for (int j = 0; j <= g.nz; ++j)
            if (i < 3 || i > g.ny - 3 || j < 1 || j > g.nz - 1) u.v(i, j) = u.psi(i, j) = 0.0;
    const Eigen::VectorXd x = op.pack(u);
    const Eigen::VectorXd p = op.pairing(x);
    const double n2 = x.squaredNorm();
    EXPECT_LE(std::abs(p.dot(op.transport * x)), 1e-10 * n2);
    EXPECT_GE(p.dot(op.diffusion * x), -1e-10 * n2);
}

TEST(Assemble, ThreeConditionsAtYZero) {
    EXPECT_EQ(count_bc_y0(assemble(spec_for(CaseTag::QuarterPlane, 12, 8))), 3);
    EXPECT_EQ(count_bc_y0(assemble(spec_for(CaseTag::Strip, 12, 8))), 3);
}

TEST(Assemble, SlopeConditionAtYZeroIsNeededForUniqueness) {
    ProblemSpec s = spec_for(CaseTag::QuarterPlane, 16, 16);
    s.zero_order = true;
    const DiscreteOperator op = assemble(s);
    const Eigen::MatrixXd A = Eigen::MatrixXd(op.matrix);
    Eigen::FullPivLU<Eigen::MatrixXd> full(A);
    EXPECT_EQ(full.rank(), A.cols());

    std::vector<int> keep;
    for (Eigen::Index r = 0; r < A.rows(); ++r)
        if (op.row_kind[r] != RowKind::BcY0DPsi) keep.push_back(static_cast<int>(r));
    ASSERT_EQ(static_cast<Eigen::Index>(keep.size()), A.rows() - (op.grid.nz + 1));
    Eigen::MatrixXd B(keep.size(), A.cols());
    for (std::size_t k = 0; k < keep.size(); ++k) B.row(k) = A.row(keep[k]);
    Eigen::FullPivLU<Eigen::MatrixXd> reduced(B);
    EXPECT_LT(reduced.rank(), A.cols());
}

TEST(Assemble, RejectsBadInput) {
    EXPECT_THROW(assemble(spec_for(CaseTag::QuarterPlane, 1, 4)), AssemblyError);
    ProblemSpec s = spec_for(CaseTag::Strip, 12, 8);
    s.bc.lambda = LambdaChoice::scaled_identity(1.0);
    EXPECT_THROW(assemble(s), DomainError);
    s.bc.lambda = LambdaChoice::from_matrix(Eigen::MatrixXd::Identity(3, 3));
    EXPECT_THROW(assemble(s), AssemblyError);
}

TEST(LambdaCase2, ZeroChoiceGivesZero) {
    Eigen::VectorXd t = Eigen::VectorXd::Random(17);
    t(0) = t(16) = 0.0;
    EXPECT_EQ(lambda_case2(LambdaChoice::zero(), t, 8.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LambdaCase2, ScaledIdentityNegates) {
    Eigen::VectorXd t = Eigen::VectorXd::Random(17);
    t(0) = t(16) = 0.0;
    const Eigen::VectorXd r = lambda_case2(LambdaChoice::scaled_identity(-1.0), t, 8.0);
    EXPECT_LE((r + t).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(t.dot(r), -t.squaredNorm(), 1e-12);
}

TEST(LambdaCase2, SpectralOnFirstSineMode) {
    const int n = 32;
    const double Y = 8.0;
    Eigen::VectorXd t(n + 1);
    for (int i = 0; i <= n; ++i) t(i) = std::sin(M_PI * i / n);
    t(0) = t(n) = 0.0;
    const Eigen::VectorXd r = lambda_case2(LambdaChoice::spectral(), t, Y);
    EXPECT_LE((r + (Y / M_PI) * t).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(t.dot(r), 0.0);
}

TEST(Lift, ZeroDataGivesZeroLift) {
    const Lifting l = lift(spec_for(CaseTag::QuarterPlane, 16, 8));
    EXPECT_EQ(l.r_vec.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(l.Lr.cwiseAbs().maxCoeff(), 0.0);
}

namespace {

// Max over z of |one-sided d_y r_psi(0,z) - expected(z)| and of |r_psi(0,z) - value(z)|.
std::pair<double, double> trace_errors(int ny, const Profile& Psi, const Profile& Ups,
                                       const std::function<double(double)>& value,
                                       const std::function<double(double)>& slope) {
    ProblemSpec s = spec_for(CaseTag::QuarterPlane, ny, 8, 8.0, 3.0);
    s.bc.Psi = Psi;
    s.bc.Upsilon = Ups;
    const Lifting l = lift(s);
    const Grid& g = s.grid;
    double es = 0.0, ev = 0.0;
    for (int j = 0; j <= g.nz; ++j) {
        const Eigen::VectorXd d = diff_y(l.r.psi.values.col(j), g.hy());
        es = std::max(es, std::abs(d(0) - slope(g.z(j))));
        ev = std::max(ev, std::abs(l.r.psi(0, j) - value(g.z(j))));
    }
    return {ev, es};
}

}  // namespace

TEST(Lift, PsiTraceWithFlatSlope) {
    auto Psi = [](double z) { return std::exp(-z); };
    const auto [v1, s1] = trace_errors(64, Psi, {}, Psi, [](double) { return 0.0; });
    const auto [v2, s2] = trace_errors(128, Psi, {}, Psi, [](double) { return 0.0; });
    EXPECT_LE(v1, 1e-14);
    EXPECT_LE(v2, 1e-14);
    EXPECT_LE(s1, std::pow(8.0 / 64, 2));
    EXPECT_GE(s1 / s2, 3.5);
}

TEST(Lift, UpsilonSetsSlopeOnly) {
    auto Ups = [](double z) { return z * std::exp(-z); };
    const auto [v1, s1] = trace_errors(64, {}, Ups, [](double) { return 0.0; }, Ups);
    const auto [v2, s2] = trace_errors(128, {}, Ups, [](double) { return 0.0; }, Ups);
    EXPECT_LE(v1, 1e-14);
    EXPECT_LE(v2, 1e-14);
    EXPECT_LE(s2, std::pow(8.0 / 128, 2));
    EXPECT_GE(s1 / s2, 3.5);
}

TEST(Lift, VanishesBeyondCutoff) {
    ProblemSpec s = spec_for(CaseTag::QuarterPlane, 32, 8, 8.0, 3.0);
    s.bc.V = [](double z) { return z * z; };
    s.bc.Psi = [](double z) { return z; };
    const Lifting l = lift(s);
    for (int i = 0; i <= 32; ++i)
        if (s.grid.y(i) >= 2.0)
            for (int j = 0; j <= 8; ++j) {
                EXPECT_EQ(l.r.v(i, j), 0.0);
                EXPECT_EQ(l.r.psi(i, j), 0.0);
            }
    EXPECT_NEAR(l.r.v(0, 8), 9.0, 1e-14);
}

TEST(WriteMatrix, CoordinateHeader) {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, 0, -2;
    std::ostringstream os;
    write_matrix(os, m);
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("# rows=2 cols=2", 0), 0u);
}
