#include <gtest/gtest.h>

#include <cmath>

#include "eqlayer/domain.hpp"
#include "eqlayer/errors.hpp"
#include "oracles.hpp"

using namespace eqlayer;

TEST(Scaling, AlphaHalfGivesTwoFifthsAndOneFifth) {
    const ScalingExponents e = scaling_exponents(0.5);
    EXPECT_NEAR(e.ey, 0.4, 1e-15);
    EXPECT_NEAR(e.ez, 0.2, 1e-15);
    EXPECT_NEAR(e.ekman, 0.5, 1e-15);
}

TEST(Scaling, AlphaOneGivesHalves) {
    const ScalingExponents e = scaling_exponents(1.0);
    EXPECT_NEAR(e.ey, 0.5, 1e-15);
    EXPECT_NEAR(e.ez, 0.5, 1e-15);
    EXPECT_NEAR(e.ekman, 0.5, 1e-15);
}

TEST(Scaling, EkmanExponentIsAlwaysHalf) {
    for (int k = 1; k <= 100; ++k) EXPECT_NEAR(scaling_exponents(0.01 * k).ekman, 0.5, 1e-15);
}

TEST(Scaling, RejectsAlphaOutsideUnitInterval) {
    EXPECT_THROW(scaling_exponents(0.0), DomainError);
    EXPECT_THROW(scaling_exponents(1.5), DomainError);
}

TEST(Validate, ZeroDataIsValidWithVanishingIntegrals) {
    for (CaseTag tag : {CaseTag::QuarterPlane, CaseTag::Strip, CaseTag::UpperStrip}) {
        DomainCase d;
        d.tag = tag;
        const ValidationReport rep = validate(make_spec(d, 16, 8));
        EXPECT_TRUE(rep.ok()) << to_string(tag);
        EXPECT_EQ(rep.upsilon.value, 0.0);
        EXPECT_EQ(rep.v_corner.value, 0.0);
    }
}

TEST(Validate, ConstantUpsilonNearCornerDiverges) {
    ProblemSpec s = make_spec(DomainCase{}, 16, 8);
    s.bc.Upsilon = [](double) { return 1.0; };
    const ValidationReport rep = validate(s);
    EXPECT_FALSE(rep.ok());
    EXPECT_TRUE(rep.upsilon.divergent);
}

TEST(Validate, UpsilonVanishingLinearlyMatchesQuadrature) {
    ProblemSpec s = make_spec(DomainCase{}, 16, 8);
    s.bc.Upsilon = [](double z) { return z * std::exp(-z); };
    const ValidationReport rep = validate(s);
    EXPECT_TRUE(rep.ok());
    const double ref = oracle::integrate([](double z) { return z * std::exp(-2.0 * z); }, 0.0, 1.0);
    EXPECT_NEAR(rep.upsilon.value, ref, 1e-8 * ref);
}

TEST(Validate, CornerMismatchOfVDiverges) {
    ProblemSpec s = make_spec(DomainCase{}, 16, 8);
    s.bc.V = [](double) { return 0.5; };
    EXPECT_TRUE(validate(s).v_corner.divergent);
}

TEST(Validate, CaseGeometryInvariants) {
    DomainCase strip;
    strip.tag = CaseTag::Strip;
    strip.H = 0.0;
    EXPECT_FALSE(validate(make_spec(strip, 16, 8)).ok());

    DomainCase upper;
    upper.tag = CaseTag::UpperStrip;
    upper.H = 5.0;
    upper.z_max = 5.0;
    EXPECT_FALSE(validate(make_spec(upper, 16, 8)).ok());

    DomainCase flat;
    flat.y_max = 0.0;
    EXPECT_FALSE(validate(make_spec(flat, 16, 8)).ok());
}

TEST(Validate, PositiveScaledIdentityIsRejected) {
    DomainCase d;
    d.tag = CaseTag::Strip;
    ProblemSpec s = make_spec(d, 16, 8);
    s.bc.lambda = LambdaChoice::scaled_identity(0.5);
    EXPECT_FALSE(validate(s).ok());
    s.bc.lambda = LambdaChoice::scaled_identity(-0.5);
    EXPECT_TRUE(validate(s).ok());
}

TEST(Validate, GridMustMatchDomain) {
    ProblemSpec s = make_spec(DomainCase{}, 16, 8);
    s.grid.z_max = 3.0;
    EXPECT_FALSE(validate(s).ok());
}

TEST(Grid, UniformSpacingAndExtent) {
    DomainCase d;
    d.tag = CaseTag::UpperStrip;
    d.H = 2.0;
    d.z_max = 9.0;
    const Grid g = make_grid(d, 30, 14);
    EXPECT_DOUBLE_EQ(g.z(0), 2.0);
    EXPECT_DOUBLE_EQ(g.z(g.nz), 9.0);
    for (int i = 0; i < g.ny; ++i) EXPECT_NEAR(g.y(i + 1) - g.y(i), g.hy(), 1e-14);
    for (int j = 0; j < g.nz; ++j) EXPECT_NEAR(g.z(j + 1) - g.z(j), g.hz(), 1e-14);
    EXPECT_NEAR(g.ny * g.hy(), d.y_max, 1e-12);
    EXPECT_EQ(g.level_of(2.5), 1);
    EXPECT_EQ(g.level_of(2.3), -1);
}

TEST(Domain, CaseNamesRoundTrip) {
    for (CaseTag tag : {CaseTag::QuarterPlane, CaseTag::Strip, CaseTag::UpperStrip})
        EXPECT_EQ(case_from_string(to_string(tag)), tag);
    EXPECT_THROW(case_from_string("IV"), DomainError);
}
