#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eqlayer/grid.hpp"

namespace eqlayer {

using Profile = std::function<double(double)>;
using Source = std::function<double(double, double)>;

/// Empty profiles and sources evaluate to zero.
inline double eval(const Profile& f, double x) { return f ? f(x) : 0.0; }
inline double eval(const Source& f, double y, double z) { return f ? f(y, z) : 0.0; }

enum class CaseTag {
    QuarterPlane,  ///< y>0, z>0; psi=0 at z=0, truncated at Zmax by a transparent row
    Strip,         ///< y>0, 0<z<H; psi=0 at z=0, psi = Lambda v at z=H
    UpperStrip,    ///< y>0, z>H; v=v_H at z=H, truncated at Zmax by a transparent row
};

std::string to_string(CaseTag tag);
CaseTag case_from_string(const std::string& s);  // accepts I/II/III and the long names

struct DomainCase {
    CaseTag tag = CaseTag::QuarterPlane;
    double H = 4.0;
    double z_max = 20.0;
    double y_max = 30.0;

    double z_begin() const noexcept { return tag == CaseTag::UpperStrip ? H : 0.0; }
    double z_end() const noexcept { return tag == CaseTag::Strip ? H : z_max; }
};

/// Top-boundary v-to-psi operator: psi = Lambda v on the interior nodes of a z-slice.
struct LambdaChoice {
    enum class Kind { Zero, ScaledIdentity, Spectral, Matrix };

    Kind kind = Kind::Zero;
    double scale = 0.0;                                ///< ScaledIdentity only; must be <= 0
    std::shared_ptr<const Eigen::MatrixXd> matrix;     ///< Matrix only

    static LambdaChoice zero() { return {}; }
    static LambdaChoice scaled_identity(double c) { return {Kind::ScaledIdentity, c, nullptr}; }
    static LambdaChoice spectral() { return {Kind::Spectral, 0.0, nullptr}; }
    static LambdaChoice from_matrix(Eigen::MatrixXd m) {
        return {Kind::Matrix, 0.0, std::make_shared<const Eigen::MatrixXd>(std::move(m))};
    }
};

std::string to_string(const LambdaChoice& choice);

struct BoundaryData {
    Profile V;         ///< v at y=0, function of z
    Profile Upsilon;   ///< d_y psi at y=0, function of z
    Profile Psi;       ///< psi at y=0, function of z
    Profile v_H;       ///< v at z=H, function of y (UpperStrip only)
    LambdaChoice lambda = LambdaChoice::zero();  ///< top operator of the Strip case

    // Optional nonhomogeneous z-boundary traces. Defaults are the homogeneous
    // conditions of the three cases; the manufactured-solution and oracle
    // studies use them to prescribe exact traces.
    Profile psi_bottom;  ///< psi at the bottom level (QuarterPlane, Strip)
    Profile top_psi;     ///< top row becomes psi - Lambda v = top_psi - Lambda top_v
    Profile top_v;
};

struct ProblemSpec {
    DomainCase domain;
    BoundaryData bc;
    Source s_v;    ///< right-hand side of the psi equation
    Source s_psi;  ///< right-hand side of the v equation
    bool zero_order = false;  ///< add the -psi / -v terms
    bool transport = true;    ///< z d_y terms; switched off for the Stewartson variant
    Grid grid;

    /// Replaces the spectral truncation operator at Zmax (QuarterPlane, UpperStrip).
    std::optional<LambdaChoice> truncation;
};

/// Builds the grid for `domain` with ny x nz cells.
Grid make_grid(const DomainCase& domain, int ny, int nz, bool periodic_y = false);

/// Convenience: a spec whose grid matches its domain.
ProblemSpec make_spec(const DomainCase& domain, int ny, int nz);

/// Dyadic estimate of int_0^1 f(z)^2 / z dz.
struct CompatibilityIntegral {
    double value = 0.0;
    double previous = 0.0;  ///< estimate on the next-coarser level
    bool divergent = false;
};

/// Midpoint rule on 2^10 .. 2^20 cells; divergent when the two finest levels
/// differ by more than 1 %.
CompatibilityIntegral corner_integral(const std::function<double(double)>& f);

struct ValidationReport {
    std::vector<std::string> violations;
    CompatibilityIntegral upsilon;   ///< int |Upsilon|^2 / z
    CompatibilityIntegral v_corner;  ///< int |V(z0+s) - v0(s)|^2 / s

    bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate(const ProblemSpec& spec);

struct ScalingExponents {
    double ey = 0.0;     ///< y ~ E^ey
    double ez = 0.0;     ///< z ~ E^ez
    double ekman = 0.0;  ///< secondary Ekman layer exponent (always 1/2)
};

/// Boundary-layer exponents for the wall Z = (-X)^alpha. Throws DomainError
/// unless 0 < alpha <= 1.
ScalingExponents scaling_exponents(double alpha);

}  // namespace eqlayer
