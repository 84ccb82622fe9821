#pragma once

#include <Eigen/Dense>

#include "eqlayer/field.hpp"

namespace eqlayer {

/// Trapezoid rule on a uniform line.
double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& f, double h);

/// First y-derivative of a column: centered inside, one-sided second order at the ends.
Eigen::VectorXd diff_y(const Eigen::Ref<const Eigen::VectorXd>& f, double h);

/// Second y-derivative of a column: (1,-2,1) inside, (2,-5,4,-1) at the ends.
Eigen::VectorXd diff_yy(const Eigen::Ref<const Eigen::VectorXd>& f, double h);

/// Both-direction trapezoid of f^2.
double l2_squared(const Field& f);

/// int |dy v|^2 + |v/(1+y)|^2 + |dyy psi|^2 + |psi/(1+y^2)|^2, square-rooted.
double norm_E0(const StatePair& u);

/// Same with weights 1/y and 1/y^2; the y=0 node is left out of the weighted terms.
double norm_E00(const StatePair& u);

/// norm_E0 plus the plain L2 norms of v and psi.
double norm_E0tilde(const StatePair& u);

struct HardyResult {
    double ratio = 0.0;
    bool degenerate = false;  ///< denominator vanished; ratio reported as 0
};

/// int (f/y^order)^2 / int (dy^order f)^2 over the whole field.
///
/// Throws PreconditionError when f (order 1), or f and dy f (order 2), do not
/// vanish at y=0 to grid accuracy.
HardyResult hardy_ratio(const Field& f, int order);

}  // namespace eqlayer
