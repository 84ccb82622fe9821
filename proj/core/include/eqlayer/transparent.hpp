#pragma once

#include <Eigen/Dense>

#include "eqlayer/domain.hpp"
#include "eqlayer/field.hpp"

namespace eqlayer {

/// Numerical v-to-psi map at z = H: interior v-trace to interior psi-trace.
struct LambdaMatrix {
    double H = 0.0;
    Grid slice;  ///< grid of the upper problem it was built on
    Eigen::MatrixXd entries;

    /// t . (Lambda t) * hy.
    double quadratic_form(const Eigen::VectorXd& t) const;
    /// ||Lambda - Lambda^T||_F / ||Lambda||_F.
    double asymmetry() const;
};

struct BuildOptions {
    /// Permit the plain system without zero-order terms, for which uniqueness
    /// (and hence the construction) is not guaranteed.
    bool allow_eq1 = false;
};

/// Builds Lambda_H column by column from UpperStrip solves with a hat
/// function as v_H. Sources and y=0 data of `spec_upper` are ignored. One
/// factorization serves every column.
LambdaMatrix build_lambda(const ProblemSpec& spec_upper, const BuildOptions& options = {});

struct SplitResult {
    StatePair whole;
    StatePair bottom;  ///< Strip on [0, H] with psi = Lambda_H v at H
    StatePair top;     ///< UpperStrip on [H, Zmax] driven by the bottom v-trace
    StatePair glued;   ///< bottom below H, top above, on the whole grid
    LambdaMatrix lambda;
    double glued_difference = 0.0;       ///< relative L2 of glued vs whole
    double interface_psi_mismatch = 0.0;  ///< max |psi_b - psi_t| at H / max |psi_b| at H
    double interface_v_mismatch = 0.0;
};

/// Solves the QuarterPlane problem whole and split at H (a grid level).
/// Throws PreconditionError unless the sources and the y=0 data vanish on
/// every level at or above H, or when zero_order is off without allow_eq1.
SplitResult split_solve(const ProblemSpec& spec_whole, double H, const BuildOptions& options = {});

}  // namespace eqlayer
