#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "eqlayer/domain.hpp"
#include "eqlayer/field.hpp"
#include "eqlayer/operators.hpp"

namespace eqlayer {

struct SolverOptions {
    enum class Method { Direct, Iterative };
    Method method = Method::Direct;
    double tolerance = 1e-10;  ///< relative residual ||Ax-b||/||b|| after row equilibration
    int max_iterations = 5000;
    double ilut_drop = 1e-8;
    int ilut_fill = 40;
};

struct SolveResult {
    StatePair u;
    Eigen::VectorXd x;  ///< full unknown vector, ghosts included
    double residual_norm = 0.0;
    int iterations = 0;  ///< 0 for the direct path
    double wallclock = 0.0;
    std::vector<double> residual_history;
};

/// A factorized operator, reusable for many right-hand sides.
class LinearSystem {
public:
    explicit LinearSystem(const DiscreteOperator& op);
    ~LinearSystem();
    LinearSystem(const LinearSystem&) = delete;
    LinearSystem& operator=(const LinearSystem&) = delete;

    /// Direct solve with one step of iterative refinement when needed.
    /// Throws SingularSystem if the residual stays above `tolerance`.
    Eigen::VectorXd solve(const Eigen::VectorXd& b, double tolerance = 1e-10) const;

    /// Relative residual of the row-equilibrated system.
    double residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const;

    const DiscreteOperator& op() const noexcept { return op_; }

private:
    struct Impl;
    const DiscreteOperator& op_;
    std::unique_ptr<Impl> impl_;
};

SolveResult solve(const DiscreteOperator& op, const SolverOptions& options = {});
SolveResult solve(const ProblemSpec& spec, const SolverOptions& options = {});

/// Solves for w = u - r with the lifted right-hand side b - L r, then adds r back.
SolveResult solve_lifted(const ProblemSpec& spec, const SolverOptions& options = {});

/// Tensor cubic B-spline bumps at seeded random interior centres. Each member
/// is a (phi, w) pair paired with the v- and psi-equations respectively.
std::vector<StatePair> bump_bank(const Grid& grid, int count, unsigned seed);

/// Max over the bank of |weak form - source pairing|. The weak form is the
/// box-scheme quadrature of the integrated-by-parts identity with the
/// derivatives carried by the test functions (summation by parts). Throws
/// PreconditionError when a test function touches a boundary.
double weak_residual(const StatePair& u, const ProblemSpec& spec, const std::vector<StatePair>& bank);

struct TraceFunctional {
    std::vector<double> values;  ///< one per eta
    double extrapolated = 0.0;   ///< 2 T(eta_0) - T(2 eta_0)
};

struct TraceReport {
    std::vector<double> eta;
    std::vector<TraceFunctional> bottom;  ///< int g psi(., z0), one per g
    std::vector<TraceFunctional> top;     ///< Strip only: int g (Lambda v - psi)(., H)
    double max_bottom = 0.0;              ///< max |extrapolated|
    double max_top = 0.0;
};

/// Mollified trace functionals with w_eta = g(y) h(z/eta), h(s) = (1-s)^2 (1+2s),
/// eta in {4, 8, 16} hz.
TraceReport trace_recovery(const StatePair& u, const ProblemSpec& spec);

}  // namespace eqlayer
