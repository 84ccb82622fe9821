#include "eqlayer/transparent.hpp"

#include <algorithm>
#include <cmath>

#include "eqlayer/errors.hpp"
#include "eqlayer/linsolve.hpp"
#include "eqlayer/operators.hpp"
#include "eqlayer/parallel.hpp"

namespace eqlayer {

double LambdaMatrix::quadratic_form(const Eigen::VectorXd& t) const {
    return t.dot(entries * t) * slice.hy();
}

double LambdaMatrix::asymmetry() const {
    const double n = entries.norm();
    return n > 0.0 ? (entries - entries.transpose()).norm() / n : 0.0;
}

LambdaMatrix build_lambda(const ProblemSpec& spec_upper, const BuildOptions& options) {
    if (spec_upper.domain.tag != CaseTag::UpperStrip)
        throw PreconditionError("build_lambda: the upper problem must be an UpperStrip");
    if (!spec_upper.zero_order && !options.allow_eq1)
        throw PreconditionError("build_lambda: needs zero_order (uniqueness); pass allow_eq1 to override");

    ProblemSpec spec = spec_upper;
    spec.s_v = {};
    spec.s_psi = {};
    spec.bc.V = spec.bc.Upsilon = spec.bc.Psi = spec.bc.v_H = {};
    spec.bc.top_psi = spec.bc.top_v = {};
    const DiscreteOperator op = assemble(spec);
    const LinearSystem sys(op);
    const Grid& g = op.grid;
    const int first = g.periodic_y ? 0 : 1;
    const int n = g.periodic_y ? g.ny : g.ny - 1;

    LambdaMatrix out;
    out.H = spec.domain.H;
    out.slice = g;
    out.entries.resize(n, n);
    parallel_for(n, [&](int k) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(op.dim());
        b(op.v_index(first + k, 0)) = 1.0;  // bottom row of column first+k carries v_H
        const Eigen::VectorXd x = sys.solve(b);
        for (int m = 0; m < n; ++m) out.entries(m, k) = x(op.psi_index(first + m, 0));
    });
    return out;
}

namespace {

void require_vanishing_above(const ProblemSpec& spec, int level) {
    const Grid& g = spec.grid;
    for (int j = level; j <= g.nz; ++j) {
        const double z = g.z(j);
        if (eval(spec.bc.V, z) != 0.0 || eval(spec.bc.Upsilon, z) != 0.0 || eval(spec.bc.Psi, z) != 0.0)
            throw PreconditionError("split_solve: y=0 data must vanish for z >= H");
        for (int i = 0; i <= g.ny; ++i)
            if (eval(spec.s_v, g.y(i), z) != 0.0 || eval(spec.s_psi, g.y(i), z) != 0.0)
                throw PreconditionError("split_solve: sources must be supported below H");
    }
}

}  // namespace

SplitResult split_solve(const ProblemSpec& spec_whole, double H, const BuildOptions& options) {
    if (spec_whole.domain.tag != CaseTag::QuarterPlane)
        throw PreconditionError("split_solve: the whole problem must be a QuarterPlane");
    if (!spec_whole.zero_order && !options.allow_eq1)
        throw PreconditionError("split_solve: needs zero_order (uniqueness); pass allow_eq1 to override");
    const Grid& g = spec_whole.grid;
    const int J = g.level_of(H);
    if (J <= 0 || J >= g.nz) throw ContractViolation("split_solve: H must be an interior grid level");
    require_vanishing_above(spec_whole, J);
    const double h_level = g.z(J);

    SplitResult out;
    out.whole = solve(spec_whole).u;

    ProblemSpec upper = spec_whole;
    upper.domain.tag = CaseTag::UpperStrip;
    upper.domain.H = h_level;
    upper.grid = make_grid(upper.domain, g.ny, g.nz - J, g.periodic_y);
    upper.grid.z_min = h_level;
    out.lambda = build_lambda(upper, options);

    ProblemSpec bottom = spec_whole;
    bottom.domain.tag = CaseTag::Strip;
    bottom.domain.H = h_level;
    bottom.grid = make_grid(bottom.domain, g.ny, J, g.periodic_y);
    bottom.grid.z_max = h_level;
    bottom.bc.lambda = LambdaChoice::from_matrix(out.lambda.entries);
    bottom.bc.top_psi = bottom.bc.top_v = {};
    bottom.truncation.reset();
    out.bottom = solve(bottom).u;

    // v_H: piecewise-linear interpolant of the bottom v-trace at H.
    const Eigen::VectorXd trace = out.bottom.v.values.col(J);
    const Grid gb = bottom.grid;
    ProblemSpec top = upper;
    top.s_v = {};
    top.s_psi = {};
    top.bc.v_H = [trace, gb](double y) {
        const double s = std::clamp(y / gb.hy(), 0.0, static_cast<double>(gb.ny));
        const int i = std::min(static_cast<int>(s), gb.ny - 1);
        const double t = s - i;
        return (1.0 - t) * trace(i) + t * trace(i + 1);
    };
    out.top = solve(top).u;

    out.glued = StatePair(g);
    for (int i = 0; i <= g.ny; ++i) {
        for (int j = 0; j <= J; ++j) {
            out.glued.v(i, j) = out.bottom.v(i, j);
            out.glued.psi(i, j) = out.bottom.psi(i, j);
        }
        for (int j = J + 1; j <= g.nz; ++j) {
            out.glued.v(i, j) = out.top.v(i, j - J);
            out.glued.psi(i, j) = out.top.psi(i, j - J);
        }
    }
    out.glued_difference = relative_l2(out.glued, out.whole);
    const Eigen::VectorXd pb = out.bottom.psi.values.col(J);
    const Eigen::VectorXd pt = out.top.psi.values.col(0);
    const Eigen::VectorXd vt = out.top.v.values.col(0);
    const double scale_p = std::max(pb.cwiseAbs().maxCoeff(), 1e-300);
    const double scale_v = std::max(trace.cwiseAbs().maxCoeff(), 1e-300);
    out.interface_psi_mismatch = (pb - pt).cwiseAbs().maxCoeff() / scale_p;
    out.interface_v_mismatch = (trace - vt).cwiseAbs().maxCoeff() / scale_v;
    return out;
}

}  // namespace eqlayer
