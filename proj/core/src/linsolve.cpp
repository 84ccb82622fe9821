#include "eqlayer/linsolve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "eqlayer/errors.hpp"
#include "eqlayer/norms.hpp"

namespace eqlayer {

namespace {

std::string describe(const DiscreteOperator& op) {
    std::ostringstream os;
    os << "case " << to_string(op.tag) << ", grid " << op.grid.ny << "x" << op.grid.nz;
    return os.str();
}

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double nb = b.norm();
    const double nr = (a * x - b).norm();
    return nb > 0.0 ? nr / nb : nr;
}

double bspline3(double t) {
    const double a = std::abs(t);
    if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
    if (a < 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
    return 0.0;
}

}  // namespace

// Row equilibration: every row divided by its largest entry. The d_y^4 rows
// carry 1/hy^4 while boundary rows carry 1, so residuals are measured on the
// scaled system.
Eigen::VectorXd row_scales(const SparseMatrix& a) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it)
            m(it.row()) = std::max(m(it.row()), std::abs(it.value()));
    for (Eigen::Index r = 0; r < m.size(); ++r) m(r) = m(r) > 0.0 ? 1.0 / m(r) : 1.0;
    return m;
}

struct LinearSystem::Impl {
    Eigen::VectorXd scale;
    SparseMatrix scaled;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

LinearSystem::LinearSystem(const DiscreteOperator& op) : op_(op), impl_(std::make_unique<Impl>()) {
    impl_->scale = row_scales(op.matrix);
    impl_->scaled = impl_->scale.asDiagonal() * op.matrix;
    impl_->scaled.makeCompressed();
    impl_->lu.analyzePattern(impl_->scaled);
    impl_->lu.factorize(impl_->scaled);
    if (impl_->lu.info() != Eigen::Success)
        throw SingularSystem("sparse LU failed (" + describe(op) + "): " + impl_->lu.lastErrorMessage());
}

LinearSystem::~LinearSystem() = default;

double LinearSystem::residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const {
    return relative_residual(impl_->scaled, x, impl_->scale.cwiseProduct(b));
}

Eigen::VectorXd LinearSystem::solve(const Eigen::VectorXd& b, double tolerance) const {
    if (b.size() != op_.dim()) throw ContractViolation("right-hand side size");
    if (b.isZero(0.0)) return Eigen::VectorXd::Zero(b.size());
    const Eigen::VectorXd sb = impl_->scale.cwiseProduct(b);
    Eigen::VectorXd x = impl_->lu.solve(sb);
    double res = relative_residual(impl_->scaled, x, sb);
    if (!(res <= tolerance) && std::isfinite(res)) {
        x += impl_->lu.solve(Eigen::VectorXd(sb - impl_->scaled * x));
        res = relative_residual(impl_->scaled, x, sb);
    }
    if (!(res <= tolerance)) {
        std::ostringstream os;
        os << "residual " << res << " above " << tolerance << " (" << describe(op_) << ")";
        throw SingularSystem(os.str());
    }
    return x;
}

SolveResult solve(const DiscreteOperator& op, const SolverOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult out;
    const Eigen::VectorXd& b = op.rhs;
    if (options.method == SolverOptions::Method::Direct) {
        LinearSystem sys(op);
        out.x = sys.solve(b, options.tolerance);
        out.residual_norm = sys.residual(out.x, b);
    } else {
        const Eigen::VectorXd scale = row_scales(op.matrix);
        SparseMatrix a = scale.asDiagonal() * op.matrix;
        const Eigen::VectorXd sb = scale.cwiseProduct(b);
        Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> it;
        it.preconditioner().setDroptol(options.ilut_drop);
        it.preconditioner().setFillfactor(options.ilut_fill);
        it.compute(a);
        if (it.info() != Eigen::Success) throw SingularSystem("ILUT setup failed (" + describe(op) + ")");
        constexpr int chunk = 25;
        it.setTolerance(options.tolerance);
        it.setMaxIterations(chunk);
        out.x = Eigen::VectorXd::Zero(b.size());
        bool done = b.isZero(0.0);
        while (!done && out.iterations < options.max_iterations) {
            out.x = it.solveWithGuess(sb, out.x);
            out.iterations += static_cast<int>(it.iterations());
            const double res = relative_residual(a, out.x, sb);
            out.residual_history.push_back(res);
            done = res <= options.tolerance;
            if (it.iterations() == 0 || !std::isfinite(res)) break;
        }
        if (!done)
            throw NoConvergence("BiCGSTAB did not reach " + std::to_string(options.tolerance) + " (" +
                                    describe(op) + ")",
                                out.residual_history);
        out.residual_norm = out.residual_history.empty() ? 0.0 : out.residual_history.back();
    }
    out.u = op.unpack(out.x);
    out.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SolveResult solve(const ProblemSpec& spec, const SolverOptions& options) {
    return solve(assemble(spec), options);
}

SolveResult solve_lifted(const ProblemSpec& spec, const SolverOptions& options) {
    DiscreteOperator op = assemble(spec);
    const Lifting lf = lift(spec, op);
    const Eigen::VectorXd b = op.rhs;
    op.rhs = b - lf.Lr;
    SolveResult w = solve(op, options);
    w.x += lf.r_vec;
    w.u = op.unpack(w.x);
    const Eigen::VectorXd scale = row_scales(op.matrix);
    w.residual_norm = relative_residual(scale.asDiagonal() * op.matrix, w.x, scale.cwiseProduct(b));
    return w;
}

std::vector<StatePair> bump_bank(const Grid& g, int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double ay = g.y_max / 16.0;
    const double zlen = g.z_max - g.z_min;
    const double az = zlen / 16.0;
    const double ylo = 2.0 * ay + 2.0 * g.hy();
    const double yhi = g.y_max - 2.0 * ay - 2.0 * g.hy();
    const double zlo = g.z_min + 2.0 * az + g.hz();
    const double zhi = g.z_max - 2.0 * az - g.hz();
    if (!(yhi > ylo && zhi > zlo)) throw PreconditionError("bump_bank: grid too coarse for interior bumps");
    std::vector<StatePair> bank;
    bank.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double yc = ylo + (yhi - ylo) * unit(rng);
        const double zc = zlo + (zhi - zlo) * unit(rng);
        const double a = 2.0 * unit(rng) - 1.0;
        const double b = 2.0 * unit(rng) - 1.0;
        StatePair t(g);
        for (int i = 0; i <= g.ny; ++i)
            for (int j = 0; j <= g.nz; ++j) {
                const double bump = bspline3((g.y(i) - yc) / ay) * bspline3((g.z(j) - zc) / az);
                t.v(i, j) = a * bump;
                t.psi(i, j) = b * bump;
            }
        bank.push_back(std::move(t));
    }
    return bank;
}

double weak_residual(const StatePair& u, const ProblemSpec& spec, const std::vector<StatePair>& bank) {
    u.check();
    const Grid& g = u.grid();
    if (g.periodic_y) throw ContractViolation("weak_residual: periodic grids are not supported");
    const double hy = g.hy();
    const double hz = g.hz();
    const double tau = spec.transport ? 1.0 : 0.0;
    const double zeta = spec.zero_order ? 1.0 : 0.0;

    // Box residuals of both equations per cell (i, c), i = 2 .. ny-2.
    Eigen::MatrixXd rv = Eigen::MatrixXd::Zero(g.ny + 1, g.nz + 1);
    Eigen::MatrixXd rp = Eigen::MatrixXd::Zero(g.ny + 1, g.nz + 1);
    const auto& v = u.v.values;
    const auto& p = u.psi.values;
    for (int c = 1; c <= g.nz; ++c) {
        const int lo = c - 1, hi = c;
        const double zm = 0.5 * (g.z(lo) + g.z(hi));
        for (int i = 2; i <= g.ny - 2; ++i) {
            double dyv = 0.0, dyp = 0.0, d4 = 0.0, d2 = 0.0, pa = 0.0, va = 0.0, sp = 0.0, sv = 0.0;
            for (int l : {lo, hi}) {
                dyv += 0.5 * (v(i + 1, l) - v(i - 1, l)) / (2.0 * hy);
                dyp += 0.5 * (p(i + 1, l) - p(i - 1, l)) / (2.0 * hy);
                d4 += 0.5 * (p(i - 2, l) - 4.0 * p(i - 1, l) + 6.0 * p(i, l) - 4.0 * p(i + 1, l) + p(i + 2, l)) /
                      (hy * hy * hy * hy);
                d2 += 0.5 * (v(i - 1, l) - 2.0 * v(i, l) + v(i + 1, l)) / (hy * hy);
                pa += 0.5 * p(i, l);
                va += 0.5 * v(i, l);
                sp += 0.5 * eval(spec.s_psi, g.y(i), g.z(l));
                sv += 0.5 * eval(spec.s_v, g.y(i), g.z(l));
            }
            rv(i, c) = (v(i, hi) - v(i, lo)) / hz + tau * zm * dyv - 0.5 * d4 - zeta * pa - sp;
            rp(i, c) = (p(i, hi) - p(i, lo)) / hz + tau * zm * dyp + 0.5 * d2 - zeta * va - sv;
        }
    }

    double worst = 0.0;
    for (const StatePair& t : bank) {
        require_same_grid(t.grid(), g, "weak_residual");
        for (int i = 0; i <= g.ny; ++i)
            for (int j = 0; j <= g.nz; ++j) {
                const bool edge = i <= 1 || i >= g.ny - 1 || j == 0 || j == g.nz;
                if (edge && (t.v(i, j) != 0.0 || t.psi(i, j) != 0.0))
                    throw PreconditionError("weak_residual: test function does not vanish near the boundary");
            }
        double acc = 0.0;
        for (int c = 1; c <= g.nz; ++c)
            for (int i = 2; i <= g.ny - 2; ++i) {
                const double phi = 0.5 * (t.v(i, c - 1) + t.v(i, c));
                const double w = 0.5 * (t.psi(i, c - 1) + t.psi(i, c));
                acc += rv(i, c) * phi + rp(i, c) * w;
            }
        worst = std::max(worst, std::abs(acc * hy * hz));
    }
    return worst;
}

TraceReport trace_recovery(const StatePair& u, const ProblemSpec& spec) {
    u.check();
    const Grid& g = u.grid();
    if (g.nz < 16) throw PreconditionError("trace_recovery needs at least 16 z-cells");
    const double hy = g.hy();
    const double ym = g.y_max;
    const std::vector<std::function<double(double)>> gs = {
        [](double y) { return y * y * std::exp(-y); },
        [ym](double y) { return std::sin(3.14159265358979323846 * y / ym); },
        [](double y) { return std::exp(-(y - 2.0) * (y - 2.0)); },
    };
    const std::vector<int> steps = {4, 8, 16};

    TraceReport rep;
    for (int k : steps) rep.eta.push_back(k * g.hz());

    // Normalized weights of -dz h(z/eta) = 6 s (1-s)/eta on levels 0..k.
    auto weights = [](int k) {
        std::vector<double> w(k + 1);
        double sum = 0.0;
        for (int m = 0; m <= k; ++m) {
            const double s = static_cast<double>(m) / k;
            w[m] = 6.0 * s * (1.0 - s);
            sum += w[m];
        }
        for (double& x : w) x /= sum;
        return w;
    };
    auto functional = [&](const std::function<double(int)>& slice) {
        TraceFunctional f;
        for (int k : steps) {
            const auto w = weights(k);
            double acc = 0.0;
            for (int m = 0; m <= k; ++m) acc += w[m] * slice(m);
            f.values.push_back(acc);
        }
        f.extrapolated = 2.0 * f.values[0] - f.values[1];
        return f;
    };

    Eigen::VectorXd gy(g.ny + 1);
    for (const auto& gf : gs) {
        for (int i = 0; i <= g.ny; ++i) gy(i) = gf(g.y(i));
        auto bottom = functional([&](int m) {
            return trapezoid(gy.cwiseProduct(u.psi.values.col(m)), hy);
        });
        rep.max_bottom = std::max(rep.max_bottom, std::abs(bottom.extrapolated));
        rep.bottom.push_back(bottom);
    }
    if (spec.domain.tag == CaseTag::Strip) {
        const Eigen::MatrixXd lam = lambda_matrix(spec.bc.lambda, g);
        for (const auto& gf : gs) {
            for (int i = 0; i <= g.ny; ++i) gy(i) = gf(g.y(i));
            auto top = functional([&](int m) {
                const int j = g.nz - m;
                Eigen::VectorXd d = -u.psi.values.col(j);
                d.segment(1, g.ny - 1) += lam * u.v.values.col(j).segment(1, g.ny - 1);
                return trapezoid(gy.cwiseProduct(d), hy);
            });
            rep.max_top = std::max(rep.max_top, std::abs(top.extrapolated));
            rep.top.push_back(top);
        }
    }
    return rep;
}

}  // namespace eqlayer
