#include "eqlayer/norms.hpp"

#include <cmath>

#include "eqlayer/errors.hpp"

namespace eqlayer {

namespace {

// Trapezoid weights along z for one grid.
Eigen::VectorXd z_weights(const Grid& g) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.nz + 1, g.hz());
    w(0) *= 0.5;
    w(g.nz) *= 0.5;
    return w;
}

Eigen::VectorXd y_weights(const Grid& g) {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(g.ny + 1, g.hy());
    w(0) *= 0.5;
    w(g.ny) *= 0.5;
    return w;
}

// Integral of a nodal integrand.
double integrate(const Eigen::MatrixXd& f, const Grid& g) {
    return y_weights(g).dot(f * z_weights(g));
}

enum class Weight { OnePlus, Plain };

double energy_squared(const StatePair& u, Weight weight) {
    u.check();
    const Grid& g = u.grid();
    const double hy = g.hy();
    Eigen::MatrixXd dens(g.ny + 1, g.nz + 1);
    for (int j = 0; j <= g.nz; ++j) {
        const Eigen::VectorXd dv = diff_y(u.v.values.col(j), hy);
        const Eigen::VectorXd dpsi = diff_yy(u.psi.values.col(j), hy);
        for (int i = 0; i <= g.ny; ++i) {
            const double y = g.y(i);
            double wv, wp;
            if (weight == Weight::OnePlus) {
                wv = u.v(i, j) / (1.0 + y);
                wp = u.psi(i, j) / (1.0 + y * y);
            } else if (i == 0) {
                wv = wp = 0.0;
            } else {
                wv = u.v(i, j) / y;
                wp = u.psi(i, j) / (y * y);
            }
            dens(i, j) = dv(i) * dv(i) + wv * wv + dpsi(i) * dpsi(i) + wp * wp;
        }
    }
    return integrate(dens, g);
}

}  // namespace

double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& f, double h) {
    const Eigen::Index n = f.size();
    if (n < 2) return 0.0;
    return h * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

Eigen::VectorXd diff_y(const Eigen::Ref<const Eigen::VectorXd>& f, double h) {
    const Eigen::Index n = f.size();
    Eigen::VectorXd d(n);
    if (n < 3) throw ContractViolation("diff_y needs at least three nodes");
    for (Eigen::Index i = 1; i + 1 < n; ++i) d(i) = (f(i + 1) - f(i - 1)) / (2.0 * h);
    d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
    return d;
}

Eigen::VectorXd diff_yy(const Eigen::Ref<const Eigen::VectorXd>& f, double h) {
    const Eigen::Index n = f.size();
    Eigen::VectorXd d(n);
    if (n < 4) throw ContractViolation("diff_yy needs at least four nodes");
    const double h2 = h * h;
    for (Eigen::Index i = 1; i + 1 < n; ++i) d(i) = (f(i + 1) - 2.0 * f(i) + f(i - 1)) / h2;
    d(0) = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
    d(n - 1) = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2;
    return d;
}

double l2_squared(const Field& f) {
    return integrate(f.values.array().square().matrix(), f.grid);
}

double norm_E0(const StatePair& u) { return std::sqrt(energy_squared(u, Weight::OnePlus)); }

double norm_E00(const StatePair& u) { return std::sqrt(energy_squared(u, Weight::Plain)); }

double norm_E0tilde(const StatePair& u) {
    return std::sqrt(energy_squared(u, Weight::OnePlus) + l2_squared(u.v) + l2_squared(u.psi));
}

HardyResult hardy_ratio(const Field& f, int order) {
    if (order != 1 && order != 2) throw DomainError("hardy_ratio: order must be 1 or 2");
    f.check();
    const Grid& g = f.grid;
    const double hy = g.hy();
    const double scale = std::max(1.0, f.values.cwiseAbs().maxCoeff());

    Eigen::MatrixXd num(g.ny + 1, g.nz + 1);
    Eigen::MatrixXd den(g.ny + 1, g.nz + 1);
    for (int j = 0; j <= g.nz; ++j) {
        const Eigen::VectorXd col = f.values.col(j);
        if (std::abs(col(0)) > 1e-12 * scale)
            throw PreconditionError("hardy_ratio: field does not vanish at y=0");
        const Eigen::VectorXd d = order == 1 ? diff_y(col, hy) : diff_yy(col, hy);
        if (order == 2) {
            // The one-sided slope at y=0 may only be of discretization size.
            const Eigen::VectorXd d1 = diff_y(col, hy);
            if (std::abs(d1(0)) > hy * d.cwiseAbs().maxCoeff() + 1e-12 * scale)
                throw PreconditionError("hardy_ratio: dy f does not vanish at y=0");
        }
        Eigen::VectorXd w(g.ny + 1);
        for (int i = 1; i <= g.ny; ++i) w(i) = order == 1 ? col(i) / g.y(i) : col(i) / (g.y(i) * g.y(i));
        // f/y^order has a finite limit at y=0; extrapolating it keeps the trapezoid second order.
        w(0) = 2.0 * w(1) - w(2);
        num.col(j) = w.array().square().matrix();
        den.col(j) = d.array().square().matrix();
    }
    const double n = integrate(num, g);
    const double dd = integrate(den, g);
    HardyResult r;
    if (dd == 0.0) {
        r.degenerate = true;
        return r;
    }
    r.ratio = n / dd;
    return r;
}

}  // namespace eqlayer
