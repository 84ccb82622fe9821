#include "eqlayer/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "eqlayer/errors.hpp"
#include "eqlayer/norms.hpp"

namespace eqlayer {

namespace {

std::vector<double> z_derivative(const std::vector<double>& f, double hz) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) return d;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * hz);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * hz);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * hz);
    return d;
}

EnergyProfile bilinear(const StatePair& a, const StatePair& b, bool zero_order) {
    a.check();
    b.check();
    require_same_grid(a.grid(), b.grid(), "energy profile");
    const Grid& g = a.grid();
    const double hy = g.hy();
    const double zeta = zero_order ? 1.0 : 0.0;
    EnergyProfile p;
    p.z = g.z_nodes();
    p.E.resize(g.nz + 1);
    p.dE_rhs.resize(g.nz + 1);
    p.dE_flux.assign(g.nz + 1, 0.0);
    for (int j = 0; j <= g.nz; ++j) {
        // Q = int v^b psi^a; the symmetric integrand uses both states alike.
        p.E[j] = trapezoid(b.v.values.col(j).cwiseProduct(a.psi.values.col(j)), hy);
        const Eigen::VectorXd ppa = diff_yy(a.psi.values.col(j), hy);
        const Eigen::VectorXd ppb = diff_yy(b.psi.values.col(j), hy);
        const Eigen::VectorXd dva = diff_y(a.v.values.col(j), hy);
        const Eigen::VectorXd dvb = diff_y(b.v.values.col(j), hy);
        double rhs = 0.5 * (trapezoid(ppa.cwiseProduct(ppb), hy) + trapezoid(dva.cwiseProduct(dvb), hy));
        if (zeta != 0.0)
            rhs += zeta * (trapezoid(a.v.values.col(j).cwiseProduct(b.v.values.col(j)), hy) +
                           trapezoid(a.psi.values.col(j).cwiseProduct(b.psi.values.col(j)), hy));
        p.dE_rhs[j] = rhs;
    }
    p.dE_fd = z_derivative(p.E, g.hz());
    return p;
}

}  // namespace

EnergyProfile energy_profile(const StatePair& u, bool zero_order) { return bilinear(u, u, zero_order); }

EnergyProfile energy_profile(const StatePair& u, const ProblemSpec& spec) {
    EnergyProfile p = bilinear(u, u, spec.zero_order);
    const Grid& g = u.grid();
    const double hy = g.hy();
    const double h3 = hy * hy * hy;
    const double tau = spec.transport ? 1.0 : 0.0;
    Eigen::VectorXd sp(g.ny + 1), sv(g.ny + 1);
    for (int j = 0; j <= g.nz; ++j) {
        const double z = g.z(j);
        const auto v = u.v.values.col(j);
        const auto psi = u.psi.values.col(j);
        const double V = v(0);
        const double Psi = psi(0);
        const double dv0 = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * hy);
        const double d2p0 = (2.0 * psi(0) - 5.0 * psi(1) + 4.0 * psi(2) - psi(3)) / (hy * hy);
        const double d3p0 =
            (-5.0 * psi(0) + 18.0 * psi(1) - 24.0 * psi(2) + 14.0 * psi(3) - 3.0 * psi(4)) / (2.0 * h3);
        double flux = tau * z * V * Psi + 0.5 * V * dv0 - 0.5 * Psi * d3p0 +
                      0.5 * eval(spec.bc.Upsilon, z) * d2p0;
        if (spec.s_v || spec.s_psi) {
            for (int i = 0; i <= g.ny; ++i) {
                sp(i) = eval(spec.s_psi, g.y(i), z);
                sv(i) = eval(spec.s_v, g.y(i), z);
            }
            flux += trapezoid(sp.cwiseProduct(psi) + sv.cwiseProduct(v), hy);
        }
        p.dE_flux[j] = flux;
    }
    return p;
}

EnergyProfile q_profile(const StatePair& uV, const StatePair& uW, bool zero_order) {
    return bilinear(uV, uW, zero_order);
}

double energy_mismatch(const EnergyProfile& p, std::size_t from, std::size_t to) {
    if (to == 0 || to > p.E.size() - 1) to = p.E.size() - 1;
    double num = 0.0, den = 0.0;
    for (std::size_t j = from; j < to; ++j) {
        const double target = p.dE_rhs[j] + p.dE_flux[j];
        num += (p.dE_fd[j] - target) * (p.dE_fd[j] - target);
        den += target * target;
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

CaccioppoliReport caccioppoli_check(const StatePair& u, const ProblemSpec& spec, double y0, double z1) {
    u.check();
    const Grid& g = u.grid();
    const double hy = g.hy();
    if (y0 < 4.0 * hy - 1e-12) throw PreconditionError("caccioppoli_check: y0 must be at least 4 hy");
    const double h3 = hy * hy * hy;
    const double h4 = h3 * hy;
    const double hz = g.hz();

    CaccioppoliReport rep;
    const int jmax = std::min(g.nz, static_cast<int>(std::floor((z1 - g.z_min) / hz + 1e-9)));
    for (int j = 0; j <= jmax; ++j) {
        const double wz = (j == 0 || j == jmax) ? 0.5 * hz : hz;
        for (int i = 2; i <= g.ny - 2; ++i) {
            if (g.y(i) < y0 - 1e-12) continue;
            const double wy = (g.y(i - 1) < y0 - 1e-12 || i == g.ny - 2) ? 0.5 * hy : hy;
            const auto& p = u.psi.values;
            const auto& v = u.v.values;
            const double d4 =
                (p(i - 2, j) - 4.0 * p(i - 1, j) + 6.0 * p(i, j) - 4.0 * p(i + 1, j) + p(i + 2, j)) / h4;
            const double d3 = (-v(i - 2, j) + 2.0 * v(i - 1, j) - 2.0 * v(i + 1, j) + v(i + 2, j)) / (2.0 * h3);
            rep.lhs += wy * wz * (d4 * d4 + d3 * d3);
        }
    }
    const double e0 = norm_E0(u);
    rep.energy = e0 * e0;
    if (spec.s_v || spec.s_psi) {
        Field a(g), b(g);
        for (int i = 0; i <= g.ny; ++i)
            for (int j = 0; j <= g.nz; ++j) {
                a(i, j) = eval(spec.s_v, g.y(i), g.z(j));
                b(i, j) = eval(spec.s_psi, g.y(i), g.z(j));
            }
        Field wa(g), wb(g);
        for (int j = 0; j <= g.nz; ++j) {
            const Eigen::VectorXd da = diff_yy(a.values.col(j), hy);
            const Eigen::VectorXd db = diff_yy(b.values.col(j), hy);
            for (int i = 0; i <= g.ny; ++i) {
                const double y = g.y(i);
                wa(i, j) = (1.0 + y) * da(i);
                wb(i, j) = (1.0 + y * y) * db(i);
            }
        }
        rep.source = std::sqrt(l2_squared(wa) + l2_squared(wb));
    }
    const double den = rep.energy + rep.source;
    rep.ratio = den > 0.0 ? rep.lhs / den : 0.0;
    return rep;
}

void write_energy_csv(std::ostream& os, const EnergyProfile& p) {
    os << std::setprecision(17) << "z,E,dE_fd,dE_rhs,dE_flux\n";
    for (std::size_t j = 0; j < p.z.size(); ++j)
        os << p.z[j] << ',' << p.E[j] << ',' << p.dE_fd[j] << ',' << p.dE_rhs[j] << ','
           << (j < p.dE_flux.size() ? p.dE_flux[j] : 0.0) << '\n';
}

void write_energy_csv(const std::string& path, const EnergyProfile& p) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_energy_csv(os, p);
}

}  // namespace eqlayer
