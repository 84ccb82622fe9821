#include "eqlayer/manufactured.hpp"

#include <cmath>

namespace eqlayer {

double poly_exp_derivative(int n, int k, double y) {
    // Leibniz: sum_m C(k,m) (y^n)^(m) (e^-y)^(k-m).
    double sum = 0.0;
    double binom = 1.0;
    for (int m = 0; m <= k; ++m) {
        if (m > 0) binom = binom * (k - m + 1) / m;
        if (m > n) break;
        double falling = 1.0;
        for (int r = 0; r < m; ++r) falling *= (n - r);
        const double sign = ((k - m) % 2 == 0) ? 1.0 : -1.0;
        sum += binom * falling * std::pow(y, n - m) * sign;
    }
    return sum * std::exp(-y);
}

double manufactured_v(double y, double z) { return poly_exp_derivative(2, 0, y) * poly_exp_derivative(1, 0, z); }

double manufactured_psi(double y, double z) {
    return poly_exp_derivative(3, 0, y) * poly_exp_derivative(2, 0, z);
}

double manufactured_s_psi(double y, double z, bool zero_order, bool transport) {
    const double a = poly_exp_derivative(2, 0, y);
    const double a1 = poly_exp_derivative(2, 1, y);
    const double b = poly_exp_derivative(1, 0, z);
    const double b1 = poly_exp_derivative(1, 1, z);
    const double p = poly_exp_derivative(3, 0, y);
    const double p4 = poly_exp_derivative(3, 4, y);
    const double q = poly_exp_derivative(2, 0, z);
    double s = a * b1 - 0.5 * p4 * q;
    if (transport) s += z * a1 * b;
    if (zero_order) s -= p * q;
    return s;
}

double manufactured_s_v(double y, double z, bool zero_order, bool transport) {
    const double a = poly_exp_derivative(2, 0, y);
    const double a2 = poly_exp_derivative(2, 2, y);
    const double b = poly_exp_derivative(1, 0, z);
    const double p = poly_exp_derivative(3, 0, y);
    const double p1 = poly_exp_derivative(3, 1, y);
    const double q = poly_exp_derivative(2, 0, z);
    const double q1 = poly_exp_derivative(2, 1, z);
    double s = p * q1 + 0.5 * a2 * b;
    if (transport) s += z * p1 * q;
    if (zero_order) s -= a * b;
    return s;
}

StatePair manufactured_state(const Grid& grid) {
    StatePair u;
    u.v = sample(grid, manufactured_v);
    u.psi = sample(grid, manufactured_psi);
    return u;
}

ProblemSpec manufactured_spec(const DomainCase& domain, int ny, int nz, bool zero_order, LambdaChoice lambda) {
    ProblemSpec spec = make_spec(domain, ny, nz);
    spec.zero_order = zero_order;
    spec.s_psi = [zero_order](double y, double z) { return manufactured_s_psi(y, z, zero_order); };
    spec.s_v = [zero_order](double y, double z) { return manufactured_s_v(y, z, zero_order); };
    const double ztop = domain.z_end();
    spec.bc.top_psi = [ztop](double y) { return manufactured_psi(y, ztop); };
    spec.bc.top_v = [ztop](double y) { return manufactured_v(y, ztop); };
    spec.bc.lambda = std::move(lambda);
    if (domain.tag == CaseTag::UpperStrip) {
        const double h = domain.H;
        spec.bc.v_H = [h](double y) { return manufactured_v(y, h); };
    }
    return spec;
}

}  // namespace eqlayer
