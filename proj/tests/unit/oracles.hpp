#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <complex>
#include <functional>
#include <random>

#include "eqlayer/field.hpp"

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// dz w = -(i z xi - sigma |xi|^3 rate) w + s(z), integrated with RKF78 from 0 to z.
inline std::complex<double> mode_ode(double xi, int sigma, std::complex<double> w0, double z,
                                     const std::function<std::complex<double>(double)>& s, double rate = 1.0) {
    using State = std::array<double, 2>;
    namespace ode = boost::numeric::odeint;
    const double a3 = std::abs(xi * xi * xi) * rate;
    auto rhs = [&](const State& w, State& dw, double t) {
        const std::complex<double> ww(w[0], w[1]);
        std::complex<double> d = -std::complex<double>(-sigma * a3, t * xi) * ww;
        if (s) d += s(t);
        dw = {d.real(), d.imag()};
    };
    State w = {w0.real(), w0.imag()};
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(1e-15, 1e-15), rhs, w, 0.0, z,
                            1e-3);
    return {w[0], w[1]};
}

inline eqlayer::StatePair random_state(const eqlayer::Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    eqlayer::StatePair s(g);
    for (int i = 0; i <= g.ny; ++i)
        for (int j = 0; j <= g.nz; ++j) {
            s.v(i, j) = u(rng);
            s.psi(i, j) = u(rng);
        }
    return s;
}

}  // namespace oracle
