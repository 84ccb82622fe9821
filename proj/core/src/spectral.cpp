#include "eqlayer/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>

#include "eqlayer/errors.hpp"
#include "eqlayer/parallel.hpp"

namespace eqlayer {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW planning is not thread safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// int_a^b f(s) ds for complex f, real and imaginary parts integrated separately.
Complex integrate_complex(const std::function<Complex(double)>& f, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    if (a == b) return {0.0, 0.0};
    const double re = gauss_kronrod<double, 61>::integrate(
        [&](double s) { return f(s).real(); }, a, b, 15, 1e-10);
    const double im = gauss_kronrod<double, 61>::integrate(
        [&](double s) { return f(s).imag(); }, a, b, 15, 1e-10);
    return {re, im};
}

}  // namespace

Complex mode_propagator(double xi, int sigma, double z, double s, double rate) {
    const double a = std::abs(xi);
    const Complex expo(sigma * rate * a * a * a * (z - s), -0.5 * xi * (z * z - s * s));
    return std::exp(expo);
}

Complex mode_evolve(double xi, int sigma, Complex w0, double z, const ModeSource& source,
                    double rate, double z0) {
    if (sigma != 1 && sigma != -1) throw DomainError("mode_evolve: sigma must be +1 or -1");
    Complex w = mode_propagator(xi, sigma, z, z0, rate) * w0;
    if (source)
        w += integrate_complex(
            [&](double s) { return mode_propagator(xi, sigma, z, s, rate) * source(s); }, z0, z);
    return w;
}

SpectralSolution halfplane_solve(const HalfplaneProblem& p) {
    const std::size_t nk = p.xi.size();
    const std::size_t nzn = p.z_nodes.size();
    if (p.bc_data.size() != nk) throw ContractViolation("halfplane_solve: bc_data size");
    if ((!p.s_v.empty() && p.s_v.size() != nk) || (!p.s_psi.empty() && p.s_psi.size() != nk))
        throw ContractViolation("halfplane_solve: source list size");
    bool any_source = false;
    for (std::size_t k = 0; k < nk; ++k)
        any_source = any_source || (!p.s_v.empty() && p.s_v[k]) || (!p.s_psi.empty() && p.s_psi[k]);
    if (any_source && !(p.support > 0.0 && std::isfinite(p.support)))
        throw PreconditionError("halfplane_solve: sources need a finite support in z");
    for (std::size_t m = 1; m < nzn; ++m)
        if (!(p.z_nodes[m] > p.z_nodes[m - 1])) throw ContractViolation("z_nodes must increase");

    SpectralSolution sol;
    sol.xi = p.xi;
    sol.z_nodes = p.z_nodes;
    const auto rows = static_cast<Eigen::Index>(nk);
    const auto cols = static_cast<Eigen::Index>(nzn);
    sol.w_plus = Eigen::MatrixXcd::Zero(rows, cols);
    sol.w_minus = Eigen::MatrixXcd::Zero(rows, cols);
    sol.v_hat = Eigen::MatrixXcd::Zero(rows, cols);
    sol.psi_hat = Eigen::MatrixXcd::Zero(rows, cols);
    const double zs = any_source ? p.support : 0.0;

    parallel_for(static_cast<int>(nk), [&](int k) {
        const double xi = p.xi[k];
        const double a = std::abs(xi);
        const ModeSource sv = p.s_v.empty() ? ModeSource{} : p.s_v[k];
        const ModeSource sp = p.s_psi.empty() ? ModeSource{} : p.s_psi[k];
        auto at = [](const ModeSource& f, double s) { return f ? f(s) : Complex{}; };

        if (a == 0.0) {
            // dz v = s_psi with v bounded, dz psi = s_v from the z=0 condition.
            auto tail = [&](double z) {
                return sp && z < zs ? integrate_complex(sp, z, zs) : Complex{};
            };
            const Complex v0 = -tail(0.0);
            if (p.cond_psi == 0.0)
                throw PreconditionError("halfplane_solve: the xi=0 mode needs a psi condition");
            const Complex psi0 = (p.bc_data[k] - p.cond_v * v0) / p.cond_psi;
            Complex acc = psi0;
            double z_prev = 0.0;
            for (std::size_t m = 0; m < nzn; ++m) {
                const double z = p.z_nodes[m];
                if (sv) acc += integrate_complex(sv, z_prev, z);
                z_prev = z;
                const Complex v = -tail(z);
                sol.v_hat(k, m) = v;
                sol.psi_hat(k, m) = acc;
                sol.w_plus(k, m) = v;
                sol.w_minus(k, m) = v;
            }
            return;
        }

        auto s_plus = [&](double s) { return at(sp, s) + a * at(sv, s); };
        auto s_minus = [&](double s) { return at(sp, s) - a * at(sv, s); };
        const bool src = static_cast<bool>(sv) || static_cast<bool>(sp);

        // Growing mode: w_+(z) = -int_z^zs G_+(z,s) s_+(s) ds, zero above the support.
        auto grow_tail = [&](double z, double upper) {
            return integrate_complex(
                [&](double s) { return mode_propagator(xi, 1, z, s, p.rate) * s_plus(s); }, z, upper);
        };
        std::vector<Complex> wp(nzn, Complex{});
        Complex wp0{};
        if (src) {
            // Backward sweep over the nodes below zs, chaining with the propagator.
            Complex j_next{};
            double z_next = zs;
            for (std::size_t m = nzn; m-- > 0;) {
                const double z = p.z_nodes[m];
                if (z >= zs) continue;
                const Complex j = mode_propagator(xi, 1, z, z_next, p.rate) * j_next + grow_tail(z, z_next);
                wp[m] = -j;
                j_next = j;
                z_next = z;
            }
            const Complex j0 = z_next > 0.0
                                   ? mode_propagator(xi, 1, 0.0, z_next, p.rate) * j_next + grow_tail(0.0, z_next)
                                   : j_next;
            wp0 = -j0;
        }

        // z=0 condition: cond_v (wp + wm)/2 + cond_psi (wp - wm)/(2a) = data.
        const double cm = 0.5 * p.cond_v - 0.5 * p.cond_psi / a;
        if (std::abs(cm) < 1e-14)
            throw PreconditionError("halfplane_solve: z=0 condition does not fix the decaying mode");
        const double cp = 0.5 * p.cond_v + 0.5 * p.cond_psi / a;
        const Complex wm0 = (p.bc_data[k] - cp * wp0) / cm;

        Complex wm = wm0;
        double z_prev = 0.0;
        for (std::size_t m = 0; m < nzn; ++m) {
            const double z = p.z_nodes[m];
            wm = mode_propagator(xi, -1, z, z_prev, p.rate) * wm;
            if (src && z_prev < zs)
                wm += integrate_complex(
                    [&](double s) { return mode_propagator(xi, -1, z, s, p.rate) * s_minus(s); },
                    z_prev, std::min(z, zs));
            z_prev = z;
            sol.w_plus(k, m) = wp[m];
            sol.w_minus(k, m) = wm;
            sol.v_hat(k, m) = 0.5 * (wp[m] + wm);
            sol.psi_hat(k, m) = (wp[m] - wm) / (2.0 * a);
        }
    });
    return sol;
}

Eigen::MatrixXcd reconstruct(const SpectralSolution& sol, const Eigen::MatrixXcd& coeffs,
                             const std::vector<double>& y) {
    const auto ny = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ny, coeffs.cols());
    for (Eigen::Index k = 0; k < coeffs.rows(); ++k)
        for (Eigen::Index i = 0; i < ny; ++i)
            out.row(i) += std::exp(Complex(0.0, sol.xi[k] * y[i])) * coeffs.row(k);
    return out;
}

Eigen::VectorXd lambda_exact_sine(const Eigen::VectorXd& interior, double y_max) {
    const int n = static_cast<int>(interior.size());
    if (n == 0) return interior;
    std::vector<double> buf(interior.data(), interior.data() + n);
    std::vector<double> out(n);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fwd = fftw_plan_r2r_1d(n, buf.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
        bwd = fftw_plan_r2r_1d(n, out.data(), buf.data(), FFTW_RODFT00, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (int k = 0; k < n; ++k) {
        const double xi = (k + 1) * kPi / y_max;
        out[k] *= -1.0 / xi;
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    Eigen::VectorXd res(n);
    const double norm = 2.0 * (n + 1);
    for (int k = 0; k < n; ++k) res(k) = buf[k] / norm;
    return res;
}

PeriodicLambda lambda_exact_periodic(const Eigen::VectorXd& values, double period) {
    const int n = static_cast<int>(values.size());
    PeriodicLambda r;
    r.values = Eigen::VectorXd::Zero(n);
    if (n == 0) return r;
    r.mean = values.mean();
    r.mean_flagged = std::abs(r.mean) > 1e-10;
    std::vector<double> buf(values.data(), values.data() + n);
    std::vector<fftw_complex> spec(n / 2 + 1);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fwd = fftw_plan_dft_r2c_1d(n, buf.data(), spec.data(), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, spec.data(), buf.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    spec[0][0] = spec[0][1] = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
        const double m = -period / (2.0 * kPi * k);
        spec[k][0] *= m;
        spec[k][1] *= m;
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    for (int k = 0; k < n; ++k) r.values(k) = buf[k] / n;
    return r;
}

Eigen::MatrixXd lambda_sine_matrix(int ny, double y_max) {
    const int n = ny - 1;
    Eigen::MatrixXd m(n, n);
    for (int k = 0; k < n; ++k) m.col(k) = lambda_exact_sine(Eigen::VectorXd::Unit(n, k), y_max);
    return m;
}

Eigen::MatrixXd lambda_periodic_matrix(int n, double period) {
    Eigen::MatrixXd m(n, n);
    for (int k = 0; k < n; ++k)
        m.col(k) = lambda_exact_periodic(Eigen::VectorXd::Unit(n, k), period).values;
    return m;
}

void write_spectrum_csv(std::ostream& os, const SpectralSolution& sol) {
    os << std::setprecision(17) << "xi,z,re_wp,im_wp,re_wm,im_wm\n";
    for (std::size_t k = 0; k < sol.xi.size(); ++k)
        for (std::size_t m = 0; m < sol.z_nodes.size(); ++m) {
            const auto i = static_cast<Eigen::Index>(k);
            const auto j = static_cast<Eigen::Index>(m);
            os << sol.xi[k] << ',' << sol.z_nodes[m] << ',' << sol.w_plus(i, j).real() << ','
               << sol.w_plus(i, j).imag() << ',' << sol.w_minus(i, j).real() << ','
               << sol.w_minus(i, j).imag() << '\n';
        }
}

void write_spectrum_csv(const std::string& path, const SpectralSolution& sol) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_spectrum_csv(os, sol);
}

}  // namespace eqlayer
