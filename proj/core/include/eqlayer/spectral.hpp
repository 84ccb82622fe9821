#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace eqlayer {

using Complex = std::complex<double>;
using ModeSource = std::function<Complex(double)>;

/// Closed-form solution of dz w + (z i xi - sigma*rate*|xi|^3) w = s on [z0, z]
/// with w(z0) = w0. sigma is +1 (growing) or -1 (decaying). The Duhamel
/// integral is evaluated by adaptive Gauss-Kronrod quadrature (tolerance 1e-10).
///
/// rate = 1 reproduces exp(-i xi z^2/2) exp(+-|xi|^3 z); the diagonalized
/// system with the 1/2 factors of the (v, psi) equations has rate 1/2.
Complex mode_evolve(double xi, int sigma, Complex w0, double z, const ModeSource& source = {},
                    double rate = 1.0, double z0 = 0.0);

/// Propagator exp(-i xi (z^2 - s^2)/2 + sigma*rate*|xi|^3 (z - s)).
Complex mode_propagator(double xi, int sigma, double z, double s, double rate);

/// One half-plane problem per frequency. Sources must vanish for z >= support.
struct HalfplaneProblem {
    std::vector<double> xi;
    /// Right-hand side of the single z=0 condition cond_v*v_hat + cond_psi*psi_hat = bc_data.
    std::vector<Complex> bc_data;
    double cond_v = 0.0;
    double cond_psi = 1.0;
    std::vector<ModeSource> s_v;    ///< transformed psi-equation source per frequency (may be empty)
    std::vector<ModeSource> s_psi;  ///< transformed v-equation source per frequency (may be empty)
    double support = 0.0;
    double rate = 0.5;
    std::vector<double> z_nodes;
};

struct SpectralSolution {
    std::vector<double> xi;
    std::vector<double> z_nodes;
    Eigen::MatrixXcd w_plus;   ///< (frequency, z-node)
    Eigen::MatrixXcd w_minus;
    Eigen::MatrixXcd v_hat;
    Eigen::MatrixXcd psi_hat;  ///< also holds the xi = 0 mode, which w_+- cannot encode
};

/// Suppresses the growing mode for every frequency and propagates the
/// decaying one from the z=0 condition. Throws PreconditionError when sources
/// are given without a finite positive support or the z=0 condition is
/// degenerate for some frequency.
SpectralSolution halfplane_solve(const HalfplaneProblem& problem);

/// Real field sum_k v_hat_k(z) exp(i xi_k y) at the requested y (the caller
/// lists both xi and -xi for real data). Imaginary parts are returned as well
/// so the Hermitian symmetry can be checked.
Eigen::MatrixXcd reconstruct(const SpectralSolution& sol, const Eigen::MatrixXcd& coeffs,
                             const std::vector<double>& y);

/// Multiplier -1/|xi| on interior values of a Dirichlet line [0, y_max]
/// (odd extension, sine series with xi_k = k*pi/y_max).
Eigen::VectorXd lambda_exact_sine(const Eigen::VectorXd& interior, double y_max);

struct PeriodicLambda {
    Eigen::VectorXd values;
    double mean = 0.0;
    bool mean_flagged = false;  ///< |mean| > 1e-10; the xi = 0 mode was dropped
};

/// Multiplier -1/|xi| on a periodic line sampled at n equispaced nodes;
/// the xi = 0 mode maps to 0.
PeriodicLambda lambda_exact_periodic(const Eigen::VectorXd& values, double period);

/// Dense matrices of the two multipliers (column k = image of the k-th unit vector).
Eigen::MatrixXd lambda_sine_matrix(int ny, double y_max);
Eigen::MatrixXd lambda_periodic_matrix(int n, double period);

/// CSV rows xi,z,re_wp,im_wp,re_wm,im_wm.
void write_spectrum_csv(std::ostream& os, const SpectralSolution& sol);
void write_spectrum_csv(const std::string& path, const SpectralSolution& sol);

}  // namespace eqlayer
