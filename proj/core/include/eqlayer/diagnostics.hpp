#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eqlayer/domain.hpp"
#include "eqlayer/field.hpp"

namespace eqlayer {

struct EnergyProfile {
    std::vector<double> z;
    std::vector<double> E;       ///< int v psi dy per slice
    std::vector<double> dE_fd;   ///< centred z-differences, one-sided at the ends
    std::vector<double> dE_rhs;  ///< 1/2 int |dyy psi|^2 + |dy v|^2 (+ int v^2 + psi^2 with zero-order terms)
    std::vector<double> dE_flux; ///< y=0 boundary terms and source pairing; zero unless a spec is given
};

/// E(z) and both sides of its derivative identity for homogeneous data.
EnergyProfile energy_profile(const StatePair& u, bool zero_order);

/// As above, with the boundary flux of nonhomogeneous y=0 data and sources:
/// z V Psi + 1/2 V dy v(0) - 1/2 Psi dy^3 psi(0) + 1/2 Upsilon dyy psi(0) + int s_psi psi + s_v v.
EnergyProfile energy_profile(const StatePair& u, const ProblemSpec& spec);

/// Q(z) = int v^W psi^V dy; dE_rhs holds the symmetric bilinear integrand, so
/// q_profile(u, u) equals energy_profile(u, .).
EnergyProfile q_profile(const StatePair& uV, const StatePair& uW, bool zero_order);

/// Relative L2 mismatch of dE_fd against dE_rhs + dE_flux over interior
/// slices (first and last level excluded) with index range [from, to).
double energy_mismatch(const EnergyProfile& p, std::size_t from = 1, std::size_t to = 0);

struct CaccioppoliReport {
    double lhs = 0.0;        ///< int over (y0, Ymax) x (z0, z1) of |dy^4 psi|^2 + |dy^3 v|^2
    double energy = 0.0;     ///< ||u||_E0^2
    double source = 0.0;     ///< weighted-L2 surrogate of the dual norm of dyy s
    double ratio = 0.0;      ///< lhs / (energy + source), 0 when both vanish
};

/// Throws PreconditionError when y0 < 4 hy.
CaccioppoliReport caccioppoli_check(const StatePair& u, const ProblemSpec& spec, double y0, double z1);

/// CSV rows z,E,dE_fd,dE_rhs,dE_flux.
void write_energy_csv(std::ostream& os, const EnergyProfile& p);
void write_energy_csv(const std::string& path, const EnergyProfile& p);

}  // namespace eqlayer
