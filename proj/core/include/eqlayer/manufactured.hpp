#pragma once

#include "eqlayer/domain.hpp"
#include "eqlayer/field.hpp"

namespace eqlayer {

/// k-th derivative of y^n exp(-y).
double poly_exp_derivative(int n, int k, double y);

/// u* = (y^2 e^-y z e^-z, y^3 e^-y z^2 e^-z). Both traces and d_y psi vanish
/// at y=0, and psi vanishes at z=0.
double manufactured_v(double y, double z);
double manufactured_psi(double y, double z);

/// Sources with L u* = (s_psi, s_v), differentiated in closed form.
double manufactured_s_psi(double y, double z, bool zero_order, bool transport = true);
double manufactured_s_v(double y, double z, bool zero_order, bool transport = true);

StatePair manufactured_state(const Grid& grid);

/// Spec whose exact solution is u*: sources, top traces and (UpperStrip) v_H
/// are set from u*. The Strip top operator is taken from `lambda`.
ProblemSpec manufactured_spec(const DomainCase& domain, int ny, int nz, bool zero_order,
                              LambdaChoice lambda = LambdaChoice::zero());

}  // namespace eqlayer
