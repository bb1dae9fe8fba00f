#ifndef STEFAN_HODOGRAPH_HPP
#define STEFAN_HODOGRAPH_HPP

#include "stefan/profiles.hpp"
#include "stefan/trajectory.hpp"

#include <span>
#include <utility>
#include <vector>

namespace stefan {

// Dictionary between physical (x, theta) and linearized (z, psi) variables.
//
// z(x) = integral of 1/theta0 from a finite anchor (the -inf lower limit of
// the textbook definition diverges because 1/theta0 -> 1/beta1 != 0). All
// transforms require theta0 to keep one strict sign on the integration path
// and raise singular_transform_error naming the offending subinterval
// otherwise. theta0 is extended by the constant beta1 below the sample grid.

double z_from_x(const PhysicalProfile& profile, double x, double anchor);

// Numerical inverse of z_from_x on the same quadrature rule; exact at grid
// images, monotone in between.
double x_from_z(const PhysicalProfile& profile, double z, double anchor);

// h(s) = int_0^s dx'/theta0(x').
double h_of_s(const PhysicalProfile& profile, double s);

// Image of the whole profile: z-grid = z(x-grid), psi = theta pointwise,
// dpsi = theta0' * theta0 (chain rule through dz/dx = 1/theta).
LinearizedProfile transform_profile(const PhysicalProfile& profile, double anchor);

// Parametric physical curve (x(z), theta(z)) from a field snapshot,
// anchored at the free boundary: x(zbar) = s(t). x need not be monotone;
// dx/dz = psi vanishes on the psi = 0 level set.
std::vector<std::pair<double, double>> x_from_z_parametric(const FieldSnapshot& snapshot,
                                                           double s_at_t, double zbar_at_t);

// max |psi_t - psi_zz| over interior nodes by centered differences; a
// consistency diagnostic for reconstructed fields. Snapshots must share a
// z-grid and be uniformly spaced in time.
double compatibility_residual(std::span<const FieldSnapshot> snapshots);

} // namespace stefan

#endif
