#ifndef STEFAN_KERNEL_HPP
#define STEFAN_KERNEL_HPP

#include <span>
#include <vector>

namespace stefan {

// Heat kernel K(z,t) = exp(-z^2/(4t)) / (2 sqrt(pi t)) and its derivatives.
//
// Exponents below -745 underflow to exactly 0 instead of producing subnormal
// noise that would later be multiplied by large polynomial prefactors.

double eval_K(double z, double t);    // K
double eval_K_z(double z, double t);  // dK/dz = -z/(2t) K
double eval_K_t(double z, double t);  // dK/dt = (z^2/(4t^2) - 1/(2t)) K

// int_{-inf}^{a} K(z - xi, t) dxi = erfc((z-a)/(2 sqrt t)) / 2
double layer_mass(double a, double z, double t);

// int_0^s K(w,u) du and int_0^s (w/(2u)) K(w,u) du in closed form.
// The second is the running mass of the dipole kernel; it tends to
// sign(w)/2 as s grows, which is the layer-potential jump.
double kernel_time_mass(double w, double s);
double dipole_time_mass(double w, double s);

// Segment-exact convolution of piecewise-linear samples f on z_grid against
// K(z - xi, t): per segment the Gaussian is integrated in closed form
// (layer masses and first moments), with a constant tail_value continuing f
// below the grid and nothing above it. Segments outside the kernel support
// are skipped.
double gauss_conv_pwlinear(std::span<const double> z_grid, std::span<const double> f,
                           double tail_value, double z, double t);

// Product-integration weights for the weakly singular history integral
//   int_0^T f(tau) (T - tau)^(-1/2) dtau  ~=  sum_i w_i f(grid_i),
// exact for piecewise-linear f on the grid. The grid must be strictly
// increasing, start at 0 and end at or before T.
std::vector<double> singular_weights(std::span<const double> grid, double T);

struct SingularWeightRow {
    std::vector<double> t_grid;
    double target_t = 0.0;
    std::vector<double> weights; // one per grid node; zero past target_t
};

// Row of weights with target_t required to be a node of t_grid.
SingularWeightRow abel_row(std::vector<double> t_grid, double target_t);

} // namespace stefan

#endif
