#ifndef STEFAN_TRAJECTORY_HPP
#define STEFAN_TRAJECTORY_HPP

#include <vector>

namespace stefan {

// Time series of the free-boundary unknowns. s and zbar are stored as
// absolute positions; the solver accumulates them as offsets from b and
// b_bar internally so differences of nearby values stay exact.
struct FreeBoundaryTrajectory {
    std::vector<double> times; // 0 = t0 < t1 < ... < tN
    std::vector<double> nu;    // nu(t_i) = psi_z(zbar(t_i), t_i); nu[0] = psi0'(b_bar)
    std::vector<double> zbar;  // transformed front, zbar[0] = b_bar
    std::vector<double> s;     // physical front, s[0] = b
    std::vector<int> picard_iters;
};

// psi on a z-grid at fixed t, optionally with the parametric physical pairs.
struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> z;
    std::vector<double> psi;
    std::vector<double> x;     // empty unless parametric output requested
    std::vector<double> theta; // = psi when present
};

} // namespace stefan

#endif
