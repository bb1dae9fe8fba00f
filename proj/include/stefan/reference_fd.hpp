#ifndef STEFAN_REFERENCE_FD_HPP
#define STEFAN_REFERENCE_FD_HPP

#include "stefan/stefan_ie.hpp"
#include "stefan/trajectory.hpp"

#include <span>
#include <vector>

namespace stefan {

// Front-fixing finite-difference solver: y = z - zbar(t) maps the moving
// domain to [-L, 0]; psi_t = psi_yy + zbardot psi_y with psi(0) = beta2,
// psi(-L) = beta1. Shares nothing with the integral-equation path.
struct FdConfig {
    double depth = 10.0;      // L
    int ny = 400;             // grid cells (ny+1 nodes)
    double dt = 1e-4;
    double theta_scheme = 1.0; // implicit weight for the diffusion term
};

void validate(const FdConfig& fd);

struct FdResult {
    FreeBoundaryTrajectory traj;
    std::vector<FieldSnapshot> snapshots;
};

FdResult fd_solve(const ProblemSpec& spec, const FdConfig& fd, double t_end,
                  std::span<const double> snapshot_times = {});

struct TrajectoryComparison {
    double sup_nu = 0.0, mean_nu = 0.0;
    double sup_zbar = 0.0, mean_zbar = 0.0;
    double sup_s = 0.0, mean_s = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int nodes = 0;
};

// Linear interpolation onto the merged node set of the overlapping time
// range; throws usage_error when the ranges are disjoint.
TrajectoryComparison compare_trajectories(const FreeBoundaryTrajectory& a,
                                          const FreeBoundaryTrajectory& b);

} // namespace stefan

#endif
