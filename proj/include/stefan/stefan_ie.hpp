#ifndef STEFAN_STEFAN_IE_HPP
#define STEFAN_STEFAN_IE_HPP

#include "stefan/profiles.hpp"
#include "stefan/trajectory.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stefan {

// How zbar is advanced from nu.
//   frozen_h: zbardot = -nu (1 + beta2) / beta2^2   (boundary temperature
//             frozen at beta2 inside h-dot; self-contained in z variables)
//   paper_h:  zbar(t) = h(s(t)) - (1/beta2) int nu, with h evaluated on the
//             initial physical datum along the moving front (needs the
//             physical profile; fails with singular_transform_error when
//             theta0 changes sign on [s(t), b])
enum class BoundaryLaw { frozen_h, paper_h };

// Source of the path velocity entering the kernel-time term and its jump:
//   frozen:   zbardot(tau) from the boundary law applied pointwise to nu(tau)
//   retarded: zbardot(tau) from discrete slopes of the stored path
enum class KtauMode { frozen, retarded };

struct ProblemSpec {
    LinearizedProfile profile;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double b = 0.0; // s(0)
    BoundaryLaw law = BoundaryLaw::frozen_h;
    std::optional<PhysicalProfile> physical; // required for paper_h
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 0.3;
    double picard_tol = 1e-12;
    int picard_max = 50;
    double z_tail = 25.0; // depth below b_bar when finite grids must stand in for the tail
    KtauMode ktau_mode = KtauMode::frozen;
};

void validate(const ProblemSpec& spec, double profile_tol = 1e-3);
void validate(const SolverConfig& cfg);

// Structural checks only (grids, prefactor, law prerequisites); solver entry
// points apply these so relaxed unit-level data can still run.
void validate_structure(const ProblemSpec& spec);

class non_convergence_error : public std::runtime_error {
public:
    non_convergence_error(const std::string& what, FreeBoundaryTrajectory partial_traj)
        : std::runtime_error(what), partial(std::move(partial_traj)) {}
    FreeBoundaryTrajectory partial;
};

// One evaluation of the flux equation at time t:
//
//   nu(t) = (1 + 1/(2 beta2))^{-1} [ (beta2 - psi0(b_bar)) K(zbar - b_bar, t)
//           + int_{-inf}^{b_bar} K(zbar - xi, t) psi0'(xi) dxi
//           - int_0^t K_z(zbar(t) - zbar(tau), t - tau) g(tau) dtau
//           - (beta2/2) zbardot(t) ],     g = nu/beta2 + beta2 zbardot.
//
// This is the boundary limit of the z-derivative of the field representation:
// the kernel-time history collapses against the initial-datum endpoint term
// (which cancels the t -> 0 singularity for compatible data) and leaves the
// zbardot layer plus its half jump. The trial pair supplies the diagonal.
double rhs_nu(const FreeBoundaryTrajectory& history, double trial_nu, double trial_zbar,
              double t, const ProblemSpec& spec, const SolverConfig& cfg);

// March the coupled system by per-step Picard iteration on (nu_n, zbar_n).
// Throws non_convergence_error (carrying the partial trajectory) when a step
// exceeds picard_max.
FreeBoundaryTrajectory solve(const ProblemSpec& spec, const SolverConfig& cfg);

// Field representation on a z-grid ending at or below zbar(t); t must be a
// trajectory node. History integrals use product integration on the
// trajectory grid refined geometrically toward the evaluation time, with the
// unresolved kernel mass added in closed form. A grid point equal to zbar(t)
// receives the interior-limit jump correction +beta2/2.
FieldSnapshot reconstruct_field(const FreeBoundaryTrajectory& traj, const ProblemSpec& spec,
                                double t, std::vector<double> z_grid, bool parametric = true);

// One application of the discrete solution operator T to a piecewise-linear
// nu-curve on the given time grid: build the boundary path by the law, then
// evaluate the rhs at every positive node. out[0] = nu[0]. Drives the
// empirical contraction diagnostics.
std::vector<double> apply_operator(const ProblemSpec& spec, const SolverConfig& cfg,
                                   std::span<const double> times, std::span<const double> nu_curve);

struct ConvergenceRow {
    double dt = 0.0;
    double sup_err = 0.0;
    double order = 0.0; // NaN where undefined (first row, equal dts)
};

// Solve per dt and tabulate sup errors on common nodes (skipping the
// 5*max(dt) startup band): against nu_ref when given, else against the
// finest run (whose own error row is NaN).
std::vector<ConvergenceRow> convergence_study(const ProblemSpec& spec, const SolverConfig& base,
                                              std::span<const double> dts,
                                              const std::function<double(double)>& nu_ref = {});

// Same study with a per-dt problem builder, for joint space-time refinement
// (regenerating a sampled profile at resolution tied to dt).
std::vector<ConvergenceRow> convergence_study_specs(
    const std::function<ProblemSpec(double)>& spec_for_dt, const SolverConfig& base,
    std::span<const double> dts, const std::function<double(double)>& nu_ref = {});

} // namespace stefan

#endif
