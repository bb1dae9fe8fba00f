#ifndef STEFAN_CERTIFY_HPP
#define STEFAN_CERTIFY_HPP

#include "stefan/profiles.hpp"
#include "stefan/stefan_ie.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stefan {

// Contraction constants and the certified small-time existence window.
// All entries are evaluated exactly as formulas; flags carry the caveats
// (user-supplied B2, vacuous window from the e^{B1^2} factor).
struct Certificate {
    double A1 = 0.0; // ||psi0'|| / sqrt(pi)
    double M = 0.0;  // 2 A1 + 1
    double B1 = 0.0; // M B3
    double B2 = 0.0; // user-supplied pointwise kernel bound constant
    double B3 = 0.0; // (1/|beta2|)(1 + 1/|beta2|)
    double B4 = 0.0;
    double B5 = 0.0;
    double B6 = 0.0; // carries the e^{B1^2} factor; may overflow to +inf
    double B7 = 0.0;
    double B8 = 0.0; // B4 + B5 + B6 + B7
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma3 = 0.0;
    double sigma = 0.0; // min of the three
    double norm_psi0 = 0.0;
    double norm_dpsi0 = 0.0;
    std::vector<std::string> flags;
};

// Default B2 when the caller has nothing better: 1/(2 sqrt(pi) b_bar).
double default_B2(double b_bar);

// A1, M, B3, B1 from the profile norms; requires |beta2| > 1/2.
Certificate constants(const LinearizedProfile& profile, double beta2);

// B4..B8 on top of constants(); e^{B1^2} overflow yields B6 = +inf plus a flag.
Certificate bound_set(Certificate cert, const LinearizedProfile& profile, double beta1,
                      double beta2, double B2);

// sigma1 = 1/(4 B2 (|beta2| + |psi0(b_bar)|)), sigma2 = (|beta2| sqrt(pi) / (4 M B1))^2,
// sigma3 = 1/B8^2 (contraction factor sqrt(sigma) B8 < 1), sigma = min.
Certificate window(Certificate cert, double beta2, double psi0_at_bbar);

// Everything above in one call, with flag bookkeeping.
Certificate certify_profile(const LinearizedProfile& profile, double beta1, double beta2,
                            double B2);

struct ContractionStats {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    int trials_used = 0;
    double window = 0.0; // time horizon the trials ran on
    int steps = 0;
};

// Draw `trials` pairs of piecewise-linear curves inside the sup-norm ball
// ||nu|| < M on [0, min(cert.sigma, cfg.t_end)], apply the discrete operator
// once to each, and report max/mean of ||T nu - T nu_hat|| / ||nu - nu_hat||.
// Deterministic for a given seed. Requires cert.sigma > cfg.dt.
ContractionStats empirical_contraction(const ProblemSpec& spec, const SolverConfig& cfg,
                                       const Certificate& cert, int trials, std::uint64_t seed);

// Spot-check the certificate's pointwise bounds along a solver trajectory on
// the certified window. One line per bound, marked OK or VIOLATED; nothing is
// raised, because some of the printed bounds provably cannot hold pointwise
// (the kernel endpoint bound blows up like t^{-1/2} as t -> 0, and the
// boundary-position bound compares an O(1) position against an O(sigma)
// budget).
std::vector<std::string> spot_check_bounds(const ProblemSpec& spec, const SolverConfig& cfg,
                                           const Certificate& cert);

} // namespace stefan

#endif
