#ifndef STEFAN_PROFILES_HPP
#define STEFAN_PROFILES_HPP

#include <string>
#include <vector>

namespace stefan {

// Initial temperature theta0(x) on [x_min, b], with theta0 -> beta1 as x -> -inf.
struct PhysicalProfile {
    std::vector<double> x;     // strictly increasing, last node = b
    std::vector<double> theta; // theta0 samples
    double beta1 = 0.0;        // left asymptote, > 0
    double beta2 = 0.0;        // theta0(b), < 0
    double b = 0.0;            // right endpoint
};

// Transformed initial datum psi0(z) on [z_min, b_bar], constant beta1 tail below z_min.
struct LinearizedProfile {
    std::vector<double> z;    // strictly increasing, last node = b_bar
    std::vector<double> psi;  // psi0 samples
    std::vector<double> dpsi; // psi0' samples
    double beta1 = 0.0;
    double beta2 = 0.0;
    double b_bar = 0.0;
};

// Endpoint / consistency checks. Throws domain_error describing the first
// violation. deriv_rel_tol bounds the mismatch between dpsi and centered
// differences of psi (plus a small absolute floor for near-zero slopes).
void validate_physical(const PhysicalProfile& p, double profile_tol = 1e-3);
void validate_linearized(const LinearizedProfile& p, double profile_tol = 1e-3,
                         double deriv_rel_tol = 5e-2);

// Traveling-front initial datum psi0 = beta1 (1 - e^{-V z}) sampled with
// spacing ~h on [z_min, b_bar]; V from the front speed relation.
LinearizedProfile sample_front_profile(double beta1, double beta2, double b_bar,
                                       double z_min, double h);

// Smooth non-front datum: cosine ramp from beta1 at z=left to beta2 at
// z=b_bar, constant beta1 for z < left. psi0'(left) = psi0'(b_bar) = 0.
LinearizedProfile sample_cosine_profile(double beta1, double beta2, double left,
                                        double b_bar, double z_min, double h);

// Piecewise-linear evaluation with constant tails.
double profile_psi_at(const LinearizedProfile& p, double z);
double profile_dpsi_at(const LinearizedProfile& p, double z);
double profile_theta_at(const PhysicalProfile& p, double x);

} // namespace stefan

#endif
