#ifndef STEFAN_FRONT_ORACLE_HPP
#define STEFAN_FRONT_ORACLE_HPP

namespace stefan {

// Exact traveling front psi(z,t) = beta1 (1 - e^{-V (z - V t)}), V < 0.
// The boundary zbar(t) = b_bar + V t carries psi = beta2 and constant flux
// nu = psi_z(zbar, t); this is the closed-form oracle for all solver tests.
struct FrontSolution {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double b_bar = 0.0;
    double V = 0.0;        // front speed in z, < 0
    double nu_const = 0.0; // V (beta1 - beta2)
    double s_dot = 0.0;    // physical front speed (beta2 - beta1) V / beta2
    double alpha = 0.0;    // s_dot / V = (beta2 - beta1)/beta2 > 1
};

FrontSolution make_front(double beta1, double beta2, double b_bar);

double psi_front(const FrontSolution& f, double z, double t);
double zbar_front(const FrontSolution& f, double t);

// x(z,t) = int_0^z psi dz' = beta1 [ z + (e^{-V(z - V t)} - e^{V^2 t}) / V ]
double x_front(const FrontSolution& f, double z, double t);

// r = beta1 + beta1 beta2 - beta2. The front satisfies the physical-space
// kinematic chain sdot = psi(zbar) zbardot + psi_z(zbar) together with the
// flux law exactly when r = 0 (e.g. beta2 = beta1/(1 - beta1)). Reported,
// never raised.
double consistency_residual(const FrontSolution& f);

} // namespace stefan

#endif
