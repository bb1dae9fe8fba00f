#include "stefan/front_oracle.hpp"
#include "stefan/errors.hpp"

#include <cmath>
#include <string>

namespace stefan {

FrontSolution make_front(double beta1, double beta2, double b_bar)
{
    if (!(beta1 > 0.0))
        throw domain_error("make_front: beta1 must be positive");
    if (!(beta2 < 0.0))
        throw domain_error("make_front: beta2 must be negative");
    if (!(b_bar > 0.0))
        throw domain_error("make_front: b_bar must be positive");

    FrontSolution f;
    f.beta1 = beta1;
    f.beta2 = beta2;
    f.b_bar = b_bar;
    f.V = -std::log(1.0 + std::fabs(beta2) / beta1) / b_bar;
    f.nu_const = f.V * (beta1 - beta2);
    f.s_dot = (beta2 - beta1) * f.V / beta2;
    f.alpha = (beta2 - beta1) / beta2;
    return f;
}

double psi_front(const FrontSolution& f, double z, double t)
{
    const double zb = zbar_front(f, t);
    if (z > zb + 1e-12 * std::max(1.0, std::fabs(zb)))
        throw domain_error("psi_front: z is beyond the front at this time");
    return f.beta1 * (1.0 - std::exp(-f.V * (z - f.V * t)));
}

double zbar_front(const FrontSolution& f, double t)
{
    if (t < 0.0)
        throw domain_error("zbar_front: t must be nonnegative");
    return f.b_bar + f.V * t;
}

double x_front(const FrontSolution& f, double z, double t)
{
    return f.beta1 * (z + (std::exp(-f.V * (z - f.V * t)) - std::exp(f.V * f.V * t)) / f.V);
}

double consistency_residual(const FrontSolution& f)
{
    return f.beta1 + f.beta1 * f.beta2 - f.beta2;
}

} // namespace stefan
