#include "stefan/profiles.hpp"
#include "stefan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stefan {

namespace {

void require_increasing(const std::vector<double>& g, const char* name)
{
    if (g.size() < 2)
        throw domain_error(std::string(name) + ": need at least two nodes");
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        if (!(g[i] < g[i + 1]))
            throw domain_error(std::string(name) + ": grid not strictly increasing at index " + std::to_string(i));
}

double interp_with_tails(const std::vector<double>& g, const std::vector<double>& v,
                         double q, double left_tail, double right_tail)
{
    if (q <= g.front())
        return left_tail;
    if (q >= g.back())
        return right_tail;
    auto it = std::upper_bound(g.begin(), g.end(), q);
    const std::size_t j = static_cast<std::size_t>(it - g.begin()) - 1;
    const double u = (q - g[j]) / (g[j + 1] - g[j]);
    return v[j] + u * (v[j + 1] - v[j]);
}

} // namespace

void validate_physical(const PhysicalProfile& p, double profile_tol)
{
    require_increasing(p.x, "PhysicalProfile.x");
    if (p.theta.size() != p.x.size())
        throw domain_error("PhysicalProfile: theta/x length mismatch");
    if (!(p.beta1 > 0.0) || !(p.beta2 < 0.0))
        throw domain_error("PhysicalProfile: need beta1 > 0 > beta2");
    if (std::fabs(p.x.back() - p.b) > profile_tol)
        throw domain_error("PhysicalProfile: grid does not end at b");
    if (std::fabs(p.theta.back() - p.beta2) > profile_tol)
        throw domain_error("PhysicalProfile: theta(b) != beta2 beyond tolerance");
    if (std::fabs(p.theta.front() - p.beta1) > profile_tol)
        throw domain_error("PhysicalProfile: left edge does not approximate beta1");
}

void validate_linearized(const LinearizedProfile& p, double profile_tol, double deriv_rel_tol)
{
    require_increasing(p.z, "LinearizedProfile.z");
    if (p.psi.size() != p.z.size() || p.dpsi.size() != p.z.size())
        throw domain_error("LinearizedProfile: psi/dpsi/z length mismatch");
    if (!(p.beta1 > 0.0) || !(p.beta2 < 0.0))
        throw domain_error("LinearizedProfile: need beta1 > 0 > beta2");
    if (std::fabs(p.z.back() - p.b_bar) > profile_tol)
        throw domain_error("LinearizedProfile: grid does not end at b_bar");
    if (std::fabs(p.psi.back() - p.beta2) > profile_tol)
        throw domain_error("LinearizedProfile: psi(b_bar) != beta2 beyond tolerance");
    if (std::fabs(p.psi.front() - p.beta1) > profile_tol)
        throw domain_error("LinearizedProfile: left edge does not approximate beta1");
    if (std::fabs(p.dpsi.front()) > profile_tol)
        throw domain_error("LinearizedProfile: dpsi at left edge not near 0");

    double sup_d = 0.0;
    for (double d : p.dpsi)
        sup_d = std::max(sup_d, std::fabs(d));
    for (std::size_t i = 1; i + 1 < p.z.size(); ++i) {
        const double cd = (p.psi[i + 1] - p.psi[i - 1]) / (p.z[i + 1] - p.z[i - 1]);
        const double tol = deriv_rel_tol * std::max(1.0, sup_d);
        if (std::fabs(cd - p.dpsi[i]) > tol)
            throw domain_error("LinearizedProfile: dpsi inconsistent with centered differences at index " +
                               std::to_string(i));
    }
}

LinearizedProfile sample_front_profile(double beta1, double beta2, double b_bar,
                                       double z_min, double h)
{
    if (!(beta1 > 0.0) || !(beta2 < 0.0) || !(b_bar > 0.0))
        throw domain_error("sample_front_profile: need beta1 > 0 > beta2 and b_bar > 0");
    if (!(z_min < b_bar) || !(h > 0.0))
        throw domain_error("sample_front_profile: bad grid parameters");
    const double V = -std::log(1.0 + std::fabs(beta2) / beta1) / b_bar;
    const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((b_bar - z_min) / h)) + 1);
    LinearizedProfile p;
    p.beta1 = beta1;
    p.beta2 = beta2;
    p.b_bar = b_bar;
    p.z.resize(n);
    p.psi.resize(n);
    p.dpsi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = z_min + (b_bar - z_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        p.z[i] = (i + 1 == n) ? b_bar : z;
        p.psi[i] = beta1 * (1.0 - std::exp(-V * p.z[i]));
        p.dpsi[i] = beta1 * V * std::exp(-V * p.z[i]);
    }
    return p;
}

LinearizedProfile sample_cosine_profile(double beta1, double beta2, double left,
                                        double b_bar, double z_min, double h)
{
    if (!(beta1 > 0.0) || !(beta2 < 0.0) || !(left < b_bar))
        throw domain_error("sample_cosine_profile: bad parameters");
    if (!(z_min <= left) || !(h > 0.0))
        throw domain_error("sample_cosine_profile: grid must start at or below the ramp");
    const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil((b_bar - z_min) / h)) + 1);
    LinearizedProfile p;
    p.beta1 = beta1;
    p.beta2 = beta2;
    p.b_bar = b_bar;
    p.z.resize(n);
    p.psi.resize(n);
    p.dpsi.resize(n);
    const double span = b_bar - left;
    for (std::size_t i = 0; i < n; ++i) {
        double z = z_min + (b_bar - z_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        if (i + 1 == n)
            z = b_bar;
        p.z[i] = z;
        if (z <= left) {
            p.psi[i] = beta1;
            p.dpsi[i] = 0.0;
        } else {
            const double u = (z - left) / span;
            p.psi[i] = beta1 + (beta2 - beta1) * 0.5 * (1.0 - std::cos(M_PI * u));
            p.dpsi[i] = (beta2 - beta1) * 0.5 * (M_PI / span) * std::sin(M_PI * u);
        }
    }
    return p;
}

double profile_psi_at(const LinearizedProfile& p, double z)
{
    return interp_with_tails(p.z, p.psi, z, p.beta1, p.psi.back());
}

double profile_dpsi_at(const LinearizedProfile& p, double z)
{
    return interp_with_tails(p.z, p.dpsi, z, 0.0, p.dpsi.back());
}

double profile_theta_at(const PhysicalProfile& p, double x)
{
    return interp_with_tails(p.x, p.theta, x, p.beta1, p.theta.back());
}

} // namespace stefan
