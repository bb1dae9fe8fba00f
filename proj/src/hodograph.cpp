#include "stefan/hodograph.hpp"
#include "stefan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stefan {

namespace {

double theta_with_tails(const PhysicalProfile& p, double x)
{
    return profile_theta_at(p, x);
}

void check_same_sign(double ref, double val, double lo, double hi)
{
    if (val == 0.0 || (ref > 0.0) != (val > 0.0))
        throw singular_transform_error(
            "theta0 vanishes or changes sign on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
            lo, hi);
}

// Trapezoid of 1/theta0 over [lo, hi] (lo <= hi) using the sample grid,
// partial end cells interpolated, constant tails outside the grid.
double integrate_inv_theta(const PhysicalProfile& p, double lo, double hi)
{
    if (lo == hi)
        return 0.0;
    std::vector<double> xs;
    xs.push_back(lo);
    for (double xi : p.x)
        if (xi > lo && xi < hi)
            xs.push_back(xi);
    xs.push_back(hi);

    double acc = 0.0;
    double th_prev = theta_with_tails(p, xs[0]);
    const double ref = th_prev;
    if (ref == 0.0)
        throw singular_transform_error("theta0 vanishes at the start of the path", lo, hi);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double th = theta_with_tails(p, xs[i]);
        check_same_sign(ref, th, xs[i - 1], xs[i]);
        acc += 0.5 * (xs[i] - xs[i - 1]) * (1.0 / th_prev + 1.0 / th);
        th_prev = th;
    }
    return acc;
}

// z-images of all grid nodes relative to the anchor.
std::vector<double> node_images(const PhysicalProfile& p, double anchor)
{
    std::vector<double> cum(p.x.size(), 0.0);
    const double ref = p.theta.front() != 0.0 ? p.theta.front() : 1.0;
    for (std::size_t i = 0; i + 1 < p.x.size(); ++i) {
        check_same_sign(ref, p.theta[i], p.x[i], p.x[i + 1]);
        check_same_sign(ref, p.theta[i + 1], p.x[i], p.x[i + 1]);
        cum[i + 1] = cum[i] + 0.5 * (p.x[i + 1] - p.x[i]) * (1.0 / p.theta[i] + 1.0 / p.theta[i + 1]);
    }
    double z_anchor;
    if (anchor <= p.x.front())
        z_anchor = (anchor - p.x.front()) / p.beta1;
    else if (anchor >= p.x.back())
        z_anchor = cum.back() + integrate_inv_theta(p, p.x.back(), anchor);
    else
        z_anchor = integrate_inv_theta(p, p.x.front(), anchor);
    for (double& c : cum)
        c -= z_anchor;
    return cum;
}

// Three-point first derivative on a possibly nonuniform grid.
std::vector<double> derivative_3pt(const std::vector<double>& x, const std::vector<double>& f)
{
    const std::size_t n = x.size();
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x[i] - x[i - 1];
        const double hr = x[i + 1] - x[i];
        d[i] = (f[i + 1] * hl * hl - f[i - 1] * hr * hr + f[i] * (hr * hr - hl * hl)) /
               (hl * hr * (hl + hr));
    }
    {
        const double h1 = x[1] - x[0], h2 = x[2] - x[1];
        d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
               h1 / (h2 * (h1 + h2)) * f[2];
    }
    {
        const double h1 = x[n - 1] - x[n - 2], h2 = x[n - 2] - x[n - 3];
        d[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[n - 1] - (h1 + h2) / (h1 * h2) * f[n - 2] +
                   h1 / (h2 * (h1 + h2)) * f[n - 3];
    }
    return d;
}

} // namespace

double z_from_x(const PhysicalProfile& profile, double x, double anchor)
{
    if (x >= anchor)
        return integrate_inv_theta(profile, anchor, x);
    return -integrate_inv_theta(profile, x, anchor);
}

double x_from_z(const PhysicalProfile& profile, double z, double anchor)
{
    const std::vector<double> zs = node_images(profile, anchor);
    if (z <= zs.front())
        return profile.x.front() + (z - zs.front()) * profile.beta1;
    if (z >= zs.back())
        return profile.x.back() + (z - zs.back()) * profile.theta.back();
    auto it = std::upper_bound(zs.begin(), zs.end(), z);
    const std::size_t j = static_cast<std::size_t>(it - zs.begin()) - 1;
    const double x0 = profile.x[j], x1 = profile.x[j + 1];
    const double th0 = profile.theta[j];
    const double m = (profile.theta[j + 1] - th0) / (x1 - x0);
    const double target = z - zs[j];
    // solve 0.5 d (1/th0 + 1/(th0 + m d)) = target for d by Newton
    double d = target * th0;
    for (int it2 = 0; it2 < 50; ++it2) {
        const double th = th0 + m * d;
        const double F = 0.5 * d * (1.0 / th0 + 1.0 / th) - target;
        const double dF = 0.5 * (1.0 / th0 + 1.0 / th) - 0.5 * d * m / (th * th);
        const double step = F / dF;
        d -= step;
        if (std::fabs(step) <= 1e-15 * (std::fabs(d) + 1.0))
            break;
    }
    return x0 + d;
}

double h_of_s(const PhysicalProfile& profile, double s)
{
    return z_from_x(profile, s, 0.0);
}

LinearizedProfile transform_profile(const PhysicalProfile& profile, double anchor)
{
    LinearizedProfile out;
    out.z = node_images(profile, anchor);
    out.psi = profile.theta;
    const std::vector<double> dtheta = derivative_3pt(profile.x, profile.theta);
    out.dpsi.resize(profile.x.size());
    for (std::size_t i = 0; i < profile.x.size(); ++i)
        out.dpsi[i] = dtheta[i] * profile.theta[i]; // dpsi/dz = theta0' * theta0
    out.beta1 = profile.beta1;
    out.beta2 = profile.beta2;
    out.b_bar = out.z.back();
    return out;
}

std::vector<std::pair<double, double>> x_from_z_parametric(const FieldSnapshot& snapshot,
                                                           double s_at_t, double zbar_at_t)
{
    const std::size_t n = snapshot.z.size();
    if (n < 2 || snapshot.psi.size() != n)
        throw usage_error("x_from_z_parametric: malformed snapshot");
    if (std::fabs(snapshot.z.back() - zbar_at_t) > 1e-9 * std::max(1.0, std::fabs(zbar_at_t)))
        throw usage_error("x_from_z_parametric: snapshot grid does not end at zbar(t)");

    std::vector<std::pair<double, double>> out(n);
    double x = s_at_t;
    out[n - 1] = {x, snapshot.psi[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        x -= 0.5 * (snapshot.psi[i] + snapshot.psi[i + 1]) * (snapshot.z[i + 1] - snapshot.z[i]);
        out[i] = {x, snapshot.psi[i]};
    }
    return out;
}

double compatibility_residual(std::span<const FieldSnapshot> snapshots)
{
    if (snapshots.size() < 3)
        throw usage_error("compatibility_residual: need at least three snapshots");
    const std::vector<double>& zg = snapshots[0].z;
    const double dt0 = snapshots[1].t - snapshots[0].t;
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        if (snapshots[k].z.size() != zg.size())
            throw usage_error("compatibility_residual: snapshot grids differ");
        for (std::size_t j = 0; j < zg.size(); ++j)
            if (std::fabs(snapshots[k].z[j] - zg[j]) > 1e-12 * std::max(1.0, std::fabs(zg[j])))
                throw usage_error("compatibility_residual: snapshot grids differ");
        if (k > 0) {
            const double dt = snapshots[k].t - snapshots[k - 1].t;
            if (std::fabs(dt - dt0) > 1e-12 * std::max(1.0, std::fabs(dt0)))
                throw usage_error("compatibility_residual: snapshots not uniformly spaced in time");
        }
    }

    double res = 0.0;
    for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
        for (std::size_t j = 1; j + 1 < zg.size(); ++j) {
            const double hl = zg[j] - zg[j - 1];
            const double hr = zg[j + 1] - zg[j];
            // difference-first form: exactly zero for constant fields
            const double dr = (snapshots[k].psi[j + 1] - snapshots[k].psi[j]) / hr;
            const double dl = (snapshots[k].psi[j] - snapshots[k].psi[j - 1]) / hl;
            const double psi_zz = 2.0 * (dr - dl) / (hl + hr);
            const double psi_t = (snapshots[k + 1].psi[j] - snapshots[k - 1].psi[j]) / (2.0 * dt0);
            res = std::max(res, std::fabs(psi_t - psi_zz));
        }
    }
    return res;
}

} // namespace stefan
