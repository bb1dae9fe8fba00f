#include "stefan/reference_fd.hpp"
#include "stefan/errors.hpp"
#include "stefan/hodograph.hpp"

#include <algorithm>
#include <cmath>

namespace stefan {

namespace {

// Thomas algorithm for a constant-coefficient tridiagonal system with
// identity rows at both ends (Dirichlet).
struct Tridiag {
    std::vector<double> lower, diag, upper, cp, dp;
    void solve(std::vector<double>& rhs)
    {
        const std::size_t n = diag.size();
        cp[0] = upper[0] / diag[0];
        dp[0] = rhs[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / m;
            dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
        }
        rhs[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            rhs[i] = dp[i] - cp[i] * rhs[i + 1];
    }
};

} // namespace

void validate(const FdConfig& fd)
{
    if (fd.ny < 16)
        throw config_error("FdConfig: ny must be at least 16");
    if (!(fd.depth > 0.0) || !(fd.dt > 0.0))
        throw config_error("FdConfig: depth and dt must be positive");
    if (fd.theta_scheme < 0.0 || fd.theta_scheme > 1.0)
        throw config_error("FdConfig: theta_scheme must lie in [0,1]");
    if (fd.theta_scheme < 0.5) {
        const double lam = fd.dt * static_cast<double>(fd.ny) * static_cast<double>(fd.ny) /
                           (fd.depth * fd.depth);
        if ((1.0 - 2.0 * fd.theta_scheme) * lam > 0.5)
            throw config_error("FdConfig: explicit diffusion unstable; reduce dt or raise theta_scheme");
    }
}

FdResult fd_solve(const ProblemSpec& spec, const FdConfig& fd, double t_end,
                  std::span<const double> snapshot_times)
{
    validate_structure(spec);
    validate(fd);
    if (!(t_end > fd.dt))
        throw config_error("fd_solve: t_end shorter than one step");

    const double b1 = spec.beta1;
    const double b2 = spec.beta2;
    const double L = fd.depth;
    const std::size_t m = static_cast<std::size_t>(fd.ny);
    const double dy = L / static_cast<double>(m);
    const double dt = fd.dt;
    const double th = fd.theta_scheme;
    const double lam = dt / (dy * dy);
    const double c_frozen = -(1.0 + b2) / (b2 * b2);

    std::vector<double> y(m + 1);
    std::vector<double> psi(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        y[j] = -L + dy * static_cast<double>(j);
        psi[j] = profile_psi_at(spec.profile, y[j] + spec.profile.b_bar);
    }
    psi[0] = b1;
    psi[m] = b2;

    auto flux = [&](const std::vector<double>& p) {
        return (3.0 * p[m] - 4.0 * p[m - 1] + p[m - 2]) / (2.0 * dy);
    };
    auto zdot_of = [&](double nu_c, double s_abs) {
        if (spec.law == BoundaryLaw::frozen_h)
            return c_frozen * nu_c;
        const double tt = profile_theta_at(*spec.physical, s_abs);
        if (tt == 0.0)
            throw singular_transform_error("theta0 vanishes at the front position", s_abs, s_abs);
        return -nu_c / (b2 * tt) - nu_c / b2;
    };

    Tridiag tri;
    tri.lower.assign(m + 1, -th * lam);
    tri.diag.assign(m + 1, 1.0 + 2.0 * th * lam);
    tri.upper.assign(m + 1, -th * lam);
    tri.lower[0] = 0.0;
    tri.diag[0] = 1.0;
    tri.upper[0] = 0.0;
    tri.lower[m] = 0.0;
    tri.diag[m] = 1.0;
    tri.upper[m] = 0.0;
    tri.cp.resize(m + 1);
    tri.dp.resize(m + 1);

    const std::size_t n = static_cast<std::size_t>(std::llround(t_end / dt));
    FdResult out;
    auto& tr = out.traj;
    tr.times.resize(n + 1);
    tr.nu.resize(n + 1);
    tr.zbar.resize(n + 1);
    tr.s.resize(n + 1);
    tr.picard_iters.assign(n + 1, 0);
    tr.times[0] = 0.0;
    tr.nu[0] = flux(psi);
    tr.zbar[0] = spec.profile.b_bar;
    tr.s[0] = spec.b;
    double zoff = 0.0, soff = 0.0;

    std::vector<double> rhs(m + 1);
    std::vector<double> want(snapshot_times.begin(), snapshot_times.end());
    std::sort(want.begin(), want.end());
    std::size_t want_idx = 0;
    auto maybe_snapshot = [&](double t_now) {
        while (want_idx < want.size() && want[want_idx] <= t_now + 0.5 * dt) {
            FieldSnapshot s2;
            s2.t = t_now;
            s2.z.resize(m + 1);
            s2.psi = psi;
            for (std::size_t j = 0; j <= m; ++j)
                s2.z[j] = y[j] + spec.profile.b_bar + zoff;
            out.snapshots.push_back(std::move(s2));
            ++want_idx;
        }
    };
    maybe_snapshot(0.0);

    for (std::size_t i = 1; i <= n; ++i) {
        const double nu_c = flux(psi);
        const double zdot = zdot_of(nu_c, spec.b + soff);

        // explicit advection zdot * psi_y, upwind-biased second order; the
        // characteristic speed is -zdot, so zdot < 0 transports toward y = 0
        for (std::size_t j = 1; j < m; ++j) {
            double adv;
            if (zdot <= 0.0) {
                adv = (j >= 2) ? zdot * (3.0 * psi[j] - 4.0 * psi[j - 1] + psi[j - 2]) / (2.0 * dy)
                               : zdot * (psi[j + 1] - psi[j - 1]) / (2.0 * dy);
            } else {
                adv = (j + 2 <= m) ? zdot * (-3.0 * psi[j] + 4.0 * psi[j + 1] - psi[j + 2]) / (2.0 * dy)
                                   : zdot * (psi[j + 1] - psi[j - 1]) / (2.0 * dy);
            }
            const double diff_explicit = (1.0 - th) * lam * (psi[j + 1] - 2.0 * psi[j] + psi[j - 1]);
            rhs[j] = psi[j] + dt * adv + diff_explicit;
        }
        rhs[0] = b1;
        rhs[m] = b2;
        tri.solve(rhs);
        psi.swap(rhs);
        psi[0] = b1;
        psi[m] = b2;

        const double t_now = static_cast<double>(i) * dt;
        const double nu_n = flux(psi);
        soff += -0.5 * dt * (nu_c + nu_n) / b2;
        if (spec.law == BoundaryLaw::frozen_h) {
            zoff += c_frozen * 0.5 * dt * (nu_c + nu_n);
        } else {
            const double dh = z_from_x(*spec.physical, spec.b + soff, spec.b);
            zoff = dh + soff;
        }
        tr.times[i] = t_now;
        tr.nu[i] = nu_n;
        tr.zbar[i] = spec.profile.b_bar + zoff;
        tr.s[i] = spec.b + soff;
        maybe_snapshot(t_now);
    }
    return out;
}

TrajectoryComparison compare_trajectories(const FreeBoundaryTrajectory& a,
                                          const FreeBoundaryTrajectory& b)
{
    if (a.times.empty() || b.times.empty())
        throw usage_error("compare_trajectories: empty trajectory");
    const double lo = std::max(a.times.front(), b.times.front());
    const double hi = std::min(a.times.back(), b.times.back());
    if (!(lo <= hi))
        throw usage_error("compare_trajectories: time ranges do not overlap");

    std::vector<double> nodes;
    for (double t : a.times)
        if (t >= lo && t <= hi)
            nodes.push_back(t);
    for (double t : b.times)
        if (t >= lo && t <= hi)
            nodes.push_back(t);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    auto interp = [](const FreeBoundaryTrajectory& tr, const std::vector<double>& col, double t) {
        auto it = std::upper_bound(tr.times.begin(), tr.times.end(), t);
        if (it == tr.times.begin())
            return col.front();
        if (it == tr.times.end())
            return col.back();
        const std::size_t j = static_cast<std::size_t>(it - tr.times.begin()) - 1;
        const double u = (t - tr.times[j]) / (tr.times[j + 1] - tr.times[j]);
        return col[j] + u * (col[j + 1] - col[j]);
    };

    TrajectoryComparison cmp;
    cmp.t_lo = lo;
    cmp.t_hi = hi;
    cmp.nodes = static_cast<int>(nodes.size());
    double sn = 0.0, sz = 0.0, ss = 0.0;
    for (double t : nodes) {
        const double dn = std::fabs(interp(a, a.nu, t) - interp(b, b.nu, t));
        const double dz = std::fabs(interp(a, a.zbar, t) - interp(b, b.zbar, t));
        const double ds = std::fabs(interp(a, a.s, t) - interp(b, b.s, t));
        cmp.sup_nu = std::max(cmp.sup_nu, dn);
        cmp.sup_zbar = std::max(cmp.sup_zbar, dz);
        cmp.sup_s = std::max(cmp.sup_s, ds);
        sn += dn;
        sz += dz;
        ss += ds;
    }
    const double inv = nodes.empty() ? 0.0 : 1.0 / static_cast<double>(nodes.size());
    cmp.mean_nu = sn * inv;
    cmp.mean_zbar = sz * inv;
    cmp.mean_s = ss * inv;
    return cmp;
}

} // namespace stefan
