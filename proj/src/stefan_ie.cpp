#include "stefan/stefan_ie.hpp"
#include "stefan/errors.hpp"
#include "stefan/hodograph.hpp"
#include "stefan/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stefan {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

struct EngineConsts {
    const ProblemSpec* spec = nullptr;
    const SolverConfig* cfg = nullptr;
    double b2 = 0.0;
    double pref = 0.0;     // (1 + 1/(2 beta2))^{-1}
    double c_frozen = 0.0; // zbardot = c_frozen * nu under frozen_h
    double compat = 0.0;   // beta2 - psi0(b_bar)
    double b_bar = 0.0;
    double dpsi0_bbar = 0.0;
};

EngineConsts make_consts(const ProblemSpec& spec, const SolverConfig& cfg)
{
    EngineConsts c;
    c.spec = &spec;
    c.cfg = &cfg;
    c.b2 = spec.beta2;
    const double p = 1.0 + 1.0 / (2.0 * c.b2);
    if (std::fabs(p) < 1e-6)
        throw degenerate_prefactor_error("flux equation prefactor 1 + 1/(2 beta2) is singular");
    c.pref = 1.0 / p;
    c.c_frozen = -(1.0 + c.b2) / (c.b2 * c.b2);
    c.compat = c.b2 - spec.profile.psi.back();
    c.b_bar = spec.profile.b_bar;
    c.dpsi0_bbar = spec.profile.dpsi.back();
    return c;
}

// Pointwise boundary-law velocity at a node.
double law_zdot(const EngineConsts& c, double nu_j, double s_abs)
{
    if (c.spec->law == BoundaryLaw::frozen_h)
        return c.c_frozen * nu_j;
    const double th = profile_theta_at(*c.spec->physical, s_abs);
    if (th == 0.0)
        throw singular_transform_error("theta0 vanishes at the front position", s_abs, s_abs);
    return -nu_j / (c.b2 * th) - nu_j / c.b2;
}

// Flux-equation bracket over the node set times[0..n] whose last entry is
// the trial time; nu/zoff/soff likewise carry the trial values at index n.
double bracket(const EngineConsts& c, std::span<const double> times, std::span<const double> nu,
               std::span<const double> zoff, std::span<const double> soff,
               std::span<const double> wts)
{
    const std::size_t n = times.size() - 1;
    const double t = times[n];
    const double zoff_t = zoff[n];
    const bool retarded = c.cfg->ktau_mode == KtauMode::retarded;

    const double T1 = c.compat == 0.0 ? 0.0 : c.compat * eval_K(zoff_t, t);
    const double T2 = gauss_conv_pwlinear(c.spec->profile.z, c.spec->profile.dpsi, 0.0, c.b_bar + zoff_t, t);

    // diagonal velocity from the discrete path slope; a pointwise law value
    // here would double the per-step Picard factor (to 1 for paper_h data)
    const double zdot_t = (zoff[n] - zoff[n - 1]) / (times[n] - times[n - 1]);

    double hist = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        double zd_j;
        if (j == n)
            zd_j = zdot_t;
        else if (retarded)
            zd_j = (j == 0) ? (zoff[1] - zoff[0]) / (times[1] - times[0])
                            : (zoff[j] - zoff[j - 1]) / (times[j] - times[j - 1]);
        else
            zd_j = law_zdot(c, nu[j], c.spec->b + soff[j]);

        const double g = nu[j] / c.b2 + c.b2 * zd_j;
        double phi;
        if (j == n) {
            phi = -(zdot_t / (4.0 * kSqrtPi)) * g; // slope limit of K_z sqrt(s)
        } else {
            const double s = t - times[j];
            phi = eval_K_z(zoff_t - zoff[j], s) * std::sqrt(s) * g;
        }
        hist += wts[j] * phi;
    }

    const double T4 = -(c.b2 / 2.0) * zdot_t;
    return T1 + T2 - hist + T4;
}

struct PathState {
    std::vector<double> times, nu, zoff, soff;
};

// Advance the boundary path one cell by the selected law (trapezoid of nu).
void advance_path(const EngineConsts& c, PathState& p, double t_new, double nu_new)
{
    const double dt = t_new - p.times.back();
    const double nu_prev = p.nu.back();
    const double soff_new = p.soff.back() - (0.5 * dt) * (nu_prev + nu_new) / c.b2;
    double zoff_new;
    if (c.spec->law == BoundaryLaw::frozen_h) {
        zoff_new = p.zoff.back() + c.c_frozen * (0.5 * dt) * (nu_prev + nu_new);
    } else {
        // zbar = h(s) - (1/beta2) int nu, anchored so that zbar(0) = b_bar
        const double dh = z_from_x(*c.spec->physical, c.spec->b + soff_new, c.spec->b);
        zoff_new = dh + soff_new;
    }
    p.times.push_back(t_new);
    p.nu.push_back(nu_new);
    p.zoff.push_back(zoff_new);
    p.soff.push_back(soff_new);
}

void pop_path(PathState& p)
{
    p.times.pop_back();
    p.nu.pop_back();
    p.zoff.pop_back();
    p.soff.pop_back();
}

FreeBoundaryTrajectory to_trajectory(const PathState& p, const ProblemSpec& spec,
                                     std::vector<int> iters)
{
    FreeBoundaryTrajectory tr;
    tr.times = p.times;
    tr.nu = p.nu;
    tr.zbar.resize(p.zoff.size());
    tr.s.resize(p.soff.size());
    for (std::size_t i = 0; i < p.zoff.size(); ++i) {
        tr.zbar[i] = spec.profile.b_bar + p.zoff[i];
        tr.s[i] = spec.b + p.soff[i];
    }
    tr.picard_iters = std::move(iters);
    return tr;
}

std::size_t locate_node(const std::vector<double>& times, double t)
{
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::fabs(times[i] - t) <= 1e-9 * std::max(1.0, std::fabs(t)))
            return i;
    throw usage_error("t is not a trajectory node");
}

double interp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
    if (x <= xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double u = (x - xs[j]) / (xs[j + 1] - xs[j]);
    return ys[j] + u * (ys[j + 1] - ys[j]);
}

} // namespace

// Structural requirements every solver entry point enforces. The endpoint
// invariants (validate(spec)) are deliberately separate so unit-level data
// with relaxed asymptotics can still drive the discrete system.
void validate_structure(const ProblemSpec& spec)
{
    const auto& p = spec.profile;
    if (p.z.size() < 2 || p.psi.size() != p.z.size() || p.dpsi.size() != p.z.size())
        throw usage_error("ProblemSpec: malformed profile arrays");
    for (std::size_t i = 0; i + 1 < p.z.size(); ++i)
        if (!(p.z[i] < p.z[i + 1]))
            throw usage_error("ProblemSpec: profile grid not strictly increasing");
    if (std::fabs(1.0 + 1.0 / (2.0 * spec.beta2)) < 1e-6)
        throw degenerate_prefactor_error("ProblemSpec: beta2 makes the flux prefactor singular");
    if (spec.law == BoundaryLaw::paper_h && !spec.physical)
        throw usage_error("ProblemSpec: paper_h law requires the physical profile");
}

void validate(const ProblemSpec& spec, double profile_tol)
{
    validate_structure(spec);
    validate_linearized(spec.profile, profile_tol);
    if (spec.beta1 != spec.profile.beta1 || spec.beta2 != spec.profile.beta2)
        throw usage_error("ProblemSpec: beta1/beta2 must match the profile");
}

void validate(const SolverConfig& cfg)
{
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || !(cfg.dt < cfg.t_end))
        throw usage_error("SolverConfig: need 0 < dt < t_end");
    if (!(cfg.picard_tol >= 1e-14))
        throw usage_error("SolverConfig: picard_tol must be >= 1e-14");
    if (cfg.picard_max < 1)
        throw usage_error("SolverConfig: picard_max must be >= 1");
    if (!(cfg.z_tail > 0.0))
        throw usage_error("SolverConfig: z_tail must be positive");
}

double rhs_nu(const FreeBoundaryTrajectory& history, double trial_nu, double trial_zbar,
              double t, const ProblemSpec& spec, const SolverConfig& cfg)
{
    if (!(t > 0.0))
        throw domain_error("rhs_nu: t must be positive");
    if (history.times.empty() || history.times.front() != 0.0)
        throw usage_error("rhs_nu: history must start at t = 0");
    if (!(t > history.times.back()))
        throw usage_error("rhs_nu: t must lie past the history");

    const EngineConsts c = make_consts(spec, cfg);
    PathState p;
    p.times = history.times;
    p.nu = history.nu;
    p.zoff.resize(history.zbar.size());
    p.soff.resize(history.s.size());
    for (std::size_t i = 0; i < history.zbar.size(); ++i) {
        p.zoff[i] = history.zbar[i] - history.zbar.front();
        p.soff[i] = history.s[i] - history.s.front();
    }
    p.times.push_back(t);
    p.nu.push_back(trial_nu);
    p.zoff.push_back(trial_zbar - history.zbar.front());
    p.soff.push_back(p.soff.back() - 0.5 * (t - history.times[history.times.size() - 1]) *
                                         (history.nu.back() + trial_nu) / c.b2);

    const std::vector<double> wts = singular_weights(p.times, t);
    return c.pref * bracket(c, p.times, p.nu, p.zoff, p.soff, wts);
}

FreeBoundaryTrajectory solve(const ProblemSpec& spec, const SolverConfig& cfg)
{
    validate_structure(spec);
    validate(cfg);
    const EngineConsts c = make_consts(spec, cfg);

    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    if (n < 1)
        throw usage_error("solve: t_end shorter than one step");

    PathState p;
    p.times = {0.0};
    p.nu = {c.dpsi0_bbar};
    p.zoff = {0.0};
    p.soff = {0.0};
    std::vector<int> iters = {0};

    for (std::size_t i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        std::vector<double> grid = p.times;
        grid.push_back(t);
        const std::vector<double> wts = singular_weights(grid, t);

        double nu_trial = (i == 1) ? 0.5 * c.dpsi0_bbar : p.nu.back();
        bool accepted = false;
        int used = 0;
        for (int k = 0; k < cfg.picard_max; ++k) {
            advance_path(c, p, t, nu_trial);
            double nu_new;
            try {
                nu_new = c.pref * bracket(c, p.times, p.nu, p.zoff, p.soff, wts);
            } catch (...) {
                pop_path(p);
                throw;
            }
            pop_path(p);
            if (!std::isfinite(nu_new))
                break; // diverged; report non-convergence with the prefix intact
            const bool done = std::fabs(nu_new - nu_trial) <= cfg.picard_tol;
            nu_trial = nu_new;
            if (done) {
                accepted = true;
                used = k + 1;
                break;
            }
        }
        if (!accepted) {
            FreeBoundaryTrajectory partial = to_trajectory(p, spec, std::move(iters));
            throw non_convergence_error(
                "Picard iteration did not converge at t = " + std::to_string(t), std::move(partial));
        }
        advance_path(c, p, t, nu_trial);
        iters.push_back(used);
    }
    return to_trajectory(p, spec, std::move(iters));
}

std::vector<double> apply_operator(const ProblemSpec& spec, const SolverConfig& cfg,
                                   std::span<const double> times, std::span<const double> nu_curve)
{
    if (times.size() != nu_curve.size() || times.size() < 2)
        throw usage_error("apply_operator: times/nu size mismatch");
    if (times[0] != 0.0)
        throw usage_error("apply_operator: time grid must start at 0");
    const EngineConsts c = make_consts(spec, cfg);

    PathState p;
    p.times = {0.0};
    p.nu = {nu_curve[0]};
    p.zoff = {0.0};
    p.soff = {0.0};
    for (std::size_t i = 1; i < times.size(); ++i)
        advance_path(c, p, times[i], nu_curve[i]);

    std::vector<double> out(times.size());
    out[0] = nu_curve[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        std::span<const double> ts(p.times.data(), i + 1);
        std::span<const double> nus(p.nu.data(), i + 1);
        std::span<const double> zs(p.zoff.data(), i + 1);
        std::span<const double> ss(p.soff.data(), i + 1);
        const std::vector<double> wts = singular_weights(ts, times[i]);
        out[i] = c.pref * bracket(c, ts, nus, zs, ss, wts);
    }
    return out;
}

FieldSnapshot reconstruct_field(const FreeBoundaryTrajectory& traj, const ProblemSpec& spec,
                                double t, std::vector<double> z_grid, bool parametric)
{
    if (z_grid.size() < 1)
        throw usage_error("reconstruct_field: empty grid");
    for (std::size_t i = 0; i + 1 < z_grid.size(); ++i)
        if (!(z_grid[i] < z_grid[i + 1]))
            throw usage_error("reconstruct_field: z_grid not strictly increasing");

    const std::size_t i_t = locate_node(traj.times, t);
    const double t_node = traj.times[i_t];
    const double b2 = spec.beta2;
    const double zbar_t = traj.zbar[i_t];
    const double snap_tol = 1e-10 * std::max(1.0, std::fabs(zbar_t));
    if (z_grid.back() > zbar_t + snap_tol)
        throw domain_error("reconstruct_field: grid extends beyond zbar(t)");

    FieldSnapshot snap;
    snap.t = t_node;
    snap.z = std::move(z_grid);
    snap.psi.resize(snap.z.size());

    if (i_t == 0) {
        for (std::size_t k = 0; k < snap.z.size(); ++k)
            snap.psi[k] = profile_psi_at(spec.profile, snap.z[k]);
    } else {
        std::vector<double> zoff(i_t + 1), soff(i_t + 1);
        for (std::size_t j = 0; j <= i_t; ++j) {
            zoff[j] = traj.zbar[j] - traj.zbar.front();
            soff[j] = traj.s[j] - traj.s.front();
        }
        std::vector<double> times(traj.times.begin(), traj.times.begin() + static_cast<std::ptrdiff_t>(i_t) + 1);
        std::vector<double> nus(traj.nu.begin(), traj.nu.begin() + static_cast<std::ptrdiff_t>(i_t) + 1);
        const double dt_loc = times[i_t] - times[i_t - 1];
        const double s_hi = std::min(8.0 * dt_loc, t_node);

        for (std::size_t k = 0; k < snap.z.size(); ++k) {
            double z = snap.z[k];
            double w_t = z - zbar_t;
            const bool boundary = std::fabs(w_t) <= snap_tol;
            if (boundary) {
                z = zbar_t;
                w_t = 0.0;
            }
            double s_floor = std::max(w_t * w_t / 2980.0, t_node * 1e-13);
            s_floor = std::min(s_floor, 0.5 * s_hi);

            // quadrature grid: trajectory nodes away from the diagonal, then a
            // geometric ladder resolving the kernel layer down to s_floor
            std::vector<double> g;
            for (double tau : times)
                if (t_node - tau > s_hi * (1.0 + 1e-12))
                    g.push_back(tau);
            double s = s_hi;
            while (s > s_floor * 1.0000001) {
                g.push_back(t_node - s);
                s = std::max(s / 1.2, s_floor);
            }
            g.push_back(t_node - s_floor);

            const std::vector<double> wts = singular_weights(g, t_node);
            double single = 0.0, dlayer = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                const double tau = g[j];
                const double sj = t_node - tau;
                const double nuj = interp_at(times, nus, tau);
                const double w = (z - traj.zbar.front()) - interp_at(times, zoff, tau);
                const double Kv = eval_K(w, sj) * std::sqrt(sj);
                single += wts[j] * Kv * nuj;
                dlayer += wts[j] * (w / (2.0 * sj)) * Kv;
            }
            single += traj.nu[i_t] * kernel_time_mass(w_t, s_floor);
            dlayer += dipole_time_mass(w_t, s_floor);

            double val = gauss_conv_pwlinear(spec.profile.z, spec.profile.psi, spec.profile.beta1, z, t_node) -
                         single / b2 - b2 * dlayer;
            if (boundary)
                val += 0.5 * b2;
            snap.psi[k] = val;
        }
    }

    if (parametric) {
        if (std::fabs(snap.z.back() - zbar_t) > snap_tol)
            throw usage_error("reconstruct_field: parametric output requires the grid to end at zbar(t)");
        const auto pairs = x_from_z_parametric(snap, traj.s[i_t], zbar_t);
        snap.x.resize(pairs.size());
        snap.theta.resize(pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            snap.x[k] = pairs[k].first;
            snap.theta[k] = pairs[k].second;
        }
    }
    return snap;
}

std::vector<ConvergenceRow> convergence_study_specs(
    const std::function<ProblemSpec(double)>& spec_for_dt, const SolverConfig& base,
    std::span<const double> dts, const std::function<double(double)>& nu_ref)
{
    if (dts.size() < 2)
        throw usage_error("convergence_study: need at least two step sizes");
    for (std::size_t k = 0; k + 1 < dts.size(); ++k)
        if (dts[k + 1] > dts[k])
            throw usage_error("convergence_study: dts must be non-increasing");

    std::vector<FreeBoundaryTrajectory> runs;
    runs.reserve(dts.size());
    for (double dt : dts) {
        SolverConfig cfg = base;
        cfg.dt = dt;
        runs.push_back(solve(spec_for_dt(dt), cfg));
    }

    // common nodes: coarse-grid times present in every run, past the startup band
    const double t_skip = 5.0 * dts[0];
    std::vector<double> common;
    for (double tc : runs[0].times) {
        if (tc < t_skip - 1e-12)
            continue;
        bool everywhere = true;
        for (const auto& r : runs) {
            bool found = false;
            for (double tr : r.times)
                if (std::fabs(tr - tc) <= 1e-9 * std::max(1.0, tc)) {
                    found = true;
                    break;
                }
            if (!found) {
                everywhere = false;
                break;
            }
        }
        if (everywhere)
            common.push_back(tc);
    }
    if (common.empty())
        throw usage_error("convergence_study: no common nodes past the startup band");

    auto nu_at = [](const FreeBoundaryTrajectory& r, double tq) {
        for (std::size_t i = 0; i < r.times.size(); ++i)
            if (std::fabs(r.times[i] - tq) <= 1e-9 * std::max(1.0, tq))
                return r.nu[i];
        throw usage_error("convergence_study: lost a common node");
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ConvergenceRow> rows(dts.size());
    for (std::size_t k = 0; k < dts.size(); ++k) {
        rows[k].dt = dts[k];
        if (!nu_ref && k + 1 == dts.size()) {
            rows[k].sup_err = nan;
        } else {
            double e = 0.0;
            for (double tc : common) {
                const double ref = nu_ref ? nu_ref(tc) : nu_at(runs.back(), tc);
                e = std::max(e, std::fabs(nu_at(runs[k], tc) - ref));
            }
            rows[k].sup_err = e;
        }
        if (k == 0 || dts[k] == dts[k - 1] || !(rows[k].sup_err > 0.0) ||
            !(rows[k - 1].sup_err > 0.0))
            rows[k].order = nan;
        else
            rows[k].order = std::log(rows[k - 1].sup_err / rows[k].sup_err) /
                            std::log(dts[k - 1] / dts[k]);
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const ProblemSpec& spec, const SolverConfig& base,
                                              std::span<const double> dts,
                                              const std::function<double(double)>& nu_ref)
{
    return convergence_study_specs([&spec](double) { return spec; }, base, dts, nu_ref);
}

} // namespace stefan
