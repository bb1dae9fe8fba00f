#include "stefan/config.hpp"

#include "stefan/certify.hpp"
#include "stefan/errors.hpp"
#include "stefan/front_oracle.hpp"
#include "stefan/hodograph.hpp"
#include "stefan/io.hpp"
#include "stefan/profiles.hpp"
#include "stefan/reference_fd.hpp"
#include "stefan/stefan_ie.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace stefan {

namespace {

namespace fs = std::filesystem;

LinearizedProfile build_profile(const CliConfig& c, double h_override = 0.0)
{
    const double h = h_override > 0.0 ? h_override : c.profile_h;
    if (c.profile_kind == "front")
        return sample_front_profile(c.beta1, c.beta2, c.b_bar, c.profile_z_min, h);
    if (c.profile_kind == "cosine")
        return sample_cosine_profile(c.beta1, c.beta2, c.profile_left, c.b_bar, c.profile_z_min, h);
    LinearizedProfile p = read_linearized_profile_csv(c.profile_path);
    if (std::fabs(p.beta1 - c.beta1) > 1e-12 || std::fabs(p.beta2 - c.beta2) > 1e-12 ||
        std::fabs(p.b_bar - c.b_bar) > 1e-12)
        throw config_error("profile file metadata disagrees with problem.beta1/beta2/b_bar");
    return p;
}

ProblemSpec build_spec(const CliConfig& c, double h_override = 0.0)
{
    ProblemSpec spec;
    spec.profile = build_profile(c, h_override);
    spec.beta1 = c.beta1;
    spec.beta2 = c.beta2;
    spec.b = c.b;
    spec.law = c.law;
    if (!c.physical_path.empty())
        spec.physical = read_physical_profile_csv(c.physical_path);
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return spec;
}

std::vector<double> snapshot_grid(const CliConfig& c, double zbar_t)
{
    std::vector<double> g(static_cast<std::size_t>(c.snapshot_n));
    const double lo = c.snapshot_z_min;
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = lo + (zbar_t - lo) * static_cast<double>(i) / static_cast<double>(g.size() - 1);
    g.back() = zbar_t;
    return g;
}

void write_manifest(const fs::path& dir, const RunManifest& m, const CliConfig& c,
                    const std::string& hash)
{
    std::ofstream f(dir / "manifest.txt", std::ios::binary);
    f << "# stefan " << kArtifactVersion << " run manifest\n";
    f << "command = " << m.command << "\n";
    f << "config = " << m.config_path << "\n";
    f << "output_dir = " << m.output_dir << "\n";
    f << "seed = " << m.seed << "\n";
    f << "config_hash = " << hash << "\n";
    for (const auto& [k, v] : c.resolved)
        f << k << " = " << v << "\n";
}

FileHeader make_header(const RunManifest& m, const CliConfig& c, const std::string& hash)
{
    FileHeader h;
    h.command = m.command;
    h.config_hash = hash;
    h.law = c.law == BoundaryLaw::frozen_h ? "frozen_h" : "paper_h";
    h.ktau = c.solver.ktau_mode == KtauMode::frozen ? "frozen" : "retarded";
    return h;
}

int cmd_solve(const CliConfig& c, const fs::path& out, const FileHeader& hdr)
{
    const ProblemSpec spec = build_spec(c);
    FreeBoundaryTrajectory traj;
    try {
        traj = solve(spec, c.solver);
    } catch (const non_convergence_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        write_trajectory_csv((out / "trajectory.partial.csv").string(), e.partial, hdr);
        return 1;
    }
    write_trajectory_csv((out / "trajectory.csv").string(), traj, hdr);
    for (std::size_t k = 0; k < c.snapshot_times.size(); ++k) {
        const double t = c.snapshot_times[k];
        std::size_t i_t = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double d = std::fabs(traj.times[i] - t);
            if (d < best) {
                best = d;
                i_t = i;
            }
        }
        const double t_node = traj.times[i_t];
        FieldSnapshot snap = reconstruct_field(traj, spec, t_node, snapshot_grid(c, traj.zbar[i_t]),
                                               c.snapshot_parametric);
        write_snapshot_csv((out / ("snapshot_" + std::to_string(k) + ".csv")).string(), snap, hdr);
    }
    return 0;
}

int cmd_oracle(const RunManifest&, const CliConfig& c, const fs::path& out, const FileHeader& hdr)
{
    const FrontSolution fr = make_front(c.beta1, c.beta2, c.b_bar);
    const std::size_t n = static_cast<std::size_t>(std::llround(c.solver.t_end / c.solver.dt));
    std::vector<double> t(n + 1), zb(n + 1), s(n + 1), nu(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        t[i] = static_cast<double>(i) * c.solver.dt;
        zb[i] = zbar_front(fr, t[i]);
        s[i] = c.b + fr.s_dot * t[i];
        nu[i] = fr.nu_const;
    }
    write_oracle_trajectory_csv((out / "oracle_trajectory.csv").string(), t, zb, s, nu, hdr);

    const double ts = c.oracle_snapshot_t;
    const double zb_t = zbar_front(fr, ts);
    FieldSnapshot snap;
    snap.t = ts;
    snap.z = snapshot_grid(c, zb_t);
    snap.psi.resize(snap.z.size());
    snap.x.resize(snap.z.size());
    snap.theta.resize(snap.z.size());
    for (std::size_t i = 0; i < snap.z.size(); ++i) {
        snap.psi[i] = psi_front(fr, snap.z[i], ts);
        snap.x[i] = x_front(fr, snap.z[i], ts);
        snap.theta[i] = snap.psi[i];
    }
    write_snapshot_csv((out / "oracle_snapshot.csv").string(), snap, hdr);

    std::ofstream f(out / "front.txt", std::ios::binary);
    f << header_comment(hdr);
    f << "V = " << format_double(fr.V) << "\n";
    f << "nu = " << format_double(fr.nu_const) << "\n";
    f << "s_dot = " << format_double(fr.s_dot) << "\n";
    f << "alpha = " << format_double(fr.alpha) << "\n";
    f << "consistency_residual = " << format_double(consistency_residual(fr)) << "\n";
    return 0;
}

int cmd_certify(const RunManifest& m, const CliConfig& c, const fs::path& out, const FileHeader& hdr)
{
    const ProblemSpec spec = build_spec(c);
    Certificate cert;
    try {
        cert = certify_profile(spec.profile, c.beta1, c.beta2, c.certify_b2);
    } catch (const out_of_regime_error& e) {
        throw config_error(e.what());
    }

    ContractionStats stats;
    bool have_stats = false;
    std::vector<std::string> bound_lines;
    if (c.run_contraction && cert.sigma > 0.0) {
        SolverConfig cc = c.solver;
        cc.dt = cert.sigma / static_cast<double>(c.contraction_steps);
        cc.t_end = cert.sigma;
        stats = empirical_contraction(spec, cc, cert, c.certify_trials, m.seed);
        have_stats = true;
        bound_lines = spot_check_bounds(spec, cc, cert);
    }
    write_certificate_csv((out / "certificate.csv").string(), cert, hdr);
    write_certificate_report((out / "report.txt").string(), cert, have_stats ? &stats : nullptr, hdr);
    if (!bound_lines.empty()) {
        std::ofstream f(out / "report.txt", std::ios::binary | std::ios::app);
        f << "Pointwise bound spot checks along the window trajectory (reported, never raised)\n";
        for (const auto& line : bound_lines)
            f << "  " << line << "\n";
    }
    return 0;
}

int cmd_fd(const RunManifest&, const CliConfig& c, const fs::path& out, const FileHeader& hdr)
{
    const ProblemSpec spec = build_spec(c);
    const FdResult res = fd_solve(spec, c.fd, c.solver.t_end, c.snapshot_times);
    write_trajectory_csv((out / "fd_trajectory.csv").string(), res.traj, hdr);
    for (std::size_t k = 0; k < res.snapshots.size(); ++k)
        write_snapshot_csv((out / ("fd_snapshot_" + std::to_string(k) + ".csv")).string(),
                           res.snapshots[k], hdr);
    return 0;
}

int cmd_compare(const RunManifest&, const CliConfig& c, const fs::path& out, const FileHeader& hdr)
{
    if (c.compare_a.empty() || c.compare_b.empty())
        throw config_error("compare requires compare.a and compare.b trajectory paths");
    const FreeBoundaryTrajectory a = read_trajectory_csv(c.compare_a);
    const FreeBoundaryTrajectory b = read_trajectory_csv(c.compare_b);
    const TrajectoryComparison cmp = compare_trajectories(a, b);
    write_comparison_csv((out / "comparison.csv").string(), cmp, hdr);
    return 0;
}

int cmd_convergence(const RunManifest&, const CliConfig& c, const fs::path& out, const FileHeader& hdr)
{
    std::function<double(double)> nu_ref;
    if (c.profile_kind == "front") {
        const FrontSolution fr = make_front(c.beta1, c.beta2, c.b_bar);
        nu_ref = [nu = fr.nu_const](double) { return nu; };
    }
    std::vector<ConvergenceRow> rows;
    if (c.convergence_tie_profile && c.profile_kind != "file") {
        // joint space-time refinement: the sampled profile is regenerated with
        // spacing h = dt for each run
        auto spec_for_dt = [&](double dt) { return build_spec(c, dt); };
        rows = convergence_study_specs(spec_for_dt, c.solver, c.convergence_dts, nu_ref);
    } else {
        const ProblemSpec spec = build_spec(c);
        rows = convergence_study(spec, c.solver, c.convergence_dts, nu_ref);
    }
    write_convergence_csv((out / "convergence.csv").string(), rows, hdr);
    return 0;
}

} // namespace

int run(const RunManifest& m)
{
    CliConfig c;
    std::string hash;
    fs::path out;
    try {
        c = parse_config(m.config_path);
        hash = config_hash(c, m.seed);
        out = fs::path(m.output_dir);
        fs::create_directories(out);
        write_manifest(out, m, c, hash);
    } catch (const config_error& e) {
        if (e.line_number > 0)
            std::cerr << "config error at " << m.config_path << ":" << e.line_number << ": "
                      << e.what() << "\n";
        else
            std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const FileHeader hdr = make_header(m, c, hash);
    try {
        if (m.command == "solve")
            return cmd_solve(c, out, hdr);
        if (m.command == "oracle")
            return cmd_oracle(m, c, out, hdr);
        if (m.command == "certify")
            return cmd_certify(m, c, out, hdr);
        if (m.command == "fd")
            return cmd_fd(m, c, out, hdr);
        if (m.command == "compare")
            return cmd_compare(m, c, out, hdr);
        if (m.command == "convergence")
            return cmd_convergence(m, c, out, hdr);
        std::cerr << "unknown command '" << m.command << "'\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const non_convergence_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        write_trajectory_csv((out / "trajectory.partial.csv").string(), e.partial, hdr);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace stefan
