#include "stefan/io.hpp"
#include "stefan/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stefan {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& where)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw usage_error("bad number '" + s + "' in " + where);
    return v;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path, std::ios::binary); // '\n' endings on every platform
    if (!f)
        throw usage_error("cannot open '" + path + "' for writing");
    return f;
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw usage_error("cannot open '" + path + "' for reading");
    return f;
}

// Metadata comments of the form "# key=value key=value".
void parse_meta(const std::string& line, double* beta1, double* beta2, double* b, double* b_bar)
{
    std::istringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "beta1" && beta1)
            *beta1 = parse_double(val, "profile metadata");
        else if (key == "beta2" && beta2)
            *beta2 = parse_double(val, "profile metadata");
        else if (key == "b" && b)
            *b = parse_double(val, "profile metadata");
        else if (key == "b_bar" && b_bar)
            *b_bar = parse_double(val, "profile metadata");
    }
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string header_comment(const FileHeader& h)
{
    std::string out = "# stefan " + std::string(kArtifactVersion);
    if (!h.command.empty())
        out += " command=" + h.command;
    if (!h.config_hash.empty())
        out += " config_hash=" + h.config_hash;
    if (!h.law.empty())
        out += " law=" + h.law;
    if (!h.ktau.empty())
        out += " ktau=" + h.ktau;
    out += "\n";
    return out;
}

void write_trajectory_csv(const std::string& path, const FreeBoundaryTrajectory& tr,
                          const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h) << "t,nu,zbar,s,picard_iters\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        f << format_double(tr.times[i]) << ',' << format_double(tr.nu[i]) << ','
          << format_double(tr.zbar[i]) << ',' << format_double(tr.s[i]) << ','
          << tr.picard_iters[i] << '\n';
}

FreeBoundaryTrajectory read_trajectory_csv(const std::string& path)
{
    auto f = open_in(path);
    FreeBoundaryTrajectory tr;
    std::string line;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            if (line != "t,nu,zbar,s,picard_iters")
                throw usage_error("unexpected trajectory header in " + path);
            header_seen = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 5)
            throw usage_error("bad trajectory row at " + path + ":" + std::to_string(lineno));
        tr.times.push_back(parse_double(cols[0], path));
        tr.nu.push_back(parse_double(cols[1], path));
        tr.zbar.push_back(parse_double(cols[2], path));
        tr.s.push_back(parse_double(cols[3], path));
        tr.picard_iters.push_back(static_cast<int>(parse_double(cols[4], path)));
    }
    if (tr.times.empty())
        throw usage_error("empty trajectory file " + path);
    return tr;
}

void write_snapshot_csv(const std::string& path, const FieldSnapshot& snap, const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h);
    f << "# t=" << format_double(snap.t) << "\n";
    const bool parametric = !snap.x.empty();
    f << (parametric ? "z,psi,x,theta\n" : "z,psi\n");
    for (std::size_t i = 0; i < snap.z.size(); ++i) {
        f << format_double(snap.z[i]) << ',' << format_double(snap.psi[i]);
        if (parametric)
            f << ',' << format_double(snap.x[i]) << ',' << format_double(snap.theta[i]);
        f << '\n';
    }
}

void write_oracle_trajectory_csv(const std::string& path, const std::vector<double>& t,
                                 const std::vector<double>& zbar, const std::vector<double>& s,
                                 const std::vector<double>& nu, const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h) << "t,zbar,s,nu\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        f << format_double(t[i]) << ',' << format_double(zbar[i]) << ',' << format_double(s[i])
          << ',' << format_double(nu[i]) << '\n';
}

void write_certificate_csv(const std::string& path, const Certificate& cert, const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h) << "name,value,flag\n";
    auto row = [&](const char* name, double v, const char* flag = "") {
        f << name << ',' << format_double(v) << ',' << flag << '\n';
    };
    row("A1", cert.A1);
    row("M", cert.M);
    row("B1", cert.B1);
    row("B2", cert.B2, "user-supplied");
    row("B3", cert.B3);
    row("B4", cert.B4);
    row("B5", cert.B5);
    row("B6", cert.B6, std::isfinite(cert.B6) ? "" : "overflow");
    row("B7", cert.B7);
    row("B8", cert.B8);
    row("sigma1", cert.sigma1);
    row("sigma2", cert.sigma2);
    row("sigma3", cert.sigma3);
    row("sigma", cert.sigma);
    row("norm_psi0", cert.norm_psi0);
    row("norm_dpsi0", cert.norm_dpsi0);
    for (const auto& fl : cert.flags)
        f << "flag,," << fl << '\n';
}

void write_certificate_report(const std::string& path, const Certificate& cert,
                              const ContractionStats* stats, const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h);
    f << "Contraction certificate\n";
    f << "  norms: ||psi0|| = " << format_double(cert.norm_psi0)
      << ", ||psi0'|| = " << format_double(cert.norm_dpsi0) << "\n";
    f << "  A1 = " << format_double(cert.A1) << ", M = 2 A1 + 1 = " << format_double(cert.M) << "\n";
    f << "  B1 = " << format_double(cert.B1) << ", B2 = " << format_double(cert.B2)
      << " (user-supplied), B3 = " << format_double(cert.B3) << "\n";
    f << "  B4 = " << format_double(cert.B4) << ", B5 = " << format_double(cert.B5)
      << ", B6 = " << format_double(cert.B6) << ", B7 = " << format_double(cert.B7) << "\n";
    f << "  B8 = B4+B5+B6+B7 = " << format_double(cert.B8) << "\n";
    f << "  window: sigma1 = " << format_double(cert.sigma1)
      << ", sigma2 = " << format_double(cert.sigma2)
      << ", sigma3 = " << format_double(cert.sigma3) << "\n";
    f << "  certified sigma = min = " << format_double(cert.sigma) << "\n";
    for (const auto& fl : cert.flags)
        f << "  caveat: " << fl << "\n";
    if (stats) {
        f << "Empirical contraction (" << stats->trials_used << " trials, window "
          << format_double(stats->window) << ", " << stats->steps << " steps)\n";
        f << "  max ||T nu - T nu_hat|| / ||nu - nu_hat|| = " << format_double(stats->max_ratio)
          << "\n";
        f << "  mean ratio = " << format_double(stats->mean_ratio) << "\n";
        f << "  " << (stats->max_ratio < 1.0 ? "PASS" : "FAIL") << ": contraction "
          << (stats->max_ratio < 1.0 ? "holds" : "violated") << " on the sampled pairs\n";
    }
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows,
                           const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h) << "dt,sup_err,order\n";
    for (const auto& r : rows)
        f << format_double(r.dt) << ',' << format_double(r.sup_err) << ','
          << format_double(r.order) << '\n';
}

void write_comparison_csv(const std::string& path, const TrajectoryComparison& cmp,
                          const FileHeader& h)
{
    auto f = open_out(path);
    f << header_comment(h) << "column,sup,mean\n";
    f << "nu," << format_double(cmp.sup_nu) << ',' << format_double(cmp.mean_nu) << '\n';
    f << "zbar," << format_double(cmp.sup_zbar) << ',' << format_double(cmp.mean_zbar) << '\n';
    f << "s," << format_double(cmp.sup_s) << ',' << format_double(cmp.mean_s) << '\n';
}

void write_linearized_profile_csv(const std::string& path, const LinearizedProfile& p)
{
    auto f = open_out(path);
    f << "# beta1=" << format_double(p.beta1) << " beta2=" << format_double(p.beta2)
      << " b_bar=" << format_double(p.b_bar) << "\n";
    f << "z,psi,dpsi\n";
    for (std::size_t i = 0; i < p.z.size(); ++i)
        f << format_double(p.z[i]) << ',' << format_double(p.psi[i]) << ','
          << format_double(p.dpsi[i]) << '\n';
}

LinearizedProfile read_linearized_profile_csv(const std::string& path)
{
    auto f = open_in(path);
    LinearizedProfile p;
    bool have_meta = false, header_seen = false;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            parse_meta(line, &p.beta1, &p.beta2, nullptr, &p.b_bar);
            have_meta = true;
            continue;
        }
        if (!header_seen) {
            if (line != "z,psi,dpsi")
                throw usage_error("expected 'z,psi,dpsi' header in " + path);
            header_seen = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 3)
            throw usage_error("bad profile row at " + path + ":" + std::to_string(lineno));
        p.z.push_back(parse_double(cols[0], path));
        p.psi.push_back(parse_double(cols[1], path));
        p.dpsi.push_back(parse_double(cols[2], path));
    }
    if (!have_meta)
        throw usage_error("missing '# beta1=... beta2=... b_bar=...' metadata in " + path);
    if (p.z.empty())
        throw usage_error("empty profile file " + path);
    if (p.b_bar == 0.0)
        p.b_bar = p.z.back();
    return p;
}

void write_physical_profile_csv(const std::string& path, const PhysicalProfile& p)
{
    auto f = open_out(path);
    f << "# beta1=" << format_double(p.beta1) << " beta2=" << format_double(p.beta2)
      << " b=" << format_double(p.b) << "\n";
    f << "x,theta\n";
    for (std::size_t i = 0; i < p.x.size(); ++i)
        f << format_double(p.x[i]) << ',' << format_double(p.theta[i]) << '\n';
}

PhysicalProfile read_physical_profile_csv(const std::string& path)
{
    auto f = open_in(path);
    PhysicalProfile p;
    bool have_meta = false, header_seen = false;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            parse_meta(line, &p.beta1, &p.beta2, &p.b, nullptr);
            have_meta = true;
            continue;
        }
        if (!header_seen) {
            if (line != "x,theta")
                throw usage_error("expected 'x,theta' header in " + path);
            header_seen = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 2)
            throw usage_error("bad profile row at " + path + ":" + std::to_string(lineno));
        p.x.push_back(parse_double(cols[0], path));
        p.theta.push_back(parse_double(cols[1], path));
    }
    if (!have_meta)
        throw usage_error("missing '# beta1=... beta2=... b=...' metadata in " + path);
    if (p.x.empty())
        throw usage_error("empty profile file " + path);
    if (p.b == 0.0)
        p.b = p.x.back();
    return p;
}

} // namespace stefan
