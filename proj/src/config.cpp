#include "stefan/config.hpp"
#include "stefan/errors.hpp"
#include "stefan/certify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stefan {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& v, const std::string& key, int line)
{
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw config_error("invalid number for '" + key + "': '" + v + "'", line);
    return x;
}

long to_int(const std::string& v, const std::string& key, int line)
{
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw config_error("invalid integer for '" + key + "': '" + v + "'", line);
    return x;
}

bool to_bool(const std::string& v, const std::string& key, int line)
{
    if (v == "true" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "off")
        return false;
    throw config_error("invalid boolean for '" + key + "': '" + v + "'", line);
}

std::vector<double> to_list(const std::string& v, const std::string& key, int line)
{
    std::vector<double> out;
    std::string cur;
    std::istringstream ss(v);
    while (std::getline(ss, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(to_double(cur, key, line));
    }
    return out;
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "problem.beta1", "problem.beta2", "problem.b_bar", "problem.b", "problem.law",
        "profile.kind", "profile.path", "profile.z_min", "profile.h", "profile.left",
        "physical.path",
        "solver.dt", "solver.t_end", "solver.picard_tol", "solver.picard_max",
        "solver.z_tail", "solver.ktau_mode",
        "snapshot.times", "snapshot.z_min", "snapshot.n", "snapshot.parametric",
        "fd.depth", "fd.ny", "fd.dt", "fd.theta",
        "certify.b2", "certify.trials", "certify.contraction_steps", "certify.run_contraction",
        "convergence.dts", "convergence.tie_profile",
        "oracle.snapshot_t",
        "compare.a", "compare.b",
    };
    return keys;
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += fmt17(v[i]);
    }
    return out;
}

} // namespace

CliConfig parse_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw config_error("cannot open config file '" + path + "'");

    std::map<std::string, std::pair<std::string, int>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw config_error("unknown key '" + key + "'", lineno);
        if (kv.count(key))
            throw config_error("duplicate key '" + key + "' (first at line " +
                                   std::to_string(kv[key].second) + ")",
                               lineno);
        kv[key] = {val, lineno};
    }

    auto have = [&](const char* k) { return kv.count(k) != 0; };
    auto raw = [&](const char* k) { return kv.at(k).first; };
    auto at = [&](const char* k) { return kv.at(k).second; };
    auto req_double = [&](const char* k) {
        if (!have(k))
            throw config_error(std::string("missing required key '") + k + "'");
        return to_double(raw(k), k, at(k));
    };

    CliConfig c;
    c.beta1 = req_double("problem.beta1");
    c.beta2 = req_double("problem.beta2");
    c.b_bar = req_double("problem.b_bar");
    if (have("problem.b"))
        c.b = to_double(raw("problem.b"), "problem.b", at("problem.b"));

    if (!(c.beta1 > 0.0))
        throw config_error("problem.beta1 must be positive");
    if (!(c.beta2 < 0.0))
        throw config_error("problem.beta2 must be negative");
    if (!(c.b_bar > 0.0))
        throw config_error("problem.b_bar must be positive");
    if (std::fabs(1.0 + 1.0 / (2.0 * c.beta2)) < 1e-6)
        throw config_error("problem.beta2 = " + fmt17(c.beta2) +
                           " makes the flux prefactor singular (beta2 near -1/2 rejected)");

    if (have("problem.law")) {
        const std::string v = raw("problem.law");
        if (v == "frozen_h")
            c.law = BoundaryLaw::frozen_h;
        else if (v == "paper_h")
            c.law = BoundaryLaw::paper_h;
        else
            throw config_error("problem.law must be frozen_h or paper_h", at("problem.law"));
    }

    if (have("profile.kind")) {
        c.profile_kind = raw("profile.kind");
        if (c.profile_kind != "front" && c.profile_kind != "cosine" && c.profile_kind != "file")
            throw config_error("profile.kind must be front, cosine or file", at("profile.kind"));
    }
    if (have("profile.path"))
        c.profile_path = raw("profile.path");
    if (c.profile_kind == "file" && c.profile_path.empty())
        throw config_error("profile.kind = file requires profile.path");
    if (have("profile.h"))
        c.profile_h = to_double(raw("profile.h"), "profile.h", at("profile.h"));
    if (have("profile.left"))
        c.profile_left = to_double(raw("profile.left"), "profile.left", at("profile.left"));
    if (have("physical.path"))
        c.physical_path = raw("physical.path");
    if (c.law == BoundaryLaw::paper_h && c.physical_path.empty())
        throw config_error("problem.law = paper_h requires physical.path");

    if (have("solver.dt"))
        c.solver.dt = to_double(raw("solver.dt"), "solver.dt", at("solver.dt"));
    if (have("solver.t_end"))
        c.solver.t_end = to_double(raw("solver.t_end"), "solver.t_end", at("solver.t_end"));
    if (have("solver.picard_tol"))
        c.solver.picard_tol = to_double(raw("solver.picard_tol"), "solver.picard_tol", at("solver.picard_tol"));
    if (have("solver.picard_max"))
        c.solver.picard_max = static_cast<int>(to_int(raw("solver.picard_max"), "solver.picard_max", at("solver.picard_max")));
    if (have("solver.z_tail"))
        c.solver.z_tail = to_double(raw("solver.z_tail"), "solver.z_tail", at("solver.z_tail"));
    if (have("solver.ktau_mode")) {
        const std::string v = raw("solver.ktau_mode");
        if (v == "frozen")
            c.solver.ktau_mode = KtauMode::frozen;
        else if (v == "retarded")
            c.solver.ktau_mode = KtauMode::retarded;
        else
            throw config_error("solver.ktau_mode must be frozen or retarded", at("solver.ktau_mode"));
    }
    try {
        validate(c.solver);
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }

    c.profile_z_min = have("profile.z_min")
                          ? to_double(raw("profile.z_min"), "profile.z_min", at("profile.z_min"))
                          : c.b_bar - c.solver.z_tail;
    if (!(c.profile_z_min < c.b_bar))
        throw config_error("profile.z_min must lie below b_bar");

    if (have("snapshot.times"))
        c.snapshot_times = to_list(raw("snapshot.times"), "snapshot.times", at("snapshot.times"));
    c.snapshot_z_min = have("snapshot.z_min")
                           ? to_double(raw("snapshot.z_min"), "snapshot.z_min", at("snapshot.z_min"))
                           : c.profile_z_min;
    if (have("snapshot.n"))
        c.snapshot_n = static_cast<int>(to_int(raw("snapshot.n"), "snapshot.n", at("snapshot.n")));
    if (c.snapshot_n < 2)
        throw config_error("snapshot.n must be at least 2");
    if (have("snapshot.parametric"))
        c.snapshot_parametric = to_bool(raw("snapshot.parametric"), "snapshot.parametric", at("snapshot.parametric"));

    if (have("fd.depth"))
        c.fd.depth = to_double(raw("fd.depth"), "fd.depth", at("fd.depth"));
    if (have("fd.ny"))
        c.fd.ny = static_cast<int>(to_int(raw("fd.ny"), "fd.ny", at("fd.ny")));
    if (have("fd.dt"))
        c.fd.dt = to_double(raw("fd.dt"), "fd.dt", at("fd.dt"));
    if (have("fd.theta"))
        c.fd.theta_scheme = to_double(raw("fd.theta"), "fd.theta", at("fd.theta"));
    try {
        validate(c.fd);
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }

    c.certify_b2 = have("certify.b2") ? to_double(raw("certify.b2"), "certify.b2", at("certify.b2"))
                                      : default_B2(c.b_bar);
    if (!(c.certify_b2 > 0.0))
        throw config_error("certify.b2 must be positive");
    if (have("certify.trials"))
        c.certify_trials = static_cast<int>(to_int(raw("certify.trials"), "certify.trials", at("certify.trials")));
    if (c.certify_trials < 1)
        throw config_error("certify.trials must be positive");
    if (have("certify.contraction_steps"))
        c.contraction_steps =
            static_cast<int>(to_int(raw("certify.contraction_steps"), "certify.contraction_steps", at("certify.contraction_steps")));
    if (c.contraction_steps < 2)
        throw config_error("certify.contraction_steps must be at least 2");
    if (have("certify.run_contraction"))
        c.run_contraction = to_bool(raw("certify.run_contraction"), "certify.run_contraction", at("certify.run_contraction"));

    if (have("convergence.dts")) {
        c.convergence_dts = to_list(raw("convergence.dts"), "convergence.dts", at("convergence.dts"));
        if (c.convergence_dts.size() < 2)
            throw config_error("convergence.dts needs at least two entries", at("convergence.dts"));
    }
    if (have("convergence.tie_profile"))
        c.convergence_tie_profile =
            to_bool(raw("convergence.tie_profile"), "convergence.tie_profile", at("convergence.tie_profile"));

    c.oracle_snapshot_t = have("oracle.snapshot_t")
                              ? to_double(raw("oracle.snapshot_t"), "oracle.snapshot_t", at("oracle.snapshot_t"))
                              : c.solver.t_end;
    if (have("compare.a"))
        c.compare_a = raw("compare.a");
    if (have("compare.b"))
        c.compare_b = raw("compare.b");

    // resolved echo, defaults included
    auto put = [&](const std::string& k, const std::string& v) { c.resolved.emplace_back(k, v); };
    put("problem.beta1", fmt17(c.beta1));
    put("problem.beta2", fmt17(c.beta2));
    put("problem.b_bar", fmt17(c.b_bar));
    put("problem.b", fmt17(c.b));
    put("problem.law", c.law == BoundaryLaw::frozen_h ? "frozen_h" : "paper_h");
    put("profile.kind", c.profile_kind);
    put("profile.path", c.profile_path);
    put("profile.z_min", fmt17(c.profile_z_min));
    put("profile.h", fmt17(c.profile_h));
    put("profile.left", fmt17(c.profile_left));
    put("physical.path", c.physical_path);
    put("solver.dt", fmt17(c.solver.dt));
    put("solver.t_end", fmt17(c.solver.t_end));
    put("solver.picard_tol", fmt17(c.solver.picard_tol));
    put("solver.picard_max", std::to_string(c.solver.picard_max));
    put("solver.z_tail", fmt17(c.solver.z_tail));
    put("solver.ktau_mode", c.solver.ktau_mode == KtauMode::frozen ? "frozen" : "retarded");
    put("snapshot.times", fmt_list(c.snapshot_times));
    put("snapshot.z_min", fmt17(c.snapshot_z_min));
    put("snapshot.n", std::to_string(c.snapshot_n));
    put("snapshot.parametric", c.snapshot_parametric ? "true" : "false");
    put("fd.depth", fmt17(c.fd.depth));
    put("fd.ny", std::to_string(c.fd.ny));
    put("fd.dt", fmt17(c.fd.dt));
    put("fd.theta", fmt17(c.fd.theta_scheme));
    put("certify.b2", fmt17(c.certify_b2));
    put("certify.trials", std::to_string(c.certify_trials));
    put("certify.contraction_steps", std::to_string(c.contraction_steps));
    put("certify.run_contraction", c.run_contraction ? "true" : "false");
    put("convergence.dts", fmt_list(c.convergence_dts));
    put("convergence.tie_profile", c.convergence_tie_profile ? "true" : "false");
    put("oracle.snapshot_t", fmt17(c.oracle_snapshot_t));
    put("compare.a", c.compare_a);
    put("compare.b", c.compare_b);
    return c;
}

std::string config_hash(const CliConfig& cfg, std::uint64_t seed)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& [k, v] : cfg.resolved) {
        mix(k);
        mix("=");
        mix(v);
        mix("\n");
    }
    mix("seed=" + std::to_string(seed));
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace stefan
