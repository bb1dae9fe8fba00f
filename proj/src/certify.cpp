#include "stefan/certify.hpp"
#include "stefan/errors.hpp"
#include "stefan/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace stefan {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kVacuousSigma = 1e-30;

double sup_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

// xorshift-based uniform in [-1, 1); self-contained so runs are bit-stable
// across standard libraries.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next()
    {
        std::uint64_t x = state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state = x;
        return x * 0x2545f4914f6cdd1dull;
    }
    double sym() { return (static_cast<double>(next() >> 11) * 0x1.0p-53) * 2.0 - 1.0; }
};

} // namespace

double default_B2(double b_bar)
{
    return 1.0 / (2.0 * kSqrtPi * b_bar);
}

Certificate constants(const LinearizedProfile& profile, double beta2)
{
    const double ab2 = std::fabs(beta2);
    if (!(ab2 > 0.5))
        throw out_of_regime_error("constants: need |beta2| > 1/2 for the contraction constants");
    Certificate c;
    c.norm_dpsi0 = sup_abs(profile.dpsi);
    c.norm_psi0 = std::max({std::fabs(profile.beta1), ab2, sup_abs(profile.psi)});
    c.A1 = c.norm_dpsi0 / kSqrtPi;
    c.M = 2.0 * c.A1 + 1.0;
    c.B3 = (1.0 / ab2) * (1.0 + 1.0 / ab2);
    c.B1 = c.M * c.B3;
    return c;
}

Certificate bound_set(Certificate cert, const LinearizedProfile& profile, double beta1,
                      double beta2, double B2)
{
    const double ab2 = std::fabs(beta2);
    cert.B2 = B2;
    cert.norm_psi0 = std::max({std::fabs(beta1), ab2, sup_abs(profile.psi)});
    cert.B4 = cert.norm_psi0 * cert.B1 * cert.B3 / (4.0 * kSqrtPi);
    cert.B5 = cert.norm_dpsi0 * cert.B3 / (2.0 * kSqrtPi);
    const double expf = (cert.B1 * cert.B1 > 709.0) ? std::numeric_limits<double>::infinity()
                                                    : std::exp(cert.B1 * cert.B1);
    cert.B6 = (1.0 / ab2) * (cert.B1 / kSqrtPi + 3.0 * cert.M / (kSqrtPi * ab2) +
                             (ab2 / 4.0) * cert.B1 * cert.B3 * expf);
    if (!std::isfinite(cert.B6))
        cert.flags.push_back("B6 overflow: e^{B1^2} exceeds double range");
    cert.B7 = ab2 * cert.B1 * cert.B3 / (4.0 * kSqrtPi);
    cert.B8 = cert.B4 + cert.B5 + cert.B6 + cert.B7;
    return cert;
}

Certificate window(Certificate cert, double beta2, double psi0_at_bbar)
{
    const double ab2 = std::fabs(beta2);
    if (!(cert.B2 > 0.0))
        throw domain_error("window: B2 must be positive");
    cert.sigma1 = 1.0 / (4.0 * cert.B2 * (ab2 + std::fabs(psi0_at_bbar)));
    cert.sigma2 = std::pow(ab2 * kSqrtPi / (4.0 * cert.M * cert.B1), 2);
    cert.sigma3 = std::isfinite(cert.B8) ? 1.0 / (cert.B8 * cert.B8) : 0.0;
    cert.sigma = std::min({cert.sigma1, cert.sigma2, cert.sigma3});
    if (!(cert.sigma > kVacuousSigma))
        cert.flags.push_back("window vacuous: certified sigma is numerically zero");
    if (cert.sigma == cert.sigma1)
        cert.flags.push_back("window bound by the user-supplied B2 constant");
    return cert;
}

Certificate certify_profile(const LinearizedProfile& profile, double beta1, double beta2,
                            double B2)
{
    Certificate c = constants(profile, beta2);
    c = bound_set(std::move(c), profile, beta1, beta2, B2);
    c = window(std::move(c), beta2, profile.psi.back());
    return c;
}

std::vector<std::string> spot_check_bounds(const ProblemSpec& spec, const SolverConfig& cfg,
                                           const Certificate& cert)
{
    std::vector<std::string> lines;
    const double sigma = std::min(cert.sigma, cfg.t_end);
    if (!(sigma > cfg.dt)) {
        lines.push_back("window too small to sample: sigma = " + std::to_string(sigma));
        return lines;
    }
    SolverConfig cc = cfg;
    cc.t_end = sigma;
    const FreeBoundaryTrajectory tr = solve(spec, cc);
    const double b_bar = spec.profile.b_bar;

    auto verdict = [&](const std::string& name, double lhs, double bound) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: %s (max %.6g vs bound %.6g)", name.c_str(),
                      lhs <= bound ? "OK" : "VIOLATED", lhs, bound);
        lines.emplace_back(buf);
    };

    double max_zbar = 0.0, max_slope = 0.0, max_kernel = 0.0, max_conv = 0.0;
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
        max_zbar = std::max(max_zbar, std::fabs(tr.zbar[i]));
        max_slope = std::max(max_slope, std::fabs((tr.zbar[i] - tr.zbar[i - 1]) /
                                                  (tr.times[i] - tr.times[i - 1])));
        max_kernel = std::max(max_kernel, eval_K(tr.zbar[i] - b_bar, tr.times[i]));
        max_conv = std::max(max_conv,
                            std::fabs(gauss_conv_pwlinear(spec.profile.z, spec.profile.dpsi, 0.0,
                                                          tr.zbar[i], tr.times[i])));
    }
    verdict("boundary position |zbar| <= B1 sigma", max_zbar, cert.B1 * sigma);
    verdict("boundary velocity |zbardot| <= B3 M", max_slope, cert.B3 * cert.M);
    verdict("boundary Lipschitz increment <= B1 dt", max_slope * cc.dt, cert.B1 * cc.dt);
    verdict("kernel endpoint K(zbar - b_bar, t) <= B2 sigma", max_kernel, cert.B2 * sigma);
    verdict("initial-slope convolution <= A1", max_conv, cert.A1);
    return lines;
}

ContractionStats empirical_contraction(const ProblemSpec& spec, const SolverConfig& cfg,
                                       const Certificate& cert, int trials, std::uint64_t seed)
{
    if (!(cert.sigma > cfg.dt))
        throw usage_error("empirical_contraction: certified window must exceed dt");
    if (trials < 1)
        throw usage_error("empirical_contraction: need at least one trial");

    const double horizon = std::min(cert.sigma, cfg.t_end);
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(horizon / cfg.dt)));
    std::vector<double> times(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        times[i] = static_cast<double>(i) * cfg.dt;

    Rng rng(seed);
    ContractionStats st;
    st.window = times.back();
    st.steps = static_cast<int>(n);
    double sum = 0.0;
    int used = 0;
    std::vector<double> u(n + 1), v(n + 1);
    for (int trial = 0; trial < trials; ++trial) {
        for (std::size_t i = 0; i <= n; ++i)
            u[i] = cert.M * rng.sym();
        for (std::size_t i = 0; i <= n; ++i)
            v[i] = cert.M * rng.sym();
        double delta = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            delta = std::max(delta, std::fabs(u[i] - v[i]));
        if (delta == 0.0)
            continue; // degenerate pair, excluded
        const std::vector<double> Tu = apply_operator(spec, cfg, times, u);
        const std::vector<double> Tv = apply_operator(spec, cfg, times, v);
        double dT = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            dT = std::max(dT, std::fabs(Tu[i] - Tv[i]));
        const double ratio = dT / delta;
        st.max_ratio = std::max(st.max_ratio, ratio);
        sum += ratio;
        ++used;
    }
    st.trials_used = used;
    st.mean_ratio = used > 0 ? sum / used : 0.0;
    return st;
}

} // namespace stefan
