#include "stefan/kernel.hpp"
#include "stefan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stefan {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kExpFloor = 745.0; // exp(-745) is the last normal-ish magnitude

void require_positive_time(double t, const char* who)
{
    if (!(t > 0.0))
        throw domain_error(std::string(who) + ": t must be positive, got " + std::to_string(t));
}
} // namespace

double eval_K(double z, double t)
{
    require_positive_time(t, "eval_K");
    const double a = z * z / (4.0 * t);
    if (a > kExpFloor)
        return 0.0;
    return std::exp(-a) / (2.0 * kSqrtPi * std::sqrt(t));
}

double eval_K_z(double z, double t)
{
    require_positive_time(t, "eval_K_z");
    return -z / (2.0 * t) * eval_K(z, t);
}

double eval_K_t(double z, double t)
{
    require_positive_time(t, "eval_K_t");
    return (z * z / (4.0 * t * t) - 1.0 / (2.0 * t)) * eval_K(z, t);
}

double layer_mass(double a, double z, double t)
{
    require_positive_time(t, "layer_mass");
    return 0.5 * std::erfc((z - a) / (2.0 * std::sqrt(t)));
}

double kernel_time_mass(double w, double s)
{
    if (s <= 0.0)
        return 0.0;
    const double aw = std::fabs(w);
    const double r = aw / (2.0 * std::sqrt(s));
    const double ex = (r * r > kExpFloor) ? 0.0 : std::exp(-r * r);
    return std::sqrt(s / M_PI) * ex - 0.5 * aw * std::erfc(r);
}

double dipole_time_mass(double w, double s)
{
    if (s <= 0.0 || w == 0.0)
        return 0.0;
    const double r = std::fabs(w) / (2.0 * std::sqrt(s));
    return std::copysign(0.5, w) * std::erfc(r);
}

double gauss_conv_pwlinear(std::span<const double> z_grid, std::span<const double> f,
                           double tail_value, double z, double t)
{
    require_positive_time(t, "gauss_conv_pwlinear");
    if (z_grid.size() < 2 || f.size() != z_grid.size())
        throw usage_error("gauss_conv_pwlinear: malformed samples");
    const double s2 = 2.0 * std::sqrt(t);
    const double R = 28.0 * s2; // erfc and the kernel underflow past this radius

    double acc = 0.0;
    if (tail_value != 0.0)
        acc += tail_value * layer_mass(z_grid.front(), z, t);
    if (z - R > z_grid.back() || z + R < z_grid.front())
        return acc;

    auto lo_it = std::lower_bound(z_grid.begin(), z_grid.end(), z - R);
    auto hi_it = std::upper_bound(z_grid.begin(), z_grid.end(), z + R);
    std::size_t i0 = static_cast<std::size_t>(lo_it - z_grid.begin());
    std::size_t i1 = static_cast<std::size_t>(hi_it - z_grid.begin());
    if (i0 > 0)
        --i0;
    if (i1 >= z_grid.size())
        i1 = z_grid.size() - 1;
    if (i1 <= i0)
        return acc;

    double erfc_a = std::erfc((z - z_grid[i0]) / s2);
    double K_a = eval_K(z - z_grid[i0], t);
    for (std::size_t j = i0; j < i1; ++j) {
        const double a = z_grid[j];
        const double b = z_grid[j + 1];
        const double erfc_b = std::erfc((z - b) / s2);
        const double K_b = eval_K(z - b, t);
        const double P0 = 0.5 * (erfc_b - erfc_a);
        const double P1 = (z - a) * P0 + 2.0 * t * (K_a - K_b);
        const double slope = (f[j + 1] - f[j]) / (b - a);
        acc += f[j] * P0 + slope * P1;
        erfc_a = erfc_b;
        K_a = K_b;
    }
    return acc;
}

std::vector<double> singular_weights(std::span<const double> grid, double T)
{
    const std::size_t n = grid.size();
    if (n < 2)
        throw usage_error("singular_weights: need at least two grid nodes");
    if (grid[0] != 0.0)
        throw usage_error("singular_weights: grid must start at 0");
    if (grid[n - 1] > T * (1.0 + 1e-15) + 1e-300)
        throw usage_error("singular_weights: grid extends past the target time");

    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double a = grid[j];
        const double b = grid[j + 1];
        const double h = b - a;
        if (!(h > 0.0))
            throw usage_error("singular_weights: grid not strictly increasing");
        const double A = T - a;
        const double B = std::max(T - b, 0.0);
        const double sA = std::sqrt(A);
        const double sB = std::sqrt(B);
        // m0 = int_a^b (T-tau)^(-1/2) dtau, m1h = (1/h) int_a^b (tau-a)(T-tau)^(-1/2) dtau,
        // written cancellation-free.
        const double m0 = 2.0 * h / (sA + sB);
        const double m1h = (2.0 * h / 3.0) * (2.0 * sA + sB) / ((sA + sB) * (sA + sB));
        w[j] += m0 - m1h;
        w[j + 1] += m1h;
    }
    return w;
}

SingularWeightRow abel_row(std::vector<double> t_grid, double target_t)
{
    std::size_t idx = t_grid.size();
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] == target_t) {
            idx = i;
            break;
        }
    }
    if (idx == t_grid.size())
        throw usage_error("abel_row: target_t is not a node of t_grid");

    SingularWeightRow row;
    row.target_t = target_t;
    std::vector<double> prefix(t_grid.begin(), t_grid.begin() + static_cast<std::ptrdiff_t>(idx) + 1);
    std::vector<double> w = singular_weights(prefix, target_t);
    w.resize(t_grid.size(), 0.0);
    row.t_grid = std::move(t_grid);
    row.weights = std::move(w);
    return row;
}

} // namespace stefan
