#include "doctest.h"

#include "stefan/errors.hpp"
#include "stefan/kernel.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace stefan;

namespace {

// Composite Simpson for the brute-force checks; grids everywhere are fine
// enough that the rule's own error is far below the asserted tolerances.
double simpson(double a, double b, int n, const auto& f)
{
    if (n % 2)
        ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("heat kernel point values")
{
    CHECK(eval_K(0.0, 1.0) == doctest::Approx(0.28209479177387814).epsilon(1e-14));
    CHECK(eval_K(2.0, 1.0) == doctest::Approx(0.10377687435514868).epsilon(1e-14));
    CHECK(eval_K(1.0, 0.25) == doctest::Approx(0.20755374871029735).epsilon(1e-14));
    CHECK(eval_K(5.0, 0.1) > 0.0);
    CHECK_THROWS_AS(eval_K(1.0, 0.0), stefan::domain_error);
    CHECK_THROWS_AS(eval_K(1.0, -1.0), stefan::domain_error);
}

TEST_CASE("kernel derivatives: values, symmetry, heat identity")
{
    CHECK(eval_K_z(0.0, 0.7) == 0.0);
    CHECK(eval_K_z(1.0, 1.0) == doctest::Approx(-0.10984782236693060).epsilon(1e-14));
    CHECK(eval_K_z(-1.0, 1.0) == doctest::Approx(0.10984782236693060).epsilon(1e-14));
    CHECK(eval_K_t(0.0, 1.0) == doctest::Approx(-0.14104739588693907).epsilon(1e-14));
    CHECK(eval_K_t(1.0, 0.5) == 0.0); // z^2 = 2t kills the prefactor
    CHECK(eval_K_t(2.0, 1.0) == doctest::Approx(0.5 * eval_K(2.0, 1.0)).epsilon(1e-14));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uz(-4.0, 4.0), ut(0.05, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double z = uz(rng), t = ut(rng);
        CHECK(eval_K(z, t) == eval_K(-z, t));
        CHECK(eval_K_z(z, t) == -eval_K_z(-z, t));
        // exact algebraic identity K_t = K_zz
        const double kzz = (z * z / (4.0 * t * t) - 1.0 / (2.0 * t)) * eval_K(z, t);
        CHECK(eval_K_t(z, t) == kzz);
    }
}

TEST_CASE("kernel derivatives agree with central differences")
{
    const double h = 1e-5;
    for (double z : {-1.7, -0.3, 0.4, 1.1, 2.6}) {
        for (double t : {0.07, 0.4, 1.3}) {
            const double dz = (eval_K(z + h, t) - eval_K(z - h, t)) / (2.0 * h);
            const double dt = (eval_K(z, t + h) - eval_K(z, t - h)) / (2.0 * h);
            CHECK(eval_K_z(z, t) == doctest::Approx(dz).epsilon(1e-6));
            CHECK(eval_K_t(z, t) == doctest::Approx(dt).epsilon(1e-6));
        }
    }
}

TEST_CASE("kernel normalization over a truncated domain")
{
    for (double t : {0.01, 0.1, 1.0}) {
        const double R = 12.0 * std::sqrt(t);
        const double mass = simpson(-R, R, 40000, [&](double z) { return eval_K(z, t); });
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("kernel underflow policy returns exact zero")
{
    CHECK(eval_K(110.0, 1.0) == 0.0); // z^2/(4t) = 3025 > 745
    CHECK(eval_K_z(110.0, 1.0) == 0.0);
    CHECK(eval_K_t(110.0, 1.0) == 0.0);
}

TEST_CASE("layer_mass closed form")
{
    CHECK(layer_mass(1e6, 0.3, 0.5) == doctest::Approx(1.0).epsilon(1e-15)); // a -> +inf
    CHECK(layer_mass(0.7, 0.7, 0.2) == doctest::Approx(0.5).epsilon(1e-15)); // a = z
    CHECK(layer_mass(0.0, 1.0, 0.25) == doctest::Approx(0.078649603525142565).epsilon(1e-13));
    // monotone increasing in a
    double prev = -1.0;
    for (double a = -3.0; a <= 3.0; a += 0.25) {
        const double v = layer_mass(a, 0.4, 0.3);
        CHECK(v >= prev);
        prev = v;
    }
    // brute-force quadrature of the defining integral
    const double direct = simpson(-30.0, 0.8, 20000, [&](double xi) { return eval_K(0.2 - xi, 0.45); });
    CHECK(layer_mass(0.8, 0.2, 0.45) == doctest::Approx(direct).epsilon(1e-10));
    CHECK_THROWS_AS(layer_mass(0.0, 0.0, 0.0), stefan::domain_error);
}

TEST_CASE("time-mass closed forms match quadrature")
{
    // int_0^s K(w,u) du and int_0^s (w/(2u)) K(w,u) du; substitute u = r^2 to
    // tame the endpoint and integrate by Simpson
    for (double w : {-0.8, -0.1, 0.3, 1.5}) {
        for (double s : {0.05, 0.4}) {
            const double km = simpson(1e-8, std::sqrt(s), 20000,
                                      [&](double r) { return 2.0 * r * eval_K(w, r * r); });
            const double dm = simpson(1e-8, std::sqrt(s), 20000, [&](double r) {
                return 2.0 * r * (w / (2.0 * r * r)) * eval_K(w, r * r);
            });
            CHECK(kernel_time_mass(w, s) == doctest::Approx(km).epsilon(1e-8));
            CHECK(dipole_time_mass(w, s) == doctest::Approx(dm).epsilon(1e-8));
        }
    }
    CHECK(dipole_time_mass(0.0, 1.0) == 0.0);
    // the dipole mass realizes the half jump as s grows
    CHECK(dipole_time_mass(1e-9, 1.0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(dipole_time_mass(-1e-9, 1.0) == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("abel_row exactness on 1 and tau")
{
    SUBCASE("f == 1 gives 2 sqrt(T)")
    {
        for (int n : {2, 5, 17, 101}) {
            const double T = 0.73;
            std::vector<double> g(n);
            for (int i = 0; i < n; ++i)
                g[i] = T * i / (n - 1.0);
            g.back() = T;
            const SingularWeightRow row = abel_row(g, T);
            double acc = 0.0;
            for (double w : row.weights)
                acc += w;
            CHECK(acc == doctest::Approx(2.0 * std::sqrt(T)).epsilon(1e-12));
        }
    }
    SUBCASE("f == tau on [0,1] gives 4/3")
    {
        for (int n : {2, 9, 64}) {
            std::vector<double> g(n);
            for (int i = 0; i < n; ++i)
                g[i] = i / (n - 1.0);
            g.back() = 1.0;
            const SingularWeightRow row = abel_row(g, 1.0);
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += row.weights[i] * g[i];
            CHECK(acc == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        }
    }
    SUBCASE("single interval is exact for linear f")
    {
        const double T = 0.31;
        const SingularWeightRow row = abel_row({0.0, T}, T);
        // f(tau) = 2 - 5 tau: exact integral 2*2 sqrt(T) - 5 * (4/3) T^(3/2)
        const double got = row.weights[0] * 2.0 + row.weights[1] * (2.0 - 5.0 * T);
        const double want = 4.0 * std::sqrt(T) - 5.0 * (4.0 / 3.0) * std::pow(T, 1.5);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("abel_row against brute force on random piecewise-linear data")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uf(-2.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 40);
        std::vector<double> g(n), f(n);
        g[0] = 0.0;
        for (int i = 1; i < n; ++i)
            g[i] = g[i - 1] + 0.01 + 0.3 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        for (int i = 0; i < n; ++i)
            f[i] = uf(rng);
        const double T = g.back();
        const SingularWeightRow row = abel_row(g, T);
        double got = 0.0;
        for (int i = 0; i < n; ++i)
            got += row.weights[i] * f[i];
        // substitute tau = T - r^2: integrand becomes 2 f(T - r^2), smooth
        auto f_at = [&](double tau) {
            auto it = std::upper_bound(g.begin(), g.end(), tau);
            std::size_t j = std::min<std::size_t>(g.size() - 2, std::max<std::ptrdiff_t>(0, it - g.begin() - 1));
            const double u = (tau - g[j]) / (g[j + 1] - g[j]);
            return f[j] + u * (f[j + 1] - f[j]);
        };
        const double want = simpson(0.0, std::sqrt(T), 60000,
                                    [&](double r) { return 2.0 * f_at(T - r * r); });
        CHECK(got == doctest::Approx(want).epsilon(5e-7));
    }
}

TEST_CASE("abel_row rejects off-grid targets")
{
    CHECK_THROWS_AS(abel_row({0.0, 0.5, 1.0}, 0.7), stefan::usage_error);
    CHECK_THROWS_AS(singular_weights(std::vector<double>{0.1, 0.5}, 0.5), stefan::usage_error);
}

TEST_CASE("abel_row pads nodes past the target with zero weights")
{
    const SingularWeightRow row = abel_row({0.0, 0.25, 0.5, 0.75, 1.0}, 0.5);
    REQUIRE(row.weights.size() == 5);
    CHECK(row.weights[3] == 0.0);
    CHECK(row.weights[4] == 0.0);
    CHECK(row.weights[0] + row.weights[1] + row.weights[2] ==
          doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("weight row applied to f == 1 reproduces 2 sqrt(t) on refinements")
{
    std::vector<double> g{0.0};
    for (int i = 1; i <= 24; ++i)
        g.push_back(g.back() + (i % 3 == 0 ? 0.002 : 0.013));
    const double T = g.back();
    const SingularWeightRow row = abel_row(g, T);
    double acc = 0.0;
    for (double w : row.weights)
        acc += w;
    CHECK(acc == doctest::Approx(2.0 * std::sqrt(T)).epsilon(1e-12));
}
