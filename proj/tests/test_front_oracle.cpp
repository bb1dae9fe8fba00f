#include "doctest.h"

#include "stefan/errors.hpp"
#include "stefan/front_oracle.hpp"

#include <cmath>
#include <random>

using namespace stefan;

TEST_CASE("make_front closed forms")
{
    const FrontSolution a = make_front(1.0, -1.0, std::log(2.0));
    CHECK(a.V == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(a.nu_const == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(a.s_dot == doctest::Approx(-2.0).epsilon(1e-14));

    const FrontSolution b = make_front(2.0, -2.0, std::log(2.0));
    CHECK(b.V == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(b.nu_const == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(b.s_dot == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(b.alpha == doctest::Approx(2.0).epsilon(1e-14));

    // b_bar -> inf pushes the speed to 0-
    const FrontSolution c = make_front(2.0, -2.0, 1e9);
    CHECK(c.V < 0.0);
    CHECK(std::fabs(c.V) < 1e-8);

    CHECK_THROWS_AS(make_front(-1.0, -1.0, 1.0), stefan::domain_error);
    CHECK_THROWS_AS(make_front(1.0, 1.0, 1.0), stefan::domain_error);
    CHECK_THROWS_AS(make_front(1.0, -1.0, 0.0), stefan::domain_error);
}

TEST_CASE("front invariants hold for random parameters")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ub(0.3, 4.0);
    for (int i = 0; i < 100; ++i) {
        const double b1 = ub(rng), ab2 = ub(rng), bb = ub(rng);
        const FrontSolution f = make_front(b1, -ab2, bb);
        CHECK(f.V < 0.0);
        CHECK(std::exp(-f.V * f.b_bar) == doctest::Approx(1.0 + ab2 / b1).epsilon(1e-12));
        CHECK(f.alpha > 1.0);
        CHECK(f.alpha == doctest::Approx(f.s_dot / f.V).epsilon(1e-12));
        CHECK(f.nu_const == doctest::Approx(f.V * (b1 + ab2)).epsilon(1e-12));
    }
}

TEST_CASE("psi_front boundary and level-set values")
{
    const FrontSolution f = make_front(2.0, -2.0, std::log(2.0));
    for (double t : {0.0, 0.13, 0.4}) {
        CHECK(psi_front(f, f.V * t, t) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(psi_front(f, zbar_front(f, t), t) == doctest::Approx(f.beta2).epsilon(1e-13));
    }
    CHECK(psi_front(f, -1.0, 0.0) == doctest::Approx(1.2642411176571154).epsilon(1e-14));
    CHECK_THROWS_AS(psi_front(f, zbar_front(f, 0.1) + 0.1, 0.1), stefan::domain_error);
}

TEST_CASE("zbar_front is affine")
{
    const FrontSolution f = make_front(2.0, -2.0, std::log(2.0));
    CHECK(zbar_front(f, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(zbar_front(f, 0.3) == doctest::Approx(0.39314718055994531).epsilon(1e-14));
    CHECK_THROWS_AS(zbar_front(f, -0.1), stefan::domain_error);
}

TEST_CASE("x_front against its defining integral")
{
    const FrontSolution f = make_front(2.0, -2.0, std::log(2.0));
    CHECK(x_front(f, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(x_front(f, std::log(2.0), 0.0) == doctest::Approx(-0.61370563888010938).epsilon(1e-13));

    // trapezoid quadrature of psi_front converges to the closed form
    const double t = 0.2, z = 0.4;
    double prev_err = 1e9;
    for (int n : {200, 400, 800}) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double za = z * i / n, zb = z * (i + 1) / n;
            acc += 0.5 * (psi_front(f, za, t) + psi_front(f, zb, t)) * (zb - za);
        }
        const double err = std::fabs(acc - x_front(f, z, t));
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-6);
}

TEST_CASE("front solves the heat equation and has constant flux")
{
    const FrontSolution f = make_front(3.0, -1.5, 0.9);
    const double h = 1e-4;
    for (double t : {0.1, 0.25}) {
        for (double z : {-2.0, -0.5, 0.2}) {
            const double psi_t = (psi_front(f, z, t + h) - psi_front(f, z, t - h)) / (2.0 * h);
            const double psi_zz =
                (psi_front(f, z + h, t) - 2.0 * psi_front(f, z, t) + psi_front(f, z - h, t)) / (h * h);
            CHECK(psi_t == doctest::Approx(psi_zz).epsilon(1e-6));
        }
        // psi_z at the boundary equals nu_const
        const double zb = zbar_front(f, t);
        const double nu_fd = (psi_front(f, zb, t) - psi_front(f, zb - h, t)) / h;
        CHECK(nu_fd == doctest::Approx(f.nu_const).epsilon(1e-3));
    }
}

TEST_CASE("consistency residual identifies the r = 0 locus")
{
    CHECK(consistency_residual(make_front(2.0, -2.0, 1.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(consistency_residual(make_front(1.0, -1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    // beta2 = beta1/(1-beta1) solves r = 0 for beta1 > 1
    for (double b1 : {1.5, 2.0, 3.0, 7.0}) {
        const double b2 = b1 / (1.0 - b1);
        CHECK(consistency_residual(make_front(b1, b2, 0.7)) == doctest::Approx(0.0).epsilon(1e-12));
    }
}
