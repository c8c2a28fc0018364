#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "hg/kernel.hpp"

using namespace hg;
using doctest::Approx;

TEST_CASE("phi values")
{
    CHECK(phi(make_params(1, 2), 2.0) == Approx(-0.25).epsilon(1e-15));
    CHECK(phi(make_params(2, 2, 4.0), 4.0) == 0.0);
    CHECK(phi(make_params(2, 2, 4.0), 2.0) == Approx(std::log(0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(phi(make_params(1, 2), 0.0), std::domain_error);
    CHECK_THROWS_AS(phi(make_params(1, 2), NAN), std::domain_error);
    CHECK_THROWS_AS(phi(make_params(1, 1, 4.0), 5.0), std::domain_error);
}

TEST_CASE("phi_inv values")
{
    CHECK(phi_inv(make_params(1, 2), -0.25) == Approx(2.0).epsilon(1e-15));
    CHECK(phi_inv(make_params(3, 3, 4.0), 0.0) == Approx(4.0).epsilon(1e-15));
    CHECK(phi_inv(make_params(1, 4), -1.0) == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(phi_inv(make_params(1, 2), 0.0), std::domain_error);
    CHECK_THROWS_AS(phi_inv(make_params(1, 1), 0.5), std::domain_error);
}

TEST_CASE("theta values")
{
    CHECK(theta(make_params(1, 2), 0.5, 4.0) == Approx(1.0).epsilon(1e-15));
    for (int n = 2; n <= 5; ++n)
        CHECK(theta(make_params(1, n), 0.3, 1.0) == Approx(0.3).epsilon(1e-15));
    CHECK(theta(make_params(1, 1, 4.0), 1.0, 2.0) == Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(theta(make_params(1, 2), 0.5, 0.0), std::domain_error);
}

TEST_CASE("f_mod values")
{
    CHECK(f_mod(make_params(1, 2), 1.0, 0.5) == Approx(8.0).epsilon(1e-15));
    CHECK(f_mod(make_params(1, 1), 1.0, 0.25) == Approx(4.0).epsilon(1e-15));
    CHECK(f_mod(make_params(1, 2), 1.0, 1.0) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("lipschitz constants")
{
    auto a = lipschitz_constants(make_params(1, 2), {0.1, 1.0, 2.0, 0.1});
    CHECK(a.L == Approx(4.0).epsilon(1e-15));
    CHECK(a.Lp == Approx(4.0).epsilon(1e-15));
    auto b = lipschitz_constants(make_params(1, 1, 4.0), {0.1, 1.0, 2.0, 0.1});
    CHECK(b.L == Approx(8.0).epsilon(1e-15));
    auto c = lipschitz_constants(make_params(1, 2), {0.1, 4.0, 4.5, 0.1});
    CHECK(c.L == Approx(std::max(2.0 * 4.5 * std::pow(4.0, -1.5), 0.025)).epsilon(1e-15));
    auto d = lipschitz_constants(make_params(1, 2), {0.1, 4.0, 4.0 + 1e-12, 0.1});
    CHECK(d.L == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("perturbation schedule")
{
    auto p = make_params(1, 2);
    FamilyParams f{0.1, 1.0, 2.0, 0.1};
    auto s = perturbation_schedule(p, f, 0.4, 0.6, 0.001);
    CHECK(s.delta == Approx(0.1).epsilon(1e-12));
    CHECK(s.eps == Approx(0.01).epsilon(1e-12));
    CHECK(perturbation_schedule(p, f, 1, 0, 1e-4, 1e-9).tau == Approx(2.0 / 3.0).epsilon(1e-8));

    auto q = make_params(1, 1, std::exp(1.0));
    auto t = perturbation_schedule(q, f, 0.5, 0.5, std::exp(-9.0));
    CHECK(t.eps == Approx(0.1).epsilon(1e-12));
    CHECK(t.R1 == Approx(std::exp(1.0)).epsilon(1e-15));

    CHECK_THROWS_AS(perturbation_schedule(p, f, 1, 0, 0.01), std::domain_error);
    CHECK_THROWS_AS(perturbation_schedule(p, f, 1, 0, 1e-4, 1.0), std::domain_error);
}

TEST_CASE("logarithmic r0 bounds the theta increment")
{
    auto p = make_params(1, 1, 4.0);
    FamilyParams f{0.1, 1.0, 2.0, 0.1};
    double r0 = schedule_r0(p, f);
    CHECK(r0 > 0);
    CHECK(r0 <= 1.0);
    for (int i = 0; i <= 1000; ++i) {
        double nu = f.gamma0 + (f.gamma1 - f.gamma0) * i / 1000.0;
        double gap = theta(p, f.delta0, nu) - theta(p, f.delta0 / 2, nu);
        CHECK(r0 * f.delta0 <= gap * (1 + 1e-6));
    }
}

TEST_CASE("phi is negative, increasing and inverted by phi_inv")
{
    for (int n = 2; n <= 6; ++n)
        for (int m = 1; m < n; ++m) {
            auto p = make_params(m, n);
            double prev = -INFINITY, worst = 0;
            for (int k = 0; k < 1000; ++k) {
                double r = std::pow(10.0, -6.0 + 8.0 * k / 999.0);
                double v = phi(p, r);
                CHECK(v < 0);
                CHECK(v > prev);
                prev = v;
                worst = std::max(worst, std::abs(phi_inv(p, v) - r) / r);
            }
            CHECK(worst <= 1e-12);
        }
    auto q = make_params(2, 2, 4.0);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        double r = 4.0 * std::pow(10.0, -6.0 * k / 999.0);
        worst = std::max(worst, std::abs(phi_inv(q, phi(q, r)) - r) / r);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("theta identity and monotonicity on random inputs")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lu(-5.0, 0.0), nu_d(0.5, 8.0);
    const HessianParams ps[] = {make_params(1, 2), make_params(2, 3), make_params(1, 5),
                                make_params(1, 1, 4.0), make_params(3, 3, 6.0)};
    for (const auto& p : ps) {
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            double delta = std::pow(10.0, lu(rng)), nu = nu_d(rng);
            double target = phi(p, delta) / nu;
            double th = theta(p, delta, nu);
            if (p.logarithmic() && th > p.R0)
                continue;
            worst = std::max(worst, std::abs(phi(p, th) - target) / std::abs(target));

            double d2 = delta * (1 + 0.5 * nu_d(rng) / 8), nu2 = nu * 1.1;
            if (p.logarithmic() && d2 > p.R0)
                continue;
            CHECK(theta(p, d2, nu) > th);
            CHECK(theta(p, delta, nu2) > th);
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("critical exponent identity")
{
    for (int n = 2; n <= 6; ++n)
        for (int m = 1; m < n; ++m) {
            auto p = make_params(m, n);
            double s = p.s();
            double lhs = 1.0 - static_cast<double>(m) / (2 * n - m);
            CHECK(lhs == Approx(2 * s / (2 * s + 1)).epsilon(1e-14));
            CHECK(tau_of_alpha(p, 0.0) == Approx(lhs).epsilon(1e-14));
        }
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(make_params(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1, 2, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((FamilyParams{0.1, 2.0, 1.0, 0.1}.validate()), std::invalid_argument);
    CHECK(default_R0(2.0) == 5.0);
}
