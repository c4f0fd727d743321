// SPDX-License-Identifier: Apache-2.0
//
// fadelab: statistics of fading channels with multiple specular components
// Copyright (C) 2026 The fadelab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include "fadelab/specfun.hpp"
#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace fadelab;
using namespace fadelab::specfun;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

TEST_CASE("bessel_i0 values and symmetry", "[specfun]")
{
    CHECK(bessel_i0(0.0) == 1.0);
    CHECK(bessel_i0(-3.7) == bessel_i0(3.7));

    // oracle: 50-term power series
    constexpr double i0_at_1 = 1.2660658777520084;
    CHECK_THAT(oracle::i0_series(1.0), WithinRel(i0_at_1, 1e-15));
    CHECK_THAT(bessel_i0(1.0), WithinRel(i0_at_1, 1e-15));

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    for (int i = 0; i < 100; ++i)
    {
        const double x = dist(gen);
        CHECK_THAT(bessel_i0(-x), WithinRel(bessel_i0(x), 1e-12));
        CHECK_THAT(bessel_i0(x), WithinRel(boost::math::cyl_bessel_i(0, x), 1e-13));
    }
}

TEST_CASE("bessel_i0_scaled is consistent across the series/asymptotic switch", "[specfun]")
{
    for (double x : {0.5, 5.0, 24.9, 25.0, 25.1, 40.0, 100.0, 600.0})
        CHECK_THAT(std::exp(x) * bessel_i0_scaled(x), WithinRel(bessel_i0(x), 1e-14));
    for (double x : {24.999, 25.001, 30.0, 80.0, 300.0})
        CHECK_THAT(bessel_i0(x), WithinRel(boost::math::cyl_bessel_i(0, x), 1e-13));
    // scaled value stays representable where I0 overflows
    CHECK(std::isfinite(bessel_i0_scaled(1e5)));
    CHECK_THAT(bessel_i0_scaled(1e5), WithinRel(1.0 / std::sqrt(2 * M_PI * 1e5), 1e-5));
    CHECK_THROWS_AS(bessel_i0(NAN), domain_error);
    CHECK_THROWS_AS(bessel_i0_scaled(INFINITY), domain_error);
}

TEST_CASE("marcum_q1 special values and oracle", "[specfun]")
{
    CHECK(marcum_q1(3.0, 0.0) == 1.0);
    CHECK_THAT(marcum_q1(0.0, 1.7), WithinRel(std::exp(-1.7 * 1.7 / 2), 1e-15));

    // oracle: tail integral of the Rician density
    constexpr double q_1_2 = 0.26901206003591005;
    CHECK_THAT(oracle::marcum_q1_by_integration(1.0, 2.0), WithinRel(q_1_2, 1e-12));
    CHECK_THAT(marcum_q1(1.0, 2.0), WithinRel(q_1_2, 1e-12));

    for (auto [a, b] : {std::pair{0.3, 0.2}, {2.0, 1.0}, {5.0, 5.5}, {10.0, 3.0}, {4.0, 9.0}, {0.1, 6.0}})
        CHECK_THAT(marcum_q1(a, b), WithinRel(oracle::marcum_q1_by_integration(a, b), 1e-9));

    CHECK_THROWS_AS(marcum_q1(-1.0, 1.0), domain_error);
    CHECK_THROWS_AS(marcum_q1(1.0, -1.0), domain_error);
}

TEST_CASE("marcum_q1 monotonicity", "[specfun]")
{
    for (double a : {0.0, 0.5, 3.0, 12.0})
    {
        double prev = 1.0;
        for (double b = 0.0; b < 25.0; b += 0.25)
        {
            const double q = marcum_q1(a, b);
            CHECK(q <= prev + 1e-15);
            CHECK(q >= 0.0);
            prev = q;
        }
    }
    for (double b : {0.5, 3.0, 12.0})
    {
        double prev = 0.0;
        for (double a = 0.0; a < 25.0; a += 0.25)
        {
            const double q = marcum_q1(a, b);
            CHECK(q >= prev - 1e-15);
            prev = q;
        }
    }
}

TEST_CASE("marcum complement equals integral of the conditional power density", "[specfun]")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> p_dist(0.0, 30.0), w_dist(0.1, 3.0), u_dist(0.001, 40.0);
    for (int i = 0; i < 20; ++i)
    {
        const double p = p_dist(gen), w = w_dist(gen), u = u_dist(gen);
        auto density = [&](double v) {
            const double z = 2.0 * std::sqrt(p * v) / w;
            return std::exp(-(v + p) / w + z) * bessel_i0_scaled(z) / w;
        };
        double err = 0;
        const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, u, 25, 1e-14, &err);
        CHECK_THAT(marcum_q1_complement(std::sqrt(2 * p / w), std::sqrt(2 * u / w)), WithinAbs(integral, 1e-9));
    }
}

TEST_CASE("marcum complement keeps relative accuracy deep in the lower tail", "[specfun]")
{
    // 1 - Q1(a, b) ~ e^{-a^2/2} b^2/2 as b -> 0
    for (double a : {0.0, 1.0, 5.0, 15.0})
    {
        const double b = 1e-5;
        const double expected = std::exp(-a * a / 2) * b * b / 2;
        CHECK_THAT(marcum_q1_complement(a, b), WithinRel(expected, 1e-6));
    }
    // upper tail small as well
    CHECK_THAT(marcum_q1(0.0, 12.0), WithinRel(std::exp(-72.0), 1e-13));
    CHECK(marcum_q1(1.0, 30.0) > 0.0);
    CHECK(marcum_q1(1.0, 30.0) < 1e-150);
}

TEST_CASE("kummer_1f1_b1 values", "[specfun]")
{
    CHECK(kummer_1f1_b1(2.7, 0.0) == 1.0);
    CHECK_THAT(kummer_1f1_b1(1.0, 2.5), WithinRel(std::exp(2.5), 1e-15));

    // oracle: 200-term series in extended precision
    constexpr double k_3_12 = 13.678881721674575;
    CHECK_THAT(oracle::kummer_b1_series(3.0, 1.2), WithinRel(k_3_12, 1e-15));
    CHECK_THAT(kummer_1f1_b1(3.0, 1.2), WithinRel(k_3_12, 1e-14));

    for (double a : {0.5, 2.5, 7.3})
        for (double x : {0.3, 4.0, 17.0})
            CHECK_THAT(kummer_1f1_b1(a, x), WithinRel(oracle::kummer_b1_series(a, x, 400), 1e-12));

    // negative arguments through the Kummer transform
    CHECK_THAT(kummer_1f1_b1(2.0, -1.5), WithinRel(std::exp(-1.5) * (1 - 1.5), 1e-13));
    CHECK_THAT(kummer_1f1_b1(0.5, -3.0), WithinRel(oracle::kummer_b1_series(0.5, -3.0, 400), 1e-10));

    CHECK_THROWS_AS(kummer_1f1_b1(0.0, 1.0), domain_error);
    CHECK_THROWS_AS(kummer_1f1_b1(-1.0, 1.0), domain_error);
}

TEST_CASE("kummer_1f1_b1 log path for large arguments", "[specfun]")
{
    // 1F1(a;1;x) ~ e^x x^{a-1} / Gamma(a)
    const double a = 2.5, x = 2000.0;
    const double lv = log_kummer_1f1_b1(a, x);
    CHECK(std::isfinite(lv));
    CHECK_THAT(lv, WithinRel(x + (a - 1) * std::log(x) - std::lgamma(a), 1e-6));
    // integer path agrees with the log of the finite polynomial
    CHECK_THAT(log_kummer_1f1_b1(8.0, 900.0), WithinRel(900.0 + std::log(oracle::kummer_b1_series(-7.0, -900.0, 9)), 1e-12));
    // series budget exhaustion reports a partial estimate
    SeriesControl tiny{3, 1e-18};
    try
    {
        (void)kummer_1f1_b1(1.5, 10.0, tiny);
        FAIL("expected numeric_error");
    }
    catch (const numeric_error &e)
    {
        CHECK(std::isfinite(e.partial_estimate()));
    }
    CHECK_THROWS_AS(SeriesControl({0, 0.1}).validate(), argument_error);
    CHECK_THROWS_AS(SeriesControl({10, 1.0}).validate(), argument_error);
}

TEST_CASE("kummer direct and transformed series agree", "[specfun]")
{
    for (int a = 1; a <= 10; ++a)
        for (double x = 0.1; x <= 10.0; x += 0.7)
        {
            const long double direct = detail::kummer_direct_series(a, x);
            const long double transformed = detail::kummer_transformed(a, x);
            CHECK_THAT(static_cast<double>(transformed), WithinRel(static_cast<double>(direct), 1e-10));
            CHECK_THAT(kummer_1f1_b1(a, x), WithinRel(static_cast<double>(direct), 1e-12));
        }
}

TEST_CASE("humbert_phi2 values", "[specfun]")
{
    CHECK(humbert_phi2(0.3, 1.7, 2.0, 0.0, 0.0) == 1.0);
    CHECK(humbert_phi2_series(-2.0, 4.0, 3.0, 0.0, 0.0) == 1.0);

    // equal arguments collapse to 1F1(b1 + b2; c; x)
    {
        const double x = -0.3;
        // 1F1(2.5; 2; -0.3) by its series
        long double term = 1, sum = 1;
        for (int n = 1; n < 60; ++n)
        {
            term *= (2.5L + n - 1) * x / ((2.0L + n - 1) * n);
            sum += term;
        }
        CHECK_THAT(humbert_phi2_series(0.5, 2.0, 2.0, x, x), WithinRel(static_cast<double>(sum), 1e-14));
    }

    // oracle: fixed 160x160 truncation of the double series
    constexpr double phi2_ref = 1.285144115609641;
    CHECK_THAT(oracle::phi2_double_series(-4, 5, 2, -0.8, -0.5), WithinRel(phi2_ref, 1e-14));
    CHECK_THAT(humbert_phi2(-4, 5, 2, -0.8, -0.5), WithinRel(phi2_ref, 1e-12));
}

TEST_CASE("humbert_phi2 mixture path matches the double series on the Rician-shadowed pattern", "[specfun]")
{
    // Phi2(1-m; m; 2; -u/W; -m u/(W m + P)), W = 1
    for (double m : {1.0, 2.0, 3.5, 5.0, 8.0})
        for (double p : {0.0, 0.5, 3.0, 10.0})
            for (double u : {0.05, 0.7, 3.0, 8.0})
            {
                const double x = -u, y = -m * u / (m + p);
                if (p == 0.0)
                {
                    CHECK_THAT(humbert_phi2_mixture(1 - m, m, 2.0, x, y), WithinRel(-std::expm1(-u) / u, 1e-12));
                    continue;
                }
                const double series = humbert_phi2_series(1 - m, m, 2.0, x, y);
                const double mixture = humbert_phi2_mixture(1 - m, m, 2.0, x, y);
                CHECK_THAT(mixture, WithinRel(series, 1e-8));
            }
    CHECK_THROWS_AS(humbert_phi2_mixture(0.5, 0.5, 3.0, -1.0, -0.5), argument_error);
}

TEST_CASE("legendre coefficients are exact integers", "[specfun]")
{
    auto fact = [](unsigned k) {
        long double f = 1;
        for (unsigned i = 2; i <= k; ++i)
            f *= i;
        return f;
    };
    for (unsigned n = 0; n <= 14; ++n)
    {
        const auto c = legendre_coefficients(n);
        REQUIRE(c.coeffs.size() == n / 2 + 1);
        for (unsigned q = 0; q <= n / 2; ++q)
        {
            const long double expected = fact(2 * n - 2 * q) / (fact(q) * fact(n - q) * fact(n - 2 * q));
            CHECK(static_cast<long double>(c.coeffs[q]) == expected);
        }
    }
    CHECK(legendre_coefficients(33).coeffs[0] == 7219428434016265740ULL); // binom(66, 33)
    CHECK_THROWS_AS(legendre_coefficients(34), argument_error);
}

TEST_CASE("legendre_p values and recurrence", "[specfun]")
{
    CHECK(legendre_p(0, 17.0) == 1.0);
    CHECK(legendre_p(1, 0.3) == 0.3);
    CHECK_THAT(legendre_p(2, 0.5), WithinAbs(-0.125, 1e-16));
    // outside [-1, 1]
    CHECK_THAT(legendre_p(3, 2.0), WithinRel((5 * 8.0 - 3 * 2.0) / 2, 1e-15));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const double z = dist(gen);
        for (unsigned n = 1; n < 20; ++n)
        {
            const double lhs = (n + 1.0) * legendre_p(n + 1, z);
            const double t1 = (2.0 * n + 1.0) * z * legendre_p(n, z), t2 = n * legendre_p(n - 1, z);
            // relative to the size of the terms being combined
            CHECK(std::abs(lhs - (t1 - t2)) <= 1e-12 * std::max({std::abs(lhs), std::abs(t1), std::abs(t2), 1e-300}));
        }
    }
    // explicit sum and recurrence hand over smoothly
    for (double z : {-0.7, 0.2, 1.0, 1.8})
        CHECK_THAT(legendre_p(21, z), WithinRel(((41.0 * z * legendre_p(20, z) - 20.0 * legendre_p(19, z)) / 21.0), 1e-11));
    CHECK(legendre_p(40, 1.0) == 1.0);
}

TEST_CASE("gamma_unit_mean_pdf", "[specfun]")
{
    CHECK_THAT(gamma_unit_mean_pdf(0.7, 1.0), WithinRel(std::exp(-0.7), 1e-15));
    // oracle: direct formula in extended precision, 5^5 0.5^4 e^{-2.5} / 4!
    constexpr double g_05_5 = 0.66800942890542639;
    CHECK_THAT(gamma_unit_mean_pdf(0.5, 5.0), WithinRel(g_05_5, 1e-14));

    for (double m : {0.6, 1.0, 8.0})
    {
        double err = 0;
        auto f = [m](double u) { return u > 0 ? gamma_unit_mean_pdf(u, m) : 0.0; };
        auto uf = [m](double u) { return u > 0 ? u * gamma_unit_mean_pdf(u, m) : 0.0; };
        boost::math::quadrature::exp_sinh<double> integ;
        CHECK_THAT(integ.integrate(f, 1e-14, &err), WithinRel(1.0, 1e-9));
        CHECK_THAT(integ.integrate(uf, 1e-14, &err), WithinRel(1.0, 1e-9));
    }
    CHECK_THROWS_AS(gamma_unit_mean_pdf(0.0, 2.0), domain_error);
    CHECK_THROWS_AS(gamma_unit_mean_pdf(1.0, -2.0), domain_error);
}

TEST_CASE("gauss_laguerre rules integrate Gamma moments", "[specfun]")
{
    for (double alpha : {-0.5, 0.0, 4.0, 7.0})
    {
        const auto rule = gauss_laguerre(alpha, 64);
        double total = 0, mean = 0;
        for (std::size_t i = 0; i < rule->nodes.size(); ++i)
        {
            total += rule->weights[i];
            mean += rule->weights[i] * rule->nodes[i];
        }
        CHECK_THAT(total, WithinRel(1.0, 1e-13));
        CHECK_THAT(mean, WithinRel(alpha + 1.0, 1e-13));
    }
    // E[e^{-c zeta}] for zeta ~ Gamma(m, 1/m) is (1 + c/m)^{-m}; tilting makes it exact
    for (double c : {0.5, 20.0, 400.0})
    {
        const double m = 3.0;
        const double v = gamma_mixture(m, c, 64, [](double) { return 1.0; });
        CHECK_THAT(v, WithinRel(std::pow(1.0 + c / m, -m), 1e-13));
    }
    CHECK_THROWS_AS(gauss_laguerre(-1.0, 10), argument_error);
}

TEST_CASE("gauss_hermite rules integrate normal moments", "[specfun]")
{
    for (int n : {1, 8, 64})
    {
        const auto rule = gauss_hermite(n);
        REQUIRE(rule->nodes.size() == static_cast<std::size_t>(n));
        CHECK(std::is_sorted(rule->nodes.begin(), rule->nodes.end()));
        // normalized weights: E[x^{2k}] = Gamma(k + 1/2) / sqrt(pi), exact for 2k <= 2n - 1
        for (int k = 0; 2 * k <= 2 * n - 1; ++k)
        {
            double even = 0, odd = 0;
            for (std::size_t i = 0; i < rule->nodes.size(); ++i)
            {
                even += rule->weights[i] * std::pow(rule->nodes[i], 2 * k);
                odd += rule->weights[i] * std::pow(rule->nodes[i], 2 * k + 1);
            }
            if (k > 12)
                break;
            CHECK_THAT(even, WithinRel(std::tgamma(k + 0.5) / std::sqrt(std::numbers::pi), 1e-12));
            CHECK_THAT(odd, WithinAbs(0.0, 1e-12 * std::tgamma(k + 1.5)));
        }
    }
    // E[cos x] under N(0, 1/2) is e^{-1/4}
    const auto rule = gauss_hermite(64);
    double c = 0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i)
        c += rule->weights[i] * std::cos(rule->nodes[i]);
    CHECK_THAT(c, WithinRel(std::exp(-0.25), 1e-14));
    CHECK_THROWS_AS(gauss_hermite(0), argument_error);
}

TEST_CASE("erlang_cdf_table matches Poisson tails", "[specfun]")
{
    for (double y : {1e-8, 0.3, 4.0, 25.0, 90.0})
    {
        const auto t = erlang_cdf_table(12, y);
        for (int k = 1; k <= 12; ++k)
        {
            // P(k, y) = 1 - sum_{i<k} e^{-y} y^i / i!
            long double s = 0, term = std::exp(-static_cast<long double>(y));
            for (int i = 0; i < k; ++i)
            {
                s += term;
                term *= y / (i + 1);
            }
            const double expected = static_cast<double>(1.0L - s);
            if (expected > 1e-6)
                CHECK_THAT(t[k - 1], WithinRel(expected, 1e-12));
        }
    }
    // small-argument relative accuracy: P(k, y) ~ y^k / k!
    CHECK_THAT(erlang_cdf_table(3, 1e-6)[2], WithinRel(1e-18 / 6.0, 1e-5));
}
