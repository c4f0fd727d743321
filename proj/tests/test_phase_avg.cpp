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

#include "fadelab/phase_avg.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace fadelab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("instantaneous power examples", "[phase_avg]")
{
    CHECK(instantaneous_power({{2.0}, 1.0}, PhaseVector{}) == 4.0);
    CHECK_THAT(instantaneous_power({{1.0, 1.0}, 1.0}, PhaseVector({std::numbers::pi})), WithinAbs(0.0, 1e-15));

    // oracle: squared modulus of the complex phasor sum
    constexpr double p3 = 2.2393639765824389;
    CHECK_THAT(oracle::specular_power_complex({1.0, 0.8, 0.5}, {1.1, 2.3}), WithinRel(p3, 1e-15));
    CHECK_THAT(instantaneous_power({{1.0, 0.8, 0.5}, 1.0}, PhaseVector({1.1, 2.3})), WithinRel(p3, 1e-13));

    CHECK_THROWS_AS(instantaneous_power({{1.0, 0.8, 0.5}, 1.0}, PhaseVector({1.1})), argument_error);
    CHECK_THROWS_AS(instantaneous_power({{}, 1.0}, PhaseVector{}), argument_error);
}

TEST_CASE("phase vector wraps into [0, 2pi)", "[phase_avg]")
{
    const PhaseVector v({-0.5, 7.0, 2.0 * std::numbers::pi});
    CHECK_THAT(v.theta[0], WithinRel(2.0 * std::numbers::pi - 0.5, 1e-15));
    CHECK_THAT(v.theta[1], WithinRel(7.0 - 2.0 * std::numbers::pi, 1e-14));
    CHECK(v.theta[2] == 0.0);
}

TEST_CASE("multinomial form matches complex sum", "[phase_avg]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(0.0, 3.0), ph(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> count(1, 6);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const int n = count(rng);
        std::vector<double> a(n), th(n - 1);
        for (auto &x : a)
            x = amp(rng);
        for (auto &x : th)
            x = ph(rng);
        double scale = 0.0;
        for (double x : a)
            scale += x;
        const double lib = instantaneous_power({a, 1.0}, PhaseVector(th));
        const double ref = oracle::specular_power_complex(a, th);
        REQUIRE_THAT(lib, WithinAbs(ref, 1e-13 * scale * scale));
        REQUIRE(lib >= 0.0);
        REQUIRE(lib <= scale * scale * (1.0 + 1e-14));
    }
}

TEST_CASE("range bounds are attained", "[phase_avg]")
{
    const SpecularSet aligned{{1.0, 0.8, 0.5}, 1.0};
    CHECK_THAT(instantaneous_power(aligned, PhaseVector({0.0, 0.0})), WithinRel(2.3 * 2.3, 1e-14));
    CHECK_THAT(instantaneous_power({{1.5, 1.5}, 1.0}, PhaseVector({std::numbers::pi})), WithinAbs(0.0, 1e-14));
}

TEST_CASE("total specular power", "[phase_avg]")
{
    CHECK(total_specular_power({{}, 1.0}) == 0.0);
    CHECK(total_specular_power({{1, 1, 1, 1}, 1.0}) == 4.0);
    CHECK(total_specular_power({{3, 4}, 1.0}) == 25.0);
}

TEST_CASE("phase expectations", "[phase_avg]")
{
    const SpecularSet s{{1.0, 0.8, 0.5}, 1.0};
    CHECK_THAT(expect_over_phases(s, [](double) { return 1.0; }), WithinRel(1.0, 1e-14));
    CHECK_THAT(expect_over_phases(s, [](double p) { return p; }), WithinRel(1.89, 1e-12));

    // E[P_2^2] for a = (1, 1). Exact value 6; Monte Carlo over 10^7 phase draws as the reference.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    long double acc = 0.0L;
    constexpr int draws = 10'000'000;
    for (int i = 0; i < draws; ++i)
    {
        const double p = oracle::specular_power_complex({1.0, 1.0}, {ph(rng)});
        acc += static_cast<long double>(p) * p;
    }
    const double mc = static_cast<double>(acc / draws);
    const double quad = expect_over_phases({{1.0, 1.0}, 1.0}, [](double p) { return p * p; });
    CHECK_THAT(quad, WithinRel(mc, 5e-4));
    CHECK_THAT(quad, WithinRel(6.0, 1e-13));
}

TEST_CASE("mean equals specular power for random sets", "[phase_avg]")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> amp(0.1, 2.0);
    for (int n = 1; n <= 5; ++n)
    {
        std::vector<double> a(n);
        for (auto &x : a)
            x = amp(rng);
        const SpecularSet s{a, 1.0};
        QuadratureSpec q;
        q.nodes_per_dim = n >= 5 ? 16 : 64;
        CHECK_THAT(expect_over_phases(s, [](double p) { return p; }, q), WithinRel(total_specular_power(s), 1e-10));
    }
}

TEST_CASE("spectral convergence and permutation symmetry", "[phase_avg]")
{
    const SpecularSet s{{1.0, 0.8, 0.5, 0.3}, 1.0};
    auto smooth = [](double p) { return std::exp(-0.7 * p) * std::cos(0.3 * p); };
    QuadratureSpec q32, q64;
    q32.nodes_per_dim = 32;
    const double v32 = expect_over_phases(s, smooth, q32);
    const double v64 = expect_over_phases(s, smooth, q64);
    CHECK_THAT(v32, WithinRel(v64, 1e-10));

    std::vector<double> a = s.amplitudes;
    std::sort(a.begin(), a.end());
    do
    {
        CHECK_THAT(expect_over_phases({a, 1.0}, smooth), WithinRel(v64, 1e-12));
    } while (std::next_permutation(a.begin(), a.end()));
}

TEST_CASE("measure compression and guards", "[phase_avg]")
{
    const std::vector<double> balanced(4, 1.0);
    const auto m = PhaseMeasure::build(balanced, {});
    CHECK(m.size() < 64 * 64 * 64 / 10);
    double w = 0.0;
    for (double x : m.weights())
        w += x;
    CHECK_THAT(w, WithinRel(1.0, 1e-14));
    CHECK(std::is_sorted(m.powers().begin(), m.powers().end()));

    const auto single = PhaseMeasure::build(std::vector<double>{2.0}, {});
    REQUIRE(single.size() == 1);
    CHECK(single.powers()[0] == 4.0);

    QuadratureSpec small;
    small.node_budget = 1000;
    try
    {
        (void)PhaseMeasure::build(balanced, small);
        FAIL("expected resource_error");
    }
    catch (const resource_error &e)
    {
        CHECK(e.required_nodes() == 64u * 64u * 64u);
    }

    QuadratureSpec narrow;
    narrow.max_dims = 2;
    CHECK_THROWS_AS(PhaseMeasure::build(balanced, narrow), argument_error);

    QuadratureSpec bad;
    bad.nodes_per_dim = 4;
    CHECK_THROWS_AS(bad.validate(), argument_error);
    CHECK_THROWS_AS(expect_over_phases({{}, 1.0}, [](double) { return 1.0; }), argument_error);
}
