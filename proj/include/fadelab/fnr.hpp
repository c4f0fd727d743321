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

// Fluctuating N-ray channel: the specular sum is scaled by sqrt(zeta) with zeta a
// unit-mean Gamma(m) variable shared by all waves. Conditioned on P_N the power is
// Rician shadowed.

#ifndef FADELAB_FNR_HPP
#define FADELAB_FNR_HPP

#include "errors.hpp"
#include "nwdp.hpp"
#include "phase_avg.hpp"
#include "specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fadelab::fnr
{

struct FnrModel
{
    SpecularSet spec;
    double m = 1.0;

    void validate() const
    {
        spec.validate();
        if (!(m > 0.0) || !std::isfinite(m))
            throw argument_error("FnrModel: m must be finite and positive");
    }

    bool integer_m() const noexcept { return std::abs(m - std::round(m)) < 1e-9; }
};

enum class MgfMethod
{
    automatic, // closed forms for N <= 2, Legendre path for integer m, Gamma mixture otherwise
    legendre,  // last phase integrated analytically (integer m only)
    mixture,   // Gamma mixture of the reduced constant-amplitude MGF
    direct     // plain average of the conditional MGF over N-1 dimensions
};

// Largest integer m routed to the finite-sum and Legendre paths
inline constexpr int max_integer_fast_path = 64;

// Gauss-Hermite nodes for sharply peaked mixture integrands
inline constexpr int peak_nodes = 64;

// Minimum distance of the peak from the origin, in units of its width
inline constexpr double peak_clearance = 6.5;

namespace detail
{
using nwdp::detail::mgf_denominator;
using nwdp::detail::require_power_argument;

// log of m^m (1 - omega0 s)^(m-1) / x^m
inline double log_mgf_prefactor(double m, double d, double x) { return m * std::log(m) + (m - 1.0) * std::log(d) - m * std::log(x); }

// log (omega0 m / (omega0 m + P))^m
inline double log_shadowing(double m, double omega0, double p) { return m * (std::log(omega0 * m) - std::log(omega0 * m + p)); }

// Rician shadowed CDF for integer m: binomial mixture of Erlang CDFs with scale c = omega0 + P / m
inline double rician_shadowed_cdf_erlang(double p, double omega0, int m, double u, const std::vector<double> &log_binom)
{
    const double c = omega0 + p / m;
    const auto erl = specfun::erlang_cdf_table(m, u / c);
    if (p == 0.0)
        return erl[0];
    const double log_keep = std::log(omega0 * m) - std::log(omega0 * m + p); // weight on shape 1
    const double log_move = std::log(p) - std::log(omega0 * m + p);
    compensated_sum<long double> acc;
    for (int k = 0; k < m; ++k)
        acc.add(std::exp(log_binom[k] + k * log_move + (m - 1 - k) * log_keep) * static_cast<long double>(erl[k]));
    return static_cast<double>(acc.value());
}

// Gamma mixture of Rician densities at power u when the integrand is a narrow
// peak away from the origin. In t = sqrt(zeta) the log integrand is
// (2m - 1) log t - (m + P/w) t^2 + 2 t sqrt(P u) / w + const; a Gauss-Hermite rule
// is centred at its approximate maximum with the local curvature as scale.
// Returns a negative value when the peak is too wide for the shifted rule.
inline double rician_mixture_pdf_peaked(double m, double p, double w, double u, int nodes)
{
    if (p <= 0.0 || u <= 0.0)
        return -1.0;
    const double a = m + p / w, b = std::sqrt(p * u) / w, c = 2.0 * m - 1.5;
    const double disc = b * b + 2.0 * a * c;
    if (disc <= 0.0)
        return -1.0;
    const double t0 = (b + std::sqrt(disc)) / (2.0 * a);
    const double curv = c / (t0 * t0) + 2.0 * a;
    if (!(t0 > 0.0) || !(curv > 0.0))
        return -1.0;
    const double scale = std::sqrt(2.0 / curv);
    const auto rule = specfun::gauss_hermite(nodes);
    if (t0 <= peak_clearance * scale)
        return -1.0;
    const double su = std::sqrt(u), sp = std::sqrt(p);
    const double base = std::log(2.0) + m * std::log(m) - std::lgamma(m) - std::log(w);
    compensated_sum<double> acc;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i)
    {
        const double x = rule->nodes[i], t = t0 + scale * x;
        if (t <= 0.0)
            continue; // weight below e^{-clearance^2} of the peak
        const double arg = 2.0 * t * sp * su / w;
        const double d = su - t * sp;
        const double log_f = base + (2.0 * m - 1.0) * std::log(t) - m * t * t - d * d / w + std::log(specfun::bessel_i0_scaled(arg));
        acc.add(rule->weights[i] * std::exp(x * x + log_f));
    }
    return acc.value() * scale * std::sqrt(std::numbers::pi);
}

inline std::vector<double> log_binomial_row(int n)
{
    std::vector<double> out(n + 1);
    for (int k = 0; k <= n; ++k)
        out[k] = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return out;
}
} // namespace detail

class Channel
{
public:
    explicit Channel(FnrModel model, QuadratureSpec quad = {})
        : model_((model.validate(), quad.validate(), std::move(model))), quad_(quad), measures_(model_.spec.amplitudes, quad_)
    {
    }

    const FnrModel &model() const noexcept { return model_; }
    const QuadratureSpec &quadrature() const noexcept { return quad_; }
    const MeasureCache &measures() const noexcept { return measures_; }

    // Phase average of the Rician shadowed density written with 1F1(m; 1; x)
    double pdf_power(double u) const
    {
        detail::require_power_argument(u, "pdf_power");
        require_diffuse("pdf_power");
        const double w = omega0(), m = model_.m;
        return measures_.full().expect([&](double p) {
            const double x = p * u / (w * (w * m + p));
            return std::exp(detail::log_shadowing(m, w, p) - std::log(w) - u / w + specfun::log_kummer_1f1_b1(m, x));
        });
    }

    // Same density as an average over zeta of the constant-amplitude density
    double pdf_power_mixture(double u) const
    {
        detail::require_power_argument(u, "pdf_power_mixture");
        require_diffuse("pdf_power_mixture");
        const double w = omega0(), m = model_.m;
        return measures_.full().expect([&](double p) {
            if (const double peaked = detail::rician_mixture_pdf_peaked(m, p, w, u, peak_nodes); peaked >= 0.0)
                return peaked;
            return specfun::gamma_mixture(m, p / w, quad_.gamma_nodes, [&](double z) {
                // e^{z P / w} times the Rician density with specular power z P
                const double x = 2.0 * std::sqrt(z * p * u) / w;
                return std::exp(-u / w + x - std::log(w)) * specfun::bessel_i0_scaled(x);
            });
        });
    }

    double cdf_power(double u) const
    {
        if (model_.integer_m() && model_.m <= max_integer_fast_path)
        {
            detail::require_power_argument(u, "cdf_power");
            require_diffuse("cdf_power");
            if (u == 0.0)
                return 0.0;
            const int m = static_cast<int>(std::lround(model_.m));
            const auto log_binom = detail::log_binomial_row(m - 1);
            const double w = omega0();
            const double v = measures_.full().expect([&](double p) { return detail::rician_shadowed_cdf_erlang(p, w, m, u, log_binom); });
            return std::clamp(v, 0.0, 1.0);
        }
        return cdf_power_mixture(u);
    }

    // CDF through the Gamma mixture of Rician CDFs; valid for every m > 0
    double cdf_power_mixture(double u) const
    {
        detail::require_power_argument(u, "cdf_power_mixture");
        require_diffuse("cdf_power_mixture");
        if (u == 0.0)
            return 0.0;
        const double w = omega0(), m = model_.m;
        const double v = measures_.full().expect(
            [&](double p) { return specfun::rician_shadowed_cdf_mixture(p, w, m, u, quad_.gamma_nodes); });
        return std::clamp(v, 0.0, 1.0);
    }

    // small-u behaviour (u / omega0) E[(m / (P_N / omega0 + m))^m]
    double cdf_asymptotic(double u) const
    {
        detail::require_power_argument(u, "cdf_asymptotic");
        require_diffuse("cdf_asymptotic");
        const double w = omega0(), m = model_.m;
        return u / w * measures_.full().expect([&](double p) { return std::exp(m * (std::log(m) - std::log(p / w + m))); });
    }

    double mgf(double s, MgfMethod method = MgfMethod::automatic) const
    {
        const double d = detail::mgf_denominator(omega0(), s);
        const auto &a = model_.spec.amplitudes;
        const double m = model_.m;
        switch (method)
        {
        case MgfMethod::legendre:
            return mgf_legendre(s);
        case MgfMethod::mixture:
            return mgf_mixture(s);
        case MgfMethod::direct:
            return mgf_direct(s);
        case MgfMethod::automatic:
            break;
        }
        if (a.empty())
            return 1.0 / d;
        if (a.size() == 1)
        {
            const double den = m - (m * omega0() + a[0] * a[0]) * s;
            if (!(den > 0.0))
                throw argument_error("mgf: s = " + std::to_string(s) + " outside the region of convergence");
            return std::exp(detail::log_mgf_prefactor(m, d, den));
        }
        if (!use_legendre())
            return mgf_mixture(s);
        if (a.size() == 2)
        {
            const double p = a[0] * a[0], q = a[1] * a[1];
            const double lead = m - (m * omega0() + p + q) * s;
            const double root2 = lead * lead - 4.0 * p * q * s * s;
            if (!(lead > 0.0) || !(root2 > 0.0))
                throw argument_error("mgf: s = " + std::to_string(s) + " makes the square-root argument nonpositive");
            const double root = std::sqrt(root2);
            return std::exp(detail::log_mgf_prefactor(m, d, root)) * specfun::legendre_p(static_cast<unsigned>(std::lround(m)) - 1, lead / root);
        }
        return mgf_legendre(s);
    }

    // Average over P_{N-1} of the Legendre-polynomial form, for integer m and N >= 1
    double mgf_legendre(double s) const
    {
        const double d = detail::mgf_denominator(omega0(), s);
        if (!model_.integer_m())
            throw argument_error("mgf_legendre: requires integer m");
        if (model_.spec.size() == 0)
            return 1.0 / d;
        const double m = std::round(model_.m), w = omega0();
        const double a = model_.spec.amplitudes.back();
        const unsigned degree = static_cast<unsigned>(m) - 1;
        return measures_.leading().expect([&](double p) {
            const double lead = m - (m * w + p + a * a) * s;
            const double cross = 2.0 * a * std::sqrt(p) * std::abs(s);
            if (!(lead > cross))
                throw argument_error("mgf: s = " + std::to_string(s) + " makes the square-root argument nonpositive");
            const double root = std::sqrt((lead - cross) * (lead + cross));
            return std::exp(detail::log_mgf_prefactor(m, d, root)) * specfun::legendre_p(degree, lead / root);
        });
    }

    // Gamma mixture over zeta of the reduced constant-amplitude MGF, valid for every m > 0
    double mgf_mixture(double s) const
    {
        const double d = detail::mgf_denominator(omega0(), s);
        if (model_.spec.size() == 0)
            return 1.0 / d;
        const double m = model_.m;
        const double a = model_.spec.amplitudes.back();
        return measures_.leading().expect([&](double p) {
            const double y = 2.0 * a * std::sqrt(p) * s / d;
            const double growth = (p + a * a) * s / d + std::abs(y); // exponential rate in zeta
            if (!(growth < m))
                throw argument_error("mgf: s = " + std::to_string(s) + " outside the region of convergence");
            return specfun::gamma_mixture(m, -growth, quad_.gamma_nodes, [&](double z) { return specfun::bessel_i0_scaled(z * y) / d; });
        });
    }

    // E over P_N of the conditional Rician shadowed MGF
    double mgf_direct(double s) const
    {
        const double d = detail::mgf_denominator(omega0(), s);
        const double m = model_.m, w = omega0();
        double amp_sum = 0.0;
        for (double a : model_.spec.amplitudes)
            amp_sum += a;
        if (s > 0.0 && !(m - (m * w + amp_sum * amp_sum) * s > 0.0))
            throw argument_error("mgf: s = " + std::to_string(s) + " outside the region of convergence");
        return measures_.full().expect([&](double p) {
            const double den = m - (m * w + p) * s;
            if (!(den > 0.0))
                throw argument_error("mgf: s = " + std::to_string(s) + " outside the region of convergence");
            return std::exp(detail::log_mgf_prefactor(m, d, den));
        });
    }

    double pdf_envelope(double r) const
    {
        detail::require_power_argument(r, "pdf_envelope");
        require_diffuse("pdf_envelope");
        if (r == 0.0)
            return 0.0;
        return 2.0 * r * pdf_power(r * r);
    }

private:
    double omega0() const noexcept { return model_.spec.omega0; }

    bool use_legendre() const noexcept { return model_.integer_m() && model_.m <= max_integer_fast_path; }

    void require_diffuse(const char *what) const
    {
        if (!(omega0() > 0.0))
            throw unsupported_model_error(std::string(what) + ": requires omega0 > 0 (no density without diffuse power)");
    }

    FnrModel model_;
    QuadratureSpec quad_;
    MeasureCache measures_;
};

inline double pdf_power(const FnrModel &model, double u, const QuadratureSpec &quad = {})
{
    return Channel(model, quad).pdf_power(u);
}

inline double cdf_power(const FnrModel &model, double u, const QuadratureSpec &quad = {})
{
    return Channel(model, quad).cdf_power(u);
}

inline double cdf_asymptotic(const FnrModel &model, double u, const QuadratureSpec &quad = {})
{
    return Channel(model, quad).cdf_asymptotic(u);
}

inline double mgf(const FnrModel &model, double s, const QuadratureSpec &quad = {}, MgfMethod method = MgfMethod::automatic)
{
    return Channel(model, quad).mgf(s, method);
}

inline double pdf_envelope(const FnrModel &model, double r, const QuadratureSpec &quad = {})
{
    return Channel(model, quad).pdf_envelope(r);
}

} // namespace fadelab::fnr

#endif
