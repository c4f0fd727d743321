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

// N constant-amplitude specular waves plus diffuse power. Given the specular power
// P_N the received power U is Rician, so every statistic is a phase average of the
// corresponding Rician quantity.

#ifndef FADELAB_NWDP_HPP
#define FADELAB_NWDP_HPP

#include "errors.hpp"
#include "phase_avg.hpp"
#include "specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fadelab::nwdp
{

enum class MgfMethod
{
    reduced, // last phase integrated analytically, N-2 remaining dimensions
    direct   // plain average of the conditional MGF over N-1 dimensions
};

namespace detail
{
inline void require_power_argument(double u, const char *what)
{
    if (!std::isfinite(u) || u < 0.0)
        throw domain_error(std::string(what) + ": argument must be finite and nonnegative");
}

// 1 - omega0 s, checked against the region of convergence
inline double mgf_denominator(double omega0, double s)
{
    if (!std::isfinite(s))
        throw argument_error("mgf: s must be finite");
    const double d = 1.0 - omega0 * s;
    if (!(d > 0.0))
        throw argument_error("mgf: s = " + std::to_string(s) + " violates 1 - omega0 s > 0");
    return d;
}

// log of the conditional Rician power density with specular power p
inline double log_rician_pdf(double p, double omega0, double u)
{
    const double diff = std::sqrt(u) - std::sqrt(p);
    const double x = 2.0 * std::sqrt(p * u) / omega0;
    return -diff * diff / omega0 + std::log(specfun::bessel_i0_scaled(x)) - std::log(omega0);
}

// (1/d) exp(c s / d) I0(y) with c = P + a^2, y = 2 a sqrt(P) s / d, formed in log space
inline double reduced_mgf_term(double p, double a, double s, double d)
{
    const double y = 2.0 * a * std::sqrt(p) * s / d;
    return std::exp((p + a * a) * s / d + std::abs(y) + std::log(specfun::bessel_i0_scaled(y)) - std::log(d));
}
} // namespace detail

class Channel
{
public:
    explicit Channel(SpecularSet spec, QuadratureSpec quad = {})
        : spec_((spec.validate(), quad.validate(), std::move(spec))), quad_(quad), measures_(spec_.amplitudes, quad_)
    {
    }

    const SpecularSet &spec() const noexcept { return spec_; }
    const QuadratureSpec &quadrature() const noexcept { return quad_; }
    const MeasureCache &measures() const noexcept { return measures_; }

    double pdf_power(double u) const
    {
        detail::require_power_argument(u, "pdf_power");
        require_diffuse("pdf_power");
        const double w = spec_.omega0;
        if (spec_.size() == 0)
            return std::exp(-u / w) / w;
        return measures_.full().expect([&](double p) { return std::exp(detail::log_rician_pdf(p, w, u)); });
    }

    double cdf_power(double u) const
    {
        detail::require_power_argument(u, "cdf_power");
        require_diffuse("cdf_power");
        if (u == 0.0)
            return 0.0;
        const double w = spec_.omega0;
        if (spec_.size() == 0)
            return -std::expm1(-u / w);
        const double b = std::sqrt(2.0 * u / w);
        const double v = measures_.full().expect([&](double p) { return specfun::marcum_q1_complement(std::sqrt(2.0 * p / w), b); });
        return std::clamp(v, 0.0, 1.0);
    }

    // small-u behaviour (u / omega0) E[exp(-P_N / omega0)]
    double cdf_asymptotic(double u) const
    {
        detail::require_power_argument(u, "cdf_asymptotic");
        require_diffuse("cdf_asymptotic");
        const double w = spec_.omega0;
        if (spec_.size() == 0)
            return u / w;
        return u / w * measures_.full().expect([&](double p) { return std::exp(-p / w); });
    }

    // E[exp(sU)]; closed forms for N <= 2
    double mgf(double s, MgfMethod method = MgfMethod::reduced) const
    {
        const double d = detail::mgf_denominator(spec_.omega0, s);
        const auto &a = spec_.amplitudes;
        if (method == MgfMethod::direct)
            return measures_.full().expect([&](double p) { return std::exp(p * s / d - std::log(d)); });
        switch (a.size())
        {
        case 0:
            return 1.0 / d;
        case 1:
            return std::exp(a[0] * a[0] * s / d) / d;
        case 2:
        {
            const double y = 2.0 * a[0] * a[1] * s / d;
            return std::exp((a[0] * a[0] + a[1] * a[1]) * s / d + std::abs(y) + std::log(specfun::bessel_i0_scaled(y)) - std::log(d));
        }
        default:
            return mgf_reduced(s);
        }
    }

    // The reduced phase average for any N >= 2, without closed-form dispatch
    double mgf_reduced(double s) const
    {
        const double d = detail::mgf_denominator(spec_.omega0, s);
        if (spec_.size() < 2)
            throw argument_error("mgf_reduced: needs at least two specular components");
        const double a = spec_.amplitudes.back();
        return measures_.leading().expect([&](double p) { return detail::reduced_mgf_term(p, a, s, d); });
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
    void require_diffuse(const char *what) const
    {
        if (!(spec_.omega0 > 0.0))
            throw unsupported_model_error(std::string(what) + ": requires omega0 > 0 (no density without diffuse power)");
    }

    SpecularSet spec_;
    QuadratureSpec quad_;
    MeasureCache measures_;
};

inline double pdf_power(const SpecularSet &spec, double u, const QuadratureSpec &quad = {})
{
    return Channel(spec, quad).pdf_power(u);
}

inline double cdf_power(const SpecularSet &spec, double u, const QuadratureSpec &quad = {})
{
    return Channel(spec, quad).cdf_power(u);
}

inline double cdf_asymptotic(const SpecularSet &spec, double u, const QuadratureSpec &quad = {})
{
    return Channel(spec, quad).cdf_asymptotic(u);
}

inline double mgf(const SpecularSet &spec, double s, const QuadratureSpec &quad = {}, MgfMethod method = MgfMethod::reduced)
{
    return Channel(spec, quad).mgf(s, method);
}

inline double pdf_envelope(const SpecularSet &spec, double r, const QuadratureSpec &quad = {})
{
    return Channel(spec, quad).pdf_envelope(r);
}

} // namespace fadelab::nwdp

#endif
