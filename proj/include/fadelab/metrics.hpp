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

// K-factor bookkeeping and outage probability at a given average SNR.
// The noise level is pinned so that E[U] / N0 equals the average SNR; amplitudes stay
// fixed while N0 sweeps.

#ifndef FADELAB_METRICS_HPP
#define FADELAB_METRICS_HPP

#include "errors.hpp"
#include "fnr.hpp"
#include "nwdp.hpp"
#include "phase_avg.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace fadelab::metrics
{

enum class Profile
{
    balanced,
    explicit_amplitudes
};

struct KSpec
{
    double k_db = 0.0;
    double omega0 = 1.0;
    Profile profile = Profile::balanced;
    std::vector<double> amplitudes{}; // shape only, used with Profile::explicit_amplitudes

    double k_linear() const { return std::pow(10.0, k_db / 10.0); }
    double specular_power() const { return omega0 * k_linear(); }
};

struct SnrPoint
{
    double avg_snr_db = 0.0;
    double rs = 1.0; // bits/s/Hz

    void validate() const
    {
        if (!std::isfinite(avg_snr_db))
            throw argument_error("SnrPoint: avg_snr_db must be finite");
        if (!(rs > 0.0) || !std::isfinite(rs))
            throw argument_error("SnrPoint: rs must be positive");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Amplitudes with sum a_i^2 = K * omega0. A balanced profile splits the power evenly;
// an explicit profile keeps the given shape and rescales it.
inline SpecularSet amplitudes_from_k(const KSpec &k, std::size_t n)
{
    if (!(k.omega0 > 0.0) || !std::isfinite(k.omega0))
        throw argument_error("amplitudes_from_k: omega0 must be positive");
    if (std::isnan(k.k_db) || k.k_db == HUGE_VAL)
        throw argument_error("amplitudes_from_k: k_db must be finite or -inf");
    const double target = k.specular_power();
    if (n == 0)
    {
        if (target > 0.0)
            throw argument_error("amplitudes_from_k: no specular waves but k_db > -inf");
        return {{}, k.omega0};
    }
    if (k.profile == Profile::balanced)
        return {std::vector<double>(n, std::sqrt(target / static_cast<double>(n))), k.omega0};

    if (k.amplitudes.size() != n)
        throw argument_error("amplitudes_from_k: explicit profile length differs from n");
    double power = 0.0;
    for (double a : k.amplitudes)
    {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw argument_error("amplitudes_from_k: explicit amplitudes must be nonnegative");
        power += a * a;
    }
    if (!(power > 0.0))
        throw argument_error("amplitudes_from_k: explicit profile has zero power");
    const double scale = std::sqrt(target / power);
    SpecularSet out{k.amplitudes, k.omega0};
    for (double &a : out.amplitudes)
        a *= scale;
    return out;
}

// Received power at which capacity equals rs, with N0 = E[U] / avg_snr
inline double outage_threshold(double mean_power, const SnrPoint &point)
{
    point.validate();
    const double n0 = mean_power / db_to_linear(point.avg_snr_db);
    return n0 * std::expm1(point.rs * std::numbers::ln2);
}

inline double mean_power(const SpecularSet &spec) { return total_specular_power(spec) + spec.omega0; }

inline double outage_probability(const nwdp::Channel &ch, const SnrPoint &point)
{
    return ch.cdf_power(outage_threshold(mean_power(ch.spec()), point));
}

inline double outage_probability(const fnr::Channel &ch, const SnrPoint &point)
{
    return ch.cdf_power(outage_threshold(mean_power(ch.model().spec), point));
}

inline double outage_asymptotic(const nwdp::Channel &ch, const SnrPoint &point)
{
    return ch.cdf_asymptotic(outage_threshold(mean_power(ch.spec()), point));
}

inline double outage_asymptotic(const fnr::Channel &ch, const SnrPoint &point)
{
    return ch.cdf_asymptotic(outage_threshold(mean_power(ch.model().spec), point));
}

inline double outage_probability(const SpecularSet &spec, const SnrPoint &point, const QuadratureSpec &quad = {})
{
    return outage_probability(nwdp::Channel(spec, quad), point);
}

inline double outage_probability(const fnr::FnrModel &model, const SnrPoint &point, const QuadratureSpec &quad = {})
{
    return outage_probability(fnr::Channel(model, quad), point);
}

inline double outage_asymptotic(const SpecularSet &spec, const SnrPoint &point, const QuadratureSpec &quad = {})
{
    return outage_asymptotic(nwdp::Channel(spec, quad), point);
}

inline double outage_asymptotic(const fnr::FnrModel &model, const SnrPoint &point, const QuadratureSpec &quad = {})
{
    return outage_asymptotic(fnr::Channel(model, quad), point);
}

} // namespace fadelab::metrics

#endif
