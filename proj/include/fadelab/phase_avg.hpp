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

#ifndef FADELAB_PHASE_AVG_HPP
#define FADELAB_PHASE_AVG_HPP

#include "errors.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace fadelab
{

// N specular amplitudes a_i (linear) and the diffuse power omega0 = 2 sigma^2
struct SpecularSet
{
    std::vector<double> amplitudes;
    double omega0 = 1.0;

    std::size_t size() const noexcept { return amplitudes.size(); }

    void validate() const
    {
        for (double a : amplitudes)
            if (!(a >= 0.0) || !std::isfinite(a))
                throw argument_error("SpecularSet: amplitudes must be finite and nonnegative");
        if (!(omega0 >= 0.0) || !std::isfinite(omega0))
            throw argument_error("SpecularSet: omega0 must be finite and nonnegative");
    }
};

// theta_2 .. theta_N; theta_1 is pinned to 0
struct PhaseVector
{
    std::vector<double> theta;

    PhaseVector() = default;
    explicit PhaseVector(std::vector<double> phases) : theta(std::move(phases))
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        for (double &t : theta)
        {
            if (!std::isfinite(t))
                throw argument_error("PhaseVector: non-finite phase");
            t = std::fmod(t, two_pi);
            if (t < 0.0)
                t += two_pi;
            if (t >= two_pi)
                t = 0.0;
        }
    }
};

struct QuadratureSpec
{
    int nodes_per_dim = 64;
    int max_dims = 6;
    int gamma_nodes = 64;
    std::uint64_t node_budget = 10'000'000;

    void validate() const
    {
        if (nodes_per_dim < 8)
            throw argument_error("QuadratureSpec: nodes_per_dim must be >= 8");
        if (max_dims < 1)
            throw argument_error("QuadratureSpec: max_dims must be >= 1");
        if (gamma_nodes < 1 || gamma_nodes > 200)
            throw argument_error("QuadratureSpec: gamma_nodes must lie in [1, 200]");
        if (node_budget < 1)
            throw argument_error("QuadratureSpec: node_budget must be >= 1");
    }
};

// Omega_N = sum a_i^2
inline double total_specular_power(const SpecularSet &spec)
{
    compensated_sum<long double> s;
    for (double a : spec.amplitudes)
        s.add(static_cast<long double>(a) * a);
    return static_cast<double>(s.value());
}

// P_N = Omega_N + 2 sum_{i<k} a_i a_k cos(theta_i - theta_k), theta_1 = 0
inline double instantaneous_power(const SpecularSet &spec, const PhaseVector &phases)
{
    const std::size_t n = spec.size();
    if (n == 0)
        throw argument_error("instantaneous_power: needs at least one specular component");
    if (phases.theta.size() != n - 1)
        throw argument_error("instantaneous_power: expected " + std::to_string(n - 1) + " phases, got " +
                             std::to_string(phases.theta.size()));
    auto theta = [&](std::size_t i) { return i == 0 ? 0.0 : phases.theta[i - 1]; };
    compensated_sum<long double> s;
    s.add(total_specular_power(spec));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            s.add(2.0L * spec.amplitudes[i] * spec.amplitudes[k] * std::cos(static_cast<long double>(theta(i)) - theta(k)));
    return std::max(0.0, static_cast<double>(s.value()));
}

// Discrete measure of P_N under the tensor-product periodic trapezoidal rule on the
// (N-1)-torus. Nodes giving the same P_N (up to 1e-13 of the power scale) are merged,
// which collapses the symmetry orbits of balanced amplitude sets. Any expectation of a
// functional of P_N is then a weighted sum over the merged support.
class PhaseMeasure
{
public:
    static PhaseMeasure build(std::span<const double> amplitudes, const QuadratureSpec &quad)
    {
        quad.validate();
        PhaseMeasure out;
        const std::size_t n = amplitudes.size();
        if (n <= 1)
        {
            const double p = n == 0 ? 0.0 : amplitudes[0] * amplitudes[0];
            out.power_ = {p};
            out.weight_ = {1.0};
            return out;
        }

        const std::size_t dims = n - 1;
        if (dims > static_cast<std::size_t>(quad.max_dims))
            throw argument_error("phase average over " + std::to_string(dims) + " dimensions exceeds max_dims = " +
                                 std::to_string(quad.max_dims));
        const std::uint64_t per_dim = static_cast<std::uint64_t>(quad.nodes_per_dim);
        long double required = 1.0L;
        for (std::size_t d = 0; d < dims; ++d)
            required *= per_dim;
        if (required > static_cast<long double>(quad.node_budget))
        {
            const std::uint64_t req = required > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(required);
            throw resource_error("phase quadrature needs " + std::to_string(req) + " nodes, budget is " +
                                     std::to_string(quad.node_budget),
                                 req);
        }
        const std::size_t total = static_cast<std::size_t>(required);

        std::vector<double> cos_t(per_dim), sin_t(per_dim);
        for (std::size_t j = 0; j < per_dim; ++j)
        {
            const long double t = 2.0L * std::numbers::pi_v<long double> * j / per_dim;
            cos_t[j] = static_cast<double>(std::cos(t));
            sin_t[j] = static_cast<double>(std::sin(t));
        }

        // odometer over the node indices with prefix sums of the phasor
        std::vector<double> powers;
        powers.reserve(total);
        std::vector<std::size_t> idx(dims, 0);
        std::vector<double> re(dims + 1), im(dims + 1);
        re[0] = amplitudes[0];
        im[0] = 0.0;
        for (std::size_t d = 0; d < dims; ++d)
        {
            re[d + 1] = re[d] + amplitudes[d + 1] * cos_t[0];
            im[d + 1] = im[d] + amplitudes[d + 1] * sin_t[0];
        }
        for (std::size_t count = 0; count < total; ++count)
        {
            powers.push_back(re[dims] * re[dims] + im[dims] * im[dims]);
            std::size_t d = dims;
            while (d > 0)
            {
                --d;
                if (++idx[d] < per_dim)
                    break;
                idx[d] = 0;
            }
            for (std::size_t k = d; k < dims; ++k)
            {
                re[k + 1] = re[k] + amplitudes[k + 1] * cos_t[idx[k]];
                im[k + 1] = im[k] + amplitudes[k + 1] * sin_t[idx[k]];
            }
        }

        std::sort(powers.begin(), powers.end());
        double amp_sum = 0.0;
        for (double a : amplitudes)
            amp_sum += a;
        const double tol = 1e-13 * std::max(amp_sum * amp_sum, 1e-300);
        const long double node_weight = 1.0L / static_cast<long double>(total);
        std::size_t i = 0;
        while (i < powers.size())
        {
            std::size_t j = i;
            long double acc = 0.0L;
            while (j < powers.size() && powers[j] - powers[i] <= tol)
                acc += powers[j++];
            out.power_.push_back(static_cast<double>(acc / static_cast<long double>(j - i)));
            out.weight_.push_back(static_cast<double>(node_weight * static_cast<long double>(j - i)));
            i = j;
        }
        return out;
    }

    std::span<const double> powers() const noexcept { return power_; }
    std::span<const double> weights() const noexcept { return weight_; }
    std::size_t size() const noexcept { return power_.size(); }

    // sum_k w_k f(P_k), accumulated in a fixed order
    template <typename F>
    double expect(F &&f) const
    {
        compensated_sum<long double> acc;
        for (std::size_t k = 0; k < power_.size(); ++k)
            acc.add(static_cast<long double>(weight_[k]) * static_cast<long double>(f(power_[k])));
        return static_cast<double>(acc.value());
    }

private:
    std::vector<double> power_;
    std::vector<double> weight_;
};

// Lazily built laws of P_N (all amplitudes) and P_{N-1} (all but the last), shared
// between copies so that pointwise evaluation over a grid builds each measure once.
class MeasureCache
{
public:
    MeasureCache(std::vector<double> amplitudes, const QuadratureSpec &quad)
        : state_(std::make_shared<State>(std::move(amplitudes), quad))
    {
    }

    const PhaseMeasure &full() const
    {
        std::call_once(state_->full_once, [s = state_.get()] { s->full = PhaseMeasure::build(s->amplitudes, s->quad); });
        return state_->full;
    }

    const PhaseMeasure &leading() const
    {
        std::call_once(state_->leading_once, [s = state_.get()] {
            const std::size_t n = s->amplitudes.empty() ? 0 : s->amplitudes.size() - 1;
            s->leading = PhaseMeasure::build(std::span<const double>(s->amplitudes.data(), n), s->quad);
        });
        return state_->leading;
    }

private:
    struct State
    {
        State(std::vector<double> a, const QuadratureSpec &q) : amplitudes(std::move(a)), quad(q) {}
        std::vector<double> amplitudes;
        QuadratureSpec quad;
        std::once_flag full_once, leading_once;
        PhaseMeasure full, leading;
    };
    std::shared_ptr<State> state_;
};

// (2 pi)^{-(N-1)} int f(P_N(theta_2..theta_N)) d theta_2 .. d theta_N
template <typename F>
double expect_over_phases(const SpecularSet &spec, F &&f, const QuadratureSpec &quad = {})
{
    spec.validate();
    if (spec.size() == 0)
        throw argument_error("expect_over_phases: needs at least one specular component");
    return PhaseMeasure::build(spec.amplitudes, quad).expect(std::forward<F>(f));
}

} // namespace fadelab

#endif
