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

// Seeded Monte Carlo sampling of the received power and the usual empirical
// estimators. Draws are generated in fixed-size shards whose generators are seeded
// from (seed, shard index) only, so a batch is bit-identical for any worker count.

#ifndef FADELAB_MC_HPP
#define FADELAB_MC_HPP

#include "errors.hpp"
#include "fnr.hpp"
#include "parallel.hpp"
#include "phase_avg.hpp"
#include "summation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace fadelab::mc
{

enum class ModelTag : std::uint64_t
{
    nwdp = 0,
    fnr = 1
};

struct SampleBatch
{
    std::vector<double> values; // realizations of U = R^2
    std::uint64_t seed = 0;
    ModelTag model_tag = ModelTag::nwdp;

    std::size_t n() const noexcept { return values.size(); }

    double mean() const
    {
        require_nonempty();
        compensated_sum<long double> s;
        for (double v : values)
            s.add(v);
        return static_cast<double>(s.value() / values.size());
    }

    // unbiased sample variance
    double variance() const
    {
        require_nonempty();
        if (values.size() < 2)
            return 0.0;
        const long double mu = mean();
        compensated_sum<long double> s;
        for (double v : values)
            s.add((v - mu) * (v - mu));
        return static_cast<double>(s.value() / (values.size() - 1));
    }

    void require_nonempty() const
    {
        if (values.empty())
            throw argument_error("SampleBatch: empty batch");
    }
};

inline constexpr std::size_t shard_size = std::size_t{1} << 16;

namespace detail
{
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard)
{
    return splitmix64(seed + (shard + 1) * 0x9E3779B97F4A7C15ULL);
}

// Standard normal quantile, Wichura's AS241 (PPND16), relative accuracy about 1e-16
inline double normal_quantile(double p)
{
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425)
    {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0)
    {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                   1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                   0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    }
    else
    {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                   0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                   7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

// Uniform, normal and Gamma variates from a 64-bit engine. The engine output is
// consumed in a fixed pattern so streams are reproducible bit for bit.
class Variates
{
public:
    explicit Variates(std::uint64_t seed) : engine_(seed) {}

    // uniform on the open interval (0, 1)
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() { return normal_quantile(uniform()); }

    // Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 through the G(shape+1) U^{1/shape} boost
    double gamma(double shape)
    {
        if (shape < 1.0)
        {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;)
        {
            const double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0)
                continue;
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * (x * x) * (x * x))
                return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

private:
    std::mt19937_64 engine_;
};

// One draw of |sqrt(zeta) sum a_i e^{j theta_i} + X + jY|^2 with X, Y ~ N(0, omega0 / 2).
// zeta is drawn first when fluctuating, then theta_1..theta_N, then X and Y.
inline double draw_power(Variates &v, const SpecularSet &spec, double m, bool fluctuating)
{
    double scale = 1.0;
    if (fluctuating)
        scale = std::sqrt(v.gamma(m) / m);
    double re = 0.0, im = 0.0;
    for (double a : spec.amplitudes)
    {
        const double theta = 2.0 * std::numbers::pi * v.uniform();
        re += a * std::cos(theta);
        im += a * std::sin(theta);
    }
    const double sd = std::sqrt(0.5 * spec.omega0);
    const double x = scale * re + sd * v.normal();
    const double y = scale * im + sd * v.normal();
    return x * x + y * y;
}

inline SampleBatch sample(const SpecularSet &spec, double m, bool fluctuating, std::size_t n, std::uint64_t seed, unsigned threads)
{
    if (n < 1)
        throw argument_error("sample: n must be >= 1");
    spec.validate();
    SampleBatch out;
    out.seed = seed;
    out.model_tag = fluctuating ? ModelTag::fnr : ModelTag::nwdp;
    out.values.resize(n);
    const std::size_t shards = (n + shard_size - 1) / shard_size;
    parallel_for(
        shards,
        [&](std::size_t shard) {
            Variates v(shard_seed(seed, shard));
            const std::size_t begin = shard * shard_size, end = std::min(n, begin + shard_size);
            for (std::size_t i = begin; i < end; ++i)
                out.values[i] = draw_power(v, spec, m, fluctuating);
        },
        threads);
    return out;
}
} // namespace detail

inline SampleBatch sample_nwdp(const SpecularSet &spec, std::size_t n, std::uint64_t seed, unsigned threads = thread_count())
{
    return detail::sample(spec, 1.0, false, n, seed, threads);
}

inline SampleBatch sample_fnr(const fnr::FnrModel &model, std::size_t n, std::uint64_t seed, unsigned threads = thread_count())
{
    model.validate();
    return detail::sample(model.spec, model.m, true, n, seed, threads);
}

// Right-continuous empirical distribution function
class Ecdf
{
public:
    explicit Ecdf(std::vector<double> values) : sorted_(std::move(values))
    {
        if (sorted_.empty())
            throw argument_error("Ecdf: empty sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double x) const
    {
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    std::span<const double> sorted() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return sorted_.size(); }

    // value at probability level p in [0, 1] (lower empirical quantile)
    double quantile(double p) const
    {
        const double idx = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted_.size() - 1);
        return sorted_[static_cast<std::size_t>(std::floor(idx))];
    }

private:
    std::vector<double> sorted_;
};

inline Ecdf ecdf(const SampleBatch &batch)
{
    batch.require_nonempty();
    return Ecdf(batch.values);
}

struct Histogram
{
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density; // count / (n * width); mass outside [lo, hi) is not redistributed

    std::size_t bins() const noexcept { return density.size(); }
    double width() const noexcept { return (hi - lo) / static_cast<double>(density.size()); }
    double center(std::size_t i) const noexcept { return lo + (static_cast<double>(i) + 0.5) * width(); }
};

inline Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi)
{
    if (values.empty())
        throw argument_error("histogram: empty sample");
    if (bins < 10)
        throw argument_error("histogram: bins must be >= 10");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw argument_error("histogram: need finite lo < hi");
    Histogram h{lo, hi, std::vector<double>(bins, 0.0)};
    std::vector<std::uint64_t> counts(bins, 0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double v : values)
    {
        if (v < lo || v > hi)
            continue;
        const auto k = std::min(bins - 1, static_cast<std::size_t>((v - lo) * scale));
        ++counts[k];
    }
    const double norm = 1.0 / (static_cast<double>(values.size()) * h.width());
    for (std::size_t k = 0; k < bins; ++k)
        h.density[k] = static_cast<double>(counts[k]) * norm;
    return h;
}

// Density histogram of U over the sample range; integrates to one
inline Histogram hist_pdf(const SampleBatch &batch, std::size_t bins)
{
    batch.require_nonempty();
    const auto [mn, mx] = std::minmax_element(batch.values.begin(), batch.values.end());
    const double hi = *mx > *mn ? *mx : *mn + 1.0;
    return histogram(batch.values, bins, *mn, hi);
}

// Density histogram of U over a fixed range
inline Histogram hist_pdf(const SampleBatch &batch, std::size_t bins, double lo, double hi)
{
    batch.require_nonempty();
    return histogram(batch.values, bins, lo, hi);
}

// Density histogram of the envelope R = sqrt(U) over a fixed range
inline Histogram envelope_hist_pdf(const SampleBatch &batch, std::size_t bins, double lo, double hi)
{
    batch.require_nonempty();
    std::vector<double> r(batch.values.size());
    std::transform(batch.values.begin(), batch.values.end(), r.begin(), [](double u) { return std::sqrt(u); });
    return histogram(r, bins, lo, hi);
}

inline double empirical_mgf(const SampleBatch &batch, double s)
{
    batch.require_nonempty();
    if (!std::isfinite(s))
        throw argument_error("empirical_mgf: s must be finite");
    compensated_sum<long double> acc;
    for (double v : batch.values)
        acc.add(std::exp(static_cast<long double>(s) * v));
    return static_cast<double>(acc.value() / static_cast<long double>(batch.values.size()));
}

// sup_x |F_n(x) - F(x)|, attained at a sample point from one side or the other
template <typename Cdf>
double ks_distance(const Ecdf &e, Cdf &&cdf)
{
    const auto x = e.sorted();
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < x.size())
    {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i])
            ++j;
        const double f = cdf(x[i]);
        d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(static_cast<double>(i) / n - f)});
        i = j;
    }
    return d;
}

inline double ks_two_sample(const Ecdf &a, const Ecdf &b)
{
    const auto x = a.sorted(), y = b.sorted();
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size())
    {
        const double v = (j >= y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of an expensive CDF tabulated on
// a node set. Used to evaluate KS distances against 10^6 sample points.
class TabulatedCdf
{
public:
    template <typename Cdf>
    TabulatedCdf(std::vector<double> nodes, Cdf &&cdf, unsigned threads = thread_count()) : x_(std::move(nodes))
    {
        std::sort(x_.begin(), x_.end());
        x_.erase(std::unique(x_.begin(), x_.end()), x_.end());
        if (x_.size() < 2)
            throw argument_error("TabulatedCdf: need at least two distinct nodes");
        y_ = parallel_map(x_.size(), [&](std::size_t i) { return cdf(x_[i]); }, threads);
        for (std::size_t i = 1; i < y_.size(); ++i)
            y_[i] = std::max(y_[i], y_[i - 1]);
        slopes();
    }

    // Nodes at evenly spaced sample quantiles merged with an even grid on [0, max];
    // the grid covers the sparse upper tail
    template <typename Cdf>
    static TabulatedCdf from_sample(const Ecdf &e, std::size_t nodes, Cdf &&cdf, unsigned threads = thread_count())
    {
        std::vector<double> x{0.0};
        const double top = e.sorted().back();
        for (std::size_t k = 0; k <= nodes; ++k)
        {
            const double p = static_cast<double>(k) / static_cast<double>(nodes);
            x.push_back(e.quantile(p));
            x.push_back(p * top);
        }
        return TabulatedCdf(std::move(x), std::forward<Cdf>(cdf), threads);
    }

    double operator()(double v) const
    {
        if (v <= x_.front())
            return y_.front();
        if (v >= x_.back())
            return y_.back();
        const std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), v) - x_.begin()) - 1;
        const double h = x_[k + 1] - x_[k], t = (v - x_[k]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] + (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * d_[k + 1];
    }

    // largest |interpolant - cdf| over the interval midpoints
    template <typename Cdf>
    double midpoint_error(Cdf &&cdf, unsigned threads = thread_count()) const
    {
        const auto err = parallel_map(
            x_.size() - 1,
            [&](std::size_t i) {
                const double v = 0.5 * (x_[i] + x_[i + 1]);
                return std::abs((*this)(v)-cdf(v));
            },
            threads);
        return *std::max_element(err.begin(), err.end());
    }

    std::span<const double> nodes() const noexcept { return x_; }

private:
    void slopes()
    {
        const std::size_t n = x_.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        d_.assign(n, 0.0);
        d_[0] = delta[0];
        d_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i)
        {
            if (delta[i - 1] * delta[i] <= 0.0)
                continue;
            // weighted harmonic mean keeps the interpolant monotone
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }

    std::vector<double> x_, y_, d_;
};

// ------------------------------------------------------------------------
// Batch persistence: 32-byte header ("FADEMC01", tag, n, seed as little-endian
// uint64) followed by n little-endian IEEE-754 doubles.

namespace detail
{
inline void put_u64(std::ostream &os, std::uint64_t v)
{
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b.data(), 8);
}

inline std::uint64_t get_u64(std::istream &is)
{
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char *>(b.data()), 8);
    if (!is)
        throw argument_error("read_batch: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
} // namespace detail

inline constexpr char batch_magic[9] = "FADEMC01";

inline void write_batch(const SampleBatch &batch, const std::string &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw argument_error("write_batch: cannot open " + path);
    os.write(batch_magic, 8);
    detail::put_u64(os, static_cast<std::uint64_t>(batch.model_tag));
    detail::put_u64(os, batch.values.size());
    detail::put_u64(os, batch.seed);
    for (double v : batch.values)
        detail::put_u64(os, std::bit_cast<std::uint64_t>(v));
    if (!os)
        throw argument_error("write_batch: write failed for " + path);
}

inline SampleBatch read_batch(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw argument_error("read_batch: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, batch_magic, 8) != 0)
        throw argument_error("read_batch: bad magic in " + path);
    SampleBatch out;
    const std::uint64_t tag = detail::get_u64(is);
    if (tag > 1)
        throw argument_error("read_batch: unknown model tag");
    out.model_tag = static_cast<ModelTag>(tag);
    const std::uint64_t n = detail::get_u64(is);
    out.seed = detail::get_u64(is);
    out.values.resize(n);
    for (auto &v : out.values)
        v = std::bit_cast<double>(detail::get_u64(is));
    return out;
}

} // namespace fadelab::mc

#endif
