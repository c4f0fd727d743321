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

#ifndef FADELAB_SPECFUN_HPP
#define FADELAB_SPECFUN_HPP

#include "errors.hpp"
#include "summation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

// Special functions needed by the fading statistics: modified Bessel I0, Marcum Q1,
// 1F1(a;1;x), Humbert Phi2, Legendre polynomials, unit-mean Gamma density and
// generalized Gauss-Laguerre rules for averaging over a Gamma fluctuation.
// All functions are pure and may be called concurrently.
namespace fadelab::specfun
{

struct SeriesControl
{
    int max_terms = 100000;
    double rel_tol = 1e-18;

    void validate() const
    {
        if (max_terms < 1)
            throw argument_error("SeriesControl: max_terms must be >= 1");
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw argument_error("SeriesControl: rel_tol must lie in (0, 1)");
    }
};

namespace detail
{
inline void require_finite(double x, const char *what)
{
    if (!std::isfinite(x))
        throw domain_error(std::string(what) + ": non-finite argument");
}

inline long double log_poisson(long double mean, long double k)
{
    return -mean + k * std::log(mean) - std::lgamma(k + 1.0L);
}

inline bool is_integer(double x) { return std::floor(x) == x; }
} // namespace detail

// ------------------------------------------------------------------------
// Modified Bessel function I0

// e^{-|x|} I0(x)
inline double bessel_i0_scaled(double x)
{
    detail::require_finite(x, "bessel_i0_scaled");
    const long double ax = std::abs(static_cast<long double>(x));

    if (ax <= 25.0L)
    {
        // sum (x/2)^{2k} / (k!)^2, all terms positive
        const long double q = 0.25L * ax * ax;
        long double term = 1.0L, sum = 1.0L;
        for (int k = 1; k < 500; ++k)
        {
            term *= q / (static_cast<long double>(k) * k);
            sum += term;
            if (term < sum * 1e-20L)
                break;
        }
        return static_cast<double>(sum * std::exp(-ax));
    }

    // Hankel asymptotic expansion, truncated at the smallest term
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k)
    {
        const long double odd = 2.0L * k - 1.0L;
        const long double next = term * odd * odd / (8.0L * k * ax);
        if (next > term)
            break;
        term = next;
        sum += term;
        if (term < sum * 1e-20L)
            break;
    }
    return static_cast<double>(sum / std::sqrt(2.0L * std::numbers::pi_v<long double> * ax));
}

inline double bessel_i0(double x)
{
    detail::require_finite(x, "bessel_i0");
    return std::exp(std::abs(x)) * bessel_i0_scaled(x);
}

// ------------------------------------------------------------------------
// Marcum Q-function of first order

struct MarcumPair
{
    double q; // Q1(a, b)
    double p; // 1 - Q1(a, b)
};

// Q1(a,b) = P(J <= K) with J ~ Poisson(b^2/2) and K ~ Poisson(a^2/2) independent.
// Whichever of Q1 and 1 - Q1 is the smaller tail is accumulated directly from positive
// terms, so both members of the result carry full relative accuracy where they are small.
inline MarcumPair marcum_q1_pair(double a, double b)
{
    detail::require_finite(a, "marcum_q1");
    detail::require_finite(b, "marcum_q1");
    if (a < 0.0 || b < 0.0)
        throw domain_error("marcum_q1: arguments must be nonnegative");

    if (b == 0.0)
        return {1.0, 0.0};

    const long double lam = 0.5L * static_cast<long double>(a) * a;
    const long double x = 0.5L * static_cast<long double>(b) * b;

    if (a == 0.0)
    {
        const long double q = std::exp(-x);
        return {static_cast<double>(q), static_cast<double>(-std::expm1(-x))};
    }

    const long double hi = std::max(lam, x), lo = std::min(lam, x);
    const long double width = 12.0L * std::sqrt(std::max(hi, 1.0L)) + 30.0L;
    const long k_lo = static_cast<long>(std::max(0.0L, std::floor(lo - width)));
    const long k_hi = static_cast<long>(std::ceil(hi + width));

    if (x >= lam)
    {
        // Q1 is the upper tail here: sum_k P(K=k) P(J<=k)
        long double pk = std::exp(detail::log_poisson(lam, k_lo));
        long double pj = std::exp(detail::log_poisson(x, k_lo));
        long double cj = pj, t = pj;
        for (long j = k_lo; j > 0 && t > 0.0L; --j)
        {
            t *= static_cast<long double>(j) / x;
            cj += t;
            if (t < cj * 1e-22L)
                break;
        }
        long double sum = pk * cj;
        for (long k = k_lo + 1; k <= k_hi; ++k)
        {
            pk = pk > 0.0L ? pk * lam / k : std::exp(detail::log_poisson(lam, k));
            pj = pj > 0.0L ? pj * x / k : std::exp(detail::log_poisson(x, k));
            cj += pj;
            sum += pk * cj;
        }
        const double q = static_cast<double>(std::min(sum, 1.0L));
        return {q, static_cast<double>(std::max(0.0L, 1.0L - sum))};
    }

    // 1 - Q1 = sum_k P(K=k) P(J>=k+1), accumulated from the top down
    long double pk = std::exp(detail::log_poisson(lam, k_hi));
    long double pj = std::exp(detail::log_poisson(x, k_hi + 1)); // P(J = k+1)
    long double tj = pj, t = pj;
    for (long j = k_hi + 2; t > 0.0L; ++j)
    {
        t *= x / j;
        tj += t;
        if (t < tj * 1e-22L)
            break;
    }
    long double sum = pk * tj;
    for (long k = k_hi - 1; k >= k_lo; --k)
    {
        pk = pk > 0.0L ? pk * (k + 1) / lam : std::exp(detail::log_poisson(lam, k));
        pj = pj > 0.0L ? pj * (k + 2) / x : std::exp(detail::log_poisson(x, k + 1));
        tj += pj;
        sum += pk * tj;
    }
    const double p = static_cast<double>(std::min(sum, 1.0L));
    return {static_cast<double>(std::max(0.0L, 1.0L - sum)), p};
}

inline double marcum_q1(double a, double b) { return marcum_q1_pair(a, b).q; }

// 1 - Q1(a,b), accurate when it is tiny (small b)
inline double marcum_q1_complement(double a, double b) { return marcum_q1_pair(a, b).p; }

// ------------------------------------------------------------------------
// Confluent hypergeometric 1F1(a; 1; x)

namespace detail
{
// log sum_{k=0}^{n} C(n,k) x^k / k! for x >= 0 (a Laguerre polynomial L_n(-x))
inline long double log_binomial_exponential_sum(std::uint64_t n, long double x)
{
    if (x == 0.0L || n == 0)
        return 0.0L;
    long double term = 1.0L, sum = 1.0L, log_scale = 0.0L;
    for (std::uint64_t k = 1; k <= n; ++k)
    {
        term *= static_cast<long double>(n - k + 1) * x / (static_cast<long double>(k) * k);
        sum += term;
        if (sum > 1e4000L)
        {
            sum *= 1e-4000L;
            term *= 1e-4000L;
            log_scale += 4000.0L * std::log(10.0L);
        }
    }
    return std::log(sum) + log_scale;
}

// sum_n (a)_n x^n / (n!)^2 for x >= 0, log-scaled; throws when the budget is exhausted
inline long double log_kummer_positive_series(long double a, long double x, const SeriesControl &ctl)
{
    long double term = 1.0L, sum = 1.0L, log_scale = 0.0L;
    for (int n = 1; n <= ctl.max_terms; ++n)
    {
        term *= (a + n - 1) * x / (static_cast<long double>(n) * n);
        sum += term;
        if (sum > 1e4000L)
        {
            sum *= 1e-4000L;
            term *= 1e-4000L;
            log_scale += 4000.0L * std::log(10.0L);
        }
        // terms decrease monotonically once n^2 > (a+n) x
        if (static_cast<long double>(n) * n > (a + n) * x && term < sum * ctl.rel_tol)
            return std::log(sum) + log_scale;
    }
    throw numeric_error("kummer_1f1_b1: series did not converge within max_terms",
                        static_cast<double>(std::log(sum) + log_scale));
}

// Large-x expansion: log[ e^x x^{a-1} / Gamma(a) * sum_k ((1-a)_k)^2 / (k! x^k) ]
// Returns false when the truncated series cannot reach the requested accuracy.
inline bool log_kummer_asymptotic(long double a, long double x, long double rel_tol, long double &out)
{
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 400; ++k)
    {
        const long double f = (1.0L - a + k - 1);
        const long double next = term * f * f / (k * x);
        if (std::abs(next) > std::abs(term))
            return false;
        term = next;
        sum += term;
        if (std::abs(term) < std::abs(sum) * rel_tol)
        {
            if (sum <= 0.0L)
                return false;
            out = x + (a - 1.0L) * std::log(x) - std::lgamma(a) + std::log(sum);
            return true;
        }
        if (term == 0.0L)
            break;
    }
    if (sum <= 0.0L)
        return false;
    out = x + (a - 1.0L) * std::log(x) - std::lgamma(a) + std::log(sum);
    return std::abs(term) < std::abs(sum) * 1e-16L;
}

// Plain term-by-term sum_n (a)_n x^n / (n!)^2, compensated, any sign of x
inline long double kummer_direct_series(long double a, long double x, const SeriesControl &ctl = {})
{
    compensated_sum<long double> acc;
    long double term = 1.0L;
    acc.add(term);
    for (int n = 1; n <= ctl.max_terms; ++n)
    {
        term *= (a + n - 1) * x / (static_cast<long double>(n) * n);
        acc.add(term);
        if (term == 0.0L)
            return acc.value();
        if (static_cast<long double>(n) * n > std::abs((a + n) * x) && std::abs(term) < std::abs(acc.value()) * ctl.rel_tol)
            return acc.value();
    }
    throw numeric_error("kummer_1f1_b1: direct series did not converge", static_cast<double>(acc.value()));
}

// Kummer-transformed form e^x * 1F1(1-a; 1; -x)
inline long double kummer_transformed(long double a, long double x, const SeriesControl &ctl = {})
{
    return std::exp(x) * kummer_direct_series(1.0L - a, -x, ctl);
}
} // namespace detail

// log 1F1(a; 1; x) for a > 0, x >= 0. Finite for arguments where 1F1 itself overflows.
inline double log_kummer_1f1_b1(double a, double x, const SeriesControl &ctl = {})
{
    detail::require_finite(a, "kummer_1f1_b1");
    detail::require_finite(x, "kummer_1f1_b1");
    ctl.validate();
    if (!(a > 0.0))
        throw domain_error("kummer_1f1_b1: a must be positive");
    if (x < 0.0)
        throw domain_error("log_kummer_1f1_b1: x must be nonnegative (1F1 may change sign for x < 0)");
    if (x == 0.0)
        return 0.0;

    if (detail::is_integer(a))
    {
        // Kummer transform terminates: 1F1(a;1;x) = e^x sum_{k<a} C(a-1,k) x^k/k!
        return static_cast<double>(x + detail::log_binomial_exponential_sum(static_cast<std::uint64_t>(a) - 1, x));
    }

    long double out = 0.0L;
    if (x > 30.0 + a * a && detail::log_kummer_asymptotic(a, x, ctl.rel_tol, out))
        return static_cast<double>(out);
    return static_cast<double>(detail::log_kummer_positive_series(a, x, ctl));
}

inline double kummer_1f1_b1(double a, double x, const SeriesControl &ctl = {})
{
    detail::require_finite(a, "kummer_1f1_b1");
    detail::require_finite(x, "kummer_1f1_b1");
    ctl.validate();
    if (!(a > 0.0))
        throw domain_error("kummer_1f1_b1: a must be positive");
    if (x >= 0.0)
        return std::exp(log_kummer_1f1_b1(a, x, ctl));
    // x < 0: transformed series has argument -x > 0; terminates for integer a
    return static_cast<double>(detail::kummer_transformed(a, x, ctl));
}

// ------------------------------------------------------------------------
// Generalized Gauss-Laguerre rules and averaging over a unit-mean Gamma variable

struct GaussLaguerreRule
{
    double alpha;
    std::vector<double> nodes;
    std::vector<double> weights; // normalized: sum to 1, i.e. weights of Gamma(alpha+1, 1)
};

namespace detail
{
// Golub-Welsch for starting nodes, Newton polish, and weights from the
// Laguerre recurrence so that tiny tail weights keep relative accuracy.
inline GaussLaguerreRule build_gauss_laguerre(double alpha, int n)
{
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i)
        diag(i) = 2.0 * i + alpha + 1.0;
    for (int i = 0; i + 1 < n; ++i)
        sub(i) = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    GaussLaguerreRule rule{alpha, std::vector<double>(n), std::vector<double>(n)};
    const long double log_norm = std::lgamma(static_cast<long double>(alpha) + n) - std::lgamma(static_cast<long double>(n)) -
                                 std::lgamma(static_cast<long double>(alpha) + 1.0L);
    for (int i = 0; i < n; ++i)
    {
        long double z = solver.eigenvalues()(i);
        long double p1 = 1, p2 = 0, pp = 0;
        for (int it = 0; it < 8; ++it)
        {
            p1 = 1.0L;
            p2 = 0.0L;
            for (int j = 1; j <= n; ++j)
            {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L + alpha - z) * p2 - (j - 1.0L + alpha) * p3) / j;
            }
            pp = (n * p1 - (n + alpha) * p2) / z;
            const long double step = p1 / pp;
            z -= step;
            if (std::abs(step) <= 1e-18L * z)
                break;
        }
        p1 = 1.0L;
        p2 = 0.0L;
        for (int j = 1; j <= n; ++j)
        {
            const long double p3 = p2;
            p2 = p1;
            p1 = ((2.0L * j - 1.0L + alpha - z) * p2 - (j - 1.0L + alpha) * p3) / j;
        }
        pp = (n * p1 - (n + alpha) * p2) / z;
        rule.nodes[i] = static_cast<double>(z);
        rule.weights[i] = static_cast<double>(-std::exp(log_norm) / (pp * n * p2));
    }
    return rule;
}
} // namespace detail

// Rule for int_0^inf t^alpha e^{-t} f(t) dt / Gamma(alpha+1). Cached per (alpha, n).
inline std::shared_ptr<const GaussLaguerreRule> gauss_laguerre(double alpha, int n)
{
    if (!(alpha > -1.0) || !std::isfinite(alpha))
        throw argument_error("gauss_laguerre: alpha must be > -1");
    if (n < 1 || n > 200)
        throw argument_error("gauss_laguerre: node count must lie in [1, 200]");

    static std::mutex mutex;
    static std::map<std::pair<double, int>, std::shared_ptr<const GaussLaguerreRule>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    auto &slot = cache[{alpha, n}];
    if (!slot)
        slot = std::make_shared<const GaussLaguerreRule>(detail::build_gauss_laguerre(alpha, n));
    return slot;
}

// ------------------------------------------------------------------------
// Gauss-Hermite rules for int e^{-x^2} f(x) dx

struct GaussHermiteRule
{
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // normalized: sum to 1, i.e. weights of N(0, 1/2)
};

namespace detail
{
// Golub-Welsch start, Newton polish on the orthonormal recurrence
// h_{k+1} = (sqrt(2) x h_k - sqrt(k) h_{k-1}) / sqrt(k+1), Christoffel weights 1 / sum h_k^2.
inline GaussHermiteRule build_gauss_hermite(int n)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), sub(std::max(n - 1, 0));
    for (int i = 0; i + 1 < n; ++i)
        sub(i) = std::sqrt((i + 1.0) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    GaussHermiteRule rule{std::vector<double>(n), std::vector<double>(n)};
    auto evaluate = [n](long double x, long double &hn, long double &hn1, long double &sumsq) {
        long double prev = 0.0L, cur = 1.0L;
        sumsq = 0.0L;
        for (int k = 0; k < n; ++k)
        {
            sumsq += cur * cur;
            const long double next = (std::sqrt(2.0L) * x * cur - std::sqrt(static_cast<long double>(k)) * prev) / std::sqrt(k + 1.0L);
            prev = cur;
            cur = next;
        }
        hn = cur;
        hn1 = prev;
    };
    for (int i = 0; i < n; ++i)
    {
        long double x = solver.eigenvalues()(i), hn, hn1, sumsq;
        for (int it = 0; it < 8; ++it)
        {
            evaluate(x, hn, hn1, sumsq);
            const long double step = hn / (std::sqrt(2.0L * n) * hn1);
            x -= step;
            if (std::abs(step) <= 1e-18L * (1.0L + std::abs(x)))
                break;
        }
        evaluate(x, hn, hn1, sumsq);
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(1.0L / sumsq);
    }
    return rule;
}
} // namespace detail

// Cached per node count
inline std::shared_ptr<const GaussHermiteRule> gauss_hermite(int n)
{
    if (n < 1 || n > 200)
        throw argument_error("gauss_hermite: node count must lie in [1, 200]");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussHermiteRule>> cache;
    const std::lock_guard<std::mutex> lock(mutex);
    auto &slot = cache[n];
    if (!slot)
        slot = std::make_shared<const GaussHermiteRule>(detail::build_gauss_hermite(n));
    return slot;
}

// E[g(zeta)] for zeta ~ Gamma(shape m, mean 1).
// The integrand is supplied pre-tilted: tilted(z) must return e^{tilt z} g(z), tilt > -m.
// Choosing the tilt to cancel the exponential behaviour of g keeps the Laguerre rule accurate.
template <typename F>
double gamma_mixture(double m, double tilt, int nodes, F &&tilted)
{
    if (!(m > 0.0))
        throw domain_error("gamma_mixture: m must be positive");
    if (!(tilt > -m) || !std::isfinite(tilt))
        throw argument_error("gamma_mixture: tilt must exceed -m");
    const auto rule = gauss_laguerre(m - 1.0, nodes);
    const double kappa = m + tilt;
    compensated_sum<long double> acc;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i)
        acc.add(static_cast<long double>(rule->weights[i]) * tilted(rule->nodes[i] / kappa));
    return static_cast<double>(std::exp(m * (std::log(m) - std::log(kappa))) * acc.value());
}

// ------------------------------------------------------------------------
// Regularized lower incomplete gamma P(k, y) for integer k = 1..kmax (Erlang CDFs)

inline std::vector<double> erlang_cdf_table(int kmax, double y)
{
    if (kmax < 1)
        throw argument_error("erlang_cdf_table: kmax must be >= 1");
    if (!(y >= 0.0))
        throw domain_error("erlang_cdf_table: y must be nonnegative");
    std::vector<double> out(kmax, 0.0);
    if (y == 0.0)
        return out;

    const long double yl = y;
    long double pmf = std::exp(detail::log_poisson(yl, kmax)); // P(Y = kmax), Y ~ Poisson(y)
    long double top;                                            // P(kmax, y) = P(Y >= kmax)
    if (yl < kmax)
    {
        long double t = pmf, s = pmf;
        for (long i = kmax + 1; t > 0.0L; ++i)
        {
            t *= yl / i;
            s += t;
            if (t < s * 1e-22L)
                break;
        }
        top = s;
    }
    else
    {
        // 1 - P(Y <= kmax - 1), the subtracted tail is the smaller one
        long double t = pmf, s = 0.0L;
        for (long i = kmax; i > 0; --i)
        {
            t = t > 0.0L ? t * i / yl : std::exp(detail::log_poisson(yl, i - 1));
            s += t;
            if (t < s * 1e-22L && i < yl)
                break;
        }
        top = 1.0L - s;
    }
    out[kmax - 1] = static_cast<double>(top);
    long double acc = top;
    for (long k = kmax - 1; k >= 1; --k)
    {
        pmf = pmf > 0.0L ? pmf * (k + 1) / yl : std::exp(detail::log_poisson(yl, k));
        acc += pmf;
        out[k - 1] = static_cast<double>(std::min(acc, 1.0L));
    }
    return out;
}

// ------------------------------------------------------------------------
// Humbert's bivariate confluent hypergeometric function Phi2

// Double series sum_{i,j} (b1)_i (b2)_j x^i y^j / ((c)_{i+j} i! j!)
inline double humbert_phi2_series(double b1, double b2, double c, double x, double y, const SeriesControl &ctl = {})
{
    for (double v : {b1, b2, c, x, y})
        detail::require_finite(v, "humbert_phi2");
    if (!(c > 0.0))
        throw domain_error("humbert_phi2: c must be positive");

    const long double lb1 = b1, lb2 = b2, lc = c, lx = x, ly = y;
    const long double i_min = 2.0L * std::abs(lx) + std::abs(lb1) + 8.0L;
    const long double j_min = 2.0L * std::abs(ly) + std::abs(lb2) + 8.0L;
    compensated_sum<long double> total;
    long double row_head = 1.0L; // term (i, 0)
    for (int i = 0; i <= ctl.max_terms; ++i)
    {
        if (i > 0)
            row_head *= (lb1 + i - 1) * lx / (static_cast<long double>(i) * (lc + i - 1));
        if (row_head == 0.0L && (b1 <= 0.0 && detail::is_integer(b1) && i > -b1))
            return static_cast<double>(total.value());

        long double term = row_head, row_abs = std::abs(term);
        compensated_sum<long double> row;
        row.add(term);
        bool converged = false;
        for (int j = 1; j <= ctl.max_terms; ++j)
        {
            term *= (lb2 + j - 1) * ly / (static_cast<long double>(j) * (lc + i + j - 1));
            row.add(term);
            row_abs += std::abs(term);
            if (term == 0.0L || (j > j_min && std::abs(term) <= 1e-21L * (std::abs(row.value()) + row_abs * 1e-3L)))
            {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw numeric_error("humbert_phi2: inner series did not converge", static_cast<double>(total.value()));
        total.add(row.value());
        if (i > i_min && row_abs <= 1e-21L * std::abs(total.value()))
            return static_cast<double>(total.value());
    }
    throw numeric_error("humbert_phi2: series did not converge", static_cast<double>(total.value()));
}

// Conditional CDF of the Rician shadowed power, E_zeta[1 - Q1(sqrt(2 zeta P / W), sqrt(2 u / W))],
// with zeta ~ Gamma(m, mean 1), evaluated by a tilted Gauss-Laguerre rule.
inline double rician_shadowed_cdf_mixture(double los_power, double omega0, double m, double u, int gamma_nodes)
{
    if (u <= 0.0)
        return 0.0;
    const double lam = los_power / omega0;
    const double b = std::sqrt(2.0 * u / omega0);
    return gamma_mixture(m, lam, gamma_nodes, [&](double z) {
        const double a = std::sqrt(2.0 * lam * z);
        return std::exp(lam * z) * marcum_q1_complement(a, b);
    });
}

// Phi2(1-m, m; 2; x, y) with x <= y < 0 is the Rician shadowed CDF divided by its
// prefactor; evaluate it through the Gamma mixture of Rician CDFs.
inline double humbert_phi2_mixture(double b1, double b2, double c, double x, double y, int gamma_nodes = 64)
{
    for (double v : {b1, b2, c, x, y})
        detail::require_finite(v, "humbert_phi2");
    if (c != 2.0 || std::abs(b1 + b2 - 1.0) > 1e-12 || !(b2 > 0.0) || !(x <= y) || !(y < 0.0))
        throw argument_error("humbert_phi2_mixture: requires Phi2(1-m, m; 2; x, y) with x <= y < 0");
    const double m = b2;
    const double u = -x; // unit diffuse power
    const double los = m * (x / y - 1.0);
    const double cdf = rician_shadowed_cdf_mixture(los, 1.0, m, u, gamma_nodes);
    return cdf / (u * std::exp(m * (std::log(m) - std::log(m + los))));
}

// Dispatches to the Gamma-mixture path on the Rician-shadowed argument pattern and to the
// double series elsewhere.
inline double humbert_phi2(double b1, double b2, double c, double x, double y, int gamma_nodes = 64)
{
    if (x == 0.0 && y == 0.0)
        return 1.0;
    if (c == 2.0 && std::abs(b1 + b2 - 1.0) <= 1e-12 && b2 > 0.0 && x <= y && y < 0.0)
        return humbert_phi2_mixture(b1, b2, c, x, y, gamma_nodes);
    return humbert_phi2_series(b1, b2, c, x, y);
}

// ------------------------------------------------------------------------
// Legendre polynomials

struct LegendreCoefficients
{
    unsigned degree = 0;
    std::vector<std::uint64_t> coeffs; // C_q^n = (2n-2q)! / (q! (n-q)! (n-2q)!), q = 0..floor(n/2)
};

inline constexpr unsigned legendre_exact_max_degree = 33; // C_0^n = binom(2n, n) fits in 64 bits

inline LegendreCoefficients legendre_coefficients(unsigned n)
{
    if (n > legendre_exact_max_degree)
        throw argument_error("legendre_coefficients: degree exceeds exact 64-bit range");
    auto binom = [](unsigned top, unsigned k) {
        unsigned __int128 r = 1;
        for (unsigned i = 1; i <= k; ++i)
            r = r * (top - k + i) / i;
        return r;
    };
    LegendreCoefficients out{n, {}};
    for (unsigned q = 0; q <= n / 2; ++q)
        out.coeffs.push_back(static_cast<std::uint64_t>(binom(n, q) * binom(2 * n - 2 * q, n)));
    return out;
}

// P_n(z) for any finite z (not restricted to [-1, 1]).
// Low degrees use the explicit coefficient sum; higher degrees the three-term recurrence.
inline double legendre_p(unsigned n, double z)
{
    detail::require_finite(z, "legendre_p");
    if (n == 0)
        return 1.0;
    if (n <= 20)
    {
        const auto c = legendre_coefficients(n);
        const long double zl = z;
        long double sum = 0.0L;
        for (unsigned q = 0; q < c.coeffs.size(); ++q)
        {
            const long double term = static_cast<long double>(c.coeffs[q]) * std::pow(zl, static_cast<int>(n - 2 * q));
            sum += (q % 2 == 0) ? term : -term;
        }
        return static_cast<double>(std::ldexp(sum, -static_cast<int>(n)));
    }
    long double prev = 1.0L, cur = z;
    for (unsigned k = 1; k < n; ++k)
    {
        const long double next = ((2.0L * k + 1.0L) * z * cur - k * prev) / (k + 1.0L);
        prev = cur;
        cur = next;
    }
    return static_cast<double>(cur);
}

// ------------------------------------------------------------------------

// Density of a unit-mean Gamma variable with shape m
inline double gamma_unit_mean_pdf(double u, double m)
{
    detail::require_finite(u, "gamma_unit_mean_pdf");
    detail::require_finite(m, "gamma_unit_mean_pdf");
    if (!(u > 0.0) || !(m > 0.0))
        throw domain_error("gamma_unit_mean_pdf: u and m must be positive");
    return std::exp(m * std::log(m) + (m - 1.0) * std::log(u) - m * u - std::lgamma(m));
}

} // namespace fadelab::specfun

#endif
