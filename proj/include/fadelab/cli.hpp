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

// Command-line front end: configuration parsing (flags and INI files through CLI11)
// and curve evaluation to CSV. Kept in a header so tests can drive it in-process.

#ifndef FADELAB_CLI_HPP
#define FADELAB_CLI_HPP

#include "errors.hpp"
#include "fnr.hpp"
#include "mc.hpp"
#include "metrics.hpp"
#include "nwdp.hpp"
#include "parallel.hpp"
#include "phase_avg.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fadelab::cli
{

// Invalid configuration; the message names the offending field
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// --help was given; carries the rendered help text
class help_requested : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Command
{
    pdf,
    cdf,
    mgf,
    outage,
    simulate,
    verify
};

enum class ModelKind
{
    nwdp,
    fnr
};

enum class Quantity
{
    power,
    envelope
};

enum class GridScale
{
    lin,
    log
};

struct Grid
{
    double min = 0.0;
    double max = 1.0;
    std::size_t points = 2;
    GridScale scale = GridScale::lin;

    std::vector<double> values() const
    {
        std::vector<double> x(points);
        const double last = static_cast<double>(points - 1);
        for (std::size_t i = 0; i < points; ++i)
        {
            // divide last so decimal steps print as typed
            if (scale == GridScale::lin)
                x[i] = min + (max - min) * static_cast<double>(i) / last;
            else
                x[i] = std::exp(std::log(min) + (std::log(max) - std::log(min)) * static_cast<double>(i) / last);
        }
        x.front() = min;
        x.back() = max;
        return x;
    }
};

inline Grid parse_grid(const std::string &text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    if (parts.size() != 3 && parts.size() != 4)
        throw config_error("grid: expected min:max:points[:lin|log], got '" + text + "'");
    Grid g;
    auto number = [&](const std::string &s) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
            throw config_error("grid: '" + s + "' is not a finite number");
        return v;
    };
    g.min = number(parts[0]);
    g.max = number(parts[1]);
    std::size_t pts = 0;
    const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), pts);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size())
        throw config_error("grid: point count '" + parts[2] + "' is not an integer");
    g.points = pts;
    if (parts.size() == 4)
    {
        if (parts[3] == "lin")
            g.scale = GridScale::lin;
        else if (parts[3] == "log")
            g.scale = GridScale::log;
        else
            throw config_error("grid: scale must be lin or log, got '" + parts[3] + "'");
    }
    if (g.points < 2)
        throw config_error("grid: need at least 2 points");
    if (!(g.min < g.max))
        throw config_error("grid: min must be below max");
    if (g.scale == GridScale::log && !(g.min > 0.0))
        throw config_error("grid: log scale needs min > 0");
    return g;
}

struct RunConfig
{
    Command command = Command::pdf;
    ModelKind model = ModelKind::nwdp;
    std::optional<double> k_db;
    double omega0 = 1.0;
    std::optional<double> m;
    std::size_t n_waves = 1;
    metrics::Profile profile = metrics::Profile::balanced;
    std::vector<double> amplitudes; // shape for the explicit profile
    std::optional<Grid> grid;
    Quantity quantity = Quantity::power;
    double rs = 1.0;
    bool asymptote = false;
    bool mc = false;
    QuadratureSpec quad;
    std::uint64_t seed = 1;
    std::size_t samples = 1'000'000;
    double ks_threshold = 0.0017;
    std::string output;    // empty or "-" for stdout
    std::string batch_out; // simulate: optional binary batch file

    SpecularSet specular() const
    {
        metrics::KSpec k{k_db.value_or(-std::numeric_limits<double>::infinity()), omega0, profile, amplitudes};
        if (n_waves == 0)
            return {{}, omega0};
        if (omega0 > 0.0)
            return metrics::amplitudes_from_k(k, n_waves);
        // no diffuse power: K is undefined, take the explicit amplitudes as given
        return {amplitudes, 0.0};
    }

    fnr::FnrModel fnr_model() const { return {specular(), m.value_or(1.0)}; }
};

inline const char *command_name(Command c)
{
    constexpr const char *names[] = {"pdf", "cdf", "mgf", "outage", "simulate", "verify"};
    return names[static_cast<int>(c)];
}

namespace detail
{
template <typename E>
E lookup(const std::string &field, const std::string &value, std::initializer_list<std::pair<const char *, E>> table)
{
    for (const auto &[name, e] : table)
        if (value == name)
            return e;
    throw config_error(field + ": unknown value '" + value + "'");
}
} // namespace detail

// Builds a RunConfig from argv. Throws config_error (bad or inconsistent values) or
// help_requested.
inline RunConfig parse_config(int argc, const char *const *argv)
{
    CLI::App app{"fadelab: statistics of fading channels with multiple specular components", "fadelab"};
    app.set_config("--config", "", "INI file with the same keys as the long options");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string command, model = "nwdp", profile = "balanced", quantity = "power", grid;
    std::optional<double> k_db, m;
    double omega0 = 1.0, rs = 1.0, ks_threshold = 0.0017;
    long long n_waves = -1;
    std::vector<double> amplitudes;
    bool asymptote = false, mc = false;
    QuadratureSpec quad;
    std::uint64_t seed = 1;
    std::size_t samples = 1'000'000;
    std::string output, batch_out;

    app.add_option("command", command, "pdf | cdf | mgf | outage | simulate | verify");
    app.add_option("--model", model, "nwdp | fnr");
    app.add_option("--kdb", k_db, "specular-to-diffuse power ratio K in dB");
    app.add_option("--omega0", omega0, "diffuse power");
    app.add_option("--m", m, "Gamma shadowing parameter (fnr only)");
    app.add_option("--n", n_waves, "number of specular waves (default: 1, or the amplitude count)");
    app.add_option("--profile", profile, "balanced | explicit");
    app.add_option("--amplitudes", amplitudes, "amplitude shape for the explicit profile")->delimiter(',');
    app.add_option("--grid", grid, "min:max:points[:lin|log]; x is u, r, s or average SNR in dB");
    app.add_option("--quantity", quantity, "power | envelope (pdf, cdf, simulate)");
    app.add_option("--rs", rs, "threshold rate in bits/s/Hz (outage)");
    app.add_flag("--asymptote", asymptote, "add the high-SNR asymptote column (cdf, outage)");
    app.add_flag("--mc", mc, "add Monte Carlo estimate and standard error columns");
    app.add_option("--nodes-per-dim", quad.nodes_per_dim, "phase quadrature nodes per dimension");
    app.add_option("--max-dims", quad.max_dims, "largest phase-torus dimension");
    app.add_option("--gamma-nodes", quad.gamma_nodes, "Gamma mixture quadrature nodes");
    app.add_option("--node-budget", quad.node_budget, "cap on total phase nodes");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--samples", samples, "Monte Carlo sample count");
    app.add_option("--ks-threshold", ks_threshold, "verify: largest accepted KS distance");
    app.add_option("--output,-o", output, "CSV destination (default stdout)");
    app.add_option("--batch-out", batch_out, "simulate: write the raw sample batch here");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        throw help_requested(app.help());
    }
    catch (const CLI::ParseError &e)
    {
        throw config_error(e.what());
    }

    RunConfig cfg;
    if (command.empty())
        throw config_error("command: missing (pdf, cdf, mgf, outage, simulate or verify)");
    cfg.command = detail::lookup<Command>("command", command,
                                          {{"pdf", Command::pdf},
                                           {"cdf", Command::cdf},
                                           {"mgf", Command::mgf},
                                           {"outage", Command::outage},
                                           {"simulate", Command::simulate},
                                           {"verify", Command::verify}});
    cfg.model = detail::lookup<ModelKind>("model", model, {{"nwdp", ModelKind::nwdp}, {"fnr", ModelKind::fnr}});
    cfg.profile = detail::lookup<metrics::Profile>("profile", profile,
                                                   {{"balanced", metrics::Profile::balanced},
                                                    {"explicit", metrics::Profile::explicit_amplitudes}});
    cfg.quantity = detail::lookup<Quantity>("quantity", quantity, {{"power", Quantity::power}, {"envelope", Quantity::envelope}});

    try
    {
        quad.validate();
    }
    catch (const std::exception &e)
    {
        throw config_error(std::string("quadrature: ") + e.what());
    }
    cfg.quad = quad;

    if (cfg.model == ModelKind::fnr && !m)
        throw config_error("m: required with --model fnr");
    if (cfg.model == ModelKind::nwdp && m)
        throw config_error("m: only valid with --model fnr");
    if (m && (!(*m > 0.0) || !std::isfinite(*m)))
        throw config_error("m: must be finite and positive");
    cfg.m = m;

    if (!std::isfinite(omega0) || omega0 < 0.0 || (omega0 == 0.0 && cfg.command != Command::mgf))
        throw config_error("omega0: must be positive (zero is accepted for mgf only)");
    cfg.omega0 = omega0;

    if (cfg.profile == metrics::Profile::explicit_amplitudes)
    {
        if (amplitudes.empty())
            throw config_error("amplitudes: required with --profile explicit");
        if (n_waves >= 0 && static_cast<std::size_t>(n_waves) != amplitudes.size())
            throw config_error("n: differs from the number of amplitudes");
        n_waves = static_cast<long long>(amplitudes.size());
        for (double a : amplitudes)
            if (!(a >= 0.0) || !std::isfinite(a))
                throw config_error("amplitudes: must be finite and nonnegative");
    }
    else if (!amplitudes.empty())
        throw config_error("amplitudes: only valid with --profile explicit");
    if (n_waves < 0)
        n_waves = 1;
    if (n_waves > static_cast<long long>(quad.max_dims) + 1)
        throw config_error("n: at most max-dims + 1 specular waves");
    cfg.n_waves = static_cast<std::size_t>(n_waves);
    cfg.amplitudes = amplitudes;

    if (cfg.n_waves == 0 && k_db && *k_db != -std::numeric_limits<double>::infinity())
        throw config_error("kdb: must be -inf (or omitted) with --n 0");
    if (cfg.n_waves > 0 && omega0 > 0.0 && !k_db)
        throw config_error("kdb: required when n > 0");
    if (cfg.n_waves > 0 && omega0 == 0.0 && cfg.profile != metrics::Profile::explicit_amplitudes)
        throw config_error("profile: omega0 = 0 needs explicit amplitudes");
    if (cfg.n_waves > 0 && k_db && !std::isfinite(*k_db))
        throw config_error("kdb: must be finite when n > 0");
    cfg.k_db = k_db;

    if (!grid.empty())
        cfg.grid = parse_grid(grid);
    if (cfg.command != Command::verify && !cfg.grid)
        throw config_error("grid: required for " + command);
    if (cfg.grid && cfg.command == Command::pdf && cfg.grid->min < 0.0)
        throw config_error("grid: pdf abscissae must be nonnegative");

    if (cfg.quantity == Quantity::envelope && cfg.command != Command::pdf && cfg.command != Command::cdf && cfg.command != Command::simulate)
        throw config_error("quantity: envelope only applies to pdf, cdf and simulate");
    if (asymptote && cfg.command != Command::cdf && cfg.command != Command::outage)
        throw config_error("asymptote: only valid for cdf and outage");
    if (mc && (cfg.command == Command::simulate || cfg.command == Command::verify))
        throw config_error("mc: implied by " + command);
    cfg.asymptote = asymptote;
    cfg.mc = mc;

    if (!(rs > 0.0) || !std::isfinite(rs))
        throw config_error("rs: must be positive");
    cfg.rs = rs;
    if (!(ks_threshold > 0.0) || !(ks_threshold < 1.0))
        throw config_error("ks-threshold: must lie in (0, 1)");
    cfg.ks_threshold = ks_threshold;
    if (samples < 1)
        throw config_error("samples: must be >= 1");
    cfg.samples = samples;
    cfg.seed = seed;

    cfg.output = output;
    cfg.batch_out = batch_out;
    if (!batch_out.empty() && cfg.command != Command::simulate)
        throw config_error("batch-out: only valid for simulate");

    try
    {
        cfg.specular().validate();
    }
    catch (const std::exception &e)
    {
        throw config_error(std::string("model: ") + e.what());
    }
    return cfg;
}

// ------------------------------------------------------------------------
// Evaluation

// Shortest round-trip decimal form, locale independent
inline void append_number(std::string &out, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

class Evaluator
{
public:
    explicit Evaluator(const RunConfig &cfg)
    {
        if (cfg.model == ModelKind::nwdp)
            channel_.emplace<nwdp::Channel>(cfg.specular(), cfg.quad);
        else
            channel_.emplace<fnr::Channel>(cfg.fnr_model(), cfg.quad);
    }

    double pdf_power(double u) const { return visit([&](const auto &ch) { return ch.pdf_power(u); }); }
    double pdf_envelope(double r) const { return visit([&](const auto &ch) { return ch.pdf_envelope(r); }); }
    double cdf_power(double u) const { return visit([&](const auto &ch) { return ch.cdf_power(u); }); }
    double cdf_asymptotic(double u) const { return visit([&](const auto &ch) { return ch.cdf_asymptotic(u); }); }
    double mgf(double s) const { return visit([&](const auto &ch) { return ch.mgf(s); }); }
    double outage(const metrics::SnrPoint &p) const { return visit([&](const auto &ch) { return metrics::outage_probability(ch, p); }); }
    double outage_asymptotic(const metrics::SnrPoint &p) const
    {
        return visit([&](const auto &ch) { return metrics::outage_asymptotic(ch, p); });
    }

private:
    template <typename F>
    double visit(F &&f) const
    {
        return std::visit([&](const auto &ch) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(ch)>, std::monostate>)
                throw std::logic_error("Evaluator: no channel");
            else
                return f(ch);
        }, channel_);
    }

    std::variant<std::monostate, nwdp::Channel, fnr::Channel> channel_;
};

inline mc::SampleBatch draw_batch(const RunConfig &cfg, unsigned threads)
{
    if (cfg.model == ModelKind::nwdp)
        return mc::sample_nwdp(cfg.specular(), cfg.samples, cfg.seed, threads);
    return mc::sample_fnr(cfg.fnr_model(), cfg.samples, cfg.seed, threads);
}

struct McColumn
{
    std::vector<double> estimate;
    std::vector<double> stderr_;
};

namespace detail
{
// fraction of sorted samples in [lo, hi)
inline double fraction_in(std::span<const double> sorted, double lo, double hi)
{
    const auto a = std::lower_bound(sorted.begin(), sorted.end(), lo);
    const auto b = std::lower_bound(sorted.begin(), sorted.end(), hi);
    return static_cast<double>(b - a) / static_cast<double>(sorted.size());
}

// Monte Carlo counterpart of every grid point
inline McColumn mc_column(const RunConfig &cfg, const std::vector<double> &x, unsigned threads)
{
    auto batch = draw_batch(cfg, threads);
    const double n = static_cast<double>(batch.n());
    McColumn col{std::vector<double>(x.size()), std::vector<double>(x.size())};

    if (cfg.command == Command::mgf)
    {
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            mc::SampleBatch tilted;
            tilted.values.resize(batch.n());
            for (std::size_t k = 0; k < batch.n(); ++k)
                tilted.values[k] = std::exp(x[i] * batch.values[k]);
            col.estimate[i] = tilted.mean();
            col.stderr_[i] = std::sqrt(tilted.variance() / n);
        }
        return col;
    }

    if (cfg.quantity == Quantity::envelope)
        for (double &v : batch.values)
            v = std::sqrt(v);
    const mc::Ecdf e(std::move(batch.values));
    const double mean_power = metrics::mean_power(cfg.specular());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (cfg.command == Command::pdf)
        {
            // bin centred on x spanning the local grid spacing
            const double left = i > 0 ? x[i] - x[i - 1] : x[1] - x[0];
            const double right = i + 1 < x.size() ? x[i + 1] - x[i] : left;
            const double lo = std::max(0.0, x[i] - 0.5 * left), hi = x[i] + 0.5 * right;
            const double p = fraction_in(e.sorted(), lo, hi);
            col.estimate[i] = p / (hi - lo);
            col.stderr_[i] = std::sqrt(p * (1.0 - p) / n) / (hi - lo);
        }
        else
        {
            double at = x[i];
            if (cfg.command == Command::outage)
                at = metrics::outage_threshold(mean_power, {x[i], cfg.rs});
            const double p = e(at);
            col.estimate[i] = p;
            col.stderr_[i] = std::sqrt(p * (1.0 - p) / n);
        }
    }
    return col;
}
} // namespace detail

// Evaluates the configured curve and returns the complete CSV text. Kernel failures
// propagate as exceptions; nothing is returned partially.
inline std::string run_curve(const RunConfig &cfg, unsigned threads = thread_count())
{
    if (cfg.command == Command::verify)
        throw std::logic_error("run_curve: verify has its own report");
    const auto x = cfg.grid.value().values();

    std::string csv;
    if (cfg.command == Command::simulate)
    {
        auto batch = draw_batch(cfg, threads);
        if (!cfg.batch_out.empty())
            mc::write_batch(batch, cfg.batch_out);
        if (cfg.quantity == Quantity::envelope)
            for (double &v : batch.values)
                v = std::sqrt(v);
        const mc::Ecdf e(std::move(batch.values));
        csv = "x,mc_estimate,mc_stderr\n";
        for (double v : x)
        {
            const double p = e(v);
            append_number(csv, v);
            csv += ',';
            append_number(csv, p);
            csv += ',';
            append_number(csv, std::sqrt(p * (1.0 - p) / static_cast<double>(e.size())));
            csv += '\n';
        }
        return csv;
    }

    const Evaluator ev(cfg);
    const bool envelope = cfg.quantity == Quantity::envelope;
    const auto value = parallel_map(
        x.size(),
        [&](std::size_t i) {
            const double v = x[i];
            switch (cfg.command)
            {
            case Command::pdf:
                return envelope ? ev.pdf_envelope(v) : ev.pdf_power(v);
            case Command::cdf:
                return ev.cdf_power(envelope ? v * v : v);
            case Command::mgf:
                return ev.mgf(v);
            case Command::outage:
                return ev.outage({v, cfg.rs});
            default:
                throw std::logic_error("run_curve: unexpected command");
            }
        },
        threads);
    std::vector<double> asym;
    if (cfg.asymptote)
        asym = parallel_map(
            x.size(),
            [&](std::size_t i) {
                if (cfg.command == Command::outage)
                    return ev.outage_asymptotic({x[i], cfg.rs});
                return ev.cdf_asymptotic(envelope ? x[i] * x[i] : x[i]);
            },
            threads);
    McColumn mcc;
    if (cfg.mc)
        mcc = detail::mc_column(cfg, x, threads);

    csv = "x,value";
    if (cfg.asymptote)
        csv += ",asymptotic";
    if (cfg.mc)
        csv += ",mc_estimate,mc_stderr";
    csv += '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (!std::isfinite(value[i]) || (cfg.asymptote && !std::isfinite(asym[i])))
            throw numeric_error("run_curve: non-finite value", value[i]);
        append_number(csv, x[i]);
        csv += ',';
        append_number(csv, value[i]);
        if (cfg.asymptote)
        {
            csv += ',';
            append_number(csv, asym[i]);
        }
        if (cfg.mc)
        {
            csv += ',';
            append_number(csv, mcc.estimate[i]);
            csv += ',';
            append_number(csv, mcc.stderr_[i]);
        }
        csv += '\n';
    }
    return csv;
}

struct VerifyReport
{
    std::string csv;
    bool passed = false;
};

// Analytical cdf against a seeded sample: KS distance and the mean power
inline VerifyReport run_verify(const RunConfig &cfg, unsigned threads = thread_count())
{
    const auto batch = draw_batch(cfg, threads);
    const double mean = batch.mean();
    const double se = std::sqrt(batch.variance() / static_cast<double>(batch.n()));
    const double expected = metrics::mean_power(cfg.specular());
    const Evaluator ev(cfg);
    const mc::Ecdf e(batch.values);
    const auto tab = mc::TabulatedCdf::from_sample(e, 500, [&](double u) { return ev.cdf_power(u); }, threads);
    const double ks = mc::ks_distance(e, tab);
    if (!std::isfinite(ks))
        throw numeric_error("verify: non-finite KS distance", ks);

    const bool ks_ok = ks <= cfg.ks_threshold;
    const double mean_tol = 4.0 * se;
    const bool mean_ok = std::abs(mean - expected) <= mean_tol;

    VerifyReport rep;
    rep.csv = "check,value,reference,tolerance,pass\n";
    auto row = [&](const char *name, double v, double ref, double tol, bool ok) {
        rep.csv += name;
        rep.csv += ',';
        append_number(rep.csv, v);
        rep.csv += ',';
        append_number(rep.csv, ref);
        rep.csv += ',';
        append_number(rep.csv, tol);
        rep.csv += ok ? ",1\n" : ",0\n";
    };
    row("ks_distance", ks, 0.0, cfg.ks_threshold, ks_ok);
    row("mean_power", mean, expected, mean_tol, mean_ok);
    rep.passed = ks_ok && mean_ok;
    return rep;
}

} // namespace fadelab::cli

#endif
