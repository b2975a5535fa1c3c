// Copyright 2026 The optonoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optonoise/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "optonoise/errors.hpp"
#include "optonoise/noise_budget.hpp"

#ifndef OPTONOISE_VERSION
#define OPTONOISE_VERSION "0.0.0"
#endif

namespace optonoise {

using nlohmann::json;

namespace {

constexpr const char *kPsdUnit = "normalized force PSD";

ProbeMode mode_of(SchemeKind k) {
    switch (k) {
    case SchemeKind::Monochromatic:
        return ProbeMode::Monochromatic;
    case SchemeKind::DichromaticToy:
        return ProbeMode::DichromaticToy;
    case SchemeKind::FourProbe:
        return ProbeMode::FourProbe;
    }
    return ProbeMode::Monochromatic;
}

bool rotating(const ScenarioConfig &c) { return c.scheme != SchemeKind::Monochromatic; }

double absolute_omega(const ScenarioConfig &c, double point) { return rotating(c) ? c.osc.omega_m + point : point; }

double offset_in_gamma(const ScenarioConfig &c, double point) {
    const double offset = rotating(c) ? point : point - c.osc.omega_m;
    return c.osc.gamma_m > 0.0 ? offset / c.osc.gamma_m : std::numeric_limits<double>::quiet_NaN();
}

json normalized_echo(const ScenarioConfig &c) {
    json j{{"omega_m", c.osc.omega_m}, {"gamma_m", c.osc.gamma_m}, {"n_thermal", c.osc.n_thermal}, {"kappa", c.kappa}};
    if (c.osc.bath_frequency) {
        j["bath_frequency"] = *c.osc.bath_frequency;
    }
    return j;
}

ResultEnvelope envelope(const ScenarioConfig &c, const std::string &analysis) {
    ResultEnvelope e;
    e.analysis = analysis;
    e.config = emit_config(c);
    e.normalized = normalized_echo(c);
    e.seed = c.seed;
    e.summary = json::object();
    return e;
}

std::vector<Column> frequency_columns() { return {{"omega_rad_s", "rad/s"}, {"offset_gamma", "gamma_m"}}; }

// Single angle needed by the time-domain paths.
double readout_radians(const ScenarioConfig &c) {
    if (c.scheme != SchemeKind::Monochromatic || !c.readout) {
        return 0.0;
    }
    switch (c.readout->mode) {
    case AngleMode::Fixed:
        return c.readout->psi;
    case AngleMode::Phase:
        return std::numbers::pi / 2.0;
    case AngleMode::Optimal:
        return optimal_homodyne_angle(c.osc, c.kappa, c.readout->omega_f0).value();
    case AngleMode::Pointwise:
        break;
    }
    throw ValidationError("readout.angle", "time-domain runs need a single readout angle");
}

} // namespace

json ResultEnvelope::payload() const {
    json cols = json::array();
    for (const auto &c : table.columns) {
        cols.push_back({{"name", c.name}, {"unit", c.unit}});
    }
    json rows = json::array();
    for (const auto &r : table.rows) {
        json row = json::array();
        for (const auto &cell : r) {
            std::visit([&](const auto &v) { row.push_back(v); }, cell);
        }
        rows.push_back(std::move(row));
    }
    return json{{"analysis", analysis},
                {"config", config},
                {"normalized", normalized},
                {"summary", summary},
                {"warnings", warnings},
                {"table", {{"columns", cols}, {"rows", rows}}}};
}

json ResultEnvelope::to_json(const std::string &generated_at) const {
    return json{{"engine", {{"name", "optonoise"}, {"version", OPTONOISE_VERSION}}},
                {"provenance", {{"seed", seed}, {"generated_at", generated_at}}},
                {"payload", payload()}};
}

std::vector<BudgetPoint> evaluate_budget(const ScenarioConfig &c, const std::vector<double> &points) {
    if (points.empty()) {
        throw ValidationError("grid.points", "empty grid");
    }
    std::vector<double> magnitudes;
    for (double p : points) {
        magnitudes.push_back(std::abs(p));
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    magnitudes.erase(std::unique(magnitudes.begin(), magnitudes.end()), magnitudes.end());
    const auto grid = FrequencyGrid::mirrored(magnitudes, rotating(c) ? Band::Baseband : Band::Absolute);
    const auto scheme = build_scheme(c.osc, Probe{mode_of(c.scheme), c.kappa}, grid, readout_angle(c));
    const std::string name = primary_observable(c);
    if (!scheme.observables.contains(name)) {
        std::string known;
        for (const auto &n : scheme.observable_names()) {
            known += (known.empty() ? "" : ", ") + n;
        }
        throw ValidationError("observable", "unknown observable '" + name + "' (" + known + ")");
    }
    const auto r = force_referred_psd(scheme, name);
    std::vector<BudgetPoint> out;
    for (double p : points) {
        const std::size_t j = *grid.find(p);
        out.push_back({p, r.total[j], r.shot[j], r.backaction[j], r.thermal[j]});
    }
    return out;
}

ResultEnvelope run_spectrum(const ScenarioConfig &c) {
    if (!c.grid) {
        throw ValidationError("grid", "required for spectrum");
    }
    auto e = envelope(c, "spectrum");
    const auto points = c.grid->values();
    const auto budget = evaluate_budget(c, points);
    e.table.columns = frequency_columns();
    for (const char *n : {"total", "shot", "backaction", "thermal", "sql_ref"}) {
        e.table.columns.push_back({n, kPsdUnit});
    }
    std::size_t degenerate = 0;
    for (const auto &b : budget) {
        double ref = 0.0;
        if (rotating(c)) {
            ref = rotating_sql_reference(c.osc, b.omega);
        } else {
            const auto s = sql(c.osc, b.omega);
            ref = s.value;
            degenerate += s.warning ? 1 : 0;
        }
        e.table.rows.push_back({absolute_omega(c, b.omega), offset_in_gamma(c, b.omega), b.total, b.shot,
                                b.backaction, b.thermal, ref});
    }
    if (degenerate > 0) {
        e.warnings.push_back("SQL reference vanishes at " + std::to_string(degenerate) +
                             " grid point(s) (undamped resonance)");
    }
    e.summary["observable"] = primary_observable(c);
    e.summary["points"] = points.size();
    return e;
}

ResultEnvelope run_sweep(const ScenarioConfig &c) {
    if (!c.sweep) {
        throw ValidationError("sweep", "required for sweep");
    }
    const auto &s = *c.sweep;
    auto e = envelope(c, "sweep");
    e.table.columns = {{sweep_variable_name(s.variable), s.variable == SweepVariable::Psi ? "rad" : "normalized"},
                       {"omega_rad_s", "rad/s"}};
    for (const char *n : {"total", "shot", "backaction", "thermal"}) {
        e.table.columns.push_back({n, kPsdUnit});
    }
    const auto values = s.values();
    std::size_t argmin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig point = c;
        double at = s.omega_f0.value_or(0.0);
        switch (s.variable) {
        case SweepVariable::Kappa:
            point.kappa = values[i];
            break;
        case SweepVariable::Psi:
            point.readout = ReadoutSpec{AngleMode::Fixed, values[i], 0.0};
            break;
        case SweepVariable::OmegaF0:
            at = values[i];
            break;
        case SweepVariable::NThermal:
            point.osc.n_thermal = values[i];
            break;
        }
        const auto b = evaluate_budget(point, {at}).front();
        if (b.total < best) {
            best = b.total;
            argmin = i;
        }
        e.table.rows.push_back({values[i], absolute_omega(c, at), b.total, b.shot, b.backaction, b.thermal});
    }
    e.summary["variable"] = sweep_variable_name(s.variable);
    e.summary["argmin"] = argmin;
    e.summary["argmin_value"] = values[argmin];
    e.summary["minimum"] = best;
    e.summary["rows"] = values.size();
    e.summary["columns"] = 1;
    return e;
}

OracleConfig oracle_config(const ScenarioConfig &c) {
    if (!c.oracle) {
        throw ValidationError("oracle", "required for oracle runs");
    }
    const auto &o = *c.oracle;
    OracleConfig oc;
    oc.scheme = c.scheme;
    oc.osc = c.osc;
    oc.kappa = c.kappa;
    oc.psi = readout_radians(c);
    oc.dt = o.dt;
    oc.duration = o.duration;
    oc.burn_in = o.burn_in;
    oc.seed = c.seed;
    oc.trajectories = o.trajectories;
    oc.welch = WelchSettings{o.segment_length, o.overlap, o.window};
    oc.validate();
    return oc;
}

ResultEnvelope run_oracle(const ScenarioConfig &c) {
    const auto oc = oracle_config(c);
    const auto &o = *c.oracle;
    std::vector<std::string> known = recorded_channels(c.scheme);
    if (rotating(c)) {
        known.push_back(combined_channel(c.scheme));
    }
    std::vector<std::string> channels = o.channels.empty() ? known : o.channels;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (std::find(known.begin(), known.end(), channels[i]) == known.end()) {
            throw ValidationError("oracle.channels[" + std::to_string(i) + "]", "unknown channel '" + channels[i] + "'");
        }
    }
    auto e = envelope(c, "oracle");
    e.table.columns = {{"channel", ""}};
    for (auto col : frequency_columns()) {
        e.table.columns.push_back(col);
    }
    e.table.columns.push_back({"estimate", "normalized quadrature PSD"});
    e.table.columns.push_back({"std_error", "normalized quadrature PSD"});
    e.table.columns.push_back({"analytic", "normalized quadrature PSD"});

    const auto spectra = oracle_spectra(oc, channels);
    json per_channel = json::object();
    double worst = 0.0;
    for (const auto &name : channels) {
        const auto &est = spectra.at(name);
        const auto analytic = analytic_channel_psd(oc, name, est.omega);
        const auto agree = compare_in_band(est, analytic, o.band_max);
        worst = std::max(worst, agree.rms_relative);
        per_channel[name] = {{"rms_relative", agree.rms_relative},
                             {"bins", agree.bins},
                             {"segments", est.segments},
                             {"effective_segments", est.effective_segments}};
        for (std::size_t k = 0; k < est.omega.size(); ++k) {
            if (est.omega[k] <= 0.0 || est.omega[k] > o.band_max) {
                continue;
            }
            e.table.rows.push_back({name, absolute_omega(c, est.omega[k]), offset_in_gamma(c, est.omega[k]),
                                    est.psd[k], est.std_error[k], analytic[k]});
        }
    }
    e.summary["channels"] = per_channel;
    e.summary["max_rms_relative"] = worst;
    e.summary["band"] = {o.band_max * 0.1, o.band_max * 0.9};
    return e;
}

ResultEnvelope run_detect(const ScenarioConfig &c) {
    if (!c.detect) {
        throw ValidationError("detect", "required for detect");
    }
    const auto &d = *c.detect;
    DetectionConfig dc;
    dc.oracle.scheme = c.scheme;
    dc.oracle.osc = c.osc;
    dc.oracle.kappa = c.kappa;
    dc.oracle.psi = readout_radians(c);
    dc.oracle.dt = d.dt;
    dc.oracle.burn_in = d.burn_in;
    dc.oracle.seed = c.seed;
    dc.offset = d.offset;
    dc.tau = d.tau;
    dc.amplitudes = d.amplitudes;
    dc.trials = d.trials;
    dc.required_snr = d.snr;

    const double s_n = evaluate_budget(c, {d.offset}).front().total;
    const DetectionSpec spec{0.0, d.offset, d.tau};
    const double analytic = detection_threshold(spec, s_n, d.snr);
    const auto stats = detection_mc(dc);

    auto e = envelope(c, "detect");
    e.table.columns = {{"f_s0", "normalized force"},
                       {"mean_estimate", "normalized force"},
                       {"std_estimate", "normalized force"},
                       {"snr", ""},
                       {"analytic_snr", ""}};
    for (std::size_t i = 0; i < stats.amplitudes.size(); ++i) {
        const DetectionSpec at{stats.amplitudes[i], d.offset, d.tau};
        e.table.rows.push_back({stats.amplitudes[i], stats.mean_estimate[i], stats.std_estimate[i], stats.snr[i],
                                detection_snr(at, s_n)});
    }
    e.summary["s_n"] = s_n;
    e.summary["tau"] = d.tau;
    e.summary["delta_omega"] = spec.delta_omega();
    e.summary["required_snr"] = d.snr;
    e.summary["analytic_threshold"] = analytic;
    e.summary["noise_sigma"] = stats.noise_sigma;
    e.summary["bracketed"] = stats.bracketed;
    if (stats.threshold) {
        e.summary["empirical_threshold"] = *stats.threshold;
        e.summary["ratio"] = *stats.threshold / analytic;
    } else {
        e.summary["empirical_threshold"] = nullptr;
        e.summary["ratio"] = nullptr;
        e.warnings.push_back("threshold not bracketed");
    }
    return e;
}

} // namespace optonoise
