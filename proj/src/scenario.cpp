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

#include "optonoise/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "optonoise/errors.hpp"

namespace optonoise {

using nlohmann::json;

namespace {

std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

// Field reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Section {
  public:
    Section(const json &node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ValidationError(path_, "expected an object");
        }
    }

    bool has(const std::string &key) const { return node_.contains(key); }
    std::string path(const std::string &key) const { return join(path_, key); }

    const json &field(const std::string &key) {
        if (!node_.contains(key)) {
            throw ValidationError(path(key), "required field is missing");
        }
        seen_.insert(key);
        return node_.at(key);
    }

    double number(const std::string &key) {
        const json &v = field(key);
        if (!v.is_number()) {
            throw ValidationError(path(key), "expected a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            throw ValidationError(path(key), "must be finite");
        }
        return x;
    }

    std::optional<double> opt_number(const std::string &key) {
        return has(key) ? std::optional<double>(number(key)) : std::nullopt;
    }

    std::uint64_t count(const std::string &key) {
        const json &v = field(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            throw ValidationError(path(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string &key) {
        const json &v = field(key);
        if (!v.is_string()) {
            throw ValidationError(path(key), "expected a string");
        }
        return v.get<std::string>();
    }

    bool flag(const std::string &key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json &v = field(key);
        if (!v.is_boolean()) {
            throw ValidationError(path(key), "expected true or false");
        }
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string &key) {
        const json &v = field(key);
        if (!v.is_array()) {
            throw ValidationError(path(key), "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                throw ValidationError(path(key) + "[" + std::to_string(i) + "]", "expected a finite number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string &key) {
        const json &v = field(key);
        if (!v.is_array()) {
            throw ValidationError(path(key), "expected an array of strings");
        }
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) {
                throw ValidationError(path(key) + "[" + std::to_string(i) + "]", "expected a string");
            }
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    Section sub(const std::string &key) { return Section(field(key), path(key)); }

    void finish() const {
        for (const auto &item : node_.items()) {
            if (!seen_.contains(item.key())) {
                throw ValidationError(path(item.key()), "unknown key");
            }
        }
    }

  private:
    const json &node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string &path, const std::string &message) {
    if (!ok) {
        throw ValidationError(path, message);
    }
}

std::string angle_mode_name(AngleMode m) {
    switch (m) {
    case AngleMode::Fixed:
        return "fixed";
    case AngleMode::Phase:
        return "phase";
    case AngleMode::Optimal:
        return "optimal";
    case AngleMode::Pointwise:
        return "pointwise";
    }
    return "phase";
}

std::vector<double> spaced(double lo, double hi, std::size_t n, bool log) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    }
    if (n > 1) {
        out.back() = hi;
    }
    return out;
}

void check_bounds(double lo, double hi, std::size_t n, const std::string &path) {
    require(n >= 1, join(path, "points"), "empty range: need at least one point");
    require(lo <= hi, join(path, "max"), "must not be below min");
    if (n == 1) {
        require(lo == hi, join(path, "max"), "a single point needs min == max");
    } else {
        require(lo < hi, join(path, "max"), "degenerate range: min == max with several points");
    }
}

Oscillator parse_normalized_oscillator(Section s) {
    Oscillator o;
    o.omega_m = s.number("omega_m");
    o.gamma_m = s.number("gamma_m");
    o.n_thermal = s.number("n_thermal");
    o.bath_frequency = s.opt_number("bath_frequency");
    s.finish();
    try {
        o.validate();
    } catch (const DomainError &e) {
        throw ValidationError("oscillator", e.what());
    }
    return o;
}

ProbeMode probe_mode(SchemeKind k) {
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

} // namespace

std::vector<double> GridSpec::values() const { return spaced(min, max, points, false); }
std::vector<double> SweepSpec::values() const { return spaced(min, max, points, log_spaced); }

bool ScenarioConfig::operator==(const ScenarioConfig &o) const {
    return scheme == o.scheme && units == o.units && osc.omega_m == o.osc.omega_m && osc.gamma_m == o.osc.gamma_m &&
           osc.n_thermal == o.osc.n_thermal && osc.bath_frequency == o.osc.bath_frequency && kappa == o.kappa &&
           si == o.si && observable == o.observable && readout == o.readout && grid == o.grid && sweep == o.sweep &&
           oracle == o.oracle && detect == o.detect && output == o.output && seed == o.seed;
}

std::string scheme_name(SchemeKind kind) {
    switch (kind) {
    case SchemeKind::Monochromatic:
        return "monochromatic";
    case SchemeKind::DichromaticToy:
        return "toy";
    case SchemeKind::FourProbe:
        return "four_probe";
    }
    return "monochromatic";
}

SchemeKind parse_scheme(const std::string &name, const std::string &path) {
    if (name == "monochromatic") {
        return SchemeKind::Monochromatic;
    }
    if (name == "toy") {
        return SchemeKind::DichromaticToy;
    }
    if (name == "four_probe") {
        return SchemeKind::FourProbe;
    }
    throw ValidationError(path, "unknown scheme '" + name + "' (monochromatic | toy | four_probe)");
}

std::string sweep_variable_name(SweepVariable v) {
    switch (v) {
    case SweepVariable::Kappa:
        return "kappa";
    case SweepVariable::Psi:
        return "psi";
    case SweepVariable::OmegaF0:
        return "omega_f0";
    case SweepVariable::NThermal:
        return "n_thermal";
    }
    return "kappa";
}

ScenarioConfig parse_config(const json &doc) {
    Section root(doc, "");
    ScenarioConfig c;
    c.scheme = parse_scheme(root.text("scheme"), "scheme");
    const std::string units = root.has("units") ? root.text("units") : "normalized";
    if (units == "normalized") {
        c.units = Units::Normalized;
        c.osc = parse_normalized_oscillator(root.sub("oscillator"));
        auto probe = root.sub("probe");
        c.kappa = probe.number("kappa");
        probe.finish();
        require(c.kappa >= 0.0, "probe.kappa", "must be >= 0");
    } else if (units == "si") {
        c.units = Units::SI;
        SiInput lab;
        auto osc = root.sub("oscillator");
        lab.mass_kg = osc.number("mass_kg");
        lab.omega_m = osc.number("omega_m");
        lab.gamma_m = osc.number("gamma_m");
        lab.temperature_k = osc.number("temperature_k");
        lab.frequency_dependent_occupation = osc.flag("frequency_dependent_occupation", false);
        osc.finish();
        auto probe = root.sub("probe");
        lab.wavelength_m = probe.number("wavelength_m");
        lab.power_w = probe.number("power_w");
        probe.finish();
        require(lab.wavelength_m > 0.0, "probe.wavelength_m", "must be positive");
        require(lab.power_w >= 0.0, "probe.power_w", "must be >= 0");
        const PhysicalOscillator phys{lab.mass_kg, lab.omega_m, lab.gamma_m, lab.temperature_k};
        try {
            phys.validate();
            const auto laser = PhysicalProbe::from_power(2.0 * std::numbers::pi * si::kSpeedOfLight / lab.wavelength_m,
                                                         lab.power_w, probe_mode(c.scheme));
            c.osc = phys.normalized(lab.frequency_dependent_occupation);
            c.kappa = kappa(phys, laser);
        } catch (const DomainError &e) {
            throw ValidationError("oscillator", e.what());
        }
        c.si = lab;
    } else {
        throw ValidationError("units", "unknown units '" + units + "' (normalized | si)");
    }

    if (root.has("observable")) {
        c.observable = root.text("observable");
    }

    if (root.has("readout")) {
        require(c.scheme == SchemeKind::Monochromatic, "readout", "only the monochromatic scheme has a readout angle");
        auto r = root.sub("readout");
        ReadoutSpec spec;
        const std::string mode = r.text("angle");
        if (mode == "phase") {
            spec.mode = AngleMode::Phase;
        } else if (mode == "fixed") {
            spec.mode = AngleMode::Fixed;
            spec.psi = r.number("psi");
        } else if (mode == "optimal") {
            spec.mode = AngleMode::Optimal;
            spec.omega_f0 = r.number("omega_f0");
            require(spec.omega_f0 > 0.0, "readout.omega_f0", "must be positive");
        } else if (mode == "pointwise") {
            spec.mode = AngleMode::Pointwise;
        } else {
            throw ValidationError("readout.angle", "unknown mode '" + mode + "' (phase | fixed | optimal | pointwise)");
        }
        r.finish();
        c.readout = spec;
    } else {
        require(c.scheme != SchemeKind::Monochromatic, "readout", "required for the monochromatic scheme");
    }

    if (root.has("grid")) {
        auto g = root.sub("grid");
        GridSpec spec;
        spec.min = g.number("min");
        spec.max = g.number("max");
        spec.points = g.count("points");
        g.finish();
        check_bounds(spec.min, spec.max, spec.points, "grid");
        if (c.scheme == SchemeKind::Monochromatic) {
            require(spec.min >= 0.0, "grid.min", "monochromatic frequencies must be >= 0");
        }
        c.grid = spec;
    }

    if (root.has("sweep")) {
        auto s = root.sub("sweep");
        SweepSpec spec;
        const std::string var = s.text("variable");
        if (var == "kappa") {
            spec.variable = SweepVariable::Kappa;
        } else if (var == "psi") {
            spec.variable = SweepVariable::Psi;
        } else if (var == "omega_f0") {
            spec.variable = SweepVariable::OmegaF0;
        } else if (var == "n_thermal") {
            spec.variable = SweepVariable::NThermal;
        } else {
            throw ValidationError("sweep.variable", "unknown variable '" + var + "' (kappa | psi | omega_f0 | n_thermal)");
        }
        spec.min = s.number("min");
        spec.max = s.number("max");
        spec.points = s.count("points");
        const std::string spacing = s.has("spacing") ? s.text("spacing") : "linear";
        require(spacing == "linear" || spacing == "log", "sweep.spacing", "expected linear or log");
        spec.log_spaced = spacing == "log";
        spec.omega_f0 = s.opt_number("omega_f0");
        s.finish();
        check_bounds(spec.min, spec.max, spec.points, "sweep");
        if (spec.log_spaced) {
            require(spec.min > 0.0, "sweep.min", "log spacing needs a positive lower bound");
        }
        if (spec.variable == SweepVariable::OmegaF0) {
            require(!spec.omega_f0, "sweep.omega_f0", "not allowed when sweeping omega_f0");
        } else {
            require(spec.omega_f0.has_value(), "sweep.omega_f0", "required field is missing");
        }
        if (spec.variable == SweepVariable::Psi) {
            require(c.scheme == SchemeKind::Monochromatic, "sweep.variable", "psi sweeps need the monochromatic scheme");
        }
        if (spec.variable == SweepVariable::Kappa || spec.variable == SweepVariable::NThermal) {
            require(spec.min >= 0.0, "sweep.min", "must be >= 0");
        }
        c.sweep = spec;
    }

    if (root.has("oracle")) {
        auto o = root.sub("oracle");
        OracleSpec spec;
        spec.dt = o.number("dt");
        spec.duration = o.number("duration");
        spec.burn_in = o.number("burn_in");
        spec.trajectories = o.count("trajectories");
        spec.band_max = o.number("band_max");
        if (o.has("welch")) {
            auto w = o.sub("welch");
            if (w.has("segment_length")) {
                spec.segment_length = w.count("segment_length");
            }
            if (w.has("overlap")) {
                spec.overlap = w.number("overlap");
            }
            if (w.has("window")) {
                spec.window = parse_window(w.text("window"));
            }
            w.finish();
        }
        if (o.has("channels")) {
            spec.channels = o.strings("channels");
        }
        o.finish();
        require(spec.band_max > 0.0, "oracle.band_max", "must be positive");
        c.oracle = spec;
    }

    if (root.has("detect")) {
        auto d = root.sub("detect");
        DetectSpec spec;
        spec.offset = d.number("offset");
        spec.tau = d.number("tau");
        spec.amplitudes = d.numbers("amplitudes");
        spec.trials = d.count("trials");
        spec.dt = d.number("dt");
        spec.burn_in = d.number("burn_in");
        if (d.has("snr")) {
            spec.snr = d.number("snr");
        }
        d.finish();
        require(spec.tau > 0.0, "detect.tau", "must be positive");
        require(spec.trials >= 2, "detect.trials", "need at least 2 trials");
        require(spec.dt > 0.0, "detect.dt", "must be positive");
        require(spec.burn_in >= 0.0, "detect.burn_in", "must be >= 0");
        require(spec.snr > 0.0, "detect.snr", "must be positive");
        require(!spec.amplitudes.empty(), "detect.amplitudes", "need at least one amplitude");
        for (std::size_t i = 1; i < spec.amplitudes.size(); ++i) {
            require(spec.amplitudes[i] > spec.amplitudes[i - 1], "detect.amplitudes", "must be strictly increasing");
        }
        c.detect = spec;
    }

    if (root.has("output")) {
        auto o = root.sub("output");
        if (o.has("csv")) {
            c.output.csv = o.text("csv");
        }
        if (o.has("json")) {
            c.output.json = o.text("json");
        }
        o.finish();
    }
    if (root.has("seed")) {
        c.seed = root.count("seed");
    }
    root.finish();
    return c;
}

ScenarioConfig parse_config_text(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

ScenarioConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

json emit_config(const ScenarioConfig &c) {
    json j;
    j["scheme"] = scheme_name(c.scheme);
    if (c.units == Units::SI) {
        const SiInput &si = *c.si;
        j["units"] = "si";
        j["oscillator"] = {{"mass_kg", si.mass_kg},
                           {"omega_m", si.omega_m},
                           {"gamma_m", si.gamma_m},
                           {"temperature_k", si.temperature_k},
                           {"frequency_dependent_occupation", si.frequency_dependent_occupation}};
        j["probe"] = {{"wavelength_m", si.wavelength_m}, {"power_w", si.power_w}};
    } else {
        j["units"] = "normalized";
        j["oscillator"] = {{"omega_m", c.osc.omega_m}, {"gamma_m", c.osc.gamma_m}, {"n_thermal", c.osc.n_thermal}};
        if (c.osc.bath_frequency) {
            j["oscillator"]["bath_frequency"] = *c.osc.bath_frequency;
        }
        j["probe"] = {{"kappa", c.kappa}};
    }
    if (c.observable) {
        j["observable"] = *c.observable;
    }
    if (c.readout) {
        json r{{"angle", angle_mode_name(c.readout->mode)}};
        if (c.readout->mode == AngleMode::Fixed) {
            r["psi"] = c.readout->psi;
        }
        if (c.readout->mode == AngleMode::Optimal) {
            r["omega_f0"] = c.readout->omega_f0;
        }
        j["readout"] = r;
    }
    if (c.grid) {
        j["grid"] = {{"min", c.grid->min}, {"max", c.grid->max}, {"points", c.grid->points}};
    }
    if (c.sweep) {
        json s{{"variable", sweep_variable_name(c.sweep->variable)},
               {"min", c.sweep->min},
               {"max", c.sweep->max},
               {"points", c.sweep->points},
               {"spacing", c.sweep->log_spaced ? "log" : "linear"}};
        if (c.sweep->omega_f0) {
            s["omega_f0"] = *c.sweep->omega_f0;
        }
        j["sweep"] = s;
    }
    if (c.oracle) {
        const auto &o = *c.oracle;
        json s{{"dt", o.dt},
               {"duration", o.duration},
               {"burn_in", o.burn_in},
               {"trajectories", o.trajectories},
               {"band_max", o.band_max},
               {"welch",
                {{"segment_length", o.segment_length}, {"overlap", o.overlap}, {"window", window_name(o.window)}}}};
        if (!o.channels.empty()) {
            s["channels"] = o.channels;
        }
        j["oracle"] = s;
    }
    if (c.detect) {
        const auto &d = *c.detect;
        j["detect"] = {{"offset", d.offset}, {"tau", d.tau},     {"amplitudes", d.amplitudes}, {"trials", d.trials},
                       {"dt", d.dt},         {"burn_in", d.burn_in}, {"snr", d.snr}};
    }
    json out = json::object();
    if (!c.output.csv.empty()) {
        out["csv"] = c.output.csv;
    }
    if (!c.output.json.empty()) {
        out["json"] = c.output.json;
    }
    if (!out.empty()) {
        j["output"] = out;
    }
    j["seed"] = c.seed;
    return j;
}

AngleSpec readout_angle(const ScenarioConfig &c) {
    if (c.scheme != SchemeKind::Monochromatic || !c.readout) {
        return HomodyneAngle::from_cotangent(0.0);
    }
    switch (c.readout->mode) {
    case AngleMode::Fixed:
        return HomodyneAngle::radians(c.readout->psi);
    case AngleMode::Phase:
        return HomodyneAngle::from_cotangent(0.0);
    case AngleMode::Optimal:
        return optimal_homodyne_angle(c.osc, c.kappa, c.readout->omega_f0);
    case AngleMode::Pointwise:
        return pointwise_optimal_angle(c.osc, c.kappa);
    }
    return HomodyneAngle::from_cotangent(0.0);
}

std::string primary_observable(const ScenarioConfig &c) {
    if (c.observable) {
        return *c.observable;
    }
    switch (c.scheme) {
    case SchemeKind::Monochromatic:
        return "b_psi";
    case SchemeKind::DichromaticToy:
        return "B_beta";
    case SchemeKind::FourProbe:
        return "B";
    }
    return "b_psi";
}

} // namespace optonoise
