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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optonoise/mechanics.hpp"
#include "optonoise/oracle.hpp"
#include "optonoise/schemes.hpp"

namespace optonoise {

enum class Units { Normalized, SI };

/// Laboratory inputs. Frequencies in rad/s.
struct SiInput {
    double mass_kg = 0.0;
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double temperature_k = 0.0;
    bool frequency_dependent_occupation = false;
    double wavelength_m = 0.0;
    double power_w = 0.0;
    bool operator==(const SiInput &) const = default;
};

/// Evaluation points. For rotating-frame schemes these are offsets from
/// w_M; for the monochromatic scheme absolute frequencies.
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;
    bool operator==(const GridSpec &) const = default;
    std::vector<double> values() const;
};

enum class AngleMode { Fixed, Phase, Optimal, Pointwise };

struct ReadoutSpec {
    AngleMode mode = AngleMode::Phase;
    double psi = 0.0;      ///< used when mode == Fixed
    double omega_f0 = 0.0; ///< used when mode == Optimal
    bool operator==(const ReadoutSpec &) const = default;
};

enum class SweepVariable { Kappa, Psi, OmegaF0, NThermal };

struct SweepSpec {
    SweepVariable variable = SweepVariable::Kappa;
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;
    bool log_spaced = false;
    std::optional<double> omega_f0;
    bool operator==(const SweepSpec &) const = default;
    std::vector<double> values() const;
};

struct OracleSpec {
    double dt = 0.0;
    double duration = 0.0;
    double burn_in = 0.0;
    std::size_t trajectories = 0;
    std::size_t segment_length = 4096;
    double overlap = 0.5;
    WindowKind window = WindowKind::Hann;
    double band_max = 0.0;
    std::vector<std::string> channels; ///< empty: every recorded channel plus the combination
    bool operator==(const OracleSpec &) const = default;
};

struct DetectSpec {
    double offset = 0.0;
    double tau = 0.0;
    std::vector<double> amplitudes;
    std::size_t trials = 0;
    double dt = 0.0;
    double burn_in = 0.0;
    double snr = 1.0;
    bool operator==(const DetectSpec &) const = default;
};

struct OutputSpec {
    std::string csv;
    std::string json;
    bool operator==(const OutputSpec &) const = default;
};

struct ScenarioConfig {
    SchemeKind scheme = SchemeKind::Monochromatic;
    Units units = Units::Normalized;
    Oscillator osc;                ///< derived from `si` when units == SI
    double kappa = 0.0;            ///< derived from `si` when units == SI
    std::optional<SiInput> si;
    std::optional<std::string> observable;
    std::optional<ReadoutSpec> readout;
    std::optional<GridSpec> grid;
    std::optional<SweepSpec> sweep;
    std::optional<OracleSpec> oracle;
    std::optional<DetectSpec> detect;
    OutputSpec output;
    std::uint64_t seed = 0;

    bool operator==(const ScenarioConfig &other) const;
};

std::string scheme_name(SchemeKind kind);
SchemeKind parse_scheme(const std::string &name, const std::string &path);
std::string sweep_variable_name(SweepVariable v);

/// Strict parse: unknown keys, missing required fields and values that
/// break physical invariants raise ValidationError with the field path.
ScenarioConfig parse_config(const nlohmann::json &doc);
ScenarioConfig parse_config_text(const std::string &text);
ScenarioConfig load_config(const std::string &path);

/// Canonical JSON form; parse_config(emit_config(c)) == c.
nlohmann::json emit_config(const ScenarioConfig &config);

/// Readout angle for the monochromatic scheme.
AngleSpec readout_angle(const ScenarioConfig &config);
/// Observable reported by spectrum, sweep and detect.
std::string primary_observable(const ScenarioConfig &config);

} // namespace optonoise
