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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optonoise/mechanics.hpp"
#include "optonoise/schemes.hpp"
#include "optonoise/welch.hpp"

namespace optonoise {

struct WelchSettings {
    std::size_t segment_length = 4096;
    double overlap = 0.5;
    WindowKind window = WindowKind::Hann;
};

/// Classical force f_S0 cos(w t). For rotating-frame schemes `omega` is
/// the offset W from w_M; for the monochromatic scheme it is absolute.
struct ForceTone {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
};

struct OracleConfig {
    SchemeKind scheme = SchemeKind::DichromaticToy;
    Oscillator osc;
    double kappa = 0.0;
    double psi = 0.0; ///< monochromatic readout angle
    double dt = 0.01;
    double duration = 0.0; ///< recorded time per trajectory, after burn-in
    double burn_in = 0.0;
    std::uint64_t seed = 0;
    std::size_t trajectories = 1;
    WelchSettings welch;
    std::optional<ForceTone> force;
    bool optical_noise = true;
    bool thermal_noise = true;

    std::size_t samples() const;
    /// Fastest rate the integrator must resolve.
    double max_rate() const;
    /// Throws ValidationError (field path in the message) on bad settings.
    void validate() const;
};

/// Simultaneously recorded quadratures of one trajectory.
/// Samples before `start` are the burn-in; they are kept so that
/// post-processing filters see the same history as the mirror.
struct HomodyneRecord {
    double dt = 0.0;
    std::size_t start = 0;
    std::optional<ForceTone> force;
    std::map<std::string, std::vector<double>> channels;

    const std::vector<double> &channel(const std::string &name) const;
    /// The channel after burn-in.
    std::span<const double> analysis(const std::string &name) const;
    std::size_t samples() const;
};

/// Channel names a scheme records.
std::vector<std::string> recorded_channels(SchemeKind scheme);

/// One trajectory. Noise streams are drawn per (trajectory, channel) from
/// the master seed; the force adds deterministically on top.
HomodyneRecord simulate(const OracleConfig &config, std::size_t trajectory);

/// Appends the back-action-free combination ("B_beta" or "B"), with the
/// record weight multiplied by `weight_scale` (0 leaves the raw quadrature).
void postprocess_subtraction(HomodyneRecord &record, const OracleConfig &config, double weight_scale = 1.0);

/// Name of the combined channel for a scheme.
std::string combined_channel(SchemeKind scheme);

/// Welch estimates of the named channels, pooled over all trajectories.
/// Combined channels are formed on the fly.
std::map<std::string, PsdEstimate> oracle_spectra(const OracleConfig &config, const std::vector<std::string> &names);

/// Engine prediction (unreferred PSD of the observable) at the given
/// non-negative frequencies.
std::vector<double> analytic_channel_psd(const OracleConfig &config, const std::string &name,
                                         const std::vector<double> &omega);

struct Agreement {
    double rms_relative = 0.0;
    std::size_t bins = 0;
};

/// RMS of (estimate / prediction - 1) over the central `fraction` of
/// [0, band_max].
Agreement compare_in_band(const PsdEstimate &estimate, const std::vector<double> &prediction, double band_max,
                          double fraction = 0.8);

struct DetectionConfig {
    OracleConfig oracle;  ///< force is ignored; duration is replaced by tau
    double offset = 0.0;  ///< signal frequency (rotating offset or absolute)
    double tau = 1.0;
    std::vector<double> amplitudes;
    std::size_t trials = 300;
    double required_snr = 1.0;
};

struct DetectionStats {
    std::vector<double> amplitudes;
    std::vector<double> mean_estimate;
    std::vector<double> std_estimate;
    std::vector<double> snr;
    double noise_sigma = 0.0;
    std::optional<double> threshold; ///< amplitude where SNR crosses required_snr
    bool bracketed = false;
};

/// Monte Carlo of the matched-template amplitude estimate over a window tau.
DetectionStats detection_mc(const DetectionConfig &config);

} // namespace optonoise
