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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optonoise/frequency_grid.hpp"
#include "optonoise/linear_form.hpp"
#include "optonoise/mechanics.hpp"
#include "optonoise/schemes.hpp"

namespace optonoise {

struct SpectrumParams {
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double kappa = 0.0;
    double n_thermal = 0.0;
};

/// Force-referred single-sided spectrum with its decomposition.
struct SpectrumResult {
    std::shared_ptr<const FrequencyGrid> grid;
    std::string observable;
    std::vector<double> total;
    std::vector<double> shot;
    std::vector<double> backaction;
    std::vector<double> thermal;
    SpectrumParams params;
};

/// Coefficient of a real physical force in the observable. On an absolute
/// grid the force enters at +w and, conjugated, at -w; in the rotating
/// frame a force cos((w_M + W) t) appears only as the envelope at +W.
GridFunction physical_transfer(const LinearForm &form);

/// S_n = psd / |physical transfer|^2, split into shot, back-action and
/// thermal parts. Back action is the projection of the optical coefficients
/// onto the scheme's drive quadrature; shot noise is the remainder.
/// Throws SingularityError naming the first point with zero transfer.
SpectrumResult force_referred_psd(const SchemeInstance &scheme, const std::string &observable);

struct SqlReference {
    double value = 0.0;
    /// Set when the reference collapses to zero (undamped, on resonance).
    std::optional<std::string> warning;
};

/// Force SQL |Z(w)| / w_M; for gamma_M > 0 the thermal term is added.
SqlReference sql(const Oscillator &osc, double omega_f0);

/// |Z(w_M + W)| / w_M, the resonant-force reference for rotating-frame
/// schemes.
double rotating_sql_reference(const Oscillator &osc, double offset);

/// Phase-readout S_n(w) evaluated through the monochromatic builder.
double phase_readout_psd(const Oscillator &osc, double kappa, double omega);

struct KappaOptimum {
    double kappa_star = 0.0;
    std::vector<double> sweep_kappa;
    std::vector<double> sweep_psd;
    std::size_t argmin = 0;
    bool unimodal = false;
};

/// K* = |Z(w_f0)|, confirmed by a log-spaced sweep over [K*/10, 10 K*].
KappaOptimum optimize_kappa(const Oscillator &osc, double omega_f0, std::size_t sweep_points = 201);

/// Width |Z(w_f0)|^2 / (2 w_f0 K) of the band where variational readout
/// beats the SQL.
double sub_sql_bandwidth(const Oscillator &osc, double kappa, double omega_f0);

struct DetectionSpec {
    double f_s0 = 0.0;
    double omega_f0 = 0.0;
    double tau = 1.0;

    double delta_omega() const;
};

/// Smallest detectable amplitude sqrt(S_n dw / 2 pi), scaled by the
/// required SNR (1 by default).
double detection_threshold(const DetectionSpec &spec, double s_n, double required_snr = 1.0);

double detection_snr(const DetectionSpec &spec, double s_n);

/// Back-action-free monochromatic spectrum at w_f0 for the optimal angle.
/// Throws NoCancellation where the angle condition has no solution.
double variational_psd(const Oscillator &osc, double kappa, double omega_f0);

} // namespace optonoise
