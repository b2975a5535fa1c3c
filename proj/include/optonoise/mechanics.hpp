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

#include <complex>
#include <optional>

namespace optonoise {

namespace si {
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;   // J / K
inline constexpr double kSpeedOfLight = 299792458.0; // m / s
} // namespace si

/// Mechanical oscillator in the normalized system the engine computes in.
///
/// `n_thermal` is the bath occupation held constant across the band (by
/// default evaluated at w_M). Setting `bath_frequency` = k_B T / hbar opts
/// into a frequency-dependent occupation n(w).
struct Oscillator {
    double omega_m = 1.0;
    double gamma_m = 0.0;
    double n_thermal = 0.0;
    std::optional<double> bath_frequency;

    /// Throws DomainError when w_M <= 0, gamma_M < 0 or n_T < 0.
    void validate() const;
};

/// SI description of the mirror: mass, resonance, damping, temperature.
struct PhysicalOscillator {
    double mass_kg = 1.0;
    double omega_m = 1.0;
    double gamma_m = 0.0;
    double temperature_k = 0.0;

    void validate() const;

    /// Zero-point length sqrt(hbar / (2 m w_M)); recomputed on every call.
    double x0() const;

    /// Normalized view with n_T evaluated at w_M.
    Oscillator normalized(bool frequency_dependent_occupation = false) const;
};

enum class ProbeMode { Monochromatic, DichromaticToy, FourProbe };

/// Optical probe with real amplitude A (sqrt(photons / s)) per harmonic.
struct PhysicalProbe {
    double omega_0 = 1.0;
    double amplitude = 0.0;
    ProbeMode mode = ProbeMode::Monochromatic;

    void validate() const;

    double wave_number() const;
    double power() const; ///< hbar w_0 A^2 per harmonic
    double carrier_plus(const PhysicalOscillator &osc) const;
    double carrier_minus(const PhysicalOscillator &osc) const;

    static PhysicalProbe from_power(double omega_0, double power_w, ProbeMode mode);
};

/// Z(w) = w_M^2 - w^2 - 2 i gamma_M w.
std::complex<double> susceptibility_Z(const Oscillator &osc, double omega);

/// 1 / (gamma_M - i W). Throws SingularityError at the undamped pole.
std::complex<double> rotating_susceptibility(const Oscillator &osc, double offset);

/// Bose occupation 1 / (exp(hbar w / k_B T) - 1); 0 at T = 0.
double thermal_occupation(const PhysicalOscillator &osc, double omega);

/// Same, with the temperature already expressed as k_B T / hbar.
double thermal_occupation_normalized(double bath_frequency, double omega);

/// Occupation the engine uses at `omega` (constant or frequency-dependent).
double occupation_at(const Oscillator &osc, double omega);

/// Radiation-pressure shift X = 2 P_0 / (m c w_M^2).
double static_displacement(const PhysicalOscillator &osc, const PhysicalProbe &probe);

/// Probe strength K = 8 hbar k^2 A^2 / m.
double kappa(const PhysicalOscillator &osc, const PhysicalProbe &probe);

/// Inverse of kappa(): the amplitude that yields `kappa_value`.
double amplitude_for_kappa(const PhysicalOscillator &osc, double omega_0, double kappa_value);

/// Single-sided density of the normalized fluctuation force at `omega`:
/// 2 gamma_M w (2 n_T + 1) / w_M.
double thermal_force_psd(const Oscillator &osc, double omega);

} // namespace optonoise
