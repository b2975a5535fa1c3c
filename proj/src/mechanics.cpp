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

#include "optonoise/mechanics.hpp"

#include <cmath>

#include "optonoise/errors.hpp"

namespace optonoise {

void Oscillator::validate() const {
    if (!(omega_m > 0.0) || !std::isfinite(omega_m)) {
        throw DomainError("omega_m must be positive and finite");
    }
    if (!(gamma_m >= 0.0) || !std::isfinite(gamma_m)) {
        throw DomainError("gamma_m must be non-negative and finite");
    }
    if (!(n_thermal >= 0.0) || !std::isfinite(n_thermal)) {
        throw DomainError("n_thermal must be non-negative and finite");
    }
    if (bath_frequency && !(*bath_frequency >= 0.0)) {
        throw DomainError("bath_frequency must be non-negative");
    }
}

void PhysicalOscillator::validate() const {
    if (!(mass_kg > 0.0)) {
        throw DomainError("mass must be positive");
    }
    if (!(omega_m > 0.0)) {
        throw DomainError("omega_m must be positive");
    }
    if (!(gamma_m >= 0.0)) {
        throw DomainError("gamma_m must be non-negative");
    }
    if (!(temperature_k >= 0.0)) {
        throw DomainError("temperature must be non-negative");
    }
}

double PhysicalOscillator::x0() const {
    validate();
    return std::sqrt(si::kHbar / (2.0 * mass_kg * omega_m));
}

Oscillator PhysicalOscillator::normalized(bool frequency_dependent_occupation) const {
    validate();
    Oscillator osc;
    osc.omega_m = omega_m;
    osc.gamma_m = gamma_m;
    osc.n_thermal = thermal_occupation(*this, omega_m);
    if (frequency_dependent_occupation) {
        osc.bath_frequency = si::kBoltzmann * temperature_k / si::kHbar;
    }
    return osc;
}

void PhysicalProbe::validate() const {
    if (!(omega_0 > 0.0)) {
        throw DomainError("carrier frequency must be positive");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw DomainError("probe amplitude must be real and non-negative");
    }
}

double PhysicalProbe::wave_number() const { return omega_0 / si::kSpeedOfLight; }

double PhysicalProbe::power() const { return si::kHbar * omega_0 * amplitude * amplitude; }

double PhysicalProbe::carrier_plus(const PhysicalOscillator &osc) const { return omega_0 + 0.5 * osc.omega_m; }

double PhysicalProbe::carrier_minus(const PhysicalOscillator &osc) const { return omega_0 - 0.5 * osc.omega_m; }

PhysicalProbe PhysicalProbe::from_power(double omega_0, double power_w, ProbeMode mode) {
    if (!(power_w >= 0.0)) {
        throw DomainError("probe power must be non-negative");
    }
    PhysicalProbe probe{omega_0, 0.0, mode};
    probe.validate();
    probe.amplitude = std::sqrt(power_w / (si::kHbar * omega_0));
    return probe;
}

std::complex<double> susceptibility_Z(const Oscillator &osc, double omega) {
    return {osc.omega_m * osc.omega_m - omega * omega, -2.0 * osc.gamma_m * omega};
}

std::complex<double> rotating_susceptibility(const Oscillator &osc, double offset) {
    if (osc.gamma_m == 0.0 && offset == 0.0) {
        throw SingularityError("undamped rotating-frame pole", offset);
    }
    return 1.0 / std::complex<double>(osc.gamma_m, -offset);
}

double thermal_occupation_normalized(double bath_frequency, double omega) {
    if (!(omega > 0.0)) {
        throw DomainError("thermal occupation needs a positive frequency");
    }
    if (bath_frequency <= 0.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(omega / bath_frequency);
}

double thermal_occupation(const PhysicalOscillator &osc, double omega) {
    return thermal_occupation_normalized(si::kBoltzmann * osc.temperature_k / si::kHbar, omega);
}

double occupation_at(const Oscillator &osc, double omega) {
    if (!osc.bath_frequency) {
        return osc.n_thermal;
    }
    if (omega <= 0.0) {
        return 0.0;
    }
    return thermal_occupation_normalized(*osc.bath_frequency, omega);
}

double static_displacement(const PhysicalOscillator &osc, const PhysicalProbe &probe) {
    osc.validate();
    probe.validate();
    if (probe.mode != ProbeMode::Monochromatic) {
        throw Unsupported("static displacement is defined for the monochromatic probe");
    }
    return 2.0 * probe.power() / (osc.mass_kg * si::kSpeedOfLight * osc.omega_m * osc.omega_m);
}

double kappa(const PhysicalOscillator &osc, const PhysicalProbe &probe) {
    osc.validate();
    probe.validate();
    const double k = probe.wave_number();
    return 8.0 * si::kHbar * k * k * probe.amplitude * probe.amplitude / osc.mass_kg;
}

double amplitude_for_kappa(const PhysicalOscillator &osc, double omega_0, double kappa_value) {
    osc.validate();
    if (!(kappa_value >= 0.0)) {
        throw DomainError("kappa must be non-negative");
    }
    const double k = omega_0 / si::kSpeedOfLight;
    return std::sqrt(kappa_value * osc.mass_kg / (8.0 * si::kHbar * k * k));
}

double thermal_force_psd(const Oscillator &osc, double omega) {
    const double w = std::abs(omega);
    const double n = occupation_at(osc, w);
    return 2.0 * osc.gamma_m * w * (2.0 * n + 1.0) / osc.omega_m;
}

} // namespace optonoise
