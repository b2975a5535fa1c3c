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

#include "optonoise/noise_budget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "optonoise/convention.hpp"
#include "optonoise/errors.hpp"

namespace optonoise {

GridFunction physical_transfer(const LinearForm &form) {
    GridFunction t(form.points());
    const bool absolute = form.grid().band() == Band::Absolute;
    for (std::size_t j = 0; j < form.points(); ++j) {
        t[j] = absolute ? narrow(form.wide_signal_u(j) + form.wide_signal_v(j)) : form.signal_u(j);
    }
    return t;
}

SpectrumResult force_referred_psd(const SchemeInstance &scheme, const std::string &observable) {
    const LinearForm &f = scheme.observable(observable);
    if (!f.is_quadrature()) {
        throw ContractError("force referral needs a quadrature observable: " + observable);
    }
    if (!scheme.drive || !scheme.drive->same_structure(f)) {
        throw StructuralError("scheme has no drive quadrature matching " + observable);
    }
    const LinearForm &drive = *scheme.drive;
    const std::size_t n = f.points();
    const auto &channels = f.channels();
    const auto transfer = physical_transfer(f);

    SpectrumResult r;
    r.grid = f.grid_ptr();
    r.observable = observable;
    r.params = {scheme.osc.omega_m, scheme.osc.gamma_m, scheme.probe.kappa, scheme.osc.n_thermal};
    r.total.resize(n);
    r.shot.resize(n);
    r.backaction.resize(n);
    r.thermal = psd_of_role(f, ChannelRole::Bath);

    for (std::size_t j = 0; j < n; ++j) {
        const double gain = std::norm(transfer[j]);
        if (!(gain > 0.0)) {
            throw SingularityError("zero signal transfer for " + observable, f.grid()[j]);
        }
        Wide overlap{};
        Wide drive_norm{};
        for (std::size_t i = 0; i < channels.size(); ++i) {
            if (channels[i].role != ChannelRole::Optical) {
                continue;
            }
            overlap += f.wide_u(i, j) * conj(drive.wide_u(i, j)) + f.wide_v(i, j) * conj(drive.wide_v(i, j));
            drive_norm += norm(drive.wide_u(i, j)) + norm(drive.wide_v(i, j));
        }
        const Wide p = real(drive_norm) > 0 ? Wide(overlap / drive_norm) : Wide{};
        double shot = 0.0;
        double back = 0.0;
        for (std::size_t i = 0; i < channels.size(); ++i) {
            if (channels[i].role != ChannelRole::Optical) {
                continue;
            }
            const double w = channels[i].weight(j);
            const Wide pu = p * drive.wide_u(i, j);
            const Wide pv = p * drive.wide_v(i, j);
            back += (std::norm(narrow(pu)) + std::norm(narrow(pv))) * w;
            shot += (std::norm(narrow(f.wide_u(i, j) - pu)) + std::norm(narrow(f.wide_v(i, j) - pv))) * w;
        }
        r.shot[j] = convention::kSingleSidedFactor * shot / gain;
        r.backaction[j] = convention::kSingleSidedFactor * back / gain;
        r.thermal[j] /= gain;
        r.total[j] = r.shot[j] + r.backaction[j] + r.thermal[j];
    }
    return r;
}

SqlReference sql(const Oscillator &osc, double omega_f0) {
    osc.validate();
    if (!(omega_f0 >= 0.0)) {
        throw DomainError("sql: signal frequency must be non-negative");
    }
    SqlReference ref;
    if (osc.gamma_m == 0.0) {
        ref.value = std::abs(osc.omega_m * osc.omega_m - omega_f0 * omega_f0) / osc.omega_m;
    } else {
        ref.value = std::abs(susceptibility_Z(osc, omega_f0)) / osc.omega_m + thermal_force_psd(osc, omega_f0);
    }
    if (ref.value == 0.0) {
        ref.warning = "force SQL vanishes: undamped oscillator driven exactly on resonance";
    }
    return ref;
}

double rotating_sql_reference(const Oscillator &osc, double offset) {
    return std::abs(susceptibility_Z(osc, osc.omega_m + offset)) / osc.omega_m;
}

double phase_readout_psd(const Oscillator &osc, double kappa, double omega) {
    const std::vector<double> point{omega};
    const auto grid = FrequencyGrid::mirrored(point, Band::Absolute);
    const auto scheme = build_monochromatic(osc, Probe{ProbeMode::Monochromatic, kappa}, grid,
                                            HomodyneAngle::from_cotangent(0.0));
    const auto r = force_referred_psd(scheme, "b_phi");
    return r.total[*grid.find(omega)];
}

KappaOptimum optimize_kappa(const Oscillator &osc, double omega_f0, std::size_t sweep_points) {
    osc.validate();
    const double z = std::abs(susceptibility_Z(osc, omega_f0));
    if (!(z > 0.0)) {
        throw DomainError("optimize_kappa: |Z| = 0, the optimum is degenerate");
    }
    if (sweep_points < 3) {
        throw DomainError("optimize_kappa: sweep needs at least 3 points");
    }
    KappaOptimum opt;
    opt.kappa_star = z;
    const double lo = std::log(z / 10.0);
    const double hi = std::log(z * 10.0);
    for (std::size_t i = 0; i < sweep_points; ++i) {
        const double k = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(sweep_points - 1));
        opt.sweep_kappa.push_back(k);
        opt.sweep_psd.push_back(phase_readout_psd(osc, k, omega_f0));
    }
    opt.argmin = static_cast<std::size_t>(
        std::distance(opt.sweep_psd.begin(), std::min_element(opt.sweep_psd.begin(), opt.sweep_psd.end())));
    opt.unimodal = true;
    for (std::size_t i = 1; i < sweep_points; ++i) {
        const bool falling = opt.sweep_psd[i] <= opt.sweep_psd[i - 1];
        if ((i <= opt.argmin) != falling) {
            opt.unimodal = false;
        }
    }
    return opt;
}

double sub_sql_bandwidth(const Oscillator &osc, double kappa, double omega_f0) {
    if (!(omega_f0 > 0.0) || !(kappa > 0.0)) {
        throw DomainError("sub_sql_bandwidth needs positive signal frequency and kappa");
    }
    return std::norm(susceptibility_Z(osc, omega_f0)) / (2.0 * omega_f0 * kappa);
}

double DetectionSpec::delta_omega() const {
    if (!(tau > 0.0)) {
        throw DomainError("observation time must be positive");
    }
    return 2.0 * std::numbers::pi / tau;
}

double detection_threshold(const DetectionSpec &spec, double s_n, double required_snr) {
    if (!std::isfinite(s_n) || s_n < 0.0) {
        throw DomainError("detection threshold needs a finite non-negative S_n");
    }
    return required_snr * std::sqrt(s_n * spec.delta_omega() / (2.0 * std::numbers::pi));
}

double detection_snr(const DetectionSpec &spec, double s_n) {
    return spec.f_s0 / detection_threshold(spec, s_n);
}

double variational_psd(const Oscillator &osc, double kappa, double omega_f0) {
    optimal_homodyne_angle(osc, kappa, omega_f0);
    if (!(kappa > 0.0)) {
        throw DomainError("variational_psd needs kappa > 0");
    }
    return thermal_force_psd(osc, omega_f0) +
           std::norm(susceptibility_Z(osc, omega_f0)) / (2.0 * kappa * osc.omega_m);
}

} // namespace optonoise
