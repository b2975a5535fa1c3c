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

#include "optonoise/schemes.hpp"

#include <cmath>
#include <numbers>

#include "optonoise/errors.hpp"

namespace optonoise {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

using Forms = std::vector<std::reference_wrapper<const LinearForm>>;

void require_mode(const Probe &probe, ProbeMode mode, const char *builder) {
    probe.validate();
    if (probe.mode != mode) {
        throw ContractError(std::string(builder) + ": probe mode does not match the scheme");
    }
}

// Coupling g = 2 k x0 A expressed through the normalized strength.
double coupling(const Oscillator &osc, const Probe &probe) { return std::sqrt(probe.kappa / (4.0 * osc.omega_m)); }

GridFunction scaled(const GridFunction &f, Complex c) {
    GridFunction out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        out[j] = c * f[j];
    }
    return out;
}

GridFunction rotating_chi(const Oscillator &osc, const FrequencyGrid &grid) {
    return sample_function(grid, [&](double w) { return rotating_susceptibility(osc, w); });
}

LinearForm sum_difference(const LinearForm &x, const LinearForm &y, double sign) {
    const auto &grid = x.grid();
    return combine({x, y}, {constant_function(grid, kInvSqrt2), constant_function(grid, sign * kInvSqrt2)});
}

NoiseChannel optical(std::string port, double offset) {
    return NoiseChannel{ChannelId{std::move(port), offset}, ChannelRole::Optical, Vacuum{}};
}

// Rotating-frame bath: the occupation is held at its value on resonance.
NoiseChannel rotating_bath(const Oscillator &osc) {
    return NoiseChannel{ChannelId{"bath", osc.omega_m}, ChannelRole::Bath, Thermal{occupation_at(osc, osc.omega_m), {}}};
}

int probe_sign(int l) { return l == 1 ? 1 : -1; }

} // namespace

void Probe::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw DomainError("kappa must be finite and non-negative");
    }
}

Probe normalized_probe(const PhysicalOscillator &osc, const PhysicalProbe &probe) {
    return Probe{probe.mode, kappa(osc, probe)};
}

HomodyneAngle HomodyneAngle::radians(double psi) {
    if (!std::isfinite(psi)) {
        throw DomainError("homodyne angle must be finite");
    }
    return HomodyneAngle(psi, std::cos(psi), std::sin(psi));
}

HomodyneAngle HomodyneAngle::from_cotangent(double cot) {
    if (!std::isfinite(cot)) {
        throw DomainError("cotangent must be finite");
    }
    const double s = 1.0 / std::hypot(1.0, cot);
    const double c = cot * s;
    return HomodyneAngle(std::atan2(s, c), c, s);
}

double backaction_ratio(const Oscillator &osc, double kappa, double omega) {
    return (kappa / susceptibility_Z(osc, omega)).real();
}

HomodyneAngle optimal_homodyne_angle(const Oscillator &osc, double kappa, double omega_f0) {
    osc.validate();
    const double r = backaction_ratio(osc, kappa, omega_f0);
    if (r == 0.0 || !std::isfinite(r)) {
        throw NoCancellation("Re[K/Z] vanishes at the signal frequency: back action cannot be cancelled there");
    }
    return HomodyneAngle::from_cotangent(-r);
}

AngleFunction pointwise_optimal_angle(const Oscillator &osc, double kappa) {
    return [osc, kappa](double omega) {
        const double r = backaction_ratio(osc, kappa, omega);
        if (r == 0.0 || !std::isfinite(r)) {
            return HomodyneAngle::from_cotangent(0.0);
        }
        return HomodyneAngle::from_cotangent(-r);
    };
}

DcDrive equal_drive(const Oscillator &osc, double kappa) {
    DcDrive drive;
    drive.coupling = 0.5 * std::sqrt(kappa / (4.0 * osc.omega_m));
    return drive;
}

DcDrive physical_drive(const PhysicalOscillator &osc, const PhysicalProbe &probe) {
    DcDrive drive;
    drive.amplitude_plus = probe.amplitude;
    drive.amplitude_minus = probe.amplitude;
    drive.coupling = probe.wave_number() * osc.x0();
    return drive;
}

DcState dichromatic_dc_state(const Oscillator &osc, const DcDrive &drive) {
    osc.validate();
    const Complex pump = 2.0 * kI * drive.coupling * drive.amplitude_plus * std::conj(drive.amplitude_minus);
    DcState s;
    s.f_comp_exact = -pump;
    s.f_comp = drive.f_comp.value_or(s.f_comp_exact);
    const Complex net = pump + s.f_comp;
    if (!drive.f_comp || net == Complex{}) {
        s.d = 0.0;
    } else if (osc.gamma_m == 0.0) {
        throw SingularityError("undamped oscillator with uncompensated ponderomotive drive", osc.omega_m);
    } else {
        s.d = net / osc.gamma_m;
    }
    const Complex mix = 2.0 * kI * drive.coupling;
    s.output_plus = drive.amplitude_plus + mix * drive.amplitude_minus * s.d;
    s.output_minus = drive.amplitude_minus + mix * drive.amplitude_plus * std::conj(s.d);
    return s;
}

const LinearForm &SchemeInstance::observable(const std::string &name) const {
    const auto it = observables.find(name);
    if (it == observables.end()) {
        throw ContractError("scheme has no observable named " + name);
    }
    return it->second;
}

std::vector<std::string> SchemeInstance::observable_names() const {
    std::vector<std::string> names;
    for (const auto &[name, form] : observables) {
        names.push_back(name);
    }
    return names;
}

std::string four_probe_name(bool plus, int l, int n) {
    return std::string(plus ? "beta_a+" : "beta_a-") + "_l" + std::to_string(l) + "_n" + std::to_string(n);
}

SchemeInstance build_monochromatic(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid,
                                   const AngleSpec &psi) {
    osc.validate();
    require_mode(probe, ProbeMode::Monochromatic, "build_monochromatic");

    auto grid_ptr = std::make_shared<const FrequencyGrid>(grid);
    Thermal bath_stats{osc.n_thermal, {}};
    if (osc.bath_frequency) {
        bath_stats.profile.resize(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            bath_stats.profile[j] = occupation_at(osc, std::abs(grid[j]));
        }
    }
    auto basis = std::make_shared<const ChannelBasis>(std::vector<NoiseChannel>{
        optical("a", 0.0), NoiseChannel{ChannelId{"bath", 0.0}, ChannelRole::Bath, bath_stats}});

    const auto a = LinearForm::annihilation(grid_ptr, basis, 0);
    const auto a_amp = amplitude_quadrature(a);
    const auto force = LinearForm::signal(grid_ptr, basis);

    // Bath force: e(w) on the positive half, e^+(-w) on the negative half.
    auto fl = FormCoefficients::zeros(2, grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid[j];
        const double amp = std::sqrt(2.0 * osc.gamma_m * std::abs(w) / osc.omega_m);
        if (w > 0.0) {
            fl.u[grid.size() + j] = amp;
        } else if (w < 0.0) {
            fl.v[grid.size() + j] = amp;
        }
    }
    const LinearForm bath_force(grid_ptr, basis, std::move(fl));

    const double k = probe.kappa;
    const GridFunction back = sample_function(grid, [&](double w) {
        return kI * k / (std::numbers::sqrt2 * susceptibility_Z(osc, w));
    });
    const GridFunction push = sample_function(grid, [&](double w) {
        return kI * std::sqrt(k * osc.omega_m) / susceptibility_Z(osc, w);
    });
    const auto b = combine({a, a_amp, bath_force, force}, {constant_function(grid, 1.0), back, push, push});

    // Readout quadratures in the basis {a_a, a_phi, f_s,a, f_fl,a}. The a_a
    // coefficient of b_psi is formed in one expression so the angle
    // condition cancels it without rounding.
    const auto a_phase = phase_quadrature(a);
    const auto force_amp = amplitude_quadrature(force);
    const auto bath_amp = amplitude_quadrature(bath_force);
    GridFunction ratio(grid.size());
    GridFunction transfer(grid.size());
    GridFunction a_coef(grid.size());
    GridFunction phase_coef(grid.size());
    GridFunction force_coef(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const Complex z = susceptibility_Z(osc, grid[j]);
        const HomodyneAngle angle = std::holds_alternative<HomodyneAngle>(psi)
                                        ? std::get<HomodyneAngle>(psi)
                                        : std::get<AngleFunction>(psi)(std::abs(grid[j]));
        ratio[j] = k / z;
        transfer[j] = std::sqrt(k * osc.omega_m) / z;
        a_coef[j] = angle.cos() + angle.sin() * ratio[j];
        phase_coef[j] = angle.sin();
        force_coef[j] = angle.sin() * transfer[j];
    }
    auto b_a = a_amp;
    auto b_phi = combine({a_phase, a_amp, force_amp, bath_amp}, {constant_function(grid, 1.0), ratio, transfer, transfer});
    auto b_psi = combine({a_amp, a_phase, force_amp, bath_amp}, {a_coef, phase_coef, force_coef, force_coef});

    SchemeInstance s;
    s.kind = SchemeKind::Monochromatic;
    s.osc = osc;
    s.probe = probe;
    s.grid = grid_ptr;
    s.channels = basis;
    s.observables.emplace("b_a", std::move(b_a));
    s.observables.emplace("b_phi", std::move(b_phi));
    s.observables.emplace("b_psi", std::move(b_psi));
    s.fields.emplace("b", b);
    s.drive = a_amp;
    s.signal_observable = "b_psi";
    return s;
}

SchemeInstance build_toy_dichromatic(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid,
                                     std::optional<DcDrive> drive) {
    osc.validate();
    require_mode(probe, ProbeMode::DichromaticToy, "build_toy_dichromatic");

    const DcState dc = dichromatic_dc_state(osc, drive.value_or(equal_drive(osc, probe.kappa)));

    auto grid_ptr = std::make_shared<const FrequencyGrid>(grid);
    const double half = 0.5 * osc.omega_m;
    auto basis = std::make_shared<const ChannelBasis>(
        std::vector<NoiseChannel>{optical("a+", half), optical("a-", -half), rotating_bath(osc)});

    const auto a_plus = LinearForm::annihilation(grid_ptr, basis, 0);
    const auto a_minus = LinearForm::annihilation(grid_ptr, basis, 1);
    const auto bath = LinearForm::annihilation(grid_ptr, basis, 2);
    const auto force = LinearForm::signal(grid_ptr, basis);
    const auto a_minus_dag = adjoint_mirror(a_minus);

    const double g = coupling(osc, probe);
    const GridFunction chi = rotating_chi(osc, grid);
    const auto d = combine({a_plus, a_minus_dag, bath, force},
                           {scaled(chi, kI * g), scaled(chi, kI * g), scaled(chi, kI * std::sqrt(2.0 * osc.gamma_m)),
                            scaled(chi, kI)});
    const auto one = constant_function(grid, 1.0);
    const auto kick = constant_function(grid, kI * g);
    const auto b_plus = combine({a_plus, d}, {one, kick});
    const auto d_dag = adjoint_mirror(d);
    const auto b_minus = combine({a_minus, d_dag}, {one, kick});

    const auto bp_a = amplitude_quadrature(b_plus);
    const auto bm_a = amplitude_quadrature(b_minus);
    auto beta_plus = sum_difference(bp_a, bm_a, 1.0);
    auto beta_minus = sum_difference(bp_a, bm_a, -1.0);
    auto alpha_plus = sum_difference(amplitude_quadrature(a_plus), amplitude_quadrature(a_minus), 1.0);
    auto alpha_minus = sum_difference(amplitude_quadrature(a_plus), amplitude_quadrature(a_minus), -1.0);

    auto b_beta = combine({std::cref(beta_minus), std::cref(beta_plus)}, {one, scaled(chi, probe.kappa / (2.0 * osc.omega_m))});

    SchemeInstance s;
    s.kind = SchemeKind::DichromaticToy;
    s.osc = osc;
    s.probe = probe;
    s.grid = grid_ptr;
    s.channels = basis;
    s.observables.emplace("beta_a+", std::move(beta_plus));
    s.observables.emplace("beta_a-", std::move(beta_minus));
    s.observables.emplace("B_beta", std::move(b_beta));
    s.fields.emplace("b_+", b_plus);
    s.fields.emplace("b_-", b_minus);
    s.fields.emplace("d", d);
    s.fields.emplace("alpha_a+", alpha_plus);
    s.fields.emplace("alpha_a-", std::move(alpha_minus));
    s.drive = std::move(alpha_plus);
    s.signal_observable = "B_beta";
    s.dc = dc;
    return s;
}

SchemeInstance build_four_probe(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid) {
    osc.validate();
    require_mode(probe, ProbeMode::FourProbe, "build_four_probe");

    auto grid_ptr = std::make_shared<const FrequencyGrid>(grid);
    // Ports a{l}{+|-}{n}: side l, sideband offset +-(2n-1) w_M / 2 from the
    // mean carrier.
    std::vector<NoiseChannel> list;
    for (int l = 1; l <= 2; ++l) {
        for (int n = 1; n <= 2; ++n) {
            const double offset = (2 * n - 1) * 0.5 * osc.omega_m;
            list.push_back(optical("a" + std::to_string(l) + "+" + std::to_string(n), offset));
            list.push_back(optical("a" + std::to_string(l) + "-" + std::to_string(n), -offset));
        }
    }
    list.push_back(rotating_bath(osc));
    auto basis = std::make_shared<const ChannelBasis>(std::move(list));
    auto port = [](int l, char side, int n) { return "a" + std::to_string(l) + side + std::to_string(n); };
    auto input = [&](int l, char side, int n) {
        return LinearForm::annihilation(grid_ptr, basis, basis->index_of(port(l, side, n)));
    };

    const double g = coupling(osc, probe);
    const GridFunction chi = rotating_chi(osc, grid);

    std::vector<LinearForm> drivers;
    std::vector<GridFunction> weights;
    for (int l = 1; l <= 2; ++l) {
        for (int n = 1; n <= 2; ++n) {
            const Complex w = kI * g * static_cast<double>(probe_sign(l));
            drivers.push_back(input(l, '+', n));
            weights.push_back(scaled(chi, w));
            drivers.push_back(adjoint_mirror(input(l, '-', n)));
            weights.push_back(scaled(chi, w));
        }
    }
    drivers.push_back(LinearForm::annihilation(grid_ptr, basis, basis->index_of("bath")));
    weights.push_back(scaled(chi, kI * std::sqrt(2.0 * osc.gamma_m)));
    drivers.push_back(LinearForm::signal(grid_ptr, basis));
    weights.push_back(scaled(chi, kI));
    const auto d = combine(Forms(drivers.begin(), drivers.end()), weights);
    const auto d_dag = adjoint_mirror(d);

    SchemeInstance s;
    s.kind = SchemeKind::FourProbe;
    s.osc = osc;
    s.probe = probe;
    s.grid = grid_ptr;
    s.channels = basis;

    const auto one = constant_function(grid, 1.0);
    std::vector<LinearForm> record_terms;
    std::vector<LinearForm> signal_terms;
    std::vector<GridFunction> record_weights;
    std::vector<GridFunction> signal_weights;
    for (int l = 1; l <= 2; ++l) {
        const auto kick = constant_function(grid, kI * g * static_cast<double>(probe_sign(l)));
        for (int n = 1; n <= 2; ++n) {
            const auto up_in = input(l, '+', n);
            const auto down_in = input(l, '-', n);
            const auto b_up = combine({up_in, d}, {one, kick});
            const auto b_down = combine({down_in, d_dag}, {one, kick});
            const auto up_a = amplitude_quadrature(b_up);
            const auto down_a = amplitude_quadrature(b_down);
            auto plus = sum_difference(up_a, down_a, 1.0);
            auto minus = sum_difference(up_a, down_a, -1.0);
            record_terms.push_back(plus);
            record_weights.push_back(constant_function(grid, static_cast<double>(probe_sign(l))));
            signal_terms.push_back(minus);
            signal_weights.push_back(constant_function(grid, -0.5 * probe_sign(l)));
            s.observables.emplace(four_probe_name(true, l, n), std::move(plus));
            s.observables.emplace(four_probe_name(false, l, n), std::move(minus));
            s.fields.emplace("b_l" + std::to_string(l) + "_+" + std::to_string(n), b_up);
            s.fields.emplace("b_l" + std::to_string(l) + "_-" + std::to_string(n), b_down);
        }
    }
    auto record = combine(Forms(record_terms.begin(), record_terms.end()), record_weights);
    auto half_sum = combine(Forms(signal_terms.begin(), signal_terms.end()), signal_weights);
    // The half-sum still carries (K / w_M) chi R; the record R removes it.
    auto b = combine({std::cref(half_sum), std::cref(record)}, {one, scaled(chi, -probe.kappa / osc.omega_m)});

    std::vector<LinearForm> alpha_terms;
    for (int l = 1; l <= 2; ++l) {
        for (int n = 1; n <= 2; ++n) {
            alpha_terms.push_back(sum_difference(amplitude_quadrature(input(l, '+', n)),
                                                 amplitude_quadrature(input(l, '-', n)), 1.0));
        }
    }
    const std::vector<GridFunction> alpha_weights{
        constant_function(grid, 0.5), constant_function(grid, 0.5), constant_function(grid, -0.5),
        constant_function(grid, -0.5)};
    s.drive = combine(Forms(alpha_terms.begin(), alpha_terms.end()), alpha_weights);

    s.observables.emplace("R", std::move(record));
    s.observables.emplace("B_half_sum", std::move(half_sum));
    s.observables.emplace("B", std::move(b));
    s.fields.emplace("d", d);
    s.signal_observable = "B";
    return s;
}

SchemeInstance build_scheme(const Oscillator &osc, const Probe &probe, const FrequencyGrid &grid,
                            const AngleSpec &psi) {
    switch (probe.mode) {
    case ProbeMode::Monochromatic:
        return build_monochromatic(osc, probe, grid, psi);
    case ProbeMode::DichromaticToy:
        return build_toy_dichromatic(osc, probe, grid);
    case ProbeMode::FourProbe:
        return build_four_probe(osc, probe, grid);
    }
    throw ContractError("unknown probe mode");
}

const LinearForm &backaction_record(const SchemeInstance &scheme) {
    switch (scheme.kind) {
    case SchemeKind::Monochromatic:
        throw Unsupported("amplitude and phase of one wave do not commute: no separate back-action record");
    case SchemeKind::DichromaticToy:
        return scheme.observable("beta_a+");
    case SchemeKind::FourProbe:
        return scheme.observable("R");
    }
    throw ContractError("unknown scheme");
}

} // namespace optonoise
