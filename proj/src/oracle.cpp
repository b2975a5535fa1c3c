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

#include "optonoise/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>

#include "optonoise/convention.hpp"
#include "optonoise/errors.hpp"
#include "optonoise/linear_form.hpp"
#include "optonoise/noise_budget.hpp"
#include "optonoise/parallel.hpp"
#include "optonoise/rng.hpp"

namespace optonoise {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
constexpr double kStabilityMargin = 0.1;

double coupling(const OracleConfig &c) { return std::sqrt(c.kappa / (4.0 * c.osc.omega_m)); }

// Exact one-step propagation of d' = -gamma d + input, input held over the step.
struct RotatingStep {
    double decay;
    double gain;
    explicit RotatingStep(double gamma, double dt)
        : decay(std::exp(-gamma * dt)), gain(gamma > 0.0 ? -std::expm1(-gamma * dt) / gamma : dt) {}
};

// Zero-order-hold discretization of x'' + 2 gamma x' + w^2 x = u.
struct OscillatorStep {
    double p00, p01, p10, p11, g0, g1;
    OscillatorStep(double omega, double gamma, double dt) {
        const double wd = std::sqrt(omega * omega - gamma * gamma);
        const double e = std::exp(-gamma * dt);
        const double c = std::cos(wd * dt);
        const double s = std::sin(wd * dt);
        p00 = e * (c + gamma / wd * s);
        p01 = e * s / wd;
        p10 = -e * omega * omega * s / wd;
        p11 = e * (c - gamma / wd * s);
        g0 = (1.0 - p11 - 2.0 * gamma * p01) / (omega * omega);
        g1 = p01;
    }
};

cplx rotating_force(const std::optional<ForceTone> &force, double t) {
    if (!force || force->amplitude == 0.0) {
        return {};
    }
    // f_S0 cos((w_M + W) t + phi) seen in the frame rotating at w_M.
    return 0.5 * force->amplitude * std::exp(-kI * (force->omega * t + force->phase));
}

double absolute_force(const std::optional<ForceTone> &force, double t) {
    if (!force || force->amplitude == 0.0) {
        return 0.0;
    }
    return force->amplitude * std::cos(force->omega * t + force->phase);
}

struct ComplexNoise {
    GaussianStream re;
    GaussianStream im;
    cplx operator()() { return {re(), im()}; }
};

ComplexNoise complex_noise(const OracleConfig &c, std::size_t trajectory, std::size_t channel, double sigma) {
    return {GaussianStream(stream_seed(c.seed, trajectory, 2 * channel), sigma),
            GaussianStream(stream_seed(c.seed, trajectory, 2 * channel + 1), sigma)};
}

std::size_t burn_samples(const OracleConfig &c) { return static_cast<std::size_t>(std::llround(c.burn_in / c.dt)); }

double rotating_thermal_sigma(const OracleConfig &c) {
    if (!c.thermal_noise) {
        return 0.0;
    }
    const double n = occupation_at(c.osc, c.osc.omega_m);
    return std::sqrt(c.osc.gamma_m * (2.0 * n + 1.0) / (2.0 * c.dt));
}

double optical_sigma(const OracleConfig &c, double density_per_quadrature) {
    return c.optical_noise ? std::sqrt(density_per_quadrature / c.dt) : 0.0;
}

HomodyneRecord simulate_toy(const OracleConfig &c, std::size_t trajectory) {
    const std::size_t burn = burn_samples(c);
    const std::size_t total = burn + c.samples();
    const double g = coupling(c);
    const RotatingStep step(c.osc.gamma_m, c.dt);
    // Complex vacuum input: each component carries a quarter of the
    // symmetrized unit density.
    const double s_opt = optical_sigma(c, 0.25);
    auto a_plus = complex_noise(c, trajectory, 0, s_opt);
    auto a_minus = complex_noise(c, trajectory, 1, s_opt);
    auto bath = complex_noise(c, trajectory, 2, rotating_thermal_sigma(c));

    HomodyneRecord r;
    r.dt = c.dt;
    r.force = c.force;
    r.start = burn;
    auto &beta_p = r.channels["beta_a+"];
    auto &beta_m = r.channels["beta_a-"];
    beta_p.resize(total);
    beta_m.resize(total);
    cplx d{};
    for (std::size_t k = 0; k < total; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(burn)) * c.dt;
        const cplx ap = a_plus();
        const cplx am = a_minus();
        const cplx e = bath();
        const cplx bp = ap + kI * g * d;
        const cplx bm = am + kI * g * std::conj(d);
        beta_p[k] = bp.real() + bm.real();
        beta_m[k] = bp.real() - bm.real();
        const cplx drive = kI * g * (ap + std::conj(am)) + kI * (e + rotating_force(c.force, t));
        d = step.decay * d + step.gain * drive;
    }
    return r;
}

int probe_sign(int l) { return l == 1 ? 1 : -1; }

HomodyneRecord simulate_four(const OracleConfig &c, std::size_t trajectory) {
    const std::size_t burn = burn_samples(c);
    const std::size_t total = burn + c.samples();
    const double g = coupling(c);
    const RotatingStep step(c.osc.gamma_m, c.dt);
    const double s_opt = optical_sigma(c, 0.25);

    struct Port {
        int sign;
        ComplexNoise up;
        ComplexNoise down;
        std::vector<double> *plus;
        std::vector<double> *minus;
    };
    HomodyneRecord r;
    r.dt = c.dt;
    r.force = c.force;
    r.start = burn;
    std::vector<Port> ports;
    std::size_t stream = 0;
    for (int l = 1; l <= 2; ++l) {
        for (int n = 1; n <= 2; ++n) {
            auto &plus = r.channels[four_probe_name(true, l, n)];
            auto &minus = r.channels[four_probe_name(false, l, n)];
            plus.resize(total);
            minus.resize(total);
            auto up = complex_noise(c, trajectory, stream++, s_opt);
            auto down = complex_noise(c, trajectory, stream++, s_opt);
            ports.push_back(Port{probe_sign(l), std::move(up), std::move(down), &plus, &minus});
        }
    }
    auto bath = complex_noise(c, trajectory, stream, rotating_thermal_sigma(c));

    cplx d{};
    for (std::size_t k = 0; k < total; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(burn)) * c.dt;
        cplx xi{};
        for (auto &p : ports) {
            const cplx up = p.up();
            const cplx down = p.down();
            const double s = p.sign;
            const cplx b_up = up + s * kI * g * d;
            const cplx b_down = down + s * kI * g * std::conj(d);
            (*p.plus)[k] = b_up.real() + b_down.real();
            (*p.minus)[k] = b_up.real() - b_down.real();
            xi += s * (up + std::conj(down));
        }
        const cplx drive = kI * g * xi + kI * (bath() + rotating_force(c.force, t));
        d = step.decay * d + step.gain * drive;
    }
    return r;
}

HomodyneRecord simulate_mono(const OracleConfig &c, std::size_t trajectory) {
    const std::size_t burn = burn_samples(c);
    const std::size_t total = burn + c.samples();
    const double wm = c.osc.omega_m;
    const OscillatorStep step(wm, c.osc.gamma_m, c.dt);
    // Real quadratures carry half the symmetrized unit density each.
    GaussianStream amp(stream_seed(c.seed, trajectory, 0), optical_sigma(c, 0.5));
    GaussianStream phase(stream_seed(c.seed, trajectory, 1), optical_sigma(c, 0.5));
    // Bath force, white at its resonant level 2 gamma (2 n + 1).
    const double n = occupation_at(c.osc, wm);
    const double s_th =
        c.thermal_noise ? std::sqrt(convention::white_sample_variance(2.0 * c.osc.gamma_m * (2.0 * n + 1.0), c.dt))
                        : 0.0;
    GaussianStream bath(stream_seed(c.seed, trajectory, 2), s_th);
    const double drive_gain = std::sqrt(2.0 * c.kappa * wm);
    const double readout_gain = std::sqrt(c.kappa / (2.0 * wm));
    const double cs = std::cos(c.psi);
    const double sn = std::sin(c.psi);

    HomodyneRecord r;
    r.dt = c.dt;
    r.force = c.force;
    r.start = burn;
    auto &b_a = r.channels["b_a"];
    auto &b_phi = r.channels["b_phi"];
    auto &b_psi = r.channels["b_psi"];
    b_a.resize(total);
    b_phi.resize(total);
    b_psi.resize(total);
    double x = 0.0;
    double v = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        const double t = (static_cast<double>(k) - static_cast<double>(burn)) * c.dt;
        const double aa = amp();
        const double ap = phase();
        b_a[k] = aa;
        b_phi[k] = ap + readout_gain * x;
        b_psi[k] = cs * b_a[k] + sn * b_phi[k];
        const double u = drive_gain * aa + 2.0 * wm * (bath() + absolute_force(c.force, t));
        const double x_next = step.p00 * x + step.p01 * v + step.g0 * u;
        v = step.p10 * x + step.p11 * v + step.g1 * u;
        x = x_next;
    }
    return r;
}

bool is_combined(SchemeKind scheme, const std::string &name) {
    return scheme != SchemeKind::Monochromatic && name == combined_channel(scheme);
}

} // namespace

std::size_t OracleConfig::samples() const {
    return dt > 0.0 ? static_cast<std::size_t>(std::llround(duration / dt)) : 0;
}

double OracleConfig::max_rate() const {
    double rate = scheme == SchemeKind::Monochromatic ? osc.omega_m : osc.gamma_m;
    if (force) {
        rate = std::max(rate, std::abs(force->omega));
    }
    return rate;
}

void OracleConfig::validate() const {
    try {
        osc.validate();
    } catch (const DomainError &e) {
        throw ValidationError("oscillator", e.what());
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw ValidationError("probe.kappa", "must be finite and >= 0");
    }
    if (!(dt > 0.0)) {
        throw ValidationError("oracle.dt", "must be positive");
    }
    if (!(duration > 0.0)) {
        throw ValidationError("oracle.duration", "must be positive");
    }
    if (!(burn_in >= 0.0)) {
        throw ValidationError("oracle.burn_in", "must be >= 0");
    }
    if (trajectories == 0) {
        throw ValidationError("oracle.trajectories", "must be >= 1");
    }
    if (dt * max_rate() >= kStabilityMargin) {
        throw ValidationError("oracle.dt", "dt * max rate = " + std::to_string(dt * max_rate()) +
                                               " exceeds the stability margin " + std::to_string(kStabilityMargin));
    }
    if (scheme == SchemeKind::Monochromatic && !(osc.gamma_m < osc.omega_m)) {
        throw ValidationError("oscillator.gamma_m", "monochromatic oracle needs an underdamped oscillator");
    }
    if (welch.segment_length < 8 || welch.segment_length % 2 != 0) {
        throw ValidationError("oracle.welch.segment_length", "must be even and >= 8");
    }
    if (!(welch.overlap >= 0.0 && welch.overlap < 1.0)) {
        throw ValidationError("oracle.welch.overlap", "must lie in [0, 1)");
    }
    const std::size_t step =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround((1.0 - welch.overlap) * welch.segment_length)));
    const std::size_t n = samples();
    const std::size_t segments = n < welch.segment_length ? 0 : (n - welch.segment_length) / step + 1;
    if (segments < 20) {
        throw ValidationError("oracle.duration", "record admits " + std::to_string(segments) +
                                                     " Welch segments, need at least 20");
    }
}

const std::vector<double> &HomodyneRecord::channel(const std::string &name) const {
    const auto it = channels.find(name);
    if (it == channels.end()) {
        throw ContractError("record has no channel " + name);
    }
    return it->second;
}

std::span<const double> HomodyneRecord::analysis(const std::string &name) const {
    const auto &x = channel(name);
    return std::span<const double>(x).subspan(std::min(start, x.size()));
}

std::size_t HomodyneRecord::samples() const {
    return channels.empty() ? 0 : channels.begin()->second.size() - start;
}

std::vector<std::string> recorded_channels(SchemeKind scheme) {
    switch (scheme) {
    case SchemeKind::Monochromatic:
        return {"b_a", "b_phi", "b_psi"};
    case SchemeKind::DichromaticToy:
        return {"beta_a+", "beta_a-"};
    case SchemeKind::FourProbe: {
        std::vector<std::string> names;
        for (int l = 1; l <= 2; ++l) {
            for (int n = 1; n <= 2; ++n) {
                names.push_back(four_probe_name(true, l, n));
                names.push_back(four_probe_name(false, l, n));
            }
        }
        return names;
    }
    }
    return {};
}

std::string combined_channel(SchemeKind scheme) {
    switch (scheme) {
    case SchemeKind::DichromaticToy:
        return "B_beta";
    case SchemeKind::FourProbe:
        return "B";
    case SchemeKind::Monochromatic:
        break;
    }
    throw Unsupported("the monochromatic scheme has no back-action record to subtract");
}

HomodyneRecord simulate(const OracleConfig &config, std::size_t trajectory) {
    config.validate();
    switch (config.scheme) {
    case SchemeKind::DichromaticToy:
        return simulate_toy(config, trajectory);
    case SchemeKind::FourProbe:
        return simulate_four(config, trajectory);
    case SchemeKind::Monochromatic:
        return simulate_mono(config, trajectory);
    }
    throw Unsupported("unknown scheme");
}

void postprocess_subtraction(HomodyneRecord &record, const OracleConfig &config, double weight_scale) {
    const std::string name = combined_channel(config.scheme);
    const RotatingStep step(config.osc.gamma_m, config.dt);
    const double g2 = config.kappa / (4.0 * config.osc.omega_m);
    std::vector<double> record_sum;
    std::vector<double> base;
    double weight = 0.0;
    if (config.scheme == SchemeKind::DichromaticToy) {
        record_sum = record.channel("beta_a+");
        base = record.channel("beta_a-");
        weight = 2.0 * g2; // K / (2 w_M)
    } else {
        const std::size_t n = record.channel(four_probe_name(true, 1, 1)).size();
        record_sum.assign(n, 0.0);
        base.assign(n, 0.0);
        for (int l = 1; l <= 2; ++l) {
            const double s = probe_sign(l);
            for (int m = 1; m <= 2; ++m) {
                const auto &plus = record.channel(four_probe_name(true, l, m));
                const auto &minus = record.channel(four_probe_name(false, l, m));
                for (std::size_t k = 0; k < n; ++k) {
                    record_sum[k] += s * plus[k];
                    base[k] -= 0.5 * s * minus[k];
                }
            }
        }
        weight = -4.0 * g2; // -(K / w_M)
    }
    // The filtered record obeys the same recursion as the mirror amplitude,
    // so the subtraction is exact sample by sample.
    std::vector<double> out(base.size());
    double y = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        out[k] = base[k] + weight_scale * weight * y;
        y = step.decay * y + step.gain * record_sum[k];
    }
    record.channels[name] = std::move(out);
}

std::map<std::string, PsdEstimate> oracle_spectra(const OracleConfig &config, const std::vector<std::string> &names) {
    config.validate();
    const bool need_combined = std::any_of(names.begin(), names.end(),
                                           [&](const std::string &n) { return is_combined(config.scheme, n); });
    std::vector<std::vector<WelchEstimator>> partial(config.trajectories);
    parallel_for(config.trajectories, [&](std::size_t t) {
        HomodyneRecord rec = simulate(config, t);
        if (need_combined) {
            postprocess_subtraction(rec, config);
        }
        auto &mine = partial[t];
        for (const auto &name : names) {
            mine.emplace_back(config.welch.segment_length, config.welch.overlap, config.welch.window, config.dt);
            mine.back().accumulate(rec.analysis(name));
        }
    });
    std::map<std::string, PsdEstimate> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        WelchEstimator total(config.welch.segment_length, config.welch.overlap, config.welch.window, config.dt);
        for (const auto &p : partial) {
            total.merge(p[i]);
        }
        out.emplace(names[i], total.estimate());
    }
    return out;
}

std::vector<double> analytic_channel_psd(const OracleConfig &config, const std::string &name,
                                         const std::vector<double> &omega) {
    std::vector<double> positive;
    for (double w : omega) {
        if (w > 0.0) {
            positive.push_back(w);
        }
    }
    const auto grid = FrequencyGrid::mirrored(positive, config.scheme == SchemeKind::Monochromatic ? Band::Absolute
                                                                                                   : Band::Baseband);
    SchemeInstance scheme;
    switch (config.scheme) {
    case SchemeKind::Monochromatic:
        scheme = build_monochromatic(config.osc, Probe{ProbeMode::Monochromatic, config.kappa}, grid,
                                     HomodyneAngle::radians(config.psi));
        break;
    case SchemeKind::DichromaticToy:
        scheme = build_toy_dichromatic(config.osc, Probe{ProbeMode::DichromaticToy, config.kappa}, grid);
        break;
    case SchemeKind::FourProbe:
        scheme = build_four_probe(config.osc, Probe{ProbeMode::FourProbe, config.kappa}, grid);
        break;
    }
    const auto s = psd(scheme.observable(name));
    std::vector<double> out;
    out.reserve(omega.size());
    for (double w : omega) {
        if (w > 0.0) {
            out.push_back(s[*grid.find(w)]);
        } else {
            out.push_back(std::nan(""));
        }
    }
    return out;
}

Agreement compare_in_band(const PsdEstimate &estimate, const std::vector<double> &prediction, double band_max,
                          double fraction) {
    if (prediction.size() != estimate.psd.size()) {
        throw StructuralError("prediction and estimate have different bin counts");
    }
    const double lo = band_max * (1.0 - fraction) / 2.0;
    const double hi = band_max * (1.0 + fraction) / 2.0;
    Agreement a;
    double acc = 0.0;
    for (std::size_t k = 0; k < estimate.omega.size(); ++k) {
        const double w = estimate.omega[k];
        if (w < lo || w > hi || !(prediction[k] > 0.0)) {
            continue;
        }
        const double rel = estimate.psd[k] / prediction[k] - 1.0;
        acc += rel * rel;
        ++a.bins;
    }
    if (a.bins == 0) {
        throw ContractError("no Welch bins inside the comparison band");
    }
    a.rms_relative = std::sqrt(acc / static_cast<double>(a.bins));
    return a;
}

DetectionStats detection_mc(const DetectionConfig &config) {
    if (config.trials < 2) {
        throw ValidationError("detect.trials", "need at least 2 trials");
    }
    if (!(config.required_snr > 0.0)) {
        throw ValidationError("detect.snr", "must be positive");
    }
    if (!(config.tau > 0.0)) {
        throw ValidationError("detect.tau", "must be positive");
    }
    OracleConfig base = config.oracle;
    base.duration = config.tau;
    base.trajectories = config.trials;
    base.force = ForceTone{1.0, config.offset, 0.0};
    // The matched template: the noise-free response to a unit force.
    OracleConfig quiet = base;
    quiet.optical_noise = false;
    quiet.thermal_noise = false;
    const auto readout = [&](HomodyneRecord &rec) -> std::span<const double> {
        if (base.scheme == SchemeKind::Monochromatic) {
            return rec.analysis("b_psi");
        }
        postprocess_subtraction(rec, base);
        return rec.analysis(combined_channel(base.scheme));
    };
    // Window length is checked against Welch settings in validate(); the
    // detection run does not use Welch, so relax that requirement.
    const auto check = [&](OracleConfig c) {
        c.welch.segment_length = 8;
        c.welch.overlap = 0.0;
        if (c.samples() < 160) {
            throw ValidationError("detect.tau", "window shorter than 160 samples");
        }
        c.validate();
    };
    check(base);
    auto simulate_unchecked = [&](const OracleConfig &c, std::size_t t) {
        OracleConfig relaxed = c;
        relaxed.welch.segment_length = 8;
        relaxed.welch.overlap = 0.0;
        return simulate(relaxed, t);
    };

    HomodyneRecord tmpl_rec = simulate_unchecked(quiet, 0);
    const auto tmpl_span = readout(tmpl_rec);
    const std::vector<double> tmpl(tmpl_span.begin(), tmpl_span.end());
    const double energy = std::inner_product(tmpl.begin(), tmpl.end(), tmpl.begin(), 0.0);
    if (!(energy > 0.0)) {
        throw SingularityError("signal does not reach the readout", config.offset);
    }

    OracleConfig noisy = base;
    noisy.force.reset();
    std::vector<double> noise_estimate(config.trials);
    parallel_for(config.trials, [&](std::size_t i) {
        HomodyneRecord rec = simulate_unchecked(noisy, i);
        const auto y = readout(rec);
        noise_estimate[i] = std::inner_product(tmpl.begin(), tmpl.end(), y.begin(), 0.0) / energy;
    });

    const double trials = static_cast<double>(config.trials);
    const double noise_mean = std::accumulate(noise_estimate.begin(), noise_estimate.end(), 0.0) / trials;
    double var = 0.0;
    for (double e : noise_estimate) {
        var += (e - noise_mean) * (e - noise_mean);
    }
    var /= trials - 1.0;

    DetectionStats stats;
    stats.noise_sigma = std::sqrt(var);
    stats.amplitudes = config.amplitudes;
    // Records are linear in the force: estimate(f) = estimate(0) + f.
    for (double f : config.amplitudes) {
        stats.mean_estimate.push_back(noise_mean + f);
        stats.std_estimate.push_back(stats.noise_sigma);
        stats.snr.push_back((noise_mean + f) / stats.noise_sigma);
    }
    for (std::size_t i = 1; i < stats.snr.size(); ++i) {
        const double a = stats.snr[i - 1] - config.required_snr;
        const double b = stats.snr[i] - config.required_snr;
        if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
            const double frac = a == b ? 0.0 : a / (a - b);
            stats.threshold = stats.amplitudes[i - 1] + frac * (stats.amplitudes[i] - stats.amplitudes[i - 1]);
            stats.bracketed = true;
            break;
        }
    }
    return stats;
}

} // namespace optonoise
