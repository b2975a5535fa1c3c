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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "optonoise/errors.hpp"
#include "optonoise/noise_budget.hpp"
#include "optonoise/oracle.hpp"

using namespace optonoise;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double log_uniform(std::mt19937_64 &rng, double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

double printed_phase_readout(const Oscillator &o, double kappa, double w) {
    return 2.0 * o.gamma_m * std::abs(w) * (2.0 * o.n_thermal + 1.0) / o.omega_m +
           std::norm(susceptibility_Z(o, w)) / (2.0 * kappa * o.omega_m) + kappa / (2.0 * o.omega_m);
}

// Coefficient of the unit drive quadrature in `form` at grid point j.
std::complex<double> drive_coefficient(const SchemeInstance &s, const LinearForm &form, std::size_t j) {
    const LinearForm &drive = *s.drive;
    std::complex<double> overlap{};
    double norm = 0.0;
    const auto &channels = form.channels();
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].role != ChannelRole::Optical) {
            continue;
        }
        overlap += form.u(i, j) * std::conj(drive.u(i, j)) + form.v(i, j) * std::conj(drive.v(i, j));
        norm += std::norm(drive.u(i, j)) + std::norm(drive.v(i, j));
    }
    return overlap / norm;
}

Outcome closed_form_reconstruction() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260101);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        Oscillator o;
        o.omega_m = std::uniform_real_distribution<double>(1.0, 10.0)(rng);
        o.gamma_m = o.omega_m * log_uniform(rng, 1e-6, 1e-2);
        o.n_thermal = std::uniform_real_distribution<double>(0.0, 100.0)(rng);
        const double kappa = o.omega_m * o.omega_m * log_uniform(rng, 1e-3, 10.0);
        std::vector<double> pts;
        for (int k = 1; k <= 60; ++k) {
            pts.push_back(o.omega_m * 0.05 * k);
        }
        const auto grid = FrequencyGrid::mirrored(pts, Band::Absolute);
        const auto s = build_monochromatic(o, Probe{ProbeMode::Monochromatic, kappa}, grid,
                                           HomodyneAngle::from_cotangent(0.0));
        const auto r = force_referred_psd(s, "b_psi");
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double expect = printed_phase_readout(o, kappa, grid[j]);
            worst = std::max(worst, std::abs(r.total[j] - expect) / expect);
        }
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-12 && t < 10.0, "max rel err " + fmt(worst) + " over 100 draws x 120 points, " + fmt(t) + " s"};
}

Outcome sql_touch() {
    const Oscillator o{2.0, 0.0, 0.0, std::nullopt};
    const double w = 1.3;
    const double z = std::abs(susceptibility_Z(o, w));
    const double s_n = phase_readout_psd(o, z, w);
    const double rel = std::abs(s_n - z / o.omega_m) / (z / o.omega_m);
    const auto opt = optimize_kappa(o, w, 200);
    const double step = std::log(opt.sweep_kappa[1] / opt.sweep_kappa[0]);
    const double miss = std::abs(std::log(opt.sweep_kappa[opt.argmin] / opt.kappa_star));
    const bool bracketed = opt.argmin > 0 && opt.argmin + 1 < opt.sweep_kappa.size();
    return {rel <= 1e-12 && miss <= step * (1.0 + 1e-9) && bracketed,
            "S_n rel err " + fmt(rel) + ", sweep argmin off by " + fmt(miss / step) + " steps"};
}

Outcome variational_cancellation() {
    // Run without damping: with gamma_m > 0 the angle condition leaves an
    // Im[K/Z] back-action residual that no real angle removes.
    const Oscillator o{1.0, 0.0, 3.0, std::nullopt};
    const double w = 0.5;
    const double z = std::real(susceptibility_Z(o, w));
    double worst = 0.0;
    for (int k = 0; k <= 12; ++k) {
        const double ratio = std::pow(10.0, -3.0 + 0.5 * k);
        const double kappa = ratio * z;
        const double pts[] = {w};
        const auto grid = FrequencyGrid::mirrored(pts, Band::Absolute);
        const auto s = build_monochromatic(o, Probe{ProbeMode::Monochromatic, kappa}, grid,
                                           optimal_homodyne_angle(o, kappa, w));
        const auto r = force_referred_psd(s, "b_psi");
        for (std::size_t j = 0; j < grid.size(); ++j) {
            worst = std::max(worst, r.backaction[j] / r.total[j]);
        }
    }
    bool refused = false;
    try {
        optimal_homodyne_angle(Oscillator{1.0, 0.01, 0.0, std::nullopt}, 0.3, 1.0);
    } catch (const NoCancellation &) {
        refused = true;
    }
    return {worst < 1e-24 && refused, "max backaction/total " + fmt(worst) + " for Re[K/Z] in [1e-3, 1e3]; " +
                                          (refused ? "NoCancellation at resonance" : "no refusal at resonance")};
}

Outcome broadband_evasion() {
    const Oscillator o{10.0, 1.0, 2.0, std::nullopt};
    const double kappa = 2.0 * o.gamma_m * o.omega_m;
    const auto grid = FrequencyGrid::uniform(1e4 * o.gamma_m, 20001, Band::Baseband);
    const auto s = build_toy_dichromatic(o, Probe{ProbeMode::DichromaticToy, kappa}, grid);
    const auto &b = s.observable("B_beta");
    double coeff = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        coeff = std::max(coeff, std::abs(drive_coefficient(s, b, j)));
    }
    const auto comm = commutator(s.observable("beta_a+"), s.observable("beta_a-"));
    double comm_max = 0.0;
    for (const auto &c : comm) {
        comm_max = std::max(comm_max, std::abs(c));
    }
    const auto r = force_referred_psd(s, "B_beta");
    double formula = 0.0;
    double shot_err = 0.0;
    double thermal_ratio = 0.0;
    const double printed_thermal = 2.0 * o.gamma_m * (2.0 * o.n_thermal + 1.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double w = grid[j];
        const double shot = 4.0 * (o.gamma_m * o.gamma_m + w * w) * o.omega_m / kappa;
        formula = std::max(formula, std::abs(r.total[j] - (printed_thermal + shot)) / (printed_thermal + shot));
        shot_err = std::max(shot_err, std::abs(r.shot[j] - shot) / shot);
        thermal_ratio = std::max(thermal_ratio, r.thermal[j] / printed_thermal);
    }
    return {coeff < 1e-14 && comm_max < 1e-14 && formula <= 1e-12,
            "backaction coeff " + fmt(coeff) + ", commutator " + fmt(comm_max) + ", S_n vs closed form rel err " +
                fmt(formula) + " (shot term rel err " + fmt(shot_err) + ", thermal term = " + fmt(thermal_ratio) +
                " x 2 gamma (2 n + 1))"};
}

Outcome factor_of_four() {
    std::mt19937_64 rng(424242);
    double worst = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
        Oscillator o;
        o.omega_m = std::uniform_real_distribution<double>(1.0, 10.0)(rng);
        o.gamma_m = o.omega_m * log_uniform(rng, 1e-6, 1e-2);
        o.n_thermal = std::uniform_real_distribution<double>(0.0, 100.0)(rng);
        const double kappa = o.omega_m * o.omega_m * log_uniform(rng, 1e-3, 10.0);
        const auto grid = FrequencyGrid::uniform(100.0 * o.gamma_m, 401, Band::Baseband);
        const auto toy = force_referred_psd(build_toy_dichromatic(o, Probe{ProbeMode::DichromaticToy, kappa}, grid),
                                            "B_beta");
        const auto four =
            force_referred_psd(build_four_probe(o, Probe{ProbeMode::FourProbe, kappa}, grid), "B");
        for (std::size_t j = 0; j < grid.size(); ++j) {
            worst = std::max(worst, std::abs(four.shot[j] - toy.shot[j] / 4.0) / (toy.shot[j] / 4.0));
        }
    }
    return {worst <= 1e-12, "max rel err " + fmt(worst) + " over 10 draws x 401 points"};
}

Outcome sub_sql() {
    const Oscillator o{1.0, 1e-6, 0.0, std::nullopt};
    const double kappa = 1e3 * o.gamma_m * o.omega_m;
    const double w = 100.0 * o.gamma_m;
    const double pts[] = {w};
    const auto grid = FrequencyGrid::mirrored(pts, Band::Baseband);
    const auto r = force_referred_psd(build_four_probe(o, Probe{ProbeMode::FourProbe, kappa}, grid), "B");
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        margin = std::min(margin, 10.0 * std::log10(rotating_sql_reference(o, grid[j]) / r.total[j]));
    }
    return {margin >= 10.0, "S_n below SQL reference by " + fmt(margin) + " dB at |Omega| = 100 gamma"};
}

OracleConfig long_run(SchemeKind scheme, double kappa) {
    OracleConfig c;
    c.scheme = scheme;
    c.osc = Oscillator{10.0, 1.0, 2.0, std::nullopt};
    c.kappa = kappa;
    c.dt = 0.02;
    c.welch = WelchSettings{4096, 0.5, WindowKind::Hann};
    // 200 segments per trajectory.
    c.duration = 201.0 * 2048.0 * c.dt;
    c.burn_in = 20.0;
    c.seed = 2718;
    c.trajectories = 10;
    return c;
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string worst_name;
    std::size_t min_segments = std::numeric_limits<std::size_t>::max();
    for (auto scheme : {SchemeKind::DichromaticToy, SchemeKind::FourProbe}) {
        const auto c = long_run(scheme, 200.0);
        auto names = recorded_channels(scheme);
        names.push_back(combined_channel(scheme));
        const auto est = oracle_spectra(c, names);
        for (const auto &name : names) {
            const auto &e = est.at(name);
            const auto a = compare_in_band(e, analytic_channel_psd(c, name, e.omega), 15.0);
            min_segments = std::min(min_segments, e.segments);
            if (a.rms_relative > worst) {
                worst = a.rms_relative;
                worst_name = name;
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst <= 0.05 && min_segments >= 200 && t < 300.0,
            "worst RMS " + fmt(worst) + " (" + worst_name + "), " + std::to_string(min_segments) + " segments, " +
                fmt(t) + " s"};
}

Outcome subtraction() {
    // K / w_M = 162 puts raw back-action just over 20 dB above shot at
    // Omega = 8 gamma.
    const auto c = long_run(SchemeKind::DichromaticToy, 1620.0);
    const double probe = 8.0;
    const double pts[] = {probe};
    const auto grid = FrequencyGrid::mirrored(pts, Band::Baseband);
    const auto s = build_toy_dichromatic(c.osc, Probe{ProbeMode::DichromaticToy, c.kappa}, grid);
    const auto &raw = s.observable("beta_a-");
    const double back_over_shot = 10.0 * std::log10(std::norm(drive_coefficient(s, raw, 1)));

    const auto est = oracle_spectra(c, {"B_beta", "beta_a-"});
    const auto &b = est.at("B_beta");
    const auto a = compare_in_band(b, analytic_channel_psd(c, "B_beta", b.omega), 15.0);
    const auto &r = est.at("beta_a-");
    std::size_t k = 0;
    while (r.omega[k] < probe) {
        ++k;
    }
    const double suppression = 10.0 * std::log10(r.psd[k] / b.psd[k]);
    return {back_over_shot >= 20.0 && a.rms_relative <= 0.05,
            "raw back-action " + fmt(back_over_shot) + " dB over shot, combined vs shot+thermal RMS " +
                fmt(a.rms_relative) + ", measured suppression " + fmt(suppression) + " dB"};
}

Outcome detection_threshold_mc() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    for (double tau : {1e3, 1e4}) {
        DetectionConfig d;
        d.oracle.scheme = SchemeKind::DichromaticToy;
        d.oracle.osc = Oscillator{10.0, 1.0, 2.0, std::nullopt};
        d.oracle.kappa = 200.0;
        d.oracle.dt = 0.05;
        d.oracle.burn_in = 20.0;
        d.oracle.seed = 99;
        d.offset = 1.5;
        d.tau = tau;
        d.trials = 300;
        const double pts[] = {d.offset};
        const auto grid = FrequencyGrid::mirrored(pts, Band::Baseband);
        const auto s_n = force_referred_psd(
            build_toy_dichromatic(d.oracle.osc, Probe{ProbeMode::DichromaticToy, d.oracle.kappa}, grid), "B_beta");
        const double predicted = detection_threshold(DetectionSpec{0.0, d.offset, tau}, s_n.total[1]);
        for (double f : {0.5, 0.7, 0.85, 1.0, 1.15, 1.3, 1.5, 2.0}) {
            d.amplitudes.push_back(f * predicted);
        }
        const auto stats = detection_mc(d);
        const double ratio = stats.threshold ? *stats.threshold / predicted : 0.0;
        ok = ok && stats.bracketed && std::abs(ratio - 1.0) <= 0.2;
        detail += "tau=" + fmt(tau) + " ratio " + fmt(ratio) + "; ";
    }
    return {ok, detail + "300 trials each, " + fmt(seconds_since(t0)) + " s"};
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "optonoise_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const nlohmann::json scenarios[] = {
        nlohmann::json::parse(R"({"scheme": "four_probe",
            "oscillator": {"omega_m": 10, "gamma_m": 1, "n_thermal": 2}, "probe": {"kappa": 200},
            "grid": {"min": -20, "max": 20, "points": 81}, "seed": 3})"),
        nlohmann::json::parse(R"({"scheme": "toy",
            "oscillator": {"omega_m": 10, "gamma_m": 1, "n_thermal": 2}, "probe": {"kappa": 200},
            "oracle": {"dt": 0.02, "duration": 1000, "burn_in": 20, "trajectories": 3, "band_max": 15,
                       "welch": {"segment_length": 1024}}, "seed": 3})"),
        nlohmann::json::parse(R"({"scheme": "toy",
            "oscillator": {"omega_m": 10, "gamma_m": 1, "n_thermal": 2}, "probe": {"kappa": 200},
            "detect": {"offset": 1.5, "tau": 200, "amplitudes": [0.1, 0.3, 0.5, 0.8], "trials": 40,
                       "dt": 0.05, "burn_in": 20}, "seed": 3})"),
    };
    const char *commands[] = {"spectrum", "oracle", "detect"};
    bool ok = true;
    std::size_t compared = 0;
    for (int i = 0; i < 3; ++i) {
        const fs::path cfg = dir / ("s" + std::to_string(i) + ".json");
        std::ofstream(cfg) << scenarios[i].dump();
        std::string outputs[2][2];
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path csv = dir / ("out" + std::to_string(rep) + ".csv");
            const fs::path js = dir / ("out" + std::to_string(rep) + ".json");
            // Different worker counts must not change a byte.
            const std::string cmd = std::string("OPTONOISE_THREADS=") + (rep ? "3" : "1") + " " + OPTONOISE_CLI + " " +
                                    commands[i] + " " + cfg.string() + " --csv " + csv.string() + " --json " +
                                    js.string() + " 2>/dev/null";
            if (std::system(cmd.c_str()) != 0) {
                return {false, std::string(commands[i]) + " run failed"};
            }
            outputs[rep][0] = slurp(csv);
            outputs[rep][1] = nlohmann::json::parse(slurp(js)).at("payload").dump();
        }
        ok = ok && outputs[0][0] == outputs[1][0] && outputs[0][1] == outputs[1][1] && !outputs[0][0].empty();
        compared += 2;
    }
    fs::remove_all(dir);
    return {ok, std::to_string(compared) + " payloads compared across reruns (spectrum, oracle, detect)"};
}

} // namespace

int main() {
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"closed-form reconstruction", closed_form_reconstruction},
        {"SQL touch", sql_touch},
        {"variational cancellation", variational_cancellation},
        {"broadband evasion", broadband_evasion},
        {"factor of four", factor_of_four},
        {"sub-SQL demonstration", sub_sql},
        {"oracle equivalence", oracle_equivalence},
        {"time-domain back-action subtraction", subtraction},
        {"detection threshold", detection_threshold_mc},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 1;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << index << " (" << name << "): " << o.detail
                  << std::endl;
        failed += o.pass ? 0 : 1;
        ++index;
    }
    std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
