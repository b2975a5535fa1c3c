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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "optonoise/errors.hpp"
#include "optonoise/noise_budget.hpp"
#include "optonoise/output.hpp"
#include "optonoise/run.hpp"
#include "optonoise/scenario.hpp"

using namespace optonoise;
using nlohmann::json;

namespace {

json toy_doc() {
    return json::parse(R"({
        "scheme": "toy",
        "oscillator": {"omega_m": 10, "gamma_m": 1, "n_thermal": 2},
        "probe": {"kappa": 40},
        "grid": {"min": -3, "max": 3, "points": 7},
        "seed": 11
    })");
}

json mono_doc() {
    return json::parse(R"({
        "scheme": "monochromatic",
        "oscillator": {"omega_m": 2, "gamma_m": 0, "n_thermal": 0},
        "probe": {"kappa": 1},
        "readout": {"angle": "phase"},
        "grid": {"min": 0.5, "max": 1.5, "points": 3}
    })");
}

std::string validation_path(const json &doc) {
    try {
        parse_config(doc);
    } catch (const ValidationError &e) {
        return e.path();
    }
    return "<accepted>";
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("config survives a round trip through its canonical form") {
    json full = toy_doc();
    full["sweep"] = {{"variable", "kappa"}, {"min", 1.0}, {"max", 1e3}, {"points", 5}, {"spacing", "log"},
                     {"omega_f0", 1.5}};
    full["oracle"] = {{"dt", 0.02},          {"duration", 2000.0}, {"burn_in", 20.0}, {"trajectories", 2},
                      {"band_max", 15.0},     {"welch", {{"segment_length", 1024}, {"window", "rectangular"}}},
                      {"channels", {"B_beta"}}};
    full["detect"] = {{"offset", 1.5}, {"tau", 100.0}, {"amplitudes", {0.1, 0.2}}, {"trials", 10},
                      {"dt", 0.05},   {"burn_in", 20.0}};
    full["output"] = {{"csv", "a.csv"}};
    const auto a = parse_config(full);
    const auto text = emit_config(a).dump();
    const auto b = parse_config_text(text);
    CHECK(a == b);
    CHECK(emit_config(b).dump() == text);

    json si = json::parse(R"({
        "scheme": "monochromatic", "units": "si",
        "oscillator": {"mass_kg": 1e-3, "omega_m": 6.283, "gamma_m": 1e-3, "temperature_k": 0.01},
        "probe": {"wavelength_m": 1.064e-6, "power_w": 1e-3},
        "readout": {"angle": "fixed", "psi": 1.2}
    })");
    const auto c = parse_config(si);
    CHECK(c.units == Units::SI);
    CHECK(c.kappa > 0.0);
    CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("validation reports field paths") {
    auto doc = toy_doc();
    doc["oscillator"]["spring"] = 1;
    CHECK(validation_path(doc) == "oscillator.spring");

    doc = toy_doc();
    doc["oscillator"].erase("gamma_m");
    CHECK(validation_path(doc) == "oscillator.gamma_m");

    doc = toy_doc();
    doc["colour"] = "red";
    CHECK(validation_path(doc) == "colour");

    doc = toy_doc();
    doc["grid"]["points"] = 0;
    CHECK(validation_path(doc) == "grid.points");

    doc = toy_doc();
    doc["probe"]["kappa"] = -1;
    CHECK(validation_path(doc) == "probe.kappa");

    doc = toy_doc();
    doc["oscillator"]["omega_m"] = -1;
    CHECK(validation_path(doc) == "oscillator");

    doc = mono_doc();
    doc.erase("readout");
    CHECK(validation_path(doc) == "readout");

    doc = toy_doc();
    doc["sweep"] = {{"variable", "kappa"}, {"min", 2.0}, {"max", 2.0}, {"points", 4}, {"omega_f0", 1.0}};
    CHECK(validation_path(doc) == "sweep.max");

    doc = toy_doc();
    doc["oracle"] = {{"dt", 0.02}, {"duration", 2000.0}, {"burn_in", 0.0}, {"trajectories", 0}, {"band_max", 15.0}};
    const auto cfg = parse_config(doc);
    CHECK_THROWS_WITH_AS(run_oracle(cfg), doctest::Contains("oracle.trajectories"), ValidationError);
}

TEST_CASE("toy spectrum at strong drive has no back-action") {
    auto doc = toy_doc();
    doc["probe"]["kappa"] = 4.0 * 1.0 * 10.0 * 1e3;
    doc["grid"] = {{"min", -50.0}, {"max", 50.0}, {"points", 101}};
    const auto r = run_spectrum(parse_config(doc));
    for (const auto &row : r.table.rows) {
        CHECK(std::get<double>(row[4]) <= 1e-24 * std::get<double>(row[2]));
    }
}

TEST_CASE("phase readout at the impedance-matched drive touches the SQL") {
    auto doc = mono_doc();
    const double w = 1.3;
    const Oscillator o{2.0, 0.0, 0.0, std::nullopt};
    doc["probe"]["kappa"] = std::abs(susceptibility_Z(o, w));
    doc["grid"] = {{"min", w}, {"max", w}, {"points", 1}};
    const auto r = run_spectrum(parse_config(doc));
    CHECK(std::get<double>(r.table.rows[0][2]) == doctest::Approx(sql(o, w).value).epsilon(1e-12));
    CHECK(std::get<double>(r.table.rows[0][6]) == doctest::Approx(sql(o, w).value).epsilon(1e-12));
}

TEST_CASE("sweeps") {
    SUBCASE("phase-readout kappa optimum sits at |Z|") {
        auto doc = mono_doc();
        doc["oscillator"]["gamma_m"] = 0.01;
        const double w = 1.3;
        const double z = std::abs(susceptibility_Z(parse_config(doc).osc, w));
        doc["sweep"] = {{"variable", "kappa"}, {"min", z / 10}, {"max", z * 10}, {"points", 201},
                        {"spacing", "log"},   {"omega_f0", w}};
        const auto r = run_sweep(parse_config(doc));
        const auto argmin = r.summary["argmin"].get<std::size_t>();
        const double step = std::pow(100.0, 1.0 / 200.0);
        CHECK(std::abs(std::log(r.summary["argmin_value"].get<double>() / z)) <= std::log(step) + 1e-12);
        CHECK(argmin > 0);
    }
    SUBCASE("evaded scheme improves monotonically with drive") {
        auto doc = toy_doc();
        doc["oscillator"]["gamma_m"] = 0.0;
        doc["sweep"] = {{"variable", "kappa"}, {"min", 1.0}, {"max", 1e4}, {"points", 30},
                        {"spacing", "log"},   {"omega_f0", 5.0}};
        const auto r = run_sweep(parse_config(doc));
        for (std::size_t i = 1; i < r.table.rows.size(); ++i) {
            CHECK(std::get<double>(r.table.rows[i][2]) < std::get<double>(r.table.rows[i - 1][2]));
        }
    }
    SUBCASE("single-point sweep equals the spectrum") {
        auto doc = toy_doc();
        doc["sweep"] = {{"variable", "kappa"}, {"min", 40.0}, {"max", 40.0}, {"points", 1}, {"omega_f0", 2.0}};
        const auto r = run_sweep(parse_config(doc));
        REQUIRE(r.table.rows.size() == 1);
        const auto s = run_spectrum(parse_config(doc));
        CHECK(std::get<double>(r.table.rows[0][2]) == std::get<double>(s.table.rows[5][2]));
    }
}

TEST_CASE("oracle payload is reproducible and agrees with the engine") {
    auto doc = toy_doc();
    doc["probe"]["kappa"] = 200;
    doc["oracle"] = {{"dt", 0.02},       {"duration", 1600.0}, {"burn_in", 20.0}, {"trajectories", 2},
                     {"band_max", 15.0}, {"welch", {{"segment_length", 512}}},   {"channels", {"B_beta", "beta_a+"}}};
    const auto cfg = parse_config(doc);
    const auto a = run_oracle(cfg).payload().dump();
    const auto b = run_oracle(cfg).payload().dump();
    CHECK(a == b);
    const auto r = run_oracle(cfg);
    CHECK(r.summary["max_rms_relative"].get<double>() < 0.1);

    doc["oracle"]["channels"] = {"nope"};
    CHECK(validation_path(doc) == "<accepted>");
    CHECK_THROWS_WITH_AS(run_oracle(parse_config(doc)), doctest::Contains("oracle.channels[0]"), ValidationError);
}

TEST_CASE("detect reports analytic and empirical thresholds") {
    auto doc = toy_doc();
    doc["probe"]["kappa"] = 20;
    doc["detect"] = {{"offset", 1.5}, {"tau", 100.0},  {"amplitudes", {0.01, 0.02}},
                     {"trials", 20},  {"dt", 0.05},    {"burn_in", 10.0}};
    const auto r = run_detect(parse_config(doc));
    CHECK_FALSE(r.summary["bracketed"].get<bool>());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0] == "threshold not bracketed");
    CHECK(r.summary["ratio"].is_null());

    doc["detect"]["tau"] = 200.0;
    const auto longer = run_detect(parse_config(doc));
    CHECK(longer.summary["analytic_threshold"].get<double>() ==
          doctest::Approx(r.summary["analytic_threshold"].get<double>() / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
        CHECK(std::stod(format_number(x)) == x);
    }
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("command line contract") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "optonoise_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string exe = OPTONOISE_CLI;
    auto run = [&](const std::string &args) {
        const int status = std::system((exe + " " + args + " >/dev/null 2>" + (dir / "err.txt").string()).c_str());
        return WEXITSTATUS(status);
    };

    auto doc = toy_doc();
    std::ofstream(dir / "toy.json") << doc.dump();
    const std::string cfg = (dir / "toy.json").string();
    CHECK(run("spectrum " + cfg + " --csv " + (dir / "a.csv").string() + " --json " + (dir / "a.json").string()) ==
          0);
    CHECK(run("spectrum " + cfg + " --csv " + (dir / "b.csv").string() + " --json " + (dir / "b.json").string()) ==
          0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(json::parse(slurp(dir / "a.json"))["payload"] == json::parse(slurp(dir / "b.json"))["payload"]);
    CHECK(slurp(dir / "a.csv").rfind("omega_rad_s,offset_gamma,total,shot,backaction,thermal,sql_ref\n", 0) == 0);

    doc["grid"]["points"] = 0;
    std::ofstream(dir / "empty.json") << doc.dump();
    CHECK(run("spectrum " + (dir / "empty.json").string() + " --csv " + (dir / "e.csv").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "e.csv"));
    CHECK(json::parse(slurp(dir / "err.txt"))["path"] == "grid.points");

    CHECK(run("validate " + (dir / "missing.json").string()) == 4);
    CHECK(run("spectrum " + cfg + " --csv " + (dir / "no_such_dir" / "x.csv").string()) == 4);

    auto singular = toy_doc();
    singular["oscillator"]["gamma_m"] = 0.0;
    singular["grid"] = {{"min", -1.0}, {"max", 1.0}, {"points", 3}};
    std::ofstream(dir / "singular.json") << singular.dump();
    CHECK(run("spectrum " + (dir / "singular.json").string()) == 3);
    CHECK(run("validate " + cfg) == 0);

    auto sim = toy_doc();
    sim["probe"]["kappa"] = 200;
    sim["oracle"] = {{"dt", 0.02}, {"duration", 200.0}, {"burn_in", 10.0}, {"trajectories", 1},
                     {"band_max", 15.0}, {"welch", {{"segment_length", 256}}}};
    std::ofstream(dir / "sim.json") << sim.dump();
    CHECK(run("oracle " + (dir / "sim.json").string() + " --records " + (dir / "rec.csv").string()) == 0);
    const std::string rec = slurp(dir / "rec.csv");
    CHECK(rec.rfind("time_s,B_beta,", 0) == 0);
    CHECK(std::count(rec.begin(), rec.end(), '\n') == 10001);
    fs::remove_all(dir);
}
