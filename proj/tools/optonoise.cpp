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

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

#include "optonoise/errors.hpp"
#include "optonoise/output.hpp"
#include "optonoise/run.hpp"
#include "optonoise/scenario.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 2, kNumeric = 3, kIo = 4 };

int report(const char *kind, const std::string &message, int code, const std::string &path = {}) {
    nlohmann::json d{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!path.empty()) {
        d["path"] = path;
    }
    std::cerr << d.dump() << '\n';
    return code;
}

struct Options {
    std::string config;
    std::string csv;
    std::string json;
    std::string records;
};

int execute(const std::string &analysis, const Options &opt) {
    using namespace optonoise;
    const ScenarioConfig cfg = load_config(opt.config);
    // Command-line paths win but stay out of the config echo.
    OutputSpec out = cfg.output;
    if (!opt.csv.empty()) {
        out.csv = opt.csv;
    }
    if (!opt.json.empty()) {
        out.json = opt.json;
    }
    if (analysis == "validate") {
        std::cout << nlohmann::json{{"status", "ok"}, {"config", emit_config(cfg)}}.dump(2) << '\n';
        return kOk;
    }
    ResultEnvelope result;
    if (analysis == "spectrum") {
        result = run_spectrum(cfg);
    } else if (analysis == "sweep") {
        result = run_sweep(cfg);
    } else if (analysis == "oracle") {
        result = run_oracle(cfg);
    } else {
        result = run_detect(cfg);
    }
    if (analysis == "oracle" && !opt.records.empty()) {
        const auto oc = oracle_config(cfg);
        auto rec = simulate(oc, 0);
        if (cfg.scheme != SchemeKind::Monochromatic) {
            postprocess_subtraction(rec, oc);
        }
        write_atomic(opt.records, record_csv(rec));
    }
    const std::string doc = result.to_json(generation_time()).dump(2) + "\n";
    if (!out.csv.empty()) {
        write_atomic(out.csv, to_csv(result.table));
    }
    if (!out.json.empty()) {
        write_atomic(out.json, doc);
    }
    if (out.csv.empty() && out.json.empty()) {
        std::cout << doc;
    }
    for (const auto &w : result.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Force-measurement noise budgets for optomechanical readout schemes"};
    app.require_subcommand(1);
    Options opt;
    std::string chosen;
    const std::pair<const char *, const char *> commands[] = {
        {"spectrum", "force-referred noise spectrum on the configured grid"},
        {"sweep", "noise at one frequency over a parameter sweep"},
        {"oracle", "time-domain simulation compared with the analytic spectra"},
        {"detect", "Monte Carlo detection threshold against the closed form"},
        {"validate", "check a configuration file and echo its canonical form"},
    };
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("config", opt.config, "scenario JSON file")->required();
        if (std::string(name) != "validate") {
            sub->add_option("--csv", opt.csv, "write the result table here");
            sub->add_option("--json", opt.json, "write the result envelope here");
        }
        if (std::string(name) == "oracle") {
            sub->add_option("--records", opt.records, "write the first trajectory's time series here (CSV)");
        }
        sub->callback([&chosen, n = std::string(name)] { chosen = n; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    using namespace optonoise;
    try {
        return execute(chosen, opt);
    } catch (const ValidationError &e) {
        return report("validation", e.what(), kValidation, e.path());
    } catch (const Unsupported &e) {
        return report("unsupported", e.what(), kValidation);
    } catch (const IoError &e) {
        return report("io", e.what(), kIo);
    } catch (const SingularityError &e) {
        return report("singularity", e.what(), kNumeric);
    } catch (const Error &e) {
        return report("numeric", e.what(), kNumeric);
    } catch (const std::exception &e) {
        return report("internal", e.what(), kNumeric);
    }
}
