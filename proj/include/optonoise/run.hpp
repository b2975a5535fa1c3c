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

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "optonoise/scenario.hpp"

namespace optonoise {

using Cell = std::variant<double, std::string>;

struct Column {
    std::string name;
    std::string unit;
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
};

/// One force-referred budget entry at a requested frequency.
struct BudgetPoint {
    double omega = 0.0;
    double total = 0.0;
    double shot = 0.0;
    double backaction = 0.0;
    double thermal = 0.0;
};

struct ResultEnvelope {
    std::string analysis;
    nlohmann::json config;     ///< canonical echo of the input
    nlohmann::json normalized; ///< parameters the engine actually used
    nlohmann::json summary;    ///< analysis-specific scalars
    Table table;
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;

    /// Everything except provenance; identical inputs give identical bytes.
    nlohmann::json payload() const;
    nlohmann::json to_json(const std::string &generated_at) const;
};

/// Budget of the primary observable at arbitrary frequencies (offsets for
/// rotating-frame schemes). Duplicates and sign are allowed.
std::vector<BudgetPoint> evaluate_budget(const ScenarioConfig &config, const std::vector<double> &points);

ResultEnvelope run_spectrum(const ScenarioConfig &config);
ResultEnvelope run_sweep(const ScenarioConfig &config);
ResultEnvelope run_oracle(const ScenarioConfig &config);
ResultEnvelope run_detect(const ScenarioConfig &config);

/// Oracle settings assembled from the scenario; validated.
OracleConfig oracle_config(const ScenarioConfig &config);

} // namespace optonoise
