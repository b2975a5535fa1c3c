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

#include "optonoise/oracle.hpp"
#include "optonoise/run.hpp"

namespace optonoise {

/// Shortest decimal form that reads back to the same double.
std::string format_number(double x);

std::string to_csv(const Table &table);

/// Time series of every channel after burn-in, one row per sample.
std::string record_csv(const HomodyneRecord &record);

/// Writes through a sibling temporary and renames over `path`.
/// Throws IoError.
void write_atomic(const std::string &path, const std::string &contents);

/// UTC ISO-8601 stamp, taken from SOURCE_DATE_EPOCH when set.
std::string generation_time();

} // namespace optonoise
